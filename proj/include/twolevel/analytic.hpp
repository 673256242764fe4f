#ifndef TWOLEVEL_ANALYTIC_HPP
#define TWOLEVEL_ANALYTIC_HPP

// Closed-form results for the degenerate limit omega21 -> 0, where the
// amplitudes depend on the drive only through the action:
//
//   a1 = cos A(t),  a2 = -i sin A(t)
//
// For the cosine drive A = -(chi/omega) sin(omega t), so chi/omega = pi/2
// swings the population completely between the levels every pi/omega.

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "core.hpp"

namespace twolevel {

/// Request for a populated-state duration T_s with leakage budget P_cr.
struct DesignRequest {
    double duration = 0.0;  ///< T_s, full window width around the peak
    double p_cr = 0.0;

    DesignRequest(double ts, double pcr) : duration{ts}, p_cr{pcr}
    {
        if (!(ts > 0.0) || !std::isfinite(ts))
            throw std::invalid_argument("DesignRequest: T_s must be > 0");
        if (!(pcr > 0.0 && pcr < 1.0))
            throw std::invalid_argument("DesignRequest: P_cr must lie in (0, 1)");
    }
};

/// Predicted vs measured shortfall of P2 at the first peak.
struct LeakageReport {
    double omega = 0.0;
    double omega21 = 0.0;
    double predicted_leakage = 0.0;  ///< series bound at the peak
    double measured_leakage = 0.0;   ///< 1 - P2 from a trajectory
    double peak_time = 0.0;
};

namespace detail {
inline void require_positive_omega(double omega, char const* where)
{
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw std::invalid_argument(std::string(where) + ": omega must be > 0");
}
}  // namespace detail

/// a1 = cos[(chi/omega) sin(omega t)], a2 = i sin[(chi/omega) sin(omega t)]
inline AmplitudeState degenerate_amplitudes(double chi, double omega, double t)
{
    detail::require_positive_omega(omega, "degenerate_amplitudes");
    double const arg = (chi / omega) * std::sin(omega * t);
    return {complex{std::cos(arg), 0.0}, complex{0.0, std::sin(arg)}};
}

/// Populations for the complete-transfer drive chi/omega = pi/2.
inline Populations transfer_populations(double omega, double t)
{
    detail::require_positive_omega(omega, "transfer_populations");
    return populations_for_action(0.5 * pi * std::sin(omega * t));
}

/// First peak of P2 for the complete-transfer drive.
inline double peak_time(double omega)
{
    detail::require_positive_omega(omega, "peak_time");
    return 0.5 * pi / omega;
}

/// 1 - (pi^2/16)(omega tau)^4, raw (not clamped). Accurate for |omega tau| < 1
/// with an O((omega tau)^6) residual.
inline double quartic_peak_approx(double omega, double tau) noexcept
{
    double const x = omega * tau;
    return 1.0 - (pi * pi / 16.0) * (x * x) * (x * x);
}

/// Field frequency whose quartic flat top keeps 1 - P2 <= P_cr over a
/// window of full width T_s centred on the peak:
///   omega * T_s / 2 = (16 P_cr / pi^2)^(1/4)
inline double design_frequency(DesignRequest const& req)
{
    double const half_width = 0.5 * req.duration;
    return std::pow(16.0 * req.p_cr / (pi * pi), 0.25) / half_width;
}

/// Window width T_s implied by a frequency and leakage budget; inverse of
/// design_frequency.
inline double design_duration(double omega, double p_cr)
{
    detail::require_positive_omega(omega, "design_duration");
    if (!(p_cr > 0.0 && p_cr < 1.0)) throw std::invalid_argument("design_duration: P_cr must lie in (0, 1)");
    return 2.0 * std::pow(16.0 * p_cr / (pi * pi), 0.25) / omega;
}

/// Leading finite-splitting correction dP(t) ~ omega21^2 chi^2 t^4 / 4.
inline double leakage_estimate(double omega21, double chi, double t)
{
    if (!(t >= 0.0)) throw std::invalid_argument("leakage_estimate: t must be >= 0");
    double const t2 = t * t;
    return 0.25 * omega21 * omega21 * chi * chi * t2 * t2;
}

/// leakage_estimate evaluated at the first peak with chi = (pi/2) omega:
/// (1/4)(pi/2)^6 (omega21/omega)^2. An order-of-magnitude bound; the
/// integrated deviation is roughly 20x smaller.
inline double leakage_at_peak(double omega21, double omega)
{
    detail::require_positive_omega(omega, "leakage_at_peak");
    double const r = omega21 / omega;
    return 0.25 * std::pow(0.5 * pi, 6) * r * r;
}

/// P1 = cos^2 A(t), P2 = sin^2 A(t) for an arbitrary drive.
inline Populations populations_from_action(PulseSpec const& pulse, double t)
{
    if (!(t >= 0.0)) throw std::invalid_argument("populations_from_action: t must be >= 0");
    return populations_for_action(action(pulse, t));
}

/// Amplitudes cos A, -i sin A; the degenerate-limit solution for any drive.
inline AmplitudeState amplitudes_from_action(PulseSpec const& pulse, double t)
{
    double const a = action(pulse, t);
    return {complex{std::cos(a), 0.0}, complex{0.0, -std::sin(a)}};
}

//-----------------------------------------------------------------------------
// Faa di Bruno expansion of d^n/dt^n F(y(t)) with F = sin^2, y = A(t).

inline constexpr int max_derivative_order = 10;

/// Multiplicities b_1..b_n with sum_k k b_k = n.
using Partition = std::vector<int>;

/// Every integer partition of n, as multiplicity vectors of length n.
inline std::vector<Partition> integer_partitions(int n)
{
    if (n < 1 || n > max_derivative_order)
        throw std::invalid_argument("integer_partitions: order must lie in [1, 10]");
    std::vector<Partition> out;
    Partition counts(static_cast<std::size_t>(n), 0);
    // distribute `remaining` using parts no larger than `largest`
    auto recurse = [&](auto&& self, int remaining, int largest) -> void {
        if (remaining == 0) {
            out.push_back(counts);
            return;
        }
        for (int part = std::min(largest, remaining); part >= 1; --part) {
            ++counts[static_cast<std::size_t>(part - 1)];
            self(self, remaining - part, part);
            --counts[static_cast<std::size_t>(part - 1)];
        }
    };
    recurse(recurse, n, n);
    return out;
}

/// d^m/dy^m sin^2(y) for m >= 1: -2^(m-1) cos(2y + m pi/2)
inline double sin_squared_derivative(double y, int m)
{
    if (m == 0) return std::sin(y) * std::sin(y);
    double const scale = std::ldexp(1.0, m - 1);
    double const c = std::cos(2.0 * y);
    double const s = std::sin(2.0 * y);
    switch (m % 4) {
        case 0: return -scale * c;
        case 1: return scale * s;
        case 2: return scale * c;
        default: return -scale * s;
    }
}

/// d^n P2 / dt^n at t via the Faa di Bruno sum over partitions of n.
/// Uses y^(k) = V21^(k-1), so the pulse supplies analytic derivatives.
inline double nth_derivative_p2(PulseSpec const& pulse, double t, int n)
{
    if (n < 1 || n > max_derivative_order)
        throw std::invalid_argument("nth_derivative_p2: order must lie in [1, 10]");

    std::array<double, max_derivative_order + 1> factorial{};
    factorial[0] = 1.0;
    for (int i = 1; i <= max_derivative_order; ++i) factorial[i] = factorial[i - 1] * i;

    double const y = action(pulse, t);
    // scaled[k] = y^(k) / k!
    std::array<double, max_derivative_order + 1> scaled{};
    for (int k = 1; k <= n; ++k) scaled[k] = pulse_derivative(pulse, t, k - 1) / factorial[k];

    double total = 0.0;
    for (auto const& counts : integer_partitions(n)) {
        int m = 0;
        double term = factorial[n];
        for (int k = 1; k <= n; ++k) {
            int const b = counts[static_cast<std::size_t>(k - 1)];
            if (b == 0) continue;
            m += b;
            term *= std::pow(scaled[k], b) / factorial[b];
        }
        total += term * sin_squared_derivative(y, m);
    }
    return total;
}

//-----------------------------------------------------------------------------
/// Populations for V = (pi/2) delta(t - t0); the step is taken to be 1 at t0.
inline Populations delta_pulse_populations(double t, double t0) noexcept
{
    return (t >= t0) ? Populations{0.0, 1.0} : Populations{1.0, 0.0};
}

/// Exact peak P2 when chi/omega = pi/2 + epsilon: cos^2(epsilon) ~ 1 - epsilon^2.
inline double detuning_sensitivity(double epsilon)
{
    if (!(std::abs(epsilon) < 0.5 * pi))
        throw std::invalid_argument("detuning_sensitivity: |epsilon| must be < pi/2");
    double const c = std::cos(epsilon);
    return c * c;
}

}  // namespace twolevel

#endif  // TWOLEVEL_ANALYTIC_HPP
