#ifndef TWOLEVEL_INTEGRATOR_HPP
#define TWOLEVEL_INTEGRATOR_HPP

// Fixed-step classical Runge-Kutta integration of the two-level amplitude
// equations in the lab frame. The norm is never renormalized; drift is
// reported as a diagnostic.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "core.hpp"

namespace twolevel {

/// Raised when the state leaves the finite range.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(std::string const& what, double time)
        : std::runtime_error(what + " at t = " + std::to_string(time)), time_{time} {}

    [[nodiscard]] double time() const noexcept { return time_; }

private:
    double time_;
};

inline constexpr int default_steps_per_period = 1000;

/// Uniform grid t_i = t_start + i (t_end - t_start) / steps, i = 0..steps.
struct IntegrationConfig {
    double t_start = 0.0;
    double t_end = 1.0;
    std::size_t steps = 1000;
    AmplitudeState initial{};

    IntegrationConfig() = default;

    IntegrationConfig(double begin, double end, std::size_t n, AmplitudeState init = {})
        : t_start{begin}, t_end{end}, steps{n}, initial{init}
    {
        validate();
    }

    /// Grid whose step does not exceed `max_step`.
    static IntegrationConfig with_step(double begin, double end, double max_step, AmplitudeState init = {})
    {
        if (!(max_step > 0.0)) throw std::invalid_argument("IntegrationConfig: step must be > 0");
        if (!(end > begin)) throw std::invalid_argument("IntegrationConfig: t_end must exceed t_start");
        auto const n = static_cast<std::size_t>(std::ceil((end - begin) / max_step * (1.0 - 1e-12)));
        return {begin, end, std::max<std::size_t>(n, 1), init};
    }

    /// `periods` field periods of 2 pi/omega starting at 0.
    static IntegrationConfig per_period(double omega, double periods, int steps_per_period = default_steps_per_period,
                                        AmplitudeState init = {})
    {
        if (!(omega > 0.0)) throw std::invalid_argument("IntegrationConfig: omega must be > 0");
        if (!(periods > 0.0)) throw std::invalid_argument("IntegrationConfig: periods must be > 0");
        if (steps_per_period < 100)
            throw std::invalid_argument("IntegrationConfig: steps_per_period must be >= 100");
        auto const n = static_cast<std::size_t>(std::llround(periods * steps_per_period));
        return {0.0, periods * 2.0 * pi / omega, std::max<std::size_t>(n, 1), init};
    }

    [[nodiscard]] double step() const noexcept { return (t_end - t_start) / static_cast<double>(steps); }

    [[nodiscard]] double time_at(std::size_t i) const noexcept
    {
        return (i == steps) ? t_end : t_start + static_cast<double>(i) * step();
    }

    void validate() const
    {
        if (!std::isfinite(t_start) || !std::isfinite(t_end) || !(t_end > t_start))
            throw std::invalid_argument("IntegrationConfig: t_end must exceed t_start");
        if (steps == 0) throw std::invalid_argument("IntegrationConfig: at least one step required");
        if (!initial.is_finite()) throw std::invalid_argument("IntegrationConfig: initial state not finite");
    }
};

/// Default grid for a pulse: 1000 steps per field period, or per width for
/// the Gaussian.
inline IntegrationConfig default_grid(PulseSpec const& pulse, double t_start, double t_end, AmplitudeState init = {})
{
    double const scale = pulse.holds<GaussianPulse>() ? pulse.as<GaussianPulse>().width
                                                      : 2.0 * pi / pulse.base_frequency();
    return IntegrationConfig::with_step(t_start, t_end, scale / default_steps_per_period, init);
}

namespace detail {

using State4 = std::array<double, 4>;  // Re a1, Im a1, Re a2, Im a2

// da1/dt = -i V a2,  da2/dt = -i (omega21 a2 + V a1)
inline State4 amplitude_rhs(State4 const& y, double v, double omega21) noexcept
{
    return {
        v * y[3],
        -v * y[2],
        omega21 * y[3] + v * y[1],
        -(omega21 * y[2] + v * y[0]),
    };
}

inline State4 axpy(State4 const& y, double h, State4 const& k) noexcept
{
    return {y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2], y[3] + h * k[3]};
}

inline State4 pack(AmplitudeState const& s) noexcept
{
    return {s.a1.real(), s.a1.imag(), s.a2.real(), s.a2.imag()};
}

inline AmplitudeState unpack(State4 const& y) noexcept
{
    return {complex{y[0], y[1]}, complex{y[2], y[3]}};
}

}  // namespace detail

/// Classical RK4 on the 4-real-component system over the config grid.
inline Trajectory integrate(TwoLevelAtom const& atom, PulseSpec const& pulse, IntegrationConfig const& config)
{
    config.validate();
    std::size_t const n = config.steps;
    double const h = config.step();
    double const w21 = atom.omega21;

    std::vector<double> times(n + 1);
    std::vector<AmplitudeState> states(n + 1);
    for (std::size_t i = 0; i <= n; ++i) times[i] = config.time_at(i);
    states[0] = config.initial;

    auto y = detail::pack(config.initial);
    double v_left = pulse_value(pulse, times[0]);
    for (std::size_t i = 0; i < n; ++i) {
        double const t = times[i];
        double const v_mid = pulse_value(pulse, t + 0.5 * h);
        double const v_right = pulse_value(pulse, t + h);

        auto const k1 = detail::amplitude_rhs(y, v_left, w21);
        auto const k2 = detail::amplitude_rhs(detail::axpy(y, 0.5 * h, k1), v_mid, w21);
        auto const k3 = detail::amplitude_rhs(detail::axpy(y, 0.5 * h, k2), v_mid, w21);
        auto const k4 = detail::amplitude_rhs(detail::axpy(y, h, k3), v_right, w21);
        for (std::size_t c = 0; c < 4; ++c)
            y[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);

        states[i + 1] = detail::unpack(y);
        if (!states[i + 1].is_finite()) throw IntegrationError("non-finite amplitude", times[i + 1]);
        v_left = v_right;
    }
    return Trajectory{std::move(times), std::move(states)};
}

/// Step-doubling error estimate: max amplitude difference between the
/// config grid and a grid with half the step, on the shared points.
/// Reported only; the coarse trajectory is not corrected.
inline double step_halving_error(TwoLevelAtom const& atom, PulseSpec const& pulse, IntegrationConfig const& config)
{
    auto const coarse = integrate(atom, pulse, config);
    IntegrationConfig fine = config;
    fine.steps = 2 * config.steps;
    auto const refined = integrate(atom, pulse, fine);
    double worst = 0.0;
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        auto const& a = coarse.state(i);
        auto const& b = refined.state(2 * i);
        worst = std::max({worst, std::abs(a.a1 - b.a1), std::abs(a.a2 - b.a2)});
    }
    return worst;
}

//-----------------------------------------------------------------------------
using PopulationReference = std::function<Populations(double)>;

/// max over grid points with t in [t_a, t_b] of |P2_traj - P2_ref|.
inline double max_population_deviation(Trajectory const& traj, PopulationReference const& reference,
                                       double t_a, double t_b)
{
    if (!(t_b >= t_a)) throw std::invalid_argument("max_population_deviation: empty window");
    if (t_a < traj.t_begin() || t_b > traj.t_end())
        throw std::invalid_argument("max_population_deviation: window outside trajectory span");
    double worst = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        double const t = traj.time(i);
        if (t < t_a || t > t_b) continue;
        any = true;
        worst = std::max(worst, std::abs(probabilities(traj.state(i)).p2 - reference(t).p2));
    }
    if (!any) throw std::invalid_argument("max_population_deviation: no grid points in window");
    return worst;
}

/// Raised when P2 never reaches 1 - P_cr.
class ThresholdNotReached : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Longest contiguous interval with 1 - P2 <= P_cr, bounded by linear
/// interpolation between the grid points that straddle each crossing.
struct PopulatedInterval {
    double begin = 0.0;
    double end = 0.0;
    [[nodiscard]] double width() const noexcept { return end - begin; }
};

inline PopulatedInterval populated_interval(Trajectory const& traj, double p_cr)
{
    if (!(p_cr >= 0.0)) throw std::invalid_argument("populated_window: P_cr must be >= 0");
    auto const& t = traj.times();
    auto const p2 = traj.p2();
    double const level = 1.0 - p_cr;
    auto inside = [&](std::size_t i) { return 1.0 - p2[i] <= p_cr; };
    auto crossing = [&](std::size_t out, std::size_t in) {
        // P2 is below the level at `out` and at or above it at `in`
        double const f = (level - p2[out]) / (p2[in] - p2[out]);
        return t[out] + f * (t[in] - t[out]);
    };

    std::optional<PopulatedInterval> best;
    std::size_t i = 0;
    while (i < t.size()) {
        if (!inside(i)) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < t.size() && inside(j + 1)) ++j;
        PopulatedInterval run{i == 0 ? t.front() : crossing(i - 1, i),
                              j + 1 == t.size() ? t.back() : crossing(j + 1, j)};
        if (!best || run.width() > best->width()) best = run;
        i = j + 1;
    }
    if (!best) throw ThresholdNotReached("populated_window: peak never reaches threshold 1 - P_cr");
    return *best;
}

/// max over grid points with t in [t_a, t_b] of 1 - P2.
inline double window_leakage(Trajectory const& traj, double t_a, double t_b)
{
    double worst = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        double const t = traj.time(i);
        if (t < t_a || t > t_b) continue;
        any = true;
        worst = std::max(worst, 1.0 - probabilities(traj.state(i)).p2);
    }
    if (!any) throw std::invalid_argument("window_leakage: no grid points in window");
    return worst;
}

/// Full width T_s of the longest populated window.
inline double populated_window(Trajectory const& traj, double p_cr)
{
    return populated_interval(traj, p_cr).width();
}

}  // namespace twolevel

#endif  // TWOLEVEL_INTEGRATOR_HPP
