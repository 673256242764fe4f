#ifndef TWOLEVEL_CORE_HPP
#define TWOLEVEL_CORE_HPP

// Domain types for a driven two-level system in atomic units.
//
// Amplitude equations (energy zero at level 1):
//
//   i da1/dt = V21(t) a2
//   i da2/dt = omega21 a2 + V21(t) a1
//
// with the coupling V21(t) = -chi cos(omega t) for a monochromatic field.
// Populations depend on the coupling only through |A(t)|, A = int_0^t V21,
// so the overall sign of V21 is unobservable.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace twolevel {

using complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

/// Occupation probabilities (P1, P2).
struct Populations {
    double p1 = 1.0;
    double p2 = 0.0;
};

//-----------------------------------------------------------------------------
/// Two-level atom. Energies are measured from E1, so E2 = omega21.
struct TwoLevelAtom {
    double omega21 = 0.0;            ///< level splitting, Hartree
    double dipole_projection = 0.0;  ///< r21 . e, bohr

    TwoLevelAtom() = default;
    TwoLevelAtom(double splitting, double dipole = 0.0)
        : omega21{splitting}, dipole_projection{dipole}
    {
        if (!(splitting >= 0.0) || !std::isfinite(splitting))
            throw std::invalid_argument("TwoLevelAtom: omega21 must be finite and >= 0");
        if (!std::isfinite(dipole))
            throw std::invalid_argument("TwoLevelAtom: dipole projection must be finite");
    }

    /// Rabi frequency chi = (r21 . e) E0.
    [[nodiscard]] double rabi_frequency(double field_amplitude) const
    {
        if (dipole_projection == 0.0)
            throw std::domain_error("TwoLevelAtom: zero dipole projection cannot couple a field");
        return dipole_projection * field_amplitude;
    }
};

//-----------------------------------------------------------------------------
// Pulse shapes

/// V21(t) = -chi cos(omega t)
struct CosinePulse {
    double chi = 0.0;
    double omega = 1.0;
};

struct Harmonic {
    int k = 1;               ///< odd harmonic index
    double amplitude = 0.0;  ///< chi_k

    friend bool operator==(Harmonic const&, Harmonic const&) = default;
};

/// V21(t) = -sum_k chi_k cos(k omega t), odd k only, so every member
/// vanishes at omega t = pi/2.
struct HarmonicSumPulse {
    double omega = 1.0;
    std::vector<Harmonic> coefficients;
};

/// V21(t) = area * N(t; center, width); the time integral over the real line
/// equals `area`.
struct GaussianPulse {
    double area = 0.0;
    double center = 0.0;
    double width = 1.0;
};

class PulseSpec {
public:
    using variant_type = std::variant<CosinePulse, HarmonicSumPulse, GaussianPulse>;

    PulseSpec(CosinePulse p) : shape_{p}
    {
        if (!std::isfinite(p.chi)) throw std::invalid_argument("cosine pulse: chi must be finite");
        check_omega(p.omega);
    }

    PulseSpec(HarmonicSumPulse p) : shape_{std::move(p)}
    {
        auto const& h = std::get<HarmonicSumPulse>(shape_);
        check_omega(h.omega);
        if (h.coefficients.empty())
            throw std::invalid_argument("harmonic sum: at least one coefficient required");
        for (auto const& c : h.coefficients) {
            if (c.k < 1 || c.k % 2 == 0)
                throw std::invalid_argument("harmonic sum: harmonic index must be odd and positive, got " +
                                            std::to_string(c.k));
            if (!std::isfinite(c.amplitude))
                throw std::invalid_argument("harmonic sum: amplitude must be finite");
        }
    }

    PulseSpec(GaussianPulse p) : shape_{p}
    {
        if (!(p.width > 0.0) || !std::isfinite(p.width))
            throw std::invalid_argument("gaussian pulse: width must be > 0");
        if (!std::isfinite(p.area) || !std::isfinite(p.center))
            throw std::invalid_argument("gaussian pulse: area and center must be finite");
    }

    [[nodiscard]] variant_type const& shape() const noexcept { return shape_; }

    template <class T>
    [[nodiscard]] bool holds() const noexcept { return std::holds_alternative<T>(shape_); }

    template <class T>
    [[nodiscard]] T const& as() const { return std::get<T>(shape_); }

    /// Base angular frequency for periodic shapes, 0 for the Gaussian.
    [[nodiscard]] double base_frequency() const noexcept
    {
        return std::visit([](auto const& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, GaussianPulse>) return 0.0;
            else return p.omega;
        }, shape_);
    }

    /// Same shape with every amplitude multiplied by `factor`.
    [[nodiscard]] PulseSpec scaled(double factor) const
    {
        return std::visit([factor](auto p) -> PulseSpec {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, CosinePulse>) p.chi *= factor;
            else if constexpr (std::is_same_v<T, HarmonicSumPulse>) {
                for (auto& c : p.coefficients) c.amplitude *= factor;
            }
            else p.area *= factor;
            return PulseSpec{std::move(p)};
        }, shape_);
    }

private:
    static void check_omega(double omega)
    {
        if (!(omega > 0.0) || !std::isfinite(omega))
            throw std::invalid_argument("pulse frequency omega must be > 0");
    }

    variant_type shape_;
};

namespace detail {

// d^n/dt^n cos(w t) = w^n cos(w t + n pi/2)
inline double cos_derivative(double w, double t, int n)
{
    double const phase = w * t;
    double const scale = std::pow(w, n);
    switch (n % 4) {
        case 0: return scale * std::cos(phase);
        case 1: return -scale * std::sin(phase);
        case 2: return -scale * std::cos(phase);
        default: return scale * std::sin(phase);
    }
}

inline double gaussian_density(double u, double width)
{
    return std::exp(-0.5 * u * u) / (width * std::sqrt(2.0 * pi));
}

// Standard normal CDF difference Phi(b) - Phi(a) without cancellation in
// either tail.
inline double normal_cdf_diff(double a, double b)
{
    constexpr double r = 0.70710678118654752440;
    if (a >= 0.0) return 0.5 * (std::erfc(a * r) - std::erfc(b * r));
    if (b <= 0.0) return 0.5 * (std::erfc(-b * r) - std::erfc(-a * r));
    return 1.0 - 0.5 * (std::erfc(-a * r) + std::erfc(b * r));
}

}  // namespace detail

/// n-th time derivative of V21 at t (n = 0 gives the value itself).
inline double pulse_derivative(PulseSpec const& pulse, double t, int n)
{
    if (n < 0) throw std::invalid_argument("pulse_derivative: order must be >= 0");
    return std::visit([t, n](auto const& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, CosinePulse>) {
            return -p.chi * detail::cos_derivative(p.omega, t, n);
        }
        else if constexpr (std::is_same_v<T, HarmonicSumPulse>) {
            double v = 0.0;
            for (auto const& c : p.coefficients)
                v -= c.amplitude * detail::cos_derivative(c.k * p.omega, t, n);
            return v;
        }
        else {
            // d^n/dt^n g = (-1/w)^n He_n(u) g, probabilists' Hermite polynomials
            double const u = (t - p.center) / p.width;
            double he_prev = 1.0, he = u;
            double hermite = (n == 0) ? 1.0 : u;
            for (int j = 1; j < n; ++j) {
                double const next = u * he - j * he_prev;
                he_prev = he;
                he = next;
                hermite = he;
            }
            double const sign = (n % 2 == 0) ? 1.0 : -1.0;
            return p.area * sign * hermite / std::pow(p.width, n) * detail::gaussian_density(u, p.width);
        }
    }, pulse.shape());
}

/// Coupling matrix element V21(t).
inline double pulse_value(PulseSpec const& pulse, double t)
{
    return pulse_derivative(pulse, t, 0);
}

/// A(t) = int_0^t V21(s) ds, in closed form for every shape.
inline double action(PulseSpec const& pulse, double t)
{
    return std::visit([t](auto const& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, CosinePulse>) {
            return -(p.chi / p.omega) * std::sin(p.omega * t);
        }
        else if constexpr (std::is_same_v<T, HarmonicSumPulse>) {
            double a = 0.0;
            for (auto const& c : p.coefficients)
                a -= c.amplitude / (c.k * p.omega) * std::sin(c.k * p.omega * t);
            return a;
        }
        else {
            double const lo = -p.center / p.width;
            double const hi = (t - p.center) / p.width;
            return p.area * detail::normal_cdf_diff(lo, hi);
        }
    }, pulse.shape());
}

//-----------------------------------------------------------------------------
struct AmplitudeState {
    complex a1{1.0, 0.0};
    complex a2{0.0, 0.0};

    [[nodiscard]] double norm() const noexcept { return std::norm(a1) + std::norm(a2); }

    [[nodiscard]] bool is_finite() const noexcept
    {
        return std::isfinite(a1.real()) && std::isfinite(a1.imag()) &&
               std::isfinite(a2.real()) && std::isfinite(a2.imag());
    }

    friend bool operator==(AmplitudeState const&, AmplitudeState const&) = default;
};

inline Populations probabilities(AmplitudeState const& s) noexcept
{
    return {std::norm(s.a1), std::norm(s.a2)};
}

/// Populations P1 = cos^2 A, P2 = sin^2 A for an action value A.
inline Populations populations_for_action(double a) noexcept
{
    double const s = std::sin(a);
    double const c = std::cos(a);
    return {c * c, s * s};
}

//-----------------------------------------------------------------------------
/// Time grid plus amplitudes sampled on it.
class Trajectory {
public:
    Trajectory() = default;

    Trajectory(std::vector<double> times, std::vector<AmplitudeState> states)
        : times_{std::move(times)}, states_{std::move(states)}
    {
        if (times_.size() != states_.size())
            throw std::invalid_argument("Trajectory: times and states differ in length");
        if (times_.empty())
            throw std::invalid_argument("Trajectory: empty");
        for (std::size_t i = 1; i < times_.size(); ++i)
            if (!(times_[i] > times_[i - 1]))
                throw std::invalid_argument("Trajectory: times must be strictly increasing");
    }

    [[nodiscard]] std::size_t size() const noexcept { return times_.size(); }
    [[nodiscard]] std::vector<double> const& times() const noexcept { return times_; }
    [[nodiscard]] std::vector<AmplitudeState> const& states() const noexcept { return states_; }
    [[nodiscard]] double time(std::size_t i) const { return times_.at(i); }
    [[nodiscard]] AmplitudeState const& state(std::size_t i) const { return states_.at(i); }
    [[nodiscard]] double t_begin() const { return times_.front(); }
    [[nodiscard]] double t_end() const { return times_.back(); }

    [[nodiscard]] std::vector<double> p2() const
    {
        std::vector<double> out;
        out.reserve(states_.size());
        for (auto const& s : states_) out.push_back(std::norm(s.a2));
        return out;
    }

    /// max_i | |a1|^2 + |a2|^2 - 1 |
    [[nodiscard]] double max_norm_drift() const noexcept
    {
        double worst = 0.0;
        for (auto const& s : states_) worst = std::max(worst, std::abs(s.norm() - 1.0));
        return worst;
    }

private:
    std::vector<double> times_;
    std::vector<AmplitudeState> states_;
};

}  // namespace twolevel

#endif  // TWOLEVEL_CORE_HPP
