#ifndef TWOLEVEL_HYDROGEN_HPP
#define TWOLEVEL_HYDROGEN_HPP

// Hydrogen 2s-2p parameters, unit conversions, and field-regime checks.
// Z = 1, infinite nuclear mass. Intensities use the peak-field convention
// I = E0^2 * I_au (no cycle-averaging factor 1/2).

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "analytic.hpp"
#include "core.hpp"

namespace twolevel::hydrogen {

inline constexpr double hartree_ev = 27.211386;              ///< eV per Hartree
inline constexpr double speed_of_light = 137.035999;         ///< a.u.
inline constexpr double bohr_m = 5.29177e-11;                ///< metres per bohr
inline constexpr double intensity_au_w_cm2 = 3.50945e16;     ///< W/cm^2 at E0 = 1 a.u.
inline constexpr double atomic_time_s = 2.4188843265857e-17; ///< seconds per a.u. of time

inline constexpr double lamb_shift_ev = 4.37e-6;
inline constexpr double gap_2s3p_ev = 1.89;

// Unit conversions. Each pair is an exact inverse up to rounding.
inline double ev_to_hartree(double ev) noexcept { return ev / hartree_ev; }
inline double hartree_to_ev(double h) noexcept { return h * hartree_ev; }

inline double wavelength_to_omega(double metres)
{
    if (!(metres > 0.0)) throw std::invalid_argument("wavelength must be > 0");
    return 2.0 * pi * speed_of_light / (metres / bohr_m);
}

inline double omega_to_wavelength(double omega)
{
    if (!(omega > 0.0)) throw std::invalid_argument("omega must be > 0");
    return 2.0 * pi * speed_of_light / omega * bohr_m;
}

inline double field_to_intensity(double e0) noexcept { return e0 * e0 * intensity_au_w_cm2; }
inline double intensity_to_field(double w_cm2) { return std::sqrt(w_cm2 / intensity_au_w_cm2); }

inline double seconds_to_au(double s) noexcept { return s / atomic_time_s; }
inline double au_to_seconds(double t) noexcept { return t * atomic_time_s; }

/// 2s-2p splitting (Lamb shift) in Hartree.
inline double lamb_shift() noexcept { return ev_to_hartree(lamb_shift_ev); }

/// 2s-3p separation in Hartree.
inline double next_level_gap() noexcept { return ev_to_hartree(gap_2s3p_ev); }

//-----------------------------------------------------------------------------
// Radial quadrature

/// Gauss-Laguerre rule for int_0^inf f(x) e^{-x} dx.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Newton iteration on L_n from asymptotic initial guesses. Reliable up to
/// a few hundred nodes.
inline QuadratureRule gauss_laguerre(std::size_t n)
{
    if (n == 0) throw std::invalid_argument("gauss_laguerre: need at least one node");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    double const dn = static_cast<double>(n);
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == 0) z = 3.0 / (1.0 + 2.4 * dn);
        else if (i == 1) z += 15.0 / (1.0 + 2.5 * dn);
        else {
            double const ai = static_cast<double>(i - 1);
            z += ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - rule.nodes[i - 2]);
        }
        double dp = 0.0, p_prev = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (std::size_t j = 1; j <= n; ++j) {
                double const p3 = p2;
                p2 = p1;
                double const dj = static_cast<double>(j);
                p1 = ((2.0 * dj - 1.0 - z) * p2 - (dj - 1.0) * p3) / dj;
            }
            p_prev = p2;
            dp = (dn * p1 - dn * p2) / z;
            double const z_old = z;
            z = z_old - p1 / dp;
            if (std::abs(z - z_old) <= 1e-15 * std::abs(z)) break;
        }
        rule.nodes[i] = z;
        rule.weights[i] = -1.0 / (dp * dn * p_prev);
    }
    return rule;
}

/// Hydrogen radial function R_nl(r) = poly(r) exp(-r / n) for n <= 3.
struct RadialOrbital {
    int n = 1;
    int l = 0;

    [[nodiscard]] double polynomial(double r) const
    {
        if (n == 1 && l == 0) return 2.0;
        if (n == 2 && l == 0) return (1.0 - 0.5 * r) / std::sqrt(2.0);
        if (n == 2 && l == 1) return r / (2.0 * std::sqrt(6.0));
        if (n == 3 && l == 0) return 2.0 / (3.0 * std::sqrt(3.0)) * (1.0 - 2.0 * r / 3.0 + 2.0 * r * r / 27.0);
        if (n == 3 && l == 1) return 8.0 / (27.0 * std::sqrt(6.0)) * r * (1.0 - r / 6.0);
        throw std::invalid_argument("RadialOrbital: unsupported (n, l)");
    }

    [[nodiscard]] double decay() const noexcept { return 1.0 / n; }

    [[nodiscard]] double operator()(double r) const { return polynomial(r) * std::exp(-decay() * r); }
};

/// int_0^inf R_a(r) R_b(r) r^(2 + power) dr with the joint exponential
/// absorbed into the Laguerre weight.
inline double radial_integral(RadialOrbital a, RadialOrbital b, int power, std::size_t nodes = 64)
{
    double const alpha = a.decay() + b.decay();
    auto const rule = gauss_laguerre(nodes);
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes; ++i) {
        double const r = rule.nodes[i] / alpha;
        sum += rule.weights[i] * a.polynomial(r) * b.polynomial(r) * std::pow(r, 2 + power);
    }
    return sum / alpha;
}

/// <l 0 | cos(theta) | l' 0> for real spherical harmonics with m = 0.
inline double angular_cos_element(int l, int lp)
{
    if (l == lp + 1) return l / std::sqrt((2.0 * l + 1.0) * (2.0 * l - 1.0));
    if (lp == l + 1) return lp / std::sqrt((2.0 * lp + 1.0) * (2.0 * lp - 1.0));
    return 0.0;
}

/// <a, m=0 | z | b, m=0>
inline double z_matrix_element(RadialOrbital a, RadialOrbital b, std::size_t nodes = 64)
{
    double const angular = angular_cos_element(a.l, b.l);
    if (angular == 0.0) return 0.0;
    return radial_integral(a, b, 1, nodes) * angular;
}

/// <2s | z | 2p0> in bohr; -3 with these phase conventions.
inline double dipole_2s2p(std::size_t nodes = 64)
{
    return z_matrix_element({2, 0}, {2, 1}, nodes);
}

/// Hydrogen 2s-2p as a TwoLevelAtom.
inline TwoLevelAtom atom_2s2p() { return TwoLevelAtom{lamb_shift(), dipole_2s2p()}; }

//-----------------------------------------------------------------------------
struct FieldRegime {
    double omega = 0.0;       ///< a.u.
    double wavelength = 0.0;  ///< metres
    double e0 = 0.0;          ///< field amplitude, a.u.
    double intensity = 0.0;   ///< W/cm^2, peak-field convention
};

/// Field that realizes chi/omega = pi/2 on the 2s-2p dipole.
inline FieldRegime field_for_transfer(double omega)
{
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw std::invalid_argument("field_for_transfer: omega must be > 0");
    double const e0 = 0.5 * pi * omega / std::abs(dipole_2s2p());
    return {omega, omega_to_wavelength(omega), e0, field_to_intensity(e0)};
}

enum class Verdict { valid, marginal, invalid };

inline std::string_view to_string(Verdict v) noexcept
{
    switch (v) {
        case Verdict::valid: return "valid";
        case Verdict::marginal: return "marginal";
        default: return "invalid";
    }
}

struct ValidityReport {
    double omega = 0.0;
    double splitting_ratio = 0.0;  ///< omega21 / omega
    double gap_ratio = 0.0;        ///< omega / omega_2s3p
    double leakage_bound = 0.0;
    Verdict verdict = Verdict::invalid;
};

/// Applicability of the degenerate two-state picture at drive frequency
/// omega: valid for 10 omega21 <= omega <= gap/10, marginal strictly inside
/// the decade beyond either edge.
inline ValidityReport validity_report(double omega, double omega21 = lamb_shift(), double gap = next_level_gap())
{
    if (!(omega > 0.0)) throw std::invalid_argument("validity_report: omega must be > 0");
    ValidityReport r;
    r.omega = omega;
    r.splitting_ratio = omega21 / omega;
    r.gap_ratio = omega / gap;
    r.leakage_bound = leakage_at_peak(omega21, omega);
    if (omega >= 10.0 * omega21 && omega <= gap / 10.0) r.verdict = Verdict::valid;
    else if (omega > omega21 && omega < gap) r.verdict = Verdict::marginal;
    else r.verdict = Verdict::invalid;
    return r;
}

}  // namespace twolevel::hydrogen

#endif  // TWOLEVEL_HYDROGEN_HPP
