#ifndef TWOLEVEL_TESTS_ORACLES_HPP
#define TWOLEVEL_TESTS_ORACLES_HPP

// Independent reference computations used only by the test suites. Nothing
// here calls into the library's action/derivative code paths.

#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracle {

using real = long double;

inline constexpr real pi_l = 3.141592653589793238462643383279502884L;

/// Fornberg finite-difference weights for the m-th derivative at x0 on the
/// given nodes.
inline std::vector<real> fornberg_weights(std::vector<real> const& x, real x0, int m)
{
    std::size_t const n = x.size();
    std::vector<std::vector<real>> c(n, std::vector<real>(static_cast<std::size_t>(m) + 1, 0.0L));
    real c1 = 1.0L;
    real c4 = x[0] - x0;
    c[0][0] = 1.0L;
    for (std::size_t i = 1; i < n; ++i) {
        std::size_t const mn = std::min<std::size_t>(i, static_cast<std::size_t>(m));
        real c2 = 1.0L;
        real const c5 = c4;
        c4 = x[i] - x0;
        for (std::size_t j = 0; j < i; ++j) {
            real const c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (std::size_t k = mn; k >= 1; --k)
                    c[i][k] = c1 * (static_cast<real>(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (std::size_t k = mn; k >= 1; --k)
                c[j][k] = (c4 * c[j][k] - static_cast<real>(k) * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<real> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = c[i][static_cast<std::size_t>(m)];
    return w;
}

/// Central finite difference of order m with 2*half+1 points, spacing h,
/// evaluated in extended precision.
inline real central_derivative(std::function<real(real)> const& f, real t, int m, real h, int half = 8)
{
    std::vector<real> nodes;
    for (int i = -half; i <= half; ++i) nodes.push_back(static_cast<real>(i));
    auto const w = fornberg_weights(nodes, 0.0L, m);
    real sum = 0.0L;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += w[i] * f(t + nodes[i] * h);
    return sum / std::pow(h, static_cast<real>(m));
}

/// Odd-harmonic drive V(t) = -sum chi_k cos(k w t), integrated by hand:
/// A(t) = -sum chi_k/(k w) sin(k w t), evaluated in long double.
struct HarmonicDrive {
    real omega;
    std::vector<std::pair<int, real>> terms;

    [[nodiscard]] real action(real t) const
    {
        real a = 0.0L;
        for (auto const& [k, chi] : terms) a -= chi / (k * omega) * std::sin(k * omega * t);
        return a;
    }

    [[nodiscard]] real p2(real t) const
    {
        real const s = std::sin(action(t));
        return s * s;
    }
};

/// Adaptive Gauss-Kronrod integral of f over [a, b].
inline double integrate(std::function<double(double)> const& f, double a, double b)
{
    double error = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, 1e-14, &error);
}

/// Composite Simpson on [a, b] with n (even) panels.
inline double simpson(std::function<double(double)> const& f, double a, double b, std::size_t n)
{
    double const h = (b - a) / static_cast<double>(n);
    double sum = f(a) + f(b);
    for (std::size_t i = 1; i < n; ++i) sum += f(a + static_cast<double>(i) * h) * ((i % 2) ? 4.0 : 2.0);
    return sum * h / 3.0;
}

}  // namespace oracle

#endif  // TWOLEVEL_TESTS_ORACLES_HPP
