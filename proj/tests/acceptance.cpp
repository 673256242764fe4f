// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <twolevel/twolevel.hpp>

#include "oracles.hpp"

using namespace twolevel;

namespace {

namespace tol {
constexpr double fig_deviation_10 = 1e-2;
constexpr double fig_deviation_100 = 2e-4;
constexpr double runtime_fig_s = 1.0;
constexpr double scaling_factor = 2.0;
constexpr double degenerate_max_abs = 1e-8;
constexpr double convergence_low = 12.0;
constexpr double convergence_high = 20.0;
constexpr double norm_drift = 1e-10;
constexpr double residual_ratio = 64.0;
constexpr double residual_factor = 2.0;
constexpr double design_relative = 0.2;
constexpr double fdb_relative = 1e-6;
constexpr double fourth_derivative_relative = 1e-9;
constexpr double delta_post = 0.9999;
constexpr double delta_pre = 1e-4;
constexpr double dipole_abs = 1e-6;
constexpr double lamb_ev_rel = 1e-12;
constexpr double gap_ev_abs = 5e-3;
constexpr double runtime_optimizer_s = 60.0;
}  // namespace tol

int failures = 0;

void report(int id, char const* name, bool pass, std::string const& detail)
{
    std::printf("%s [%2d] %s: %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

template <class... Args>
std::string fmt(char const* f, Args... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

/// max |P2 - P2_degenerate| within T/8 of the first peak, one period at 1000 steps.
double peak_deviation(double ratio, double& elapsed)
{
    auto const start = std::chrono::steady_clock::now();
    double const w = 1.0;
    auto const traj = integrate(TwoLevelAtom{w / ratio}, transfer_cosine(w), IntegrationConfig::per_period(w, 1.0));
    double const t0 = peak_time(w), half = 0.25 * pi / w;
    double const d = max_population_deviation(
        traj, [w](double t) { return transfer_populations(w, t); }, t0 - half, t0 + half);
    elapsed = seconds_since(start);
    return d;
}

double degenerate_error(int steps_per_period)
{
    double const w = 1.3, chi = 0.5 * pi * w;
    auto const traj = integrate(TwoLevelAtom{0.0}, PulseSpec{CosinePulse{chi, w}},
                                IntegrationConfig::per_period(w, 5.0, steps_per_period));
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        // independent closed form: a1 = cos A, a2 = -i sin A with A = -(chi/w) sin(w t)
        double const a = -(chi / w) * std::sin(w * traj.time(i));
        complex const a1{std::cos(a), 0.0}, a2{0.0, -std::sin(a)};
        worst = std::max({worst, std::abs(traj.state(i).a1 - a1), std::abs(traj.state(i).a2 - a2)});
    }
    return worst;
}

//-----------------------------------------------------------------------------
void criteria_1_2()
{
    double t10 = 0.0, t100 = 0.0;
    double const d10 = peak_deviation(10.0, t10);
    double const d100 = peak_deviation(100.0, t100);
    bool const ok1 = d10 < tol::fig_deviation_10 && d100 <= tol::fig_deviation_100 && t10 < tol::runtime_fig_s &&
                     t100 < tol::runtime_fig_s;
    report(1, "finite-splitting deviation near the peak", ok1,
           fmt("max|dP2| = %.3e at ratio 10 (< %.0e), %.3e at ratio 100 (<= %.0e); runtime %.3f s, %.3f s", d10,
               tol::fig_deviation_10, d100, tol::fig_deviation_100, t10, t100));

    double const ratio = d100 / d10;
    double const expected = 1.0 / 100.0;
    bool const ok2 = ratio >= expected / tol::scaling_factor && ratio <= expected * tol::scaling_factor;
    report(2, "quadratic leakage scaling", ok2,
           fmt("deviation ratio = %.4e, expected %.0e within factor %.0f", ratio, expected, tol::scaling_factor));
}

void criterion_3()
{
    double const e1000 = degenerate_error(1000);
    double const e2000 = degenerate_error(2000);
    double const gain = e1000 / e2000;
    bool const ok = e1000 <= tol::degenerate_max_abs && gain >= tol::convergence_low && gain <= tol::convergence_high;
    report(3, "degenerate-limit closed form and fourth-order convergence", ok,
           fmt("max abs error %.3e over 5 periods (<= %.0e); halving step gains %.2fx (in [%.0f, %.0f])", e1000,
               tol::degenerate_max_abs, gain, tol::convergence_low, tol::convergence_high));
}

void criterion_4()
{
    double const w = 1.0;
    double worst = 0.0;
    for (double omega21 : {0.0, 0.1, 0.01}) {
        auto const traj = integrate(TwoLevelAtom{omega21}, transfer_cosine(w), IntegrationConfig::per_period(w, 10.0));
        worst = std::max(worst, traj.max_norm_drift());
    }
    report(4, "norm conservation over 10 periods", worst <= tol::norm_drift,
           fmt("max ||a1|^2+|a2|^2-1| = %.3e (<= %.0e) at omega21/omega = 0, 0.1, 0.01", worst, tol::norm_drift));
}

void criterion_5()
{
    double const w = 1.0;
    auto residual = [&](double x) {
        double const tau = x / w;
        double const exact = std::pow(std::sin(0.5 * pi * std::cos(x)), 2);  // P2 at t0 + tau
        return std::abs(exact - quartic_peak_approx(w, tau));
    };
    double const r = residual(0.2) / residual(0.1);
    bool const ok = r >= tol::residual_ratio / tol::residual_factor && r <= tol::residual_ratio * tol::residual_factor;
    report(5, "sixth-order residual of the quartic peak expansion", ok,
           fmt("residual(0.2)/residual(0.1) = %.3f, expected %.0f within factor %.0f", r, tol::residual_ratio,
               tol::residual_factor));
}

void criterion_6()
{
    std::mt19937_64 rng{2024};
    std::uniform_real_distribution<double> ts_dist{1.0, 100.0}, log_pcr{-5.0, -2.0};
    double worst_rel = 0.0, worst_leak_ratio = 0.0;
    bool ok = true;
    for (int i = 0; i < 10; ++i) {
        DesignRequest const req{ts_dist(rng), std::pow(10.0, log_pcr(rng))};
        double const w = design_frequency(req);
        auto const traj = integrate(TwoLevelAtom{0.0}, transfer_cosine(w), IntegrationConfig::per_period(w, 1.0));
        double const measured = populated_window(traj, req.p_cr);
        double const t0 = peak_time(w);
        double const leak = window_leakage(traj, t0 - 0.5 * req.duration, t0 + 0.5 * req.duration);
        double const rel = std::abs(measured - req.duration) / req.duration;
        worst_rel = std::max(worst_rel, rel);
        worst_leak_ratio = std::max(worst_leak_ratio, leak / req.p_cr);
        ok = ok && rel <= tol::design_relative && leak <= req.p_cr;
    }
    report(6, "frequency design round trip", ok,
           fmt("10 requests: worst |T_s error| = %.3f%% (<= %.0f%%), worst leakage/P_cr = %.4f (<= 1)",
               100.0 * worst_rel, 100.0 * tol::design_relative, worst_leak_ratio));
}

void criterion_7()
{
    double const w = 1.0;
    bool ok = true;
    std::string detail;
    for (double eps : {0.01, 0.05, 0.1}) {
        double const target = 1.0 - eps * eps;
        double const analytic = populations_for_action(0.5 * pi + eps).p2;
        auto const cfg = IntegrationConfig::per_period(w, 1.0);
        auto const traj = integrate(TwoLevelAtom{0.0}, PulseSpec{CosinePulse{(0.5 * pi + eps) * w, w}}, cfg);
        double const numeric = probabilities(traj.state(static_cast<std::size_t>(cfg.steps / 4))).p2;
        double const bound = std::pow(eps, 4);
        double const ea = std::abs(analytic - target), en = std::abs(numeric - target);
        ok = ok && ea <= bound && en <= bound;
        detail += fmt("eps %.2f: |dP| analytic %.2e, RK4 %.2e (<= %.0e); ", eps, ea, en, bound);
    }
    detail.resize(detail.size() - 2);
    report(7, "peak sensitivity to the drive ratio", ok, detail);
}

void criterion_8()
{
    using oracle::real;
    double const w = 0.8;
    auto const cosine = transfer_cosine(w);
    auto const three = normalize_for_transfer(PulseSpec{HarmonicSumPulse{w, {{1, 1.0}, {3, 0.4}, {5, -0.15}}}},
                                              peak_time(w));

    auto drive_of = [](PulseSpec const& p) {
        oracle::HarmonicDrive d{p.base_frequency(), {}};
        if (p.holds<CosinePulse>()) d.terms.push_back({1, p.as<CosinePulse>().chi});
        else
            for (auto const& h : p.as<HarmonicSumPulse>().coefficients) d.terms.push_back({h.k, h.amplitude});
        return d;
    };

    double worst = 0.0;
    for (auto const* p : {&cosine, &three}) {
        auto const drive = drive_of(*p);
        auto const f = [&](real t) { return drive.p2(t); };
        real const h = 0.1L / (5.0L * drive.omega);
        for (double t : {0.37, 1.1, 2.9}) {
            for (int n = 1; n <= 6; ++n) {
                double const ref = static_cast<double>(oracle::central_derivative(f, t, n, h));
                double const got = nth_derivative_p2(*p, t, n);
                // relative to the natural scale omega^n where the derivative passes near zero
                double const scale = std::max(std::abs(ref), std::pow(w, n));
                worst = std::max(worst, std::abs(got - ref) / scale);
            }
        }
    }
    double const d4 = nth_derivative_p2(cosine, peak_time(w), 4);
    double const expected = -1.5 * pi * pi * std::pow(w, 4);
    double const rel4 = std::abs(d4 - expected) / std::abs(expected);
    bool const ok = worst <= tol::fdb_relative && rel4 <= tol::fourth_derivative_relative;
    report(8, "combinatorial derivatives of P2", ok,
           fmt("n<=6 vs finite differences: worst rel %.3e (<= %.0e); d4P2(t0) rel error %.3e (<= %.0e)", worst,
               tol::fdb_relative, rel4, tol::fourth_derivative_relative));
}

void criterion_9()
{
    double const span = 10.0, center = 5.0, width = 1e-3 * span;
    PulseSpec const p{GaussianPulse{0.5 * pi, center, width}};
    auto const traj = integrate(TwoLevelAtom{0.0}, p, default_grid(p, 0.0, span));
    double pre = 0.0, post = 1.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        double const t = traj.time(i), p2 = probabilities(traj.state(i)).p2;
        if (t <= center - 6.0 * width) pre = std::max(pre, p2);
        if (t >= center + 6.0 * width) post = std::min(post, p2);
    }
    report(9, "impulsive Gaussian inversion", post >= tol::delta_post && pre <= tol::delta_pre,
           fmt("post-pulse min P2 = %.8f (>= %.4f), pre-pulse max P2 = %.3e (<= %.0e)", post, tol::delta_post, pre,
               tol::delta_pre));
}

void criterion_10()
{
    using namespace hydrogen;
    double const dipole = std::abs(dipole_2s2p());
    double const lamb_ev = hartree_to_ev(lamb_shift());
    double const gap_ev = hartree_to_ev(next_level_gap());
    double const i_ir = field_for_transfer(wavelength_to_omega(3e-6)).intensity;
    double const i_mw = field_for_transfer(wavelength_to_omega(3e-2)).intensity;
    auto within_order = [](double x, double centre) { return x >= 0.1 * centre && x <= 10.0 * centre; };
    bool const ok = std::abs(dipole - 3.0) <= tol::dipole_abs &&
                    std::abs(lamb_ev - 4.37e-6) <= tol::lamb_ev_rel * 4.37e-6 &&
                    std::abs(gap_ev - 1.89) <= tol::gap_ev_abs && within_order(i_ir, 1e12) && within_order(i_mw, 1e4);
    report(10, "hydrogen 2s-2p numbers", ok,
           fmt("|<2s|z|2p0>| = %.9f, Lamb %.4e eV, 2s-3p %.4f eV, I(3 um) = %.3e W/cm^2, I(3 cm) = %.3e W/cm^2",
               dipole, lamb_ev, gap_ev, i_ir, i_mw));
}

void criterion_11()
{
    auto const start = std::chrono::steady_clock::now();
    ShapingObjective objective;
    objective.p_cr = 1e-4;
    OptimizerConfig config;
    config.seed = 11;
    auto const a = optimize_pulse(objective, config);
    auto const b = optimize_pulse(objective, config);
    bool const deterministic = a.best_history == b.best_history && a.best_coefficients == b.best_coefficients;
    bool monotone = true;
    for (std::size_t g = 1; g < a.best_history.size(); ++g) monotone = monotone && a.best_history[g] >= a.best_history[g - 1];
    bool const beats_baseline = a.achieved_ts >= a.baseline_ts;

    double const w = objective.omega;
    auto const nulled = second_derivative_nulled_pulse(w);
    int const order = flatness_order(nulled, peak_time(w), max_derivative_order);
    double const nulled_ts = measure_fitness(objective, nulled).width;
    double const cosine_ts = measure_fitness(objective, transfer_cosine(w)).width;
    double const elapsed = seconds_since(start);

    bool const ok = deterministic && monotone && beats_baseline && order >= 6 && nulled_ts > cosine_ts &&
                    elapsed < tol::runtime_optimizer_s;
    report(11, "pulse optimizer properties", ok,
           fmt("deterministic %s, monotone %s, T_s %.6g vs cosine %.6g; nulled pulse order %d (>= 6), T_s %.6g > "
               "%.6g; runtime %.2f s (< %.0f)",
               deterministic ? "yes" : "no", monotone ? "yes" : "no", a.achieved_ts, a.baseline_ts, order, nulled_ts,
               cosine_ts, elapsed, tol::runtime_optimizer_s));
}

}  // namespace

int main()
{
    std::vector<std::function<void()>> const criteria{criteria_1_2, criterion_3, criterion_4, criterion_5,
                                                      criterion_6,  criterion_7, criterion_8, criterion_9,
                                                      criterion_10, criterion_11};
    for (auto const& c : criteria) {
        try {
            c();
        }
        catch (std::exception const& e) {
            std::printf("FAIL exception: %s\n", e.what());
            ++failures;
        }
    }
    std::printf("%d failure(s)\n", failures);
    return failures == 0 ? 0 : 1;
}
