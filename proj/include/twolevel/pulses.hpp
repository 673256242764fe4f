#ifndef TWOLEVEL_PULSES_HPP
#define TWOLEVEL_PULSES_HPP

// Pulse shaping: complete-transfer normalization, flatness of the P2 peak,
// and a real-coded genetic search over odd-harmonic drives.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "analytic.hpp"
#include "core.hpp"
#include "integrator.hpp"

namespace twolevel {

/// Scale the amplitude so |A(t_peak)| = pi/2.
inline PulseSpec normalize_for_transfer(PulseSpec const& pulse, double t_peak)
{
    double const a = action(pulse, t_peak);
    if (a == 0.0 || !std::isfinite(a))
        throw std::domain_error("normalize_for_transfer: pulse has zero action at t_peak");
    double const factor = 0.5 * pi / std::abs(a);
    if (factor == 1.0) return pulse;
    return pulse.scaled(factor);
}

/// Cosine drive with chi/omega = pi/2.
inline PulseSpec transfer_cosine(double omega) { return PulseSpec{CosinePulse{0.5 * pi * omega, omega}}; }

/// Fundamental plus third harmonic with chi_3 = chi_1 / 3, which cancels
/// y''(t0) at t0 = pi/(2 omega). Since y' and y''' vanish there for any
/// odd-harmonic drive, 1 - P2 starts at order tau^8.
inline PulseSpec second_derivative_nulled_pulse(double omega)
{
    double const chi1 = 9.0 / 8.0 * 0.5 * pi * omega;
    return PulseSpec{HarmonicSumPulse{omega, {{1, chi1}, {3, chi1 / 3.0}}}};
}

/// Smallest n in [1, n_max] whose d^n P2/dt^n at t_peak exceeds 1e-9 s^n,
/// s being the pulse's frequency scale; n_max + 1 when none does.
inline int flatness_order(PulseSpec const& pulse, double t_peak, int n_max)
{
    if (n_max < 1 || n_max > max_derivative_order)
        throw std::invalid_argument("flatness_order: n_max must lie in [1, 10]");
    double const scale = pulse.holds<GaussianPulse>() ? 1.0 / pulse.as<GaussianPulse>().width
                                                      : pulse.base_frequency();
    for (int n = 1; n <= n_max; ++n) {
        if (std::abs(nth_derivative_p2(pulse, t_peak, n)) > 1e-9 * std::pow(scale, n)) return n;
    }
    return n_max + 1;
}

//-----------------------------------------------------------------------------
struct ShapingObjective {
    double p_cr = 1e-4;
    double omega = 1.0;
    TwoLevelAtom atom{};
    double horizon = 1.0;  ///< field periods simulated per fitness evaluation
    int steps_per_period = default_steps_per_period;

    void validate() const
    {
        if (!(p_cr > 0.0 && p_cr < 1.0)) throw std::invalid_argument("ShapingObjective: P_cr must lie in (0, 1)");
        if (!(omega > 0.0)) throw std::invalid_argument("ShapingObjective: omega must be > 0");
        if (!(horizon >= 1.0)) throw std::invalid_argument("ShapingObjective: horizon must be >= 1 period");
        if (steps_per_period < 100) throw std::invalid_argument("ShapingObjective: steps_per_period must be >= 100");
    }
};

struct OptimizerConfig {
    int population_size = 24;
    int generations = 40;
    double mutation_scale = 0.1;
    std::uint64_t seed = 1;
    int n_harmonics = 3;

    void validate() const
    {
        if (population_size < 4) throw std::invalid_argument("OptimizerConfig: population_size must be >= 4");
        if (generations < 1) throw std::invalid_argument("OptimizerConfig: generations must be >= 1");
        if (!(mutation_scale > 0.0)) throw std::invalid_argument("OptimizerConfig: mutation_scale must be > 0");
        if (n_harmonics < 1 || n_harmonics > 8)
            throw std::invalid_argument("OptimizerConfig: n_harmonics must lie in [1, 8]");
    }
};

/// Measured populated-state duration of one candidate; width < 0 marks a
/// candidate that never reaches 1 - P_cr.
struct Fitness {
    double width = -1.0;
    double coefficient_norm = std::numeric_limits<double>::infinity();

    [[nodiscard]] bool valid() const noexcept { return width >= 0.0; }

    /// Longer window wins; ties go to the smaller coefficient norm. Values
    /// within a relative 1e-12 count as ties, so rounding noise never
    /// displaces an incumbent.
    [[nodiscard]] bool better_than(Fitness const& o) const noexcept
    {
        constexpr double rel = 1e-12;
        if (width > o.width + rel * std::abs(o.width)) return true;
        if (width < o.width - rel * std::abs(o.width)) return false;
        return coefficient_norm < o.coefficient_norm * (1.0 - rel);
    }
};

class NoCandidateReachedThreshold : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OptimizationResult {
    PulseSpec best;
    double achieved_ts = 0.0;
    double baseline_ts = 0.0;           ///< normalized cosine at the same objective
    std::vector<double> best_history;   ///< best width per generation
    std::vector<double> best_coefficients;  ///< chi_k / omega for k = 1, 3, 5, ...
};

/// T_s of `pulse` measured on the objective's grid; invalid Fitness when P2
/// never reaches the threshold.
inline Fitness measure_fitness(ShapingObjective const& objective, PulseSpec const& pulse)
{
    auto const grid = IntegrationConfig::per_period(objective.omega, objective.horizon, objective.steps_per_period);
    Fitness f;
    try {
        f.width = populated_window(integrate(objective.atom, pulse, grid), objective.p_cr);
    }
    catch (ThresholdNotReached const&) {
        f.width = -1.0;
    }
    catch (IntegrationError const&) {
        f.width = -1.0;
    }
    return f;
}

namespace detail {

// Relative coefficients (units of omega) -> normalized odd-harmonic pulse.
inline PulseSpec genome_to_pulse(std::vector<double> const& genome, double omega)
{
    HarmonicSumPulse h{omega, {}};
    for (std::size_t i = 0; i < genome.size(); ++i)
        h.coefficients.push_back({static_cast<int>(2 * i + 1), genome[i] * omega});
    auto pulse = normalize_for_transfer(PulseSpec{std::move(h)}, peak_time(omega));
    // overall sign is unobservable; keep the cosine orientation A(t0) < 0
    return action(pulse, peak_time(omega)) > 0.0 ? pulse.scaled(-1.0) : pulse;
}

inline std::vector<double> pulse_to_genome(PulseSpec const& pulse)
{
    auto const& h = pulse.as<HarmonicSumPulse>();
    std::vector<double> g;
    for (auto const& c : h.coefficients) g.push_back(c.amplitude / h.omega);
    return g;
}

inline double l2(std::vector<double> const& v)
{
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

template <class Fn>
void parallel_for(std::size_t count, Fn&& fn)
{
    std::size_t const workers = std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) fn(i);
        });
}

}  // namespace detail

/// Genetic search over odd-harmonic coefficient vectors at fixed omega.
///
/// Real-coded, tournament selection of size 2, arithmetic crossover,
/// Gaussian mutation and one elite. Every candidate is renormalized to
/// |A(t0)| = pi/2 before evaluation, and the initial population is seeded
/// with the normalized cosine. All random draws happen on the calling
/// thread, so results depend only on the seed.
inline OptimizationResult optimize_pulse(ShapingObjective const& objective, OptimizerConfig const& config)
{
    objective.validate();
    config.validate();

    std::mt19937_64 rng{config.seed};
    std::normal_distribution<double> gauss{0.0, config.mutation_scale};
    std::uniform_real_distribution<double> unit{0.0, 1.0};
    auto const pop_size = static_cast<std::size_t>(config.population_size);
    auto const genes = static_cast<std::size_t>(config.n_harmonics);

    struct Individual {
        std::vector<double> genome;
        std::optional<PulseSpec> pulse;
        Fitness fitness;
    };

    auto realize = [&](std::vector<double> genome) {
        Individual ind;
        try {
            ind.pulse = detail::genome_to_pulse(genome, objective.omega);
            ind.genome = detail::pulse_to_genome(*ind.pulse);
        }
        catch (std::domain_error const&) {
            ind.genome = std::move(genome);  // zero action, stays invalid
        }
        return ind;
    };

    std::vector<double> cosine_genome(genes, 0.0);
    cosine_genome[0] = 1.0;

    std::vector<Individual> population;
    population.push_back(realize(cosine_genome));
    while (population.size() < pop_size) {
        auto g = cosine_genome;
        for (auto& x : g) x += gauss(rng);
        population.push_back(realize(std::move(g)));
    }

    auto evaluate = [&](std::vector<Individual>& pop, std::size_t first) {
        detail::parallel_for(pop.size() - first, [&](std::size_t j) {
            auto& ind = pop[first + j];
            if (!ind.pulse) return;
            ind.fitness = measure_fitness(objective, *ind.pulse);
            ind.fitness.coefficient_norm = detail::l2(ind.genome);
        });
    };

    OptimizationResult result{population.front().pulse.value(), 0.0, 0.0, {}, {}};
    evaluate(population, 0);
    Fitness const baseline = population.front().fitness;
    result.baseline_ts = baseline.width;

    auto best_index = [&] {
        std::size_t b = 0;
        for (std::size_t i = 1; i < population.size(); ++i)
            if (population[i].fitness.better_than(population[b].fitness)) b = i;
        return b;
    };

    std::size_t best = best_index();
    result.best_history.push_back(population[best].fitness.width);

    auto tournament = [&]() -> Individual const& {
        std::uniform_int_distribution<std::size_t> pick{0, pop_size - 1};
        auto const& a = population[pick(rng)];
        auto const& b = population[pick(rng)];
        return b.fitness.better_than(a.fitness) ? b : a;
    };

    for (int gen = 1; gen < config.generations; ++gen) {
        std::vector<Individual> next;
        next.reserve(pop_size);
        next.push_back(population[best]);
        while (next.size() < pop_size) {
            auto const& p = tournament();
            auto const& q = tournament();
            double const u = unit(rng);
            std::vector<double> child(genes);
            for (std::size_t i = 0; i < genes; ++i)
                child[i] = u * p.genome[i] + (1.0 - u) * q.genome[i] + gauss(rng);
            next.push_back(realize(std::move(child)));
        }
        population = std::move(next);
        evaluate(population, 1);
        best = best_index();
        result.best_history.push_back(population[best].fitness.width);
    }

    auto const& winner = population[best];
    if (!winner.fitness.valid())
        throw NoCandidateReachedThreshold("optimize_pulse: no candidate reached P2 >= 1 - P_cr");
    result.best = *winner.pulse;
    if (genes == 1) {
        // a single fundamental is the cosine drive
        auto const& h = result.best.as<HarmonicSumPulse>();
        result.best = PulseSpec{CosinePulse{h.coefficients.front().amplitude, h.omega}};
    }
    result.achieved_ts = winner.fitness.width;
    result.best_coefficients = winner.genome;
    return result;
}

}  // namespace twolevel

#endif  // TWOLEVEL_PULSES_HPP
