#include "cli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "CLI11.hpp"

#include <twolevel/twolevel.hpp>

namespace twolevel::cli {

namespace {

class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

std::pair<double, std::string> split_quantity(std::string_view text)
{
    std::string s{text};
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(s, &consumed);
    }
    catch (std::exception const&) {
        throw ArgumentError("not a number: '" + std::string(text) + "'");
    }
    std::string unit = s.substr(consumed);
    std::transform(unit.begin(), unit.end(), unit.begin(), [](unsigned char c) { return std::tolower(c); });
    return {value, unit};
}

}  // namespace

double parse_frequency(std::string_view text)
{
    auto const [value, unit] = split_quantity(text);
    if (unit.empty() || unit == "au") return value;
    if (unit == "ev") return hydrogen::ev_to_hartree(value);
    if (unit == "um") return hydrogen::wavelength_to_omega(value * 1e-6);
    if (unit == "cm") return hydrogen::wavelength_to_omega(value * 1e-2);
    throw ArgumentError("unknown frequency unit '" + unit + "' (use ev, um, cm or none)");
}

double parse_time(std::string_view text)
{
    auto const [value, unit] = split_quantity(text);
    if (unit.empty() || unit == "au") return value;
    if (unit == "fs") return hydrogen::seconds_to_au(value * 1e-15);
    if (unit == "ps") return hydrogen::seconds_to_au(value * 1e-12);
    if (unit == "ns") return hydrogen::seconds_to_au(value * 1e-9);
    throw ArgumentError("unknown time unit '" + unit + "' (use fs, ps, ns or none)");
}

namespace {

struct Context {
    std::vector<std::string> const& args;
    std::ostream& out;
    std::ostream& err;
};

void write_text_file(std::filesystem::path const& path, std::string const& content)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    f << content;
    if (!f) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::filesystem::path manifest_path(std::filesystem::path const& output)
{
    auto p = output;
    p += ".manifest.json";
    return p;
}

void write_manifest(Context const& ctx, std::filesystem::path const& where, json parameters,
                    std::vector<std::string> const& outputs, std::optional<std::uint64_t> seed = std::nullopt)
{
    json m;
    m["command"] = ctx.args;
    m["parameters"] = std::move(parameters);
    m["seed"] = seed ? json(*seed) : json(nullptr);
    m["tool_version"] = tool_version;
    m["outputs"] = outputs;
    write_text_file(where, m.dump(2) + "\n");
}

std::string trajectory_csv(Trajectory const& traj, PulseSpec const* analytic)
{
    std::ostringstream os;
    write_trajectory_csv(os, traj, analytic);
    return os.str();
}

//-----------------------------------------------------------------------------
struct SimulateOptions {
    std::string omega = "1";
    std::optional<std::string> omega21;
    std::optional<double> ratio;
    std::optional<std::string> chi;
    std::optional<std::string> pulse_file;
    double periods = 1.0;
    int steps_per_period = default_steps_per_period;
    std::optional<std::string> t_end;
    bool analytic = false;
    std::string output = "-";
    std::vector<double> sweep;
};

PulseSpec simulate_pulse(SimulateOptions const& o, double omega)
{
    if (o.pulse_file) {
        std::ifstream f(*o.pulse_file);
        if (!f) throw ArgumentError("cannot read pulse file '" + *o.pulse_file + "'");
        json j;
        try {
            f >> j;
        }
        catch (json::exception const& e) {
            throw ArgumentError(std::string("pulse file is not valid JSON: ") + e.what());
        }
        return pulse_from_json(j);
    }
    double const chi = o.chi ? parse_frequency(*o.chi) : 0.5 * pi * omega;
    return PulseSpec{CosinePulse{chi, omega}};
}

IntegrationConfig simulate_grid(SimulateOptions const& o, PulseSpec const& pulse)
{
    if (pulse.holds<GaussianPulse>()) {
        auto const& g = pulse.as<GaussianPulse>();
        double const end = o.t_end ? parse_time(*o.t_end) : 2.0 * g.center;
        return default_grid(pulse, 0.0, end);
    }
    double const w = pulse.base_frequency();
    if (o.t_end) {
        double const end = parse_time(*o.t_end);
        return IntegrationConfig::with_step(0.0, end, 2.0 * pi / w / o.steps_per_period);
    }
    return IntegrationConfig::per_period(w, o.periods, o.steps_per_period);
}

std::filesystem::path sweep_path(std::filesystem::path const& base, double ratio)
{
    auto name = base.stem().string() + "_ratio" + fmt::format("{:g}", ratio) + base.extension().string();
    return base.parent_path() / name;
}

int cmd_simulate(Context const& ctx, SimulateOptions const& o)
{
    double const omega = parse_frequency(o.omega);
    if (!(omega > 0.0)) throw ArgumentError("--omega must be > 0");
    auto const pulse = simulate_pulse(o, omega);
    auto const grid = simulate_grid(o, pulse);
    PulseSpec const* reference = o.analytic ? &pulse : nullptr;

    double const drive_omega = pulse.holds<GaussianPulse>() ? omega : pulse.base_frequency();
    auto splitting_for = [&](std::optional<double> ratio) {
        if (ratio) {
            if (!(*ratio > 0.0)) throw ArgumentError("--ratio must be > 0");
            return drive_omega / *ratio;
        }
        return o.omega21 ? parse_frequency(*o.omega21) : 0.0;
    };

    json params = {{"omega", omega},     {"pulse", to_json(pulse)},  {"t_start", grid.t_start},
                   {"t_end", grid.t_end}, {"steps", grid.steps},      {"analytic", o.analytic}};

    if (!o.sweep.empty()) {
        if (o.output == "-") throw ArgumentError("--sweep requires --output FILE");
        std::vector<std::future<Trajectory>> jobs;
        for (double r : o.sweep) {
            TwoLevelAtom const atom{splitting_for(r)};
            jobs.push_back(std::async(std::launch::async, [atom, &pulse, &grid] { return integrate(atom, pulse, grid); }));
        }
        std::vector<Trajectory> results;
        for (auto& j : jobs) results.push_back(j.get());

        std::vector<std::string> outputs;
        for (std::size_t i = 0; i < results.size(); ++i) {
            auto const path = sweep_path(o.output, o.sweep[i]);
            write_text_file(path, trajectory_csv(results[i], reference));
            outputs.push_back(path.string());
        }
        params["sweep_ratios"] = o.sweep;
        write_manifest(ctx, manifest_path(o.output), params, outputs);
        for (auto const& p : outputs) ctx.out << p << '\n';
        return ok;
    }

    TwoLevelAtom const atom{splitting_for(o.ratio)};
    params["omega21"] = atom.omega21;
    auto const traj = integrate(atom, pulse, grid);
    auto const csv = trajectory_csv(traj, reference);
    if (o.output == "-") {
        ctx.out << csv;
        return ok;
    }
    write_text_file(o.output, csv);
    write_manifest(ctx, manifest_path(o.output), params, {o.output});
    ctx.err << fmt::format("wrote {} rows to {} (max norm drift {:.3e})\n", traj.size(), o.output,
                           traj.max_norm_drift());
    return ok;
}

//-----------------------------------------------------------------------------
struct DesignOptions {
    std::string ts;
    double pcr = 0.0;
    std::optional<std::string> omega21;
    bool verify = false;
    int steps_per_period = default_steps_per_period;
    bool as_json = false;
};

int cmd_design(Context const& ctx, DesignOptions const& o)
{
    DesignRequest req{parse_time(o.ts), o.pcr};
    double const omega21 = o.omega21 ? parse_frequency(*o.omega21) : hydrogen::lamb_shift();
    double const omega = design_frequency(req);
    auto const field = hydrogen::field_for_transfer(omega);
    auto const report = hydrogen::validity_report(omega, omega21);

    json result = {
        {"requested_ts", req.duration},
        {"p_cr", req.p_cr},
        {"omega21", omega21},
        {"omega", omega},
        {"omega_ev", hydrogen::hartree_to_ev(omega)},
        {"wavelength_m", field.wavelength},
        {"e0", field.e0},
        {"intensity_w_cm2", field.intensity},
        {"leakage_bound", report.leakage_bound},
        {"verdict", std::string(hydrogen::to_string(report.verdict))},
    };

    if (o.verify) {
        auto const traj = integrate(TwoLevelAtom{omega21}, transfer_cosine(omega),
                                    IntegrationConfig::per_period(omega, 1.0, o.steps_per_period));
        double const t0 = peak_time(omega);
        double measured = 0.0;
        try {
            measured = populated_window(traj, req.p_cr);
        }
        catch (ThresholdNotReached const&) {
            measured = 0.0;
        }
        result["measured_ts"] = measured;
        result["relative_ts_error"] = (measured - req.duration) / req.duration;
        result["measured_leakage"] = window_leakage(traj, t0 - 0.5 * req.duration, t0 + 0.5 * req.duration);
    }

    if (o.as_json) {
        ctx.out << result.dump(2) << '\n';
        return ok;
    }
    ctx.out << fmt::format("requested T_s      {:.6e} a.u.\n", req.duration)
            << fmt::format("leakage budget     {:.6e}\n", req.p_cr)
            << fmt::format("omega              {:.6e} a.u. ({:.6e} eV)\n", omega, hydrogen::hartree_to_ev(omega))
            << fmt::format("wavelength         {:.6e} m\n", field.wavelength)
            << fmt::format("field amplitude    {:.6e} a.u.\n", field.e0)
            << fmt::format("intensity          {:.6e} W/cm^2\n", field.intensity)
            << fmt::format("omega21/omega      {:.6e}\n", report.splitting_ratio)
            << fmt::format("leakage bound      {:.6e}\n", report.leakage_bound)
            << fmt::format("verdict            {}\n", hydrogen::to_string(report.verdict));
    if (o.verify) {
        ctx.out << fmt::format("measured T_s       {:.6e} a.u. ({:+.3f}%)\n", result["measured_ts"].get<double>(),
                               100.0 * result["relative_ts_error"].get<double>())
                << fmt::format("measured leakage   {:.6e}\n", result["measured_leakage"].get<double>());
    }
    return ok;
}

//-----------------------------------------------------------------------------
struct OptimizeOptions {
    std::string omega = "1";
    std::string omega21 = "0";
    double pcr = 1e-4;
    double horizon = 1.0;
    int steps_per_period = default_steps_per_period;
    OptimizerConfig ga{};
    std::string prefix = "optimize";
};

int cmd_optimize(Context const& ctx, OptimizeOptions const& o)
{
    ShapingObjective objective;
    objective.p_cr = o.pcr;
    objective.omega = parse_frequency(o.omega);
    objective.atom = TwoLevelAtom{parse_frequency(o.omega21)};
    objective.horizon = o.horizon;
    objective.steps_per_period = o.steps_per_period;

    auto const result = optimize_pulse(objective, o.ga);

    json config = {
        {"omega", objective.omega},
        {"omega21", objective.atom.omega21},
        {"p_cr", objective.p_cr},
        {"horizon", objective.horizon},
        {"steps_per_period", objective.steps_per_period},
        {"population_size", o.ga.population_size},
        {"generations", o.ga.generations},
        {"mutation_scale", o.ga.mutation_scale},
        {"n_harmonics", o.ga.n_harmonics},
    };
    json summary = {
        {"best_pulse", to_json(result.best)},
        {"achieved_ts", result.achieved_ts},
        {"baseline_ts", result.baseline_ts},
        {"fitness_history", result.best_history},
        {"seed", o.ga.seed},
        {"config", config},
    };

    std::string const pulse_file = o.prefix + ".pulse.json";
    std::string const history_file = o.prefix + ".history.csv";
    write_text_file(pulse_file, summary.dump(2) + "\n");

    std::string history = "generation,best_ts\n";
    for (std::size_t g = 0; g < result.best_history.size(); ++g)
        history += std::to_string(g) + "," + format_number(result.best_history[g]) + "\n";
    write_text_file(history_file, history);

    write_manifest(ctx, manifest_path(o.prefix), config, {pulse_file, history_file}, o.ga.seed);

    ctx.out << fmt::format("baseline T_s (cosine)  {:.9g}\n", result.baseline_ts)
            << fmt::format("achieved T_s           {:.9g}\n", result.achieved_ts)
            << fmt::format("improvement            {:.4f}x\n", result.achieved_ts / result.baseline_ts)
            << "best pulse             " << to_json(result.best).dump() << '\n'
            << "wrote " << pulse_file << ", " << history_file << '\n';
    return ok;
}

//-----------------------------------------------------------------------------
int cmd_info(Context const& ctx, bool as_json)
{
    double const lamb = hydrogen::lamb_shift();
    double const gap = hydrogen::next_level_gap();
    double const dipole = hydrogen::dipole_2s2p();
    if (as_json) {
        json j = {
            {"lamb_shift_ev", hydrogen::hartree_to_ev(lamb)},
            {"lamb_shift_au", lamb},
            {"gap_2s3p_ev", hydrogen::hartree_to_ev(gap)},
            {"gap_2s3p_au", gap},
            {"gap_to_lamb_ratio", gap / lamb},
            {"dipole_2s2p_au", dipole},
        };
        ctx.out << j.dump(2) << '\n';
        return ok;
    }
    ctx.out << fmt::format("2s-2p Lamb shift     {:.6e} eV  = {:.6e} a.u.\n", hydrogen::hartree_to_ev(lamb), lamb)
            << fmt::format("2s-3p gap            {:.6e} eV  = {:.6e} a.u.\n", hydrogen::hartree_to_ev(gap), gap)
            << fmt::format("gap / Lamb shift     {:.6e}\n", gap / lamb)
            << fmt::format("|<2s|z|2p0>|         {:.6f} a.u.\n", std::abs(dipole));
    return ok;
}

int cmd_replay(Context const& ctx, std::string const& path)
{
    std::ifstream f(path);
    if (!f) throw ArgumentError("cannot read manifest '" + path + "'");
    json m;
    try {
        f >> m;
    }
    catch (json::exception const& e) {
        throw ArgumentError(std::string("manifest is not valid JSON: ") + e.what());
    }
    if (!m.contains("command") || !m.at("command").is_array())
        throw ArgumentError("manifest has no 'command' array");
    auto const command = m.at("command").get<std::vector<std::string>>();
    if (!command.empty() && command.front() == "replay") throw ArgumentError("manifest cannot replay itself");
    return run(command, ctx.out, ctx.err);
}

}  // namespace

int run(std::vector<std::string> const& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Driven two-level population transfer: simulate, design, optimize", "twolevel"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version);

    SimulateOptions sim;
    auto* simulate = app.add_subcommand("simulate", "integrate the amplitude equations and write a CSV trajectory");
    simulate->add_option("--omega", sim.omega, "field frequency (a.u., or with ev/um/cm suffix)");
    auto* omega21_opt = simulate->add_option("--omega21", sim.omega21, "level splitting (a.u., or ev suffix)");
    simulate->add_option("--ratio", sim.ratio, "omega/omega21; sets the splitting from the field frequency")
        ->excludes(omega21_opt);
    simulate->add_option("--chi", sim.chi, "Rabi frequency (default: pi/2 * omega)");
    simulate->add_option("--pulse", sim.pulse_file, "pulse JSON file (overrides --omega/--chi shape)");
    simulate->add_option("--periods", sim.periods, "number of field periods")->check(CLI::PositiveNumber);
    simulate->add_option("--steps-per-period", sim.steps_per_period, "RK4 steps per field period")
        ->check(CLI::Range(100, 100000000));
    simulate->add_option("--t-end", sim.t_end, "end time (a.u., or fs/ps/ns suffix); overrides --periods");
    simulate->add_flag("--analytic", sim.analytic, "append the degenerate-limit reference populations");
    simulate->add_option("--output,-o", sim.output, "CSV output path ('-' for stdout)");
    simulate->add_option("--sweep", sim.sweep, "comma-separated omega/omega21 ratios, one CSV per ratio")
        ->delimiter(',')
        ->excludes(omega21_opt);

    DesignOptions des;
    auto* design = app.add_subcommand("design", "field frequency for a populated-state duration and leakage budget");
    design->add_option("--ts", des.ts, "populated-state duration T_s (a.u., or fs/ps/ns suffix)")->required();
    design->add_option("--pcr", des.pcr, "leakage budget P_cr in (0, 1)")->required();
    design->add_option("--omega21", des.omega21, "level splitting (default: hydrogen Lamb shift)");
    design->add_flag("--verify", des.verify, "integrate the designed drive and measure T_s");
    design->add_option("--steps-per-period", des.steps_per_period, "RK4 steps per field period for --verify")
        ->check(CLI::Range(100, 100000000));
    design->add_flag("--json", des.as_json, "machine-readable output");

    OptimizeOptions opt;
    auto* optimize = app.add_subcommand("optimize", "genetic search for a flatter odd-harmonic drive");
    optimize->add_option("--omega", opt.omega, "base field frequency");
    optimize->add_option("--omega21", opt.omega21, "level splitting used in fitness evaluation");
    optimize->add_option("--pcr", opt.pcr, "leakage budget P_cr");
    optimize->add_option("--horizon", opt.horizon, "field periods per fitness evaluation");
    optimize->add_option("--steps-per-period", opt.steps_per_period, "RK4 steps per field period");
    optimize->add_option("--population", opt.ga.population_size, "population size (>= 4)");
    optimize->add_option("--generations", opt.ga.generations, "number of generations");
    optimize->add_option("--mutation", opt.ga.mutation_scale, "Gaussian mutation scale, units of omega");
    optimize->add_option("--seed", opt.ga.seed, "random seed");
    optimize->add_option("--n-harmonics", opt.ga.n_harmonics, "odd harmonics searched (1..8)");
    optimize->add_option("--output-prefix", opt.prefix, "prefix for .pulse.json, .history.csv, .manifest.json");

    bool info_json = false;
    auto* info = app.add_subcommand("info", "hydrogen 2s-2p constants");
    info->add_flag("--json", info_json, "machine-readable output");

    std::string manifest;
    auto* replay = app.add_subcommand("replay", "re-run the command recorded in a manifest");
    replay->add_option("manifest", manifest, "manifest JSON path")->required();

    std::vector<char const*> argv{"twolevel"};
    for (auto const& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    }
    catch (CLI::CallForHelp const&) {
        out << app.help();
        return ok;
    }
    catch (CLI::CallForAllHelp const&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    }
    catch (CLI::CallForVersion const&) {
        out << tool_version << '\n';
        return ok;
    }
    catch (CLI::ParseError const& e) {
        err << "error: " << e.what() << '\n';
        return bad_arguments;
    }

    Context const ctx{args, out, err};
    try {
        if (simulate->parsed()) return cmd_simulate(ctx, sim);
        if (design->parsed()) return cmd_design(ctx, des);
        if (optimize->parsed()) return cmd_optimize(ctx, opt);
        if (info->parsed()) return cmd_info(ctx, info_json);
        if (replay->parsed()) return cmd_replay(ctx, manifest);
    }
    catch (IntegrationError const& e) {
        err << "error: integration failed: " << e.what() << '\n';
        return integration_failed;
    }
    catch (NoCandidateReachedThreshold const& e) {
        err << "error: " << e.what() << '\n';
        return integration_failed;
    }
    catch (ThresholdNotReached const& e) {
        err << "error: " << e.what() << '\n';
        return integration_failed;
    }
    catch (std::invalid_argument const& e) {
        err << "error: " << e.what() << '\n';
        return bad_arguments;
    }
    catch (std::domain_error const& e) {
        err << "error: " << e.what() << '\n';
        return bad_arguments;
    }
    catch (std::exception const& e) {
        err << "error: " << e.what() << '\n';
        return bad_arguments;
    }
    return bad_arguments;
}

}  // namespace twolevel::cli
