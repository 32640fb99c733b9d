#include "critsweep/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>
#include <sstream>

#include "CLI11.hpp"
#include "critsweep/errors.hpp"

namespace critsweep::cli {

namespace {

using nlohmann::json;

bool has_custom(const RunConfig& c) { return c.a || c.b || c.alpha0 || c.beta0; }

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json optional_time(const std::optional<double>& t) {
    return t ? json(*t) : json(nullptr);
}

json fit_entry(double predicted, const std::optional<spectrum::PowerLawFit>& fit) {
    json j;
    j["predicted"] = predicted;
    j["fitted"] = fit->index;
    j["stderr"] = fit->std_error;
    j["deviation"] = fit->index - predicted;
    j["within_tolerance"] = std::abs(fit->index - predicted) <= kIndexTolerance;
    return j;
}

void render_text(const json& node, int depth, std::ostringstream& os) {
    const std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
    for (auto it = node.begin(); it != node.end(); ++it) {
        const std::string key = node.is_object() ? it.key() : "-";
        if (it->is_object() || (it->is_array() && !it->empty() && it->front().is_object())) {
            os << indent << key << ":\n";
            render_text(*it, depth + 1, os);
        } else {
            os << indent << key << ": " << it->dump() << "\n";
        }
    }
}

}  // namespace

namespace {

model::SweepScenario unchecked_scenario(const RunConfig& config) {
    model::SweepScenario s;
    if (config.preset) {
        s = model::preset(*config.preset);
    } else {
        if (!(config.a && config.b)) {
            throw ParameterError("custom scenario needs both a and b");
        }
        s.a = *config.a;
        s.b = *config.b;
        s.alpha0 = config.alpha0.value_or(1.0);
        s.beta0 = config.beta0.value_or(1.0);
    }
    s.t_in = config.t_in;
    s.t_f = config.t_f;
    s.k_grid = model::log_grid(config.k_min, config.k_max, config.points_per_decade);
    return s;
}

}  // namespace

Diagnostics validate(const RunConfig& config) {
    Diagnostics d;
    auto& v = d.violations;
    if (config.preset && has_custom(config)) {
        v.push_back("--preset is mutually exclusive with custom --a/--b/--alpha0/--beta0");
    }
    if (!config.preset && !(config.a && config.b)) {
        v.push_back("either --preset or both --a and --b are required");
    }
    if (config.preset) {
        try {
            model::parse_preset(*config.preset);
        } catch (const ParameterError& e) {
            v.push_back(e.what());
        }
    }
    if (!(config.k_min > 0.0) || !(config.k_max > config.k_min)) {
        v.push_back("k grid needs 0 < k_min < k_max");
    }
    if (config.points_per_decade < 1) {
        v.push_back("points_per_decade must be at least 1");
    }
    if (!(config.tol >= dynamics::kMinTol && config.tol <= dynamics::kMaxTol)) {
        v.push_back("tol must lie in [1e-12, 1e-4]");
    }
    if (!(config.eps_frozen > 0.0 && config.eps_frozen < 1.0)) {
        v.push_back("eps_frozen must lie in (0, 1)");
    }
    if (!(config.eps_adiab > 1.0)) {
        v.push_back("eps_adiab must exceed 1");
    }
    if (config.format != "json" && config.format != "text") {
        v.push_back("format must be 'json' or 'text'");
    }
    if (!v.empty()) {
        return d;
    }

    const auto s = unchecked_scenario(config);
    for (auto& msg : model::violations(s)) {
        v.push_back(std::move(msg));
    }
    if (!v.empty()) {
        return d;
    }

    const double nu = model::predicted_nu(s.a, s.b);
    if (!(nu > 0.0)) {
        d.warnings.push_back("predicted nu = " + fmt17(nu) +
                             " is not positive: frozen modes grow instead of freezing");
    }
    for (double k : {s.k_grid.front(), s.k_grid.back()}) {
        const double ratio = dynamics::adiabaticity_ratio(s, k, s.t_in);
        if (!(ratio < dynamics::kAdiabaticityWarning)) {
            d.warnings.push_back("mode k=" + fmt17(k) + " is not adiabatic at t_in (ratio " +
                                 fmt17(ratio) + ")");
        }
    }
    try {
        const auto w = spectrum::fit_mask(s, config.eps_frozen, config.eps_adiab);
        const auto inside = std::count_if(s.k_grid.begin(), s.k_grid.end(),
                                          [&w](double k) { return w.contains(k); });
        if (static_cast<std::size_t>(inside) < spectrum::kMinFitPoints) {
            d.warnings.push_back("fit window holds only " + std::to_string(inside) +
                                 " grid points; the fit needs at least " +
                                 std::to_string(spectrum::kMinFitPoints));
        }
    } catch (const EmptyWindow& e) {
        d.warnings.push_back(e.what());
    }
    return d;
}

model::SweepScenario build_scenario(const RunConfig& config) {
    auto s = unchecked_scenario(config);
    model::require_valid(s);
    return s;
}

RunResult execute(const RunConfig& config) {
    const auto diag = validate(config);
    if (!diag.ok()) {
        throw ParameterError(diag.violations.front());
    }
    RunResult r;
    r.scenario = build_scenario(config);
    r.warnings = diag.warnings;
    const auto& s = r.scenario;

    const auto trajectories = dynamics::evolve_all(s, config.tol, config.threads);
    for (const auto& traj : trajectories) {
        r.max_wronskian_drift = std::max(r.max_wronskian_drift, traj.max_wronskian_drift);
        r.steps_taken += traj.steps_taken;
        r.steps_rejected += traj.steps_rejected;
    }
    r.uncertainty = spectrum::uncertainty_products(trajectories);
    for (const auto& u : r.uncertainty) {
        r.max_rs_deviation = std::max(r.max_rs_deviation, std::abs(u.rs_invariant - 0.25));
    }
    r.spectrum = spectrum::assemble(trajectories, s);
    spectrum::fit_all(r.spectrum, spectrum::fit_mask(s, config.eps_frozen, config.eps_adiab));
    r.horizon = model::horizon_report(s);
    return r;
}

std::string spectrum_csv(const spectrum::SpectrumReport& report) {
    std::ostringstream os;
    os << "k,p_phi,p_pi,p_grad,in_fit_window\n";
    for (std::size_t i = 0; i < report.k_values.size(); ++i) {
        const double k = report.k_values[i];
        const bool inside = report.window && report.window->contains(k);
        os << fmt17(k) << ',' << fmt17(report.p_phi[i]) << ',' << fmt17(report.p_pi[i]) << ','
           << fmt17(report.p_grad[i]) << ',' << (inside ? 1 : 0) << '\n';
    }
    return os.str();
}

json horizon_json(const model::HorizonReport& report) {
    json h;
    h["total_distance"] = report.total_distance;
    h["distance_to_end"] = report.distance_to_end;
    h["converges_at_infinity"] = report.converges_at_infinity;
    json crossings = json::array();
    for (const auto& c : report.crossings) {
        crossings.push_back({{"k", c.k}, {"wavelength", c.wavelength},
                             {"time", optional_time(c.time)}});
    }
    h["crossings"] = std::move(crossings);
    return h;
}

json summary_json(const RunConfig& config, const RunResult& result) {
    const auto& s = result.scenario;
    const auto& sp = result.spectrum;
    const double nu = model::predicted_nu(s.a, s.b);

    json doc;
    json scenario;
    scenario["source"] = config.preset ? "preset" : "custom";
    scenario["preset"] = config.preset ? json(*config.preset) : json(nullptr);
    scenario["a"] = s.a;
    scenario["b"] = s.b;
    scenario["alpha0"] = s.alpha0;
    scenario["beta0"] = s.beta0;
    scenario["t_in"] = s.t_in;
    scenario["t_f"] = s.t_f;
    scenario["k_min"] = config.k_min;
    scenario["k_max"] = config.k_max;
    scenario["points_per_decade"] = config.points_per_decade;
    scenario["modes"] = s.k_grid.size();
    doc["scenario"] = std::move(scenario);

    doc["case"] = std::string(model::to_string(model::classify_case(s)));
    doc["nu"] = nu;
    doc["nu_dual"] = 1.0 - nu;

    json window;
    window["k_lo"] = sp.window->k_lo;
    window["k_hi"] = sp.window->k_hi;
    window["eps_frozen"] = config.eps_frozen;
    window["eps_adiab"] = config.eps_adiab;
    window["points"] = sp.fit_phi->points;
    doc["fit_window"] = std::move(window);

    json indices;
    indices["phi"] = fit_entry(sp.predicted.phi, sp.fit_phi);
    indices["pi"] = fit_entry(sp.predicted.pi, sp.fit_pi);
    indices["grad"] = fit_entry(sp.predicted.grad, sp.fit_grad);
    const bool all_ok = indices["phi"]["within_tolerance"].get<bool>() &&
                        indices["pi"]["within_tolerance"].get<bool>() &&
                        indices["grad"]["within_tolerance"].get<bool>();
    doc["indices"] = std::move(indices);
    doc["verdict"] = {{"tolerance", kIndexTolerance}, {"all_within_tolerance", all_ok}};

    json numerics;
    numerics["tol"] = config.tol;
    numerics["max_wronskian_drift"] = result.max_wronskian_drift;
    numerics["drift_limit"] = dynamics::kDriftFactor * config.tol;
    numerics["max_rs_deviation"] = result.max_rs_deviation;
    numerics["steps_taken"] = result.steps_taken;
    numerics["steps_rejected"] = result.steps_rejected;
    doc["numerics"] = std::move(numerics);

    doc["horizon"] = horizon_json(result.horizon);
    doc["warnings"] = result.warnings;
    return doc;
}

std::string to_text(const json& doc) {
    std::ostringstream os;
    render_text(doc, 0, os);
    return os.str();
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const auto diag = validate(config);
    if (!diag.ok()) {
        for (const auto& v : diag.violations) {
            err << "error: " << v << "\n";
        }
        return kConfigError;
    }
    RunResult result;
    try {
        result = execute(config);
    } catch (const EmptyWindow& e) {
        err << "error: " << e.what() << "\n";
        return kEmptyWindow;
    } catch (const NumericalFailure& e) {
        err << "error: numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << "\n";
        return kConfigError;
    }
    for (const auto& w : result.warnings) {
        err << "warning: " << w << "\n";
    }

    const json summary = summary_json(config, result);
    const std::string summary_text =
        config.format == "json" ? summary.dump(2) + "\n" : to_text(summary);
    std::error_code ec;
    std::filesystem::create_directories(config.output, ec);
    if (ec) {
        err << "error: cannot create output directory " << config.output << ": " << ec.message()
            << "\n";
        return kConfigError;
    }
    const auto csv_path = config.output / "spectrum.csv";
    const auto summary_path =
        config.output / (config.format == "json" ? "summary.json" : "summary.txt");
    std::ofstream(csv_path, std::ios::binary) << spectrum_csv(result.spectrum);
    std::ofstream(summary_path, std::ios::binary) << summary_text;
    out << summary_text;
    return kOk;
}

namespace {

void add_run_options(CLI::App& app, RunConfig& c) {
    // Placeholder for the help text: expand_config consumes --config before parsing.
    app.add_option("--config", "Read options from a key = value file (flags override it)")
        ->type_name("FILE");
    app.add_option("--preset", c.preset, "bec | em-medium | heisenberg | desitter");
    app.add_option("--a", c.a, "Exponent of alpha(t) = alpha0 |t|^a");
    app.add_option("--b", c.b, "Exponent of beta(t) = beta0 |t|^b");
    app.add_option("--alpha0", c.alpha0, "Amplitude of alpha (default 1)");
    app.add_option("--beta0", c.beta0, "Amplitude of beta (default 1)");
    app.add_option("--t-in", c.t_in, "Sweep start (< t_f)")->capture_default_str();
    app.add_option("--t-f", c.t_f, "Sweep end (< 0)")->capture_default_str();
    app.add_option("--k-min", c.k_min, "Smallest wavenumber")->capture_default_str();
    app.add_option("--k-max", c.k_max, "Largest wavenumber")->capture_default_str();
    app.add_option("--points-per-decade", c.points_per_decade, "Log-grid density")
        ->capture_default_str();
    app.add_option("--tol", c.tol, "Local error tolerance in [1e-12, 1e-4]")
        ->capture_default_str();
    app.add_option("--eps-frozen", c.eps_frozen, "Frozen bound k|tau(t_f)| < eps")
        ->capture_default_str();
    app.add_option("--eps-adiab", c.eps_adiab, "Adiabatic bound k|tau(t_in)| > eps")
        ->capture_default_str();
    app.add_option("--threads", c.threads, "Worker threads (0: CRITSWEEP_THREADS or all cores)")
        ->capture_default_str();
}

// CLI11 reads config files on the top-level app only, so the file named by
// --config is spliced in as flags right after the subcommand. Options take
// the last value given, which lets explicit flags override the file.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    for (std::size_t i = 1; i < args.size(); ++i) {
        std::string path;
        std::size_t used = 0;
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            used = 2;
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            used = 1;
        } else {
            continue;
        }
        args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                   args.begin() + static_cast<std::ptrdiff_t>(i + used));
        std::vector<std::string> flags;
        for (const auto& item : CLI::ConfigINI().from_file(path)) {
            if (item.name == "++" || item.name == "--") continue;
            if (!item.parents.empty() && item.parents != std::vector<std::string>{args[0]}) {
                throw CLI::ConfigError("unexpected section in " + path + ": " + item.fullname());
            }
            flags.push_back("--" + item.name);
            flags.insert(flags.end(), item.inputs.begin(), item.inputs.end());
        }
        args.insert(args.begin() + 1, flags.begin(), flags.end());
        break;
    }
    return args;
}

}  // namespace

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Mode dynamics through a zero-temperature phase transition sweep", "critsweep"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    RunConfig config;
    auto* run_cmd = app.add_subcommand("run", "Evolve all modes, fit spectra, write reports");
    add_run_options(*run_cmd, config);
    run_cmd->add_option("--output", config.output, "Output directory")->capture_default_str();
    run_cmd->add_option("--format", config.format, "Summary format: json | text")
        ->capture_default_str();

    RunConfig validate_config;
    auto* validate_cmd = app.add_subcommand("validate", "Check a configuration without running");
    add_run_options(*validate_cmd, validate_config);

    app.add_subcommand("presets", "List the built-in scenarios");

    RunConfig horizon_config;
    auto* horizon_cmd = app.add_subcommand("horizon", "Print the horizon report only");
    add_run_options(*horizon_cmd, horizon_config);

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        if (!args.empty()) {
            args = expand_config(std::move(args));
        }
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kConfigError;
    }

    auto* chosen = app.get_subcommands().front();
    const std::string name = chosen->get_name();
    if (name == "run") {
        return run(config, out, err);
    }
    if (name == "validate") {
        const auto d = validate(validate_config);
        for (const auto& v : d.violations) {
            out << "violation: " << v << "\n";
        }
        for (const auto& w : d.warnings) {
            out << "warning: " << w << "\n";
        }
        if (d.ok()) {
            out << "ok\n";
            return kOk;
        }
        return kConfigError;
    }
    if (name == "presets") {
        for (auto p : model::all_presets()) {
            const auto s = model::preset(p);
            const auto idx = model::predicted_indices(s.a, s.b);
            out << model::to_string(p) << ": a=" << s.a << " b=" << s.b
                << " case=" << model::to_string(model::classify_case(s))
                << " nu=" << fmt17(model::predicted_nu(s.a, s.b)) << " idx_phi=" << fmt17(idx.phi)
                << " idx_pi=" << fmt17(idx.pi) << " idx_grad=" << fmt17(idx.grad) << "\n";
        }
        return kOk;
    }
    // horizon
    const auto d = validate(horizon_config);
    if (!d.ok()) {
        for (const auto& v : d.violations) {
            err << "error: " << v << "\n";
        }
        return kConfigError;
    }
    const auto s = build_scenario(horizon_config);
    out << horizon_json(model::horizon_report(s)).dump(2) << "\n";
    return kOk;
}

}  // namespace critsweep::cli
