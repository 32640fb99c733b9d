#pragma once

// Command-line front end: configuration, validation and the end-to-end run
// (evolve -> spectrum -> fit -> verdict) with CSV and summary reports.

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "critsweep/dynamics.hpp"
#include "critsweep/model.hpp"
#include "critsweep/spectrum.hpp"

namespace critsweep::cli {

enum ExitCode : int {
    kOk = 0,
    kConfigError = 1,
    kNumericalFailure = 2,
    kEmptyWindow = 3,
};

inline constexpr double kIndexTolerance = 0.05;

struct RunConfig {
    std::optional<std::string> preset;
    std::optional<double> a;
    std::optional<double> b;
    std::optional<double> alpha0;
    std::optional<double> beta0;
    double t_in = -10.0;
    double t_f = -1e-3;
    double k_min = 0.05;
    double k_max = 50.0;
    int points_per_decade = 32;
    double tol = 1e-10;
    double eps_frozen = spectrum::kDefaultEpsFrozen;
    double eps_adiab = spectrum::kDefaultEpsAdiab;
    std::filesystem::path output = "critsweep-out";
    std::string format = "json";
    unsigned threads = 0;  // 0: CRITSWEEP_THREADS or hardware concurrency
};

struct Diagnostics {
    std::vector<std::string> violations;
    std::vector<std::string> warnings;

    bool ok() const { return violations.empty(); }
};

// Lists every violated invariant and the non-fatal warnings without running.
Diagnostics validate(const RunConfig& config);

// Scenario described by a valid config. Throws ParameterError otherwise.
model::SweepScenario build_scenario(const RunConfig& config);

struct RunResult {
    model::SweepScenario scenario;
    spectrum::SpectrumReport spectrum;
    model::HorizonReport horizon;
    std::vector<spectrum::UncertaintyProduct> uncertainty;
    double max_wronskian_drift = 0.0;
    double max_rs_deviation = 0.0;
    std::size_t steps_taken = 0;
    std::size_t steps_rejected = 0;
    std::vector<std::string> warnings;
};

// Runs the sweep. Throws ParameterError, NumericalFailure or EmptyWindow.
RunResult execute(const RunConfig& config);

std::string spectrum_csv(const spectrum::SpectrumReport& report);
nlohmann::json summary_json(const RunConfig& config, const RunResult& result);
nlohmann::json horizon_json(const model::HorizonReport& report);
// Indented "key: value" rendering of a summary document.
std::string to_text(const nlohmann::json& doc);

// Writes <output>/spectrum.csv and <output>/summary.{json,txt}; returns the exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Full command-line entry point: run, validate, presets, horizon.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace critsweep::cli
