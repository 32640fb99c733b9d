#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "critsweep/cli.hpp"
#include "critsweep/errors.hpp"
#include "doctest.h"

using namespace critsweep;
using namespace critsweep::cli;
namespace fs = std::filesystem;

namespace {

struct Invocation {
    int code;
    std::string out;
    std::string err;
};

Invocation invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "critsweep");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("critsweep-test-" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

nlohmann::json run_json(const std::vector<std::string>& extra, const fs::path& dir) {
    std::vector<std::string> args{"run", "--output", dir.string()};
    args.insert(args.end(), extra.begin(), extra.end());
    const auto r = invoke(args);
    REQUIRE(r.code == kOk);
    return nlohmann::json::parse(slurp(dir / "summary.json"));
}

bool has_message(const std::vector<std::string>& list, const std::string& fragment) {
    for (const auto& m : list) {
        if (m.find(fragment) != std::string::npos) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("validate reports violations") {
    RunConfig c;
    c.preset = "bec";
    CHECK(validate(c).ok());
    // The default grid starts below the adiabatic window.
    CHECK(has_message(validate(c).warnings, "not adiabatic at t_in"));

    c.t_f = 0.0;
    const auto d = validate(c);
    CHECK_FALSE(d.ok());
    CHECK(has_message(d.violations, "sweep must end strictly before the critical point"));

    RunConfig singular;
    singular.a = -1.0;
    singular.b = -1.0;
    CHECK(has_message(validate(singular).violations, "2+a+b"));

    RunConfig both;
    both.preset = "bec";
    both.a = 1.0;
    CHECK_FALSE(validate(both).ok());

    RunConfig neither;
    CHECK_FALSE(validate(neither).ok());

    RunConfig unknown;
    unknown.preset = "graphene";
    CHECK_FALSE(validate(unknown).ok());

    RunConfig bad_tol;
    bad_tol.preset = "bec";
    bad_tol.tol = 1e-3;
    CHECK_FALSE(validate(bad_tol).ok());

    RunConfig growing;
    growing.a = -1.5;
    growing.b = 0.0;
    const auto g = validate(growing);
    CHECK(g.ok());
    CHECK(has_message(g.warnings, "not positive"));

    CHECK_THROWS_AS(build_scenario(singular), ParameterError);
}

TEST_CASE("validate subcommand") {
    auto r = invoke({"validate", "--preset", "bec"});
    CHECK(r.code == kOk);
    CHECK(r.out.ends_with("ok\n"));
    CHECK(r.out.find("violation") == std::string::npos);
    r = invoke({"validate", "--a", "-1", "--b", "-1"});
    CHECK(r.code == kConfigError);
    CHECK(r.out.find("violation: ") == 0);
    r = invoke({"validate", "--preset", "bec", "--t-f", "0"});
    CHECK(r.code == kConfigError);
}

TEST_CASE("run writes the spectrum and summary") {
    const auto dir = scratch("bec");
    const auto doc = run_json({"--preset", "bec"}, dir);
    CHECK(fs::exists(dir / "spectrum.csv"));
    CHECK(doc["case"] == "A");
    CHECK(doc["nu"].get<double>() == doctest::Approx(2.0 / 3.0));
    CHECK(doc["indices"]["phi"]["predicted"].get<double>() == doctest::Approx(-4.0 / 3.0));
    CHECK(std::abs(doc["indices"]["phi"]["fitted"].get<double>() + 4.0 / 3.0) <= 0.05);
    CHECK(std::abs(doc["indices"]["pi"]["fitted"].get<double>() - 4.0 / 3.0) <= 0.05);
    CHECK(doc["verdict"]["all_within_tolerance"].get<bool>());
    CHECK(doc["numerics"]["max_wronskian_drift"].get<double>() <= 100 * 1e-10);
    CHECK(doc["scenario"]["modes"].get<int>() == 97);
    CHECK(doc["horizon"]["converges_at_infinity"].get<bool>() == false);
    CHECK(doc["warnings"].size() == 1);
    fs::remove_all(dir);
}

TEST_CASE("run reproduces the other scenarios") {
    const auto dir = scratch("scenarios");
    auto doc = run_json({"--preset", "desitter"}, dir);
    CHECK(doc["indices"]["phi"]["predicted"].get<double>() == doctest::Approx(-3.0));
    CHECK(std::abs(doc["indices"]["phi"]["fitted"].get<double>() + 3.0) <= 0.05);
    doc = run_json({"--a", "0", "--b", "0"}, dir);
    CHECK(doc["scenario"]["source"] == "custom");
    CHECK(std::abs(doc["indices"]["phi"]["fitted"].get<double>() + 1.0) <= 0.05);
    doc = run_json({"--preset", "em-medium"}, dir);
    CHECK(doc["case"] == "B");
    CHECK(std::abs(doc["indices"]["grad"]["fitted"].get<double>() - 4.0 / 3.0) <= 0.05);
    fs::remove_all(dir);
}

TEST_CASE("reports are byte-identical across runs and thread counts") {
    const auto d1 = scratch("repeat1");
    const auto d2 = scratch("repeat2");
    REQUIRE(invoke({"run", "--preset", "heisenberg", "--threads", "1", "--output", d1.string()}).code == kOk);
    REQUIRE(invoke({"run", "--preset", "heisenberg", "--threads", "4", "--output", d2.string()}).code == kOk);
    CHECK(slurp(d1 / "spectrum.csv") == slurp(d2 / "spectrum.csv"));
    CHECK(slurp(d1 / "summary.json") == slurp(d2 / "summary.json"));
    fs::remove_all(d1);
    fs::remove_all(d2);
}

TEST_CASE("refitting the CSV reproduces the summary") {
    const auto dir = scratch("refit");
    const auto doc = run_json({"--preset", "em-medium"}, dir);
    std::ifstream csv(dir / "spectrum.csv");
    std::string line;
    std::getline(csv, line);
    CHECK(line == "k,p_phi,p_pi,p_grad,in_fit_window");
    std::vector<double> k, p_phi, p_pi;
    std::size_t flagged = 0;
    const spectrum::FitWindow w{doc["fit_window"]["k_lo"].get<double>(),
                                doc["fit_window"]["k_hi"].get<double>()};
    while (std::getline(csv, line)) {
        std::istringstream row(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        REQUIRE(cells.size() == 5);
        k.push_back(std::stod(cells[0]));
        p_phi.push_back(std::stod(cells[1]));
        p_pi.push_back(std::stod(cells[2]));
        CHECK((cells[4] == "1") == w.contains(k.back()));
        flagged += cells[4] == "1";
    }
    CHECK(k.size() == 97);
    CHECK(flagged == doc["fit_window"]["points"].get<std::size_t>());
    CHECK(spectrum::fit_power_law(k, p_phi, w).index ==
          doctest::Approx(doc["indices"]["phi"]["fitted"].get<double>()).epsilon(1e-12));
    CHECK(spectrum::fit_power_law(k, p_pi, w).index ==
          doctest::Approx(doc["indices"]["pi"]["fitted"].get<double>()).epsilon(1e-12));
    fs::remove_all(dir);
}

TEST_CASE("exit codes") {
    const auto dir = scratch("codes");
    // Sweep too short to freeze any adiabatic mode.
    auto r = invoke({"run", "--a", "0", "--b", "0", "--t-in", "-10", "--t-f", "-5", "--output",
                     dir.string()});
    CHECK(r.code == kEmptyWindow);
    CHECK(r.err.find("error: ") == 0);
    CHECK_FALSE(fs::exists(dir / "summary.json"));

    CHECK(invoke({"run", "--preset", "bec", "--a", "1", "--output", dir.string()}).code == kConfigError);
    CHECK(invoke({"run", "--preset", "bec", "--tol", "abc"}).code == kConfigError);
    CHECK(invoke({"run", "--bogus"}).code == kConfigError);
    CHECK(invoke({}).code == kConfigError);
    CHECK(invoke({"run", "--config", "/nonexistent/sweep.ini"}).code == kConfigError);
    CHECK(invoke({"run", "--preset", "bec", "--format", "xml"}).code == kConfigError);

    // Mode amplitudes overflow: a stiff, strongly growing scenario.
    r = invoke({"run", "--a", "-40", "--b", "45", "--t-in", "-1", "--t-f", "-1e-9", "--tol", "1e-8",
                "--k-min", "0.5", "--k-max", "2", "--points-per-decade", "2", "--output", dir.string()});
    CHECK(r.code == kNumericalFailure);
    fs::remove_all(dir);
}

TEST_CASE("config file with flag override") {
    const auto dir = scratch("config");
    fs::create_directories(dir);
    const auto ini = dir / "sweep.ini";
    std::ofstream(ini) << "preset = \"bec\"\nt-in = -10\npoints-per-decade = 16\n";
    const auto out = dir / "out";
    const auto r = invoke({"run", "--config", ini.string(), "--points-per-decade", "20", "--output",
                           out.string(), "--format", "text"});
    REQUIRE(r.code == kOk);
    const auto text = slurp(out / "summary.txt");
    CHECK(text == r.out);
    CHECK(text.find("points_per_decade: 20") != std::string::npos);
    CHECK(text.find("preset: \"bec\"") != std::string::npos);
    CHECK(text.find("all_within_tolerance: true") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("presets and horizon subcommands") {
    auto r = invoke({"presets"});
    CHECK(r.code == kOk);
    for (const char* name : {"bec:", "em-medium:", "heisenberg:", "desitter:"}) {
        CHECK(r.out.find(name) != std::string::npos);
    }
    CHECK(r.out.find("idx_phi=-3") != std::string::npos);

    r = invoke({"horizon", "--preset", "bec"});
    REQUIRE(r.code == kOk);
    const auto h = nlohmann::json::parse(r.out);
    CHECK(h["total_distance"].get<double>() == doctest::Approx(2.0 / 3.0 * std::pow(10.0, 1.5)));
    CHECK(h["crossings"].size() == 97);

    CHECK_FALSE(h["converges_at_infinity"].get<bool>());

    // A horizon at infinite time needs 2+a+b < 0, which no valid sweep has.
    r = invoke({"horizon", "--a", "-3", "--b", "0"});
    CHECK(r.code == kConfigError);
    CHECK(r.err.find("2+a+b") != std::string::npos);
}

TEST_CASE("installed binary") {
    const auto dir = scratch("binary");
    const std::string cmd = std::string("\"") + CRITSWEEP_CLI_PATH + "\" run --preset bec --output \"" +
                            dir.string() + "\" > \"" + (fs::temp_directory_path() / "critsweep-bin.out").string() + "\"";
    const int status = std::system(cmd.c_str());
    CHECK(status == 0);
    CHECK(fs::exists(dir / "summary.json"));
    const std::string bad = std::string("\"") + CRITSWEEP_CLI_PATH + "\" validate --preset bec --t-f 0 > /dev/null";
    const int bad_status = std::system(bad.c_str());
    CHECK(WEXITSTATUS(bad_status) == kConfigError);
    fs::remove_all(dir);
}
