#include "critsweep/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "critsweep/errors.hpp"

namespace critsweep::model {

namespace {

bool is_zero(double x) { return std::abs(x) <= kExponentZeroTol; }

std::string format(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

double SweepScenario::alpha(double t) const { return alpha0 * std::pow(std::abs(t), a); }

double SweepScenario::beta(double t) const { return beta0 * std::pow(std::abs(t), b); }

SweepScenario SweepScenario::dual() const {
    SweepScenario d = *this;
    d.alpha0 = beta0;
    d.a = b;
    d.beta0 = alpha0;
    d.b = a;
    return d;
}

std::vector<std::string> violations(const SweepScenario& s) {
    std::vector<std::string> out;
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(s.alpha0) || !(s.alpha0 > 0.0)) {
        out.push_back("alpha0 must be finite and positive (got " + format(s.alpha0) + ")");
    }
    if (!finite(s.beta0) || !(s.beta0 > 0.0)) {
        out.push_back("beta0 must be finite and positive (got " + format(s.beta0) + ")");
    }
    if (!finite(s.a) || !finite(s.b)) {
        out.push_back("exponents a and b must be finite");
    } else if (!(2.0 + s.a + s.b > 0.0)) {
        out.push_back("2+a+b <= 0 (got " + format(2.0 + s.a + s.b) +
                      "): the conformal time does not reach the critical point");
    }
    if (!finite(s.t_in) || !finite(s.t_f)) {
        out.push_back("t_in and t_f must be finite");
    } else {
        if (!(s.t_f < 0.0)) {
            out.push_back("sweep must end strictly before the critical point (t_f < 0, got " +
                          format(s.t_f) + ")");
        }
        if (!(s.t_in < s.t_f)) {
            out.push_back("sweep must start before it ends (t_in < t_f)");
        }
    }
    if (s.k_grid.empty()) {
        out.push_back("k grid is empty");
    }
    for (std::size_t i = 0; i < s.k_grid.size(); ++i) {
        if (!std::isfinite(s.k_grid[i]) || !(s.k_grid[i] > 0.0)) {
            out.push_back("k grid entries must be finite and positive");
            break;
        }
        if (i > 0 && !(s.k_grid[i] > s.k_grid[i - 1])) {
            out.push_back("k grid must be strictly increasing");
            break;
        }
    }
    return out;
}

void require_valid(const SweepScenario& s) {
    if (!(2.0 + s.a + s.b > 0.0)) {
        throw SingularParameters("2+a+b must be positive");
    }
    const auto v = violations(s);
    if (!v.empty()) {
        throw ParameterError(v.front());
    }
}

std::vector<double> log_grid(double k_min, double k_max, int points_per_decade) {
    if (!(k_min > 0.0) || !(k_max > k_min) || points_per_decade < 1) {
        throw ParameterError("log_grid: need 0 < k_min < k_max and points_per_decade >= 1");
    }
    const double decades = std::log10(k_max / k_min);
    const int intervals = std::max(1, static_cast<int>(std::lround(decades * points_per_decade)));
    std::vector<double> grid(static_cast<std::size_t>(intervals) + 1);
    for (int i = 0; i <= intervals; ++i) {
        grid[static_cast<std::size_t>(i)] =
            k_min * std::pow(k_max / k_min, static_cast<double>(i) / intervals);
    }
    grid.back() = k_max;
    return grid;
}

std::string_view to_string(TransitionCase c) {
    switch (c) {
        case TransitionCase::A: return "A";
        case TransitionCase::B: return "B";
        case TransitionCase::C: return "C";
        case TransitionCase::None: return "None";
        case TransitionCase::Other: return "Other";
    }
    return "Other";
}

TransitionCase classify_case(double a, double b) {
    const bool a0 = is_zero(a);
    const bool b0 = is_zero(b);
    if (a0 && b0) return TransitionCase::None;
    if (!a0 && a > 0.0 && b0) return TransitionCase::A;
    if (a0 && !b0 && b > 0.0) return TransitionCase::B;
    if (!a0 && !b0 && a > 0.0 && b > 0.0) return TransitionCase::C;
    return TransitionCase::Other;
}

TransitionCase classify_case(const SweepScenario& s) { return classify_case(s.a, s.b); }

double predicted_nu(double a, double b) {
    const double denom = 2.0 + a + b;
    if (!(denom > 0.0)) {
        throw SingularParameters("predicted_nu: 2+a+b must be positive");
    }
    return (1.0 + a) / denom;
}

PredictedIndices predicted_indices(double a, double b) {
    // A frozen mode |tau|^nu H_nu(k|tau|) scales as k^-|nu|; the momentum is
    // the dual mode (nu' = 1 - nu) times an extra factor k.
    const double nu = predicted_nu(a, b);
    const double nu_dual = predicted_nu(b, a);
    return {-2.0 * std::abs(nu), 2.0 - 2.0 * std::abs(nu_dual), 2.0 - 2.0 * std::abs(nu)};
}

double sound_speed(const SweepScenario& s, double t) {
    return std::sqrt(s.alpha0 * s.beta0) * std::pow(std::abs(t), 0.5 * (s.a + s.b));
}

MetricComponents effective_metric(const SweepScenario& s, double t) {
    const double al = s.alpha(t);
    const double be = s.beta(t);
    return {std::sqrt(al * be * be * be), std::sqrt(be / al)};
}

double horizon_distance(const SweepScenario& s, double t_start, double t_end) {
    if (!(s.t_in <= t_start && t_start < t_end && t_end <= 0.0)) {
        throw ParameterError("horizon_distance: need t_in <= t_start < t_end <= 0");
    }
    const double exponent = s.tau_exponent();
    if (!(exponent > 0.0)) {
        throw SingularParameters("horizon_distance: 2+a+b must be positive");
    }
    const double prefactor = std::sqrt(s.alpha0 * s.beta0) / exponent;
    return prefactor * (std::pow(-t_start, exponent) - std::pow(-t_end, exponent));
}

bool horizon_exists_at_infinite_time(double a, double b) { return 0.5 * (a + b) < -1.0; }

std::optional<double> crossing_time(const SweepScenario& s, double wavelength) {
    if (!(wavelength > 0.0)) {
        throw ParameterError("crossing_time: wavelength must be positive");
    }
    const double exponent = s.tau_exponent();
    if (!(exponent > 0.0)) {
        throw SingularParameters("crossing_time: 2+a+b must be positive");
    }
    const double magnitude =
        std::pow(wavelength * exponent / std::sqrt(s.alpha0 * s.beta0), 1.0 / exponent);
    const double t_star = -magnitude;
    if (t_star > s.t_in && t_star < 0.0) {
        return t_star;
    }
    return std::nullopt;
}

HorizonReport horizon_report(const SweepScenario& s) {
    require_valid(s);
    HorizonReport r{};
    r.total_distance = horizon_distance(s, s.t_in, 0.0);
    r.distance_to_end = horizon_distance(s, s.t_in, s.t_f);
    r.converges_at_infinity = horizon_exists_at_infinite_time(s.a, s.b);
    r.crossings.reserve(s.k_grid.size());
    for (double k : s.k_grid) {
        HorizonCrossing c{k, 1.0 / k, crossing_time(s, 1.0 / k)};
        if (c.time && !(*c.time < s.t_f)) {
            c.time.reset();
        }
        r.crossings.push_back(c);
    }
    return r;
}

std::string_view to_string(Preset p) {
    switch (p) {
        case Preset::bec: return "bec";
        case Preset::em_medium: return "em-medium";
        case Preset::heisenberg: return "heisenberg";
        case Preset::desitter: return "desitter";
    }
    return "bec";
}

Preset parse_preset(std::string_view name) {
    for (Preset p : all_presets()) {
        if (to_string(p) == name) {
            return p;
        }
    }
    throw ParameterError("unknown preset '" + std::string(name) +
                         "' (expected bec, em-medium, heisenberg or desitter)");
}

const std::vector<Preset>& all_presets() {
    static const std::vector<Preset> presets{Preset::bec, Preset::em_medium, Preset::heisenberg,
                                             Preset::desitter};
    return presets;
}

SweepScenario preset(Preset p) {
    SweepScenario s;
    switch (p) {
        case Preset::bec:  // alpha = g (coupling) -> 0 linearly, beta = rho0/m fixed
            s.a = 1.0;
            s.b = 0.0;
            break;
        case Preset::em_medium:  // 1/mu = 1 - g^2/Omega^2 vanishes linearly
            s.a = 0.0;
            s.b = 1.0;
            break;
        case Preset::heisenberg:  // global prefactor: alpha = beta = g
            s.a = 1.0;
            s.b = 1.0;
            break;
        case Preset::desitter:  // action (phi_dot^2 - (grad phi)^2) / t^2
            s.a = 2.0;
            s.b = -2.0;
            break;
    }
    s.k_grid = log_grid(0.05, 50.0, 32);
    return s;
}

SweepScenario preset(std::string_view name) { return preset(parse_preset(name)); }

}  // namespace critsweep::model
