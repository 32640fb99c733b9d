#pragma once

// Sweep scenarios with power-law coefficient histories
//   alpha(t) = alpha0 |t|^a,  beta(t) = beta0 |t|^b,  t in [t_in, t_f], t_f < 0,
// for the effective Lagrangian (1/2)(phi_dot^2 / alpha - beta (grad phi)^2).
// The critical point sits at t = 0.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace critsweep::model {

struct SweepScenario {
    double alpha0 = 1.0;
    double a = 0.0;
    double beta0 = 1.0;
    double b = 0.0;
    double t_in = -10.0;
    double t_f = -1e-3;
    std::vector<double> k_grid;

    double alpha(double t) const;
    double beta(double t) const;
    // Exponent s = (2 + a + b) / 2 of the conformal-time map |tau| ~ |t|^s.
    double tau_exponent() const noexcept { return 0.5 * (2.0 + a + b); }
    // Scenario with alpha and beta interchanged (field <-> momentum duality).
    SweepScenario dual() const;
};

// Every violated invariant, as human-readable messages. Empty means valid.
std::vector<std::string> violations(const SweepScenario& s);

// Throws ParameterError (SingularParameters for 2+a+b <= 0) on the first violation.
void require_valid(const SweepScenario& s);

// Logarithmically spaced grid from k_min to k_max inclusive.
std::vector<double> log_grid(double k_min, double k_max, int points_per_decade);

enum class TransitionCase {
    A,     // alpha -> 0, beta finite: expanding universe
    B,     // beta -> 0, alpha finite: contracting universe
    C,     // both coefficients vanish
    None,  // constant coefficients
    Other  // any other exponent pattern (e.g. one coefficient diverging)
};

std::string_view to_string(TransitionCase c);

inline constexpr double kExponentZeroTol = 1e-12;

TransitionCase classify_case(double a, double b);
TransitionCase classify_case(const SweepScenario& s);

// nu = (1 + a) / (2 + a + b).
double predicted_nu(double a, double b);

struct PredictedIndices {
    double phi;   // |Phi_k|^2
    double pi;    // |Pi_k|^2
    double grad;  // k^2 |Phi_k|^2
};

// Spectral indices of the frozen two-point power spectra.
PredictedIndices predicted_indices(double a, double b);

double sound_speed(const SweepScenario& s, double t);

struct MetricComponents {
    double g_tt;
    double g_rr;
};

// ds^2 = g_tt dt^2 - g_rr dr^2.
MetricComponents effective_metric(const SweepScenario& s, double t);

// Comoving distance int_{t_start}^{t_end} sqrt(alpha beta) dt, closed form.
double horizon_distance(const SweepScenario& s, double t_start, double t_end);

// True when the distance travelled up to t -> infinity stays finite for
// late-time power laws alpha ~ t^a, beta ~ t^b.
bool horizon_exists_at_infinite_time(double a, double b);

// Time at which the remaining distance to the critical point equals the
// wavelength; nullopt when that time lies outside (t_in, 0).
std::optional<double> crossing_time(const SweepScenario& s, double wavelength);

struct HorizonCrossing {
    double k;
    double wavelength;                 // reduced wavelength 1/k
    std::optional<double> time;        // set when inside (t_in, t_f)
};

struct HorizonReport {
    double total_distance;             // horizon_distance(t_in, 0)
    double distance_to_end;            // horizon_distance(t_in, t_f)
    bool converges_at_infinity;
    std::vector<HorizonCrossing> crossings;
};

HorizonReport horizon_report(const SweepScenario& s);

enum class Preset { bec, em_medium, heisenberg, desitter };

std::string_view to_string(Preset p);
Preset parse_preset(std::string_view name);
const std::vector<Preset>& all_presets();

// Unit amplitudes, default sweep interval [-10, -1e-3] and k grid
// 0.05 ... 50 at 32 points per decade.
SweepScenario preset(Preset p);
SweepScenario preset(std::string_view name);

}  // namespace critsweep::model
