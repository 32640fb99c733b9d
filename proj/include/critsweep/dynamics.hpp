#pragma once

// Canonical mode evolution
//   d(phi)/dt = alpha(t) pi,   d(pi)/dt = -beta(t) k^2 phi
// for one comoving wavenumber k, with hbar = 1.

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "critsweep/errors.hpp"
#include "critsweep/model.hpp"

namespace critsweep::dynamics {

using complex = std::complex<double>;

struct ModeState {
    double k = 0.0;
    double t = 0.0;
    complex phi;
    complex pi;

    // phi conj(pi) - conj(phi) pi; equals i for canonically normalized modes.
    complex wronskian() const { return phi * std::conj(pi) - std::conj(phi) * pi; }
    // |Im(phi conj(pi)) - 1/2|.
    double wronskian_drift() const;
    // |phi|^2 |pi|^2 - Re(phi conj(pi))^2, evaluated as Im(phi conj(pi))^2
    // which is algebraically identical and free of cancellation when the
    // state is strongly squeezed.
    double robertson_schrodinger() const;
};

struct ModeTrajectory {
    std::vector<ModeState> states;  // t_in, requested output times, t_f
    double max_wronskian_drift = 0.0;  // over every accepted step
    std::size_t steps_taken = 0;
    std::size_t steps_rejected = 0;

    const ModeState& final_state() const { return states.back(); }
    double k() const { return states.front().k; }
};

inline constexpr double kAdiabaticityWarning = 0.05;
inline constexpr double kMinTol = 1e-12;
inline constexpr double kMaxTol = 1e-4;
inline constexpr double kDriftFactor = 100.0;

// |d(omega)/dt| / omega^2 with omega = k sqrt(alpha beta).
double adiabaticity_ratio(const model::SweepScenario& s, double k, double t);

struct InitialCondition {
    ModeState state;
    double adiabaticity = 0.0;
    std::optional<std::string> warning;
};

// Zeroth-order WKB positive-frequency state at t_in with zero phase.
InitialCondition adiabatic_init(const model::SweepScenario& s, double k);

struct EvolveOptions {
    double tol = 1e-10;
    // Additional times in (t_in, t_f) at which the state is recorded.
    std::vector<double> output_times;
    bool record_every_step = false;
};

// Integrates from init.t (which must equal s.t_in) to s.t_f with DOP853.
// Throws NumericalFailure on step underflow or when the Wronskian drifts by
// more than 100 tol.
ModeTrajectory evolve_mode(const model::SweepScenario& s, const ModeState& init,
                           const EvolveOptions& options);
ModeTrajectory evolve_mode(const model::SweepScenario& s, const ModeState& init, double tol);

// Aggregated per-mode failures from evolve_all.
class ModeFailures : public NumericalFailure {
public:
    struct Entry {
        double k;
        std::string message;
    };
    explicit ModeFailures(std::vector<Entry> entries);
    const std::vector<Entry>& entries() const noexcept { return entries_; }

private:
    std::vector<Entry> entries_;
};

// Number of worker threads used by evolve_all when threads == 0: the
// CRITSWEEP_THREADS environment variable if set, otherwise the hardware
// concurrency.
unsigned default_worker_count();

// One trajectory per entry of s.k_grid (same order), each from adiabatic_init.
std::vector<ModeTrajectory> evolve_all(const model::SweepScenario& s, double tol,
                                       unsigned threads = 0);

}  // namespace critsweep::dynamics
