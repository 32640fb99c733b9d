#include "critsweep/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "critsweep/dop853.hpp"

namespace critsweep::dynamics {

namespace {

using State = ode::ComplexState<2>;

constexpr double kSafety = 0.9;
constexpr double kMinShrink = 0.333;
constexpr double kMaxGrow = 6.0;
constexpr std::size_t kMaxSteps = 50'000'000;

std::string describe(double k, double t) {
    std::ostringstream os;
    os.precision(10);
    os << "k=" << k << " t=" << t;
    return os.str();
}

}  // namespace

double ModeState::wronskian_drift() const {
    return std::abs(std::imag(phi * std::conj(pi)) - 0.5);
}

double ModeState::robertson_schrodinger() const {
    const double im = std::imag(phi * std::conj(pi));
    return im * im;
}

double adiabaticity_ratio(const model::SweepScenario& s, double k, double t) {
    const double omega = k * model::sound_speed(s, t);
    return std::abs(s.a + s.b) / (2.0 * std::abs(t) * omega);
}

InitialCondition adiabatic_init(const model::SweepScenario& s, double k) {
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw ParameterError("adiabatic_init: k must be positive");
    }
    model::require_valid(s);
    const double t = s.t_in;
    const double alpha = s.alpha(t);
    const double omega = k * model::sound_speed(s, t);
    InitialCondition ic;
    ic.state = {k, t, complex(std::sqrt(alpha / (2.0 * omega)), 0.0),
                complex(0.0, -std::sqrt(omega / (2.0 * alpha)))};
    ic.adiabaticity = adiabaticity_ratio(s, k, t);
    if (!(ic.adiabaticity < kAdiabaticityWarning)) {
        std::ostringstream os;
        os << "mode k=" << k << " is not adiabatic at t_in (ratio " << ic.adiabaticity
           << " >= " << kAdiabaticityWarning << ")";
        ic.warning = os.str();
    }
    return ic;
}

ModeTrajectory evolve_mode(const model::SweepScenario& s, const ModeState& init,
                           const EvolveOptions& options) {
    const double tol = options.tol;
    if (!(tol >= kMinTol && tol <= kMaxTol)) {
        throw ParameterError("evolve_mode: tol must lie in [1e-12, 1e-4]");
    }
    model::require_valid(s);
    if (!(init.k > 0.0)) {
        throw ParameterError("evolve_mode: k must be positive");
    }
    if (init.t != s.t_in) {
        throw ParameterError("evolve_mode: initial state must sit at t_in");
    }

    const double k = init.k;
    const double k2 = k * k;
    auto rhs = [&s, k2](double t, const State& y) -> State {
        return {s.alpha(t) * y[1], -s.beta(t) * k2 * y[0]};
    };

    std::vector<double> targets;
    for (double t : options.output_times) {
        if (t > s.t_in && t < s.t_f) {
            targets.push_back(t);
        }
    }
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    targets.push_back(s.t_f);

    ModeTrajectory traj;
    traj.states.push_back(init);
    traj.max_wronskian_drift = init.wronskian_drift();

    double t = s.t_in;
    State y{init.phi, init.pi};
    State dy = rhs(t, y);
    const double omega0 = k * model::sound_speed(s, t);
    double h = std::min(2.0 * std::numbers::pi / omega0, std::abs(t)) / 50.0;
    bool last_rejected = false;
    const double drift_limit = kDriftFactor * tol;

    for (double target : targets) {
        while (t < target) {
            if (traj.steps_taken + traj.steps_rejected > kMaxSteps) {
                throw NumericalFailure("evolve_mode: step budget exhausted at " + describe(k, t));
            }
            double h_try = h;
            bool clamped = false;
            if (t + h_try >= target || target - (t + h_try) < 1e-12 * std::abs(target)) {
                h_try = target - t;
                clamped = true;
            }
            if (h_try < 16.0 * std::numeric_limits<double>::epsilon() * std::abs(t)) {
                throw NumericalFailure("evolve_mode: step size underflow at " + describe(k, t));
            }

            const auto step = ode::dop853_step<2>(rhs, t, y, dy, h_try);
            if (!std::isfinite(std::abs(step.y[0])) || !std::isfinite(std::abs(step.y[1]))) {
                throw NumericalFailure("evolve_mode: non-finite state at " + describe(k, t));
            }

            // Per-component relative tolerance, tightened for squeezed states so
            // that the local Wronskian error stays below tol as well.
            const double mag_phi = std::max(std::abs(y[0]), std::abs(step.y[0]));
            const double mag_pi = std::max(std::abs(y[1]), std::abs(step.y[1]));
            const double squeeze = std::max(1.0, 2.0 * mag_phi * mag_pi);
            const std::array<double, 2> scale{tol * mag_phi / squeeze, tol * mag_pi / squeeze};
            const double err = ode::dop853_error<2>(step, scale, h_try);

            if (err <= 1.0) {
                double factor = err > 0.0 ? kSafety * std::pow(err, -0.125) : kMaxGrow;
                factor = std::clamp(factor, kMinShrink, kMaxGrow);
                if (last_rejected) {
                    factor = std::min(factor, 1.0);
                }
                t = clamped ? target : t + h_try;
                y = step.y;
                dy = rhs(t, y);
                ++traj.steps_taken;
                last_rejected = false;
                h = clamped ? std::max(h, h_try * factor) : h_try * factor;

                const ModeState current{k, t, y[0], y[1]};
                const double drift = current.wronskian_drift();
                traj.max_wronskian_drift = std::max(traj.max_wronskian_drift, drift);
                if (drift > drift_limit) {
                    std::ostringstream os;
                    os << "evolve_mode: Wronskian drift " << drift << " exceeds " << drift_limit
                       << " at " << describe(k, t);
                    throw NumericalFailure(os.str());
                }
                if (options.record_every_step && t < target) {
                    traj.states.push_back(current);
                }
            } else {
                ++traj.steps_rejected;
                last_rejected = true;
                h = h_try * std::max(kMinShrink, kSafety * std::pow(err, -0.125));
            }
        }
        traj.states.push_back({k, t, y[0], y[1]});
    }
    return traj;
}

ModeTrajectory evolve_mode(const model::SweepScenario& s, const ModeState& init, double tol) {
    EvolveOptions options;
    options.tol = tol;
    return evolve_mode(s, init, options);
}

ModeFailures::ModeFailures(std::vector<Entry> entries)
    : NumericalFailure([&entries] {
          std::ostringstream os;
          os << entries.size() << " mode(s) failed:";
          for (const auto& e : entries) {
              os << "\n  k=" << e.k << ": " << e.message;
          }
          return os.str();
      }()),
      entries_(std::move(entries)) {}

unsigned default_worker_count() {
    if (const char* env = std::getenv("CRITSWEEP_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) {
            return static_cast<unsigned>(n);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<ModeTrajectory> evolve_all(const model::SweepScenario& s, double tol,
                                       unsigned threads) {
    model::require_valid(s);
    const std::size_t n = s.k_grid.size();
    std::vector<ModeTrajectory> out(n);
    std::vector<std::optional<std::string>> errors(n);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                out[i] = evolve_mode(s, adiabatic_init(s, s.k_grid[i]).state, tol);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };

    const unsigned count =
        std::max(1u, std::min<unsigned>(threads == 0 ? default_worker_count() : threads,
                                        static_cast<unsigned>(n)));
    if (count == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(count);
        for (unsigned i = 0; i < count; ++i) {
            pool.emplace_back(worker);
        }
    }

    std::vector<ModeFailures::Entry> failures;
    for (std::size_t i = 0; i < n; ++i) {
        if (errors[i]) {
            failures.push_back({s.k_grid[i], *errors[i]});
        }
    }
    if (!failures.empty()) {
        throw ModeFailures(std::move(failures));
    }
    return out;
}

}  // namespace critsweep::dynamics
