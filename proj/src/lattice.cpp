#include "critsweep/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "critsweep/errors.hpp"

namespace critsweep::lattice {

namespace {

constexpr double kMaxSteps = 1e9;

void laplacian(const std::vector<complex>& phi, double inv_dx2, std::vector<complex>& out) {
    const std::size_t n = phi.size();
    for (std::size_t j = 0; j < n; ++j) {
        const complex& left = phi[(j + n - 1) % n];
        const complex& right = phi[(j + 1) % n];
        out[j] = (right - 2.0 * phi[j] + left) * inv_dx2;
    }
}

bool all_finite(const std::vector<complex>& v) {
    return std::all_of(v.begin(), v.end(), [](const complex& z) {
        return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
}

}  // namespace

double LatticeConfig::wavenumber(int n) const {
    return 2.0 * std::numbers::pi * n / length;
}

void require_valid(const LatticeConfig& cfg) {
    const bool power_of_two = cfg.n_sites >= 64 && (cfg.n_sites & (cfg.n_sites - 1)) == 0;
    if (!power_of_two) {
        throw ParameterError("lattice: n_sites must be a power of two >= 64");
    }
    if (!(cfg.length > 0.0) || !(cfg.dt_max > 0.0)) {
        throw ParameterError("lattice: length and dt_max must be positive");
    }
}

LatticeRun evolve_lattice(const LatticeConfig& cfg, const model::SweepScenario& s,
                          const LatticeField& init) {
    require_valid(cfg);
    model::require_valid(s);
    if (init.phi.size() != cfg.n_sites || init.pi.size() != cfg.n_sites) {
        throw ParameterError("evolve_lattice: initial field must have n_sites entries");
    }

    const double dx = cfg.spacing();
    const double inv_dx2 = 1.0 / (dx * dx);
    // Power laws are monotone in |t|, so the largest speed sits at an endpoint.
    const double c_max = std::max(model::sound_speed(s, s.t_in), model::sound_speed(s, s.t_f));
    const double cfl = dx / (2.0 * c_max);
    const double span = s.t_f - s.t_in;
    const double step_cap = std::min(cfg.dt_max, cfl);
    if (!(step_cap > 0.0) || span / step_cap > kMaxSteps) {
        throw ParameterError("evolve_lattice: CFL bound requires an impractical step count");
    }
    const auto steps = static_cast<std::size_t>(std::ceil(span / step_cap));
    const double dt = span / static_cast<double>(steps);
    if (dt > cfl) {
        throw NumericalFailure("evolve_lattice: CFL violation");
    }

    LatticeRun run;
    run.field = init;
    run.steps = steps;
    run.dt = dt;
    auto& phi = run.field.phi;
    auto& pi = run.field.pi;
    std::vector<complex> lap(cfg.n_sites);

    // Strang splitting of the time-extended system: half kick at the step
    // start, drift with alpha at the midpoint, half kick at the step end.
    laplacian(phi, inv_dx2, lap);
    for (std::size_t n = 0; n < steps; ++n) {
        const double t0 = s.t_in + static_cast<double>(n) * dt;
        const double t1 = n + 1 == steps ? s.t_f : s.t_in + static_cast<double>(n + 1) * dt;
        const double half = 0.5 * (t1 - t0);
        const double kick0 = half * s.beta(t0);
        for (std::size_t j = 0; j < cfg.n_sites; ++j) {
            pi[j] += kick0 * lap[j];
        }
        const double drift = (t1 - t0) * s.alpha(t0 + half);
        for (std::size_t j = 0; j < cfg.n_sites; ++j) {
            phi[j] += drift * pi[j];
        }
        laplacian(phi, inv_dx2, lap);
        const double kick1 = half * s.beta(t1);
        for (std::size_t j = 0; j < cfg.n_sites; ++j) {
            pi[j] += kick1 * lap[j];
        }
    }
    if (!all_finite(phi) || !all_finite(pi)) {
        throw NumericalFailure("evolve_lattice: non-finite field values");
    }
    return run;
}

double lattice_dispersion(const LatticeConfig& cfg, int n) {
    require_valid(cfg);
    if (n < 1 || static_cast<std::size_t>(n) > cfg.n_sites / 2) {
        throw ParameterError("lattice_dispersion: n must lie in [1, n_sites/2]");
    }
    const double dx = cfg.spacing();
    return 2.0 / dx * std::sin(0.5 * cfg.wavenumber(n) * dx);
}

std::vector<complex> plane_wave(const LatticeConfig& cfg, int n, complex amplitude) {
    std::vector<complex> out(cfg.n_sites);
    const double dx = cfg.spacing();
    const double k = cfg.wavenumber(n);
    for (std::size_t j = 0; j < cfg.n_sites; ++j) {
        out[j] = amplitude * std::polar(1.0, k * dx * static_cast<double>(j));
    }
    return out;
}

double discrete_energy(const LatticeConfig& cfg, const LatticeField& field, double alpha,
                       double beta) {
    const std::size_t n = cfg.n_sites;
    const double dx = cfg.spacing();
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const complex grad = (field.phi[(j + 1) % n] - field.phi[j]) / dx;
        sum += alpha * std::norm(field.pi[j]) + beta * std::norm(grad);
    }
    return 0.5 * dx * sum;
}

}  // namespace critsweep::lattice
