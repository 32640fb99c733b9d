#pragma once

// Brute-force cross-check: the field equation on a periodic 1+1 dimensional
// lattice with the nearest-neighbour Laplacian, integrated by kick-drift-kick
// leapfrog.

#include <complex>
#include <cstddef>
#include <vector>

#include "critsweep/model.hpp"

namespace critsweep::lattice {

using complex = std::complex<double>;

struct LatticeConfig {
    std::size_t n_sites = 128;
    double length = 2.0 * 3.14159265358979323846;
    double dt_max = 1e-3;

    double spacing() const { return length / static_cast<double>(n_sites); }
    // k_n = 2 pi n / length.
    double wavenumber(int n) const;
};

void require_valid(const LatticeConfig& cfg);

struct LatticeField {
    std::vector<complex> phi;
    std::vector<complex> pi;
};

struct LatticeRun {
    LatticeField field;  // at s.t_f
    std::size_t steps = 0;
    double dt = 0.0;
};

// Evolves (Phi_j, Pi_j) from s.t_in to s.t_f with
//   dPhi_j/dt = alpha Pi_j,  dPi_j/dt = beta (Phi_{j+1} - 2 Phi_j + Phi_{j-1}) / dx^2
// using uniform steps no larger than dt_max or the CFL bound dx / (2 c).
LatticeRun evolve_lattice(const LatticeConfig& cfg, const model::SweepScenario& s,
                          const LatticeField& init);

// k_eff = (2/dx) sin(k_n dx / 2): eigenvalue of the discrete Laplacian.
double lattice_dispersion(const LatticeConfig& cfg, int n);

// Phi_j = amplitude e^{i k_n x_j}, x_j = j dx.
std::vector<complex> plane_wave(const LatticeConfig& cfg, int n, complex amplitude);

// sum_j (alpha |Pi_j|^2 + beta |(Phi_{j+1} - Phi_j)/dx|^2) dx / 2.
double discrete_energy(const LatticeConfig& cfg, const LatticeField& field, double alpha,
                       double beta);

}  // namespace critsweep::lattice
