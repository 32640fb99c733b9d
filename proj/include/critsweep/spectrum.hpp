#pragma once

// Frozen two-point power spectra and their log-log power-law fits.

#include <optional>
#include <span>
#include <vector>

#include "critsweep/dynamics.hpp"
#include "critsweep/model.hpp"

namespace critsweep::spectrum {

inline constexpr double kDefaultEpsFrozen = 0.1;
inline constexpr double kDefaultEpsAdiab = 10.0;
inline constexpr std::size_t kMinFitPoints = 8;

struct FitWindow {
    double k_lo;
    double k_hi;

    bool contains(double k) const { return k > k_lo && k < k_hi; }
};

struct PowerLawFit {
    double index;
    double std_error;
    std::size_t points;
};

struct SpectrumReport {
    double t_f = 0.0;
    std::vector<double> k_values;
    std::vector<double> p_phi;   // |Phi_k|^2
    std::vector<double> p_pi;    // |Pi_k|^2
    std::vector<double> p_grad;  // k^2 |Phi_k|^2
    model::PredictedIndices predicted{};
    std::optional<FitWindow> window;
    std::optional<PowerLawFit> fit_phi;
    std::optional<PowerLawFit> fit_pi;
    std::optional<PowerLawFit> fit_grad;
};

// Powers at the common final time, sorted by k. Throws ParameterError when
// the trajectories end at different times.
SpectrumReport assemble(std::span<const dynamics::ModeTrajectory> trajectories,
                        const model::SweepScenario& s);

// k interval (eps_adiab/|tau(t_in)|, eps_frozen/|tau(t_f)|): frozen at t_f
// and adiabatic at t_in. Throws EmptyWindow when the interval is empty or
// holds no k-grid point.
FitWindow fit_mask(const model::SweepScenario& s, double eps_frozen = kDefaultEpsFrozen,
                   double eps_adiab = kDefaultEpsAdiab);

// OLS slope of ln p against ln k over the points with k inside the window.
PowerLawFit fit_power_law(std::span<const double> k, std::span<const double> p,
                          const FitWindow& window);

// Fills report.window and the three fits.
void fit_all(SpectrumReport& report, const FitWindow& window);

struct UncertaintyProduct {
    double k;
    double dq_dp;         // |phi| |pi| at t_f
    double rs_invariant;  // |phi|^2 |pi|^2 - Re(phi conj(pi))^2
};

std::vector<UncertaintyProduct> uncertainty_products(
    std::span<const dynamics::ModeTrajectory> trajectories);

}  // namespace critsweep::spectrum
