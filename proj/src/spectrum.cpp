#include "critsweep/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "critsweep/analytic.hpp"
#include "critsweep/errors.hpp"

namespace critsweep::spectrum {

SpectrumReport assemble(std::span<const dynamics::ModeTrajectory> trajectories,
                        const model::SweepScenario& s) {
    if (trajectories.empty()) {
        throw ParameterError("assemble: no trajectories");
    }
    const double t_end = trajectories.front().final_state().t;
    std::vector<const dynamics::ModeState*> finals;
    finals.reserve(trajectories.size());
    for (const auto& traj : trajectories) {
        if (traj.states.empty()) {
            throw ParameterError("assemble: empty trajectory");
        }
        if (traj.final_state().t != t_end) {
            throw ParameterError("assemble: trajectories end at different times");
        }
        finals.push_back(&traj.final_state());
    }
    std::stable_sort(finals.begin(), finals.end(),
                     [](const auto* x, const auto* y) { return x->k < y->k; });

    SpectrumReport r;
    r.t_f = t_end;
    r.predicted = model::predicted_indices(s.a, s.b);
    for (const auto* st : finals) {
        const double p_phi = std::norm(st->phi);
        r.k_values.push_back(st->k);
        r.p_phi.push_back(p_phi);
        r.p_pi.push_back(std::norm(st->pi));
        r.p_grad.push_back(st->k * st->k * p_phi);
    }
    return r;
}

FitWindow fit_mask(const model::SweepScenario& s, double eps_frozen, double eps_adiab) {
    if (!(eps_frozen > 0.0 && eps_frozen < 1.0 && eps_adiab > 1.0)) {
        throw ParameterError("fit_mask: need 0 < eps_frozen < 1 < eps_adiab");
    }
    model::require_valid(s);
    const double tau_in = std::abs(analytic::tau_of_t(s, s.t_in).value);
    const double tau_f = std::abs(analytic::tau_of_t(s, s.t_f).value);
    const FitWindow w{eps_adiab / tau_in, eps_frozen / tau_f};
    if (!(w.k_lo < w.k_hi)) {
        std::ostringstream os;
        os << "empty fit window: adiabatic bound k > " << w.k_lo << " (k|tau(t_in)| > "
           << eps_adiab << ") exceeds frozen bound k < " << w.k_hi << " (k|tau(t_f)| < "
           << eps_frozen << "); move t_f closer to 0 or t_in further away";
        throw EmptyWindow(os.str());
    }
    const bool any = std::any_of(s.k_grid.begin(), s.k_grid.end(),
                                 [&w](double k) { return w.contains(k); });
    if (!any) {
        std::ostringstream os;
        os << "empty fit window: no grid wavenumber inside (" << w.k_lo << ", " << w.k_hi << ")";
        throw EmptyWindow(os.str());
    }
    return w;
}

PowerLawFit fit_power_law(std::span<const double> k, std::span<const double> p,
                          const FitWindow& window) {
    if (k.size() != p.size()) {
        throw ParameterError("fit_power_law: k and p differ in length");
    }
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (!window.contains(k[i])) {
            continue;
        }
        if (!(p[i] > 0.0) || !(k[i] > 0.0)) {
            throw ParameterError("fit_power_law: non-positive power in window");
        }
        xs.push_back(std::log(k[i]));
        ys.push_back(std::log(p[i]));
    }
    const std::size_t n = xs.size();
    if (n < kMinFitPoints) {
        std::ostringstream os;
        os << "fit_power_law: degenerate window (" << n << " points, need " << kMinFitPoints << ")";
        throw EmptyWindow(os.str());
    }
    const double mean_x = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double mean_y = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
        sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
    }
    if (!(sxx > 0.0)) {
        throw EmptyWindow("fit_power_law: degenerate window (all k equal)");
    }
    const double slope = sxy / sxx;
    const double intercept = mean_y - slope * mean_x;
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double res = ys[i] - (intercept + slope * xs[i]);
        ssr += res * res;
    }
    const double sigma2 = ssr / static_cast<double>(n - 2);
    return {slope, std::sqrt(sigma2 / sxx), n};
}

void fit_all(SpectrumReport& report, const FitWindow& window) {
    report.window = window;
    report.fit_phi = fit_power_law(report.k_values, report.p_phi, window);
    report.fit_pi = fit_power_law(report.k_values, report.p_pi, window);
    report.fit_grad = fit_power_law(report.k_values, report.p_grad, window);
}

std::vector<UncertaintyProduct> uncertainty_products(
    std::span<const dynamics::ModeTrajectory> trajectories) {
    std::vector<UncertaintyProduct> out;
    out.reserve(trajectories.size());
    for (const auto& traj : trajectories) {
        const auto& st = traj.final_state();
        out.push_back({st.k, std::abs(st.phi) * std::abs(st.pi), st.robertson_schrodinger()});
    }
    return out;
}

}  // namespace critsweep::spectrum
