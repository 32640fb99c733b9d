#include "critsweep/analytic.hpp"

#include <cmath>
#include <numbers>

#include "critsweep/errors.hpp"
#include "critsweep/specfun.hpp"

namespace critsweep::analytic {

namespace {

using complex = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// H^(1) of any real order at positive argument; negative orders folded with
// H^(1)_{-mu} = e^{i mu pi} H^(1)_mu.
complex hankel1_any_order(double order, double x) {
    if (order >= 0.0) {
        return specfun::hankel(specfun::HankelKind::first, order, x);
    }
    const double mu = -order;
    return std::polar(1.0, mu * kPi) * specfun::hankel(specfun::HankelKind::first, mu, x);
}

// F = sqrt(beta/alpha) |tau|^(2 nu - 1), evaluated at t.
double metric_factor(const model::SweepScenario& s, double t, double nu) {
    const double x = -tau_of_t(s, t).value;
    return std::sqrt(s.beta(t) / s.alpha(t)) * std::pow(x, 2.0 * nu - 1.0);
}

}  // namespace

TauCoordinate tau_of_t(const model::SweepScenario& s, double t) {
    const double exponent = s.tau_exponent();
    if (!(exponent > 0.0)) {
        throw SingularParameters("tau_of_t: 2+a+b must be positive");
    }
    if (!(t < 0.0)) {
        throw ParameterError("tau_of_t: t must be negative");
    }
    const double scale = std::sqrt(s.alpha0 * s.beta0) / exponent;
    return {exponent, scale, -scale * std::pow(-t, exponent)};
}

complex mode_normalization(const model::SweepScenario& s) {
    const double nu = model::predicted_nu(s.a, s.b);
    const double f = metric_factor(s, s.t_in, nu);
    return std::polar(std::sqrt(kPi / (4.0 * f)), (0.5 * nu + 0.25) * kPi);
}

dynamics::ModeState analytic_mode(const model::SweepScenario& s, double k, double t) {
    if (!(k > 0.0)) {
        throw ParameterError("analytic_mode: k must be positive");
    }
    const double nu = model::predicted_nu(s.a, s.b);
    if (!(nu > 0.0)) {
        throw ParameterError("analytic_mode: requires nu > 0");
    }
    const double x = -tau_of_t(s, t).value;
    const complex norm = mode_normalization(s);
    const double x_nu = std::pow(x, nu);
    const complex phi = norm * x_nu * hankel1_any_order(nu, k * x);
    // d/dx [x^nu H_nu(kx)] = k x^nu H_{nu-1}(kx) and dx/dt = -sqrt(alpha beta).
    const complex pi =
        -std::sqrt(s.beta(t) / s.alpha(t)) * norm * k * x_nu * hankel1_any_order(nu - 1.0, k * x);
    return {k, t, phi, pi};
}

double frozen_amplitude(const model::SweepScenario& s, double k) {
    const double nu = model::predicted_nu(s.a, s.b);
    if (!(nu > 0.0)) {
        throw ParameterError("frozen_amplitude: requires nu > 0");
    }
    if (!(k > 0.0)) {
        throw ParameterError("frozen_amplitude: k must be positive");
    }
    return std::abs(mode_normalization(s)) * std::tgamma(nu) / kPi * std::pow(2.0 / k, nu);
}

}  // namespace critsweep::analytic
