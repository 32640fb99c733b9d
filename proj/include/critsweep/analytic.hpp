#pragma once

// Closed-form mode functions in conformal time.
//
// With tau = -(sqrt(alpha0 beta0)/s) |t|^s, s = (2+a+b)/2, the mode equation
// becomes Phi'' - ((2 nu - 1)/tau) Phi' + k^2 Phi = 0 with
// nu = (1+a)/(2+a+b). Substituting tau ~ |t|^s into the field equation
// gives a coefficient of Phi' proportional to (a - b)/(2s) only when
// 2 + a + b - 2s = 0, which fixes s; the same substitution then yields nu.
// Solutions are |tau|^nu H_nu(k|tau|); the first-kind Hankel function at
// positive argument k|tau| carries the positive-frequency phase e^{-ik tau}.

#include "critsweep/dynamics.hpp"
#include "critsweep/model.hpp"

namespace critsweep::analytic {

struct TauCoordinate {
    double s_exp;  // (2+a+b)/2
    double scale;  // sqrt(alpha0 beta0) / s_exp
    double value;  // tau < 0
};

TauCoordinate tau_of_t(const model::SweepScenario& s, double t);

// Normalization constant N multiplying |tau|^nu H^(1)_nu(k|tau|). Its
// modulus sqrt(pi / (4 F)) (F = sqrt(beta/alpha) |tau|^(2nu-1), constant in
// time) is independent of k and matches the WKB amplitude as k|tau| -> inf;
// its phase removes the constant phase of the Hankel asymptote.
std::complex<double> mode_normalization(const model::SweepScenario& s);

// Exact mode function and conjugate momentum at time t in [t_in, 0).
dynamics::ModeState analytic_mode(const model::SweepScenario& s, double k, double t);

// Leading small-|tau| modulus |N| (Gamma(nu)/pi) (2/k)^nu of the frozen mode.
double frozen_amplitude(const model::SweepScenario& s, double k);

}  // namespace critsweep::analytic
