#pragma once

// Bessel and Hankel functions of real order on the positive real axis.
//
// Evaluation switches regime at x = 12: ascending power series below,
// Hankel's large-argument expansion above. Y_nu for non-integer order uses
// the reflection formula Y = (J_nu cos(nu pi) - J_-nu) / sin(nu pi); close to
// integer orders it is interpolated from offset orders where the reflection
// formula is well conditioned.

#include <complex>
#include <utility>

namespace critsweep::specfun {

inline constexpr double kSeriesLimit = 12.0;

// (order, argument) pair validated for the Hankel evaluation used by the
// analytic mode functions.
class OrderedArg {
public:
    OrderedArg(double order, double argument);

    double order() const noexcept { return order_; }
    double argument() const noexcept { return argument_; }

private:
    double order_;
    double argument_;
};

enum class HankelKind { first = 1, second = 2 };

// J_nu(x), nu >= 0, x >= 0.
double bessel_j(double order, double x);

// Y_nu(x), nu >= 0, x > 0.
double bessel_y(double order, double x);

// H^(1)_nu(x) = J + iY, H^(2)_nu(x) = J - iY.
std::complex<double> hankel(HankelKind kind, double order, double x);
std::complex<double> hankel(HankelKind kind, const OrderedArg& arg);

namespace detail {

// Ascending series; accepts negative non-integer orders.
double j_series(double order, double x);

// Reflection formula; order must not be an integer.
double y_reflection(double order, double x);

// (J_nu, Y_nu) from the large-argument expansion, truncated at the smallest term.
std::pair<double, double> jy_asymptotic(double order, double x);

}  // namespace detail

}  // namespace critsweep::specfun
