#include "critsweep/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <tuple>

#include "critsweep/errors.hpp"

namespace critsweep::specfun {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Orders closer than this to an integer are interpolated.
constexpr double kNearInteger = 1e-3;
// Node spacing and count (per side) for the near-integer interpolation.
constexpr double kNodeSpacing = 0.01;
constexpr int kNodesPerSide = 4;

void require_finite(double order, double x, const char* who) {
    if (!std::isfinite(order) || !std::isfinite(x)) {
        throw DomainError(std::string(who) + ": non-finite input");
    }
}

}  // namespace

OrderedArg::OrderedArg(double order, double argument) : order_(order), argument_(argument) {
    if (!std::isfinite(order) || !(order > 0.0)) {
        throw DomainError("OrderedArg: order must be finite and positive");
    }
    if (!std::isfinite(argument) || !(argument > 0.0)) {
        throw DomainError("OrderedArg: argument must be finite and positive");
    }
}

namespace detail {

double j_series(double order, double x) {
    if (x == 0.0) {
        return order == 0.0 ? 1.0 : 0.0;
    }
    // Extended precision absorbs the cancellation between terms that grow
    // to ~e^x before the series converges.
    const long double half = 0.5L * x;
    const long double q = half * half;
    const long double nu = order;
    // 1/Gamma(order + 1) vanishes at negative integers; callers avoid those.
    long double term = std::pow(half, nu) / std::tgamma(nu + 1.0L);
    long double sum = term;
    for (int m = 1; m < 500; ++m) {
        term *= -q / (m * (m + nu));
        sum += term;
        if (m > half && std::abs(term) <= std::numeric_limits<long double>::epsilon() * std::abs(sum)) {
            break;
        }
    }
    return static_cast<double>(sum);
}

double y_reflection(double order, double x) {
    const double s = std::sin(order * kPi);
    const double c = std::cos(order * kPi);
    return (j_series(order, x) * c - j_series(-order, x)) / s;
}

std::pair<double, double> jy_asymptotic(double order, double x) {
    const double mu = 4.0 * order * order;
    double p = 1.0;
    double q = 0.0;
    double term = 1.0;
    double previous = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        const double next = term * (mu - odd * odd) / (8.0 * k * x);
        // Stop at the smallest term of the divergent series.
        if (std::abs(next) >= previous || next == 0.0) {
            break;
        }
        previous = std::abs(next);
        term = next;
        // Terms alternate between Q and P with signs (+Q, -P, -Q, +P, ...).
        switch (k % 4) {
            case 1: q += term; break;
            case 2: p -= term; break;
            case 3: q -= term; break;
            case 0: p += term; break;
        }
        if (std::abs(term) < kEps * 1e-2) {
            break;
        }
    }
    const double chi = x - (0.5 * order + 0.25) * kPi;
    const double amp = std::sqrt(2.0 / (kPi * x));
    const double cs = std::cos(chi);
    const double sn = std::sin(chi);
    return {amp * (p * cs - q * sn), amp * (p * sn + q * cs)};
}

}  // namespace detail

namespace {

// Y near an integer order n: Lagrange interpolation in the order through
// nodes n +- j*h, j = 1..kNodesPerSide, where the reflection formula loses
// at most a factor 1/sin(pi h) in accuracy.
double y_near_integer(double order, double x) {
    const double n = std::round(order);
    std::array<double, 2 * kNodesPerSide> nodes{};
    std::array<double, 2 * kNodesPerSide> values{};
    for (int j = 0; j < kNodesPerSide; ++j) {
        const double offset = kNodeSpacing * (j + 1);
        nodes[2 * j] = n - offset;
        nodes[2 * j + 1] = n + offset;
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        values[i] = detail::y_reflection(nodes[i], x);
    }
    double result = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        double weight = 1.0;
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            if (j != i) {
                weight *= (order - nodes[j]) / (nodes[i] - nodes[j]);
            }
        }
        result += weight * values[i];
    }
    return result;
}

}  // namespace

double bessel_j(double order, double x) {
    require_finite(order, x, "bessel_j");
    if (order < 0.0) {
        throw DomainError("bessel_j: negative order");
    }
    if (x < 0.0) {
        throw DomainError("bessel_j: negative argument");
    }
    if (x <= kSeriesLimit) {
        return detail::j_series(order, x);
    }
    return detail::jy_asymptotic(order, x).first;
}

double bessel_y(double order, double x) {
    require_finite(order, x, "bessel_y");
    if (order < 0.0) {
        throw DomainError("bessel_y: negative order");
    }
    if (!(x > 0.0)) {
        throw DomainError("bessel_y: argument must be positive");
    }
    if (x > kSeriesLimit) {
        return detail::jy_asymptotic(order, x).second;
    }
    if (std::abs(order - std::round(order)) < kNearInteger) {
        return y_near_integer(order, x);
    }
    return detail::y_reflection(order, x);
}

std::complex<double> hankel(HankelKind kind, double order, double x) {
    require_finite(order, x, "hankel");
    double j = 0.0;
    double y = 0.0;
    if (x > kSeriesLimit && order >= 0.0) {
        std::tie(j, y) = detail::jy_asymptotic(order, x);
    } else {
        j = bessel_j(order, x);
        y = bessel_y(order, x);
    }
    return kind == HankelKind::first ? std::complex<double>(j, y) : std::complex<double>(j, -y);
}

std::complex<double> hankel(HankelKind kind, const OrderedArg& arg) {
    return hankel(kind, arg.order(), arg.argument());
}

}  // namespace critsweep::specfun
