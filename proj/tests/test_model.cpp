#include <cmath>
#include <functional>
#include <random>

#include "critsweep/errors.hpp"
#include "critsweep/model.hpp"
#include "doctest.h"

using namespace critsweep;
using namespace critsweep::model;

namespace {

SweepScenario scenario(double a, double b, double t_in = -10.0, double t_f = -1e-3) {
    SweepScenario s;
    s.a = a;
    s.b = b;
    s.t_in = t_in;
    s.t_f = t_f;
    s.k_grid = {0.1, 1.0, 10.0};
    return s;
}

// Adaptive Simpson quadrature, independent of the closed-form integral.
double simpson(const std::function<double(double)>& f, double lo, double hi, double tol,
               int depth = 50) {
    const double mid = 0.5 * (lo + hi);
    const double flo = f(lo), fmid = f(mid), fhi = f(hi);
    std::function<double(double, double, double, double, double, double, int)> rec =
        [&](double a, double b, double fa, double fm, double fb, double whole, int d) {
            const double m = 0.5 * (a + b);
            const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            const double flm = f(lm), frm = f(rm);
            const double left = (m - a) / 6 * (fa + 4 * flm + fm);
            const double right = (b - m) / 6 * (fm + 4 * frm + fb);
            if (d <= 0 || std::abs(left + right - whole) <= 15 * tol) {
                return left + right + (left + right - whole) / 15;
            }
            return rec(a, m, fa, flm, fm, left, d - 1) + rec(m, b, fm, frm, fb, right, d - 1);
        };
    return rec(lo, hi, flo, fmid, fhi, (hi - lo) / 6 * (flo + 4 * fmid + fhi), depth);
}

}  // namespace

TEST_CASE("classify_case") {
    CHECK(classify_case(1, 0) == TransitionCase::A);
    CHECK(classify_case(0, 1) == TransitionCase::B);
    CHECK(classify_case(1, 1) == TransitionCase::C);
    CHECK(classify_case(0, 0) == TransitionCase::None);
    CHECK(classify_case(2, -2) == TransitionCase::Other);
    CHECK(classify_case(-3, 0) == TransitionCase::Other);
    CHECK(classify_case(1, 1e-13) == TransitionCase::A);
    CHECK(classify_case(5e-13, 2) == TransitionCase::B);
    CHECK(classify_case(1e-13, -1e-13) == TransitionCase::None);
    CHECK(classify_case(1, 1e-11) == TransitionCase::C);
}

TEST_CASE("predicted_nu") {
    CHECK(predicted_nu(1, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(predicted_nu(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(predicted_nu(0, 0) == 0.5);
    CHECK(predicted_nu(2, -2) == 1.5);
    CHECK(predicted_nu(1, 1) == 0.5);
    CHECK(predicted_nu(-1.5, 0) < 0.0);
    CHECK_THROWS_AS(predicted_nu(-1, -1), SingularParameters);
    CHECK_THROWS_AS(predicted_nu(-3, 0.5), SingularParameters);
}

TEST_CASE("exponent duality nu(a,b) + nu(b,a) = 1") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.9, 5.0);
    for (int i = 0; i < 1000; ++i) {
        const double a = u(rng), b = u(rng);
        if (2 + a + b <= 1e-3) continue;
        CHECK(predicted_nu(a, b) + predicted_nu(b, a) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("predicted_indices") {
    const auto bec = predicted_indices(1, 0);
    CHECK(bec.phi == doctest::Approx(-4.0 / 3.0));
    CHECK(bec.pi == doctest::Approx(4.0 / 3.0));
    const auto em = predicted_indices(0, 1);
    CHECK(em.phi == doctest::Approx(-2.0 / 3.0));
    CHECK(em.pi == doctest::Approx(2.0 / 3.0));
    CHECK(em.grad == doctest::Approx(4.0 / 3.0));
    CHECK(predicted_indices(1, 1).phi == doctest::Approx(-1.0));
    // de Sitter: field is scale invariant; the dual order is -1/2, so the
    // momentum spectrum goes as k^(2 - 2|nu'|) = k^1.
    const auto ds = predicted_indices(2, -2);
    CHECK(ds.phi == doctest::Approx(-3.0));
    CHECK(ds.pi == doctest::Approx(1.0));
    CHECK(ds.grad == doctest::Approx(-1.0));

    // Field and momentum indices are opposite whenever 0 <= nu <= 1.
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-0.9, 4.0);
    for (int i = 0; i < 500; ++i) {
        const double a = u(rng), b = u(rng);
        const double nu = predicted_nu(a, b);
        if (nu < 0.0 || nu > 1.0) continue;
        const auto idx = predicted_indices(a, b);
        CHECK(std::abs(idx.phi + idx.pi) < 1e-12);
    }
}

TEST_CASE("sound speed and effective metric") {
    CHECK(sound_speed(scenario(0, 0), -3.7) == 1.0);
    CHECK(sound_speed(scenario(1, 0), -0.25) == doctest::Approx(0.5));
    auto ds = scenario(2, -2);
    ds.alpha0 = 3.0;
    ds.beta0 = 1.5;
    for (double t : {-9.0, -1.0, -0.01}) {
        CHECK(sound_speed(ds, t) == doctest::Approx(std::sqrt(4.5)).epsilon(1e-14));
    }

    const auto flat = effective_metric(scenario(0, 0), -2.0);
    CHECK(flat.g_tt == 1.0);
    CHECK(flat.g_rr == 1.0);
    const auto desitter = effective_metric(scenario(2, -2), -0.5);
    CHECK(desitter.g_tt == doctest::Approx(4.0));
    CHECK(desitter.g_rr == doctest::Approx(4.0));
    for (double t : {-3.0, -0.2}) {
        const auto c = effective_metric(scenario(1, 1), t);
        CHECK(c.g_tt == doctest::Approx(t * t));
        CHECK(c.g_rr == doctest::Approx(1.0));
    }
}

TEST_CASE("horizon_distance") {
    CHECK(horizon_distance(scenario(0, 0), -2, -1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(horizon_distance(scenario(1, 0), -1, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(horizon_distance(scenario(1, 0), -1, -2), ParameterError);
    CHECK_THROWS_AS(horizon_distance(scenario(1, 0), -20, -1), ParameterError);
    CHECK_THROWS_AS(horizon_distance(scenario(1, 0), -1, 0.5), ParameterError);

    // Quadrature oracle for sampled scenarios.
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.5, 3.0);
    for (int i = 0; i < 40; ++i) {
        auto s = scenario(u(rng), u(rng), -4.0, -0.5);
        if (2 + s.a + s.b < 0.3) continue;
        s.alpha0 = 0.5 + i * 0.1;
        s.beta0 = 2.0 - i * 0.03;
        const double quad =
            simpson([&s](double t) { return sound_speed(s, t); }, -4.0, -0.5, 1e-13);
        CHECK(horizon_distance(s, -4.0, -0.5) == doctest::Approx(quad).epsilon(1e-9));
    }
}

TEST_CASE("horizon_distance is additive and decreasing in t_start") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1.5, 3.0);
    for (int i = 0; i < 100; ++i) {
        const auto s = scenario(u(rng), u(rng));
        if (2 + s.a + s.b < 0.2) continue;
        const double t1 = -9.0, t2 = -2.5, t3 = -0.01;
        const double whole = horizon_distance(s, t1, t3);
        CHECK(whole == doctest::Approx(horizon_distance(s, t1, t2) + horizon_distance(s, t2, t3))
                           .epsilon(1e-12));
        double previous = std::numeric_limits<double>::infinity();
        for (double t = -10.0; t < -0.01; t *= 0.8) {
            const double d = horizon_distance(s, t, 0.0);
            CHECK(d < previous);
            previous = d;
        }
    }
}

TEST_CASE("horizon_exists_at_infinite_time") {
    CHECK(horizon_exists_at_infinite_time(-3, 0));
    CHECK_FALSE(horizon_exists_at_infinite_time(0, 0));
    CHECK_FALSE(horizon_exists_at_infinite_time(-2, 0));
    CHECK(horizon_exists_at_infinite_time(-1.5, -1.5));
}

TEST_CASE("crossing_time") {
    const auto flat = scenario(0, 0);
    REQUIRE(crossing_time(flat, 0.5));
    CHECK(*crossing_time(flat, 0.5) == doctest::Approx(-0.5));
    const auto bec = scenario(1, 0);
    REQUIRE(crossing_time(bec, 2.0 / 3.0));
    CHECK(*crossing_time(bec, 2.0 / 3.0) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK_FALSE(crossing_time(bec, 2.0 * horizon_distance(bec, bec.t_in, 0.0)));
    CHECK_THROWS_AS(crossing_time(bec, 0.0), ParameterError);

    // Inverse of horizon_distance and monotonically decreasing in wavelength.
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 3.0);
    for (int i = 0; i < 50; ++i) {
        const auto s = scenario(u(rng), u(rng));
        if (2 + s.a + s.b < 0.3) continue;
        const double total = horizon_distance(s, s.t_in, 0.0);
        double previous = 0.0;
        for (double frac : {0.001, 0.01, 0.1, 0.5, 0.9}) {
            const auto t = crossing_time(s, frac * total);
            REQUIRE(t);
            CHECK(horizon_distance(s, *t, 0.0) == doctest::Approx(frac * total).epsilon(1e-11));
            CHECK(*t < previous);
            previous = *t;
        }
    }
}

TEST_CASE("horizon_report") {
    auto s = scenario(1, 0);
    s.k_grid = {0.01, 0.1, 1.0, 10.0, 1e5};
    const auto r = horizon_report(s);
    CHECK(r.total_distance == doctest::Approx(horizon_distance(s, s.t_in, 0.0)));
    CHECK(r.distance_to_end == doctest::Approx(horizon_distance(s, s.t_in, s.t_f)));
    CHECK_FALSE(r.converges_at_infinity);
    REQUIRE(r.crossings.size() == 5);
    CHECK_FALSE(r.crossings[0].time);  // 1/k = 100 exceeds the horizon at t_in
    CHECK_FALSE(r.crossings[4].time);  // crosses only after t_f
    for (std::size_t i = 1; i < 4; ++i) {
        REQUIRE(r.crossings[i].time);
        CHECK(*r.crossings[i].time > s.t_in);
        CHECK(*r.crossings[i].time < s.t_f);
    }
}

TEST_CASE("validation") {
    auto s = scenario(1, 0);
    CHECK(violations(s).empty());
    s.t_f = 0.0;
    const auto v = violations(s);
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("sweep must end strictly before the critical point") != std::string::npos);
    CHECK_THROWS_AS(require_valid(s), ParameterError);

    auto singular = scenario(-1, -1);
    CHECK(violations(singular).size() == 1);
    CHECK_THROWS_AS(require_valid(singular), SingularParameters);

    auto grid = scenario(0, 0);
    grid.k_grid = {1.0, 0.5};
    CHECK_FALSE(violations(grid).empty());
    grid.k_grid = {-1.0, 0.5};
    CHECK_FALSE(violations(grid).empty());
    grid.k_grid.clear();
    CHECK_FALSE(violations(grid).empty());
    auto amp = scenario(0, 0);
    amp.alpha0 = 0.0;
    CHECK_FALSE(violations(amp).empty());
}

TEST_CASE("log_grid") {
    const auto g = log_grid(0.05, 50.0, 32);
    CHECK(g.size() == 97);
    CHECK(g.front() == 0.05);
    CHECK(g.back() == 50.0);
    for (std::size_t i = 1; i < g.size(); ++i) {
        CHECK(std::log10(g[i] / g[i - 1]) == doctest::Approx(1.0 / 32.0).epsilon(1e-10));
    }
    CHECK_THROWS_AS(log_grid(1.0, 0.5, 10), ParameterError);
}

TEST_CASE("presets") {
    CHECK(classify_case(preset(Preset::bec)) == TransitionCase::A);
    CHECK(classify_case(preset(Preset::em_medium)) == TransitionCase::B);
    CHECK(classify_case(preset(Preset::heisenberg)) == TransitionCase::C);
    const auto ds = preset("desitter");
    CHECK(ds.a == 2.0);
    CHECK(ds.b == -2.0);
    CHECK(ds.a + 3 * ds.b == -4.0);
    CHECK(classify_case(ds) == TransitionCase::Other);
    for (auto p : all_presets()) {
        const auto s = preset(p);
        CHECK(violations(s).empty());
        CHECK(s.alpha0 == 1.0);
        CHECK(s.beta0 == 1.0);
        CHECK(s.t_in == -10.0);
        CHECK(s.t_f == -1e-3);
        CHECK(parse_preset(to_string(p)) == p);
    }
    CHECK_THROWS_AS(preset("ising"), ParameterError);
}

TEST_CASE("dual scenario swaps the coefficient histories") {
    auto s = scenario(1.3, -0.4);
    s.alpha0 = 2.0;
    s.beta0 = 0.7;
    const auto d = s.dual();
    for (double t : {-5.0, -0.3}) {
        CHECK(d.alpha(t) == doctest::Approx(s.beta(t)));
        CHECK(d.beta(t) == doctest::Approx(s.alpha(t)));
    }
}
