#include <cmath>
#include <numbers>

#include "common.hpp"
#include "subdense/bernstein.hpp"
#include "subdense/density.hpp"
#include "subdense/errors.hpp"
#include "subdense/scale_inverse.hpp"

using namespace subdense;
using testing::half_stable_density;
using testing::rel_err;

TEST_SUITE("density") {

TEST_CASE("saddle point of the half-stable law") {
    const auto m = BernsteinModel::stable(0.5);
    const auto s = solve_saddle(m, 1.0, 1.0);
    CHECK(s.w == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(s.saddle_mass == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(s.exponent == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(s.prefactor == doctest::Approx(1.0 / std::sqrt(4.0 * std::numbers::pi)).epsilon(1e-12));
    const auto s2 = solve_saddle(m, 2.0, 1.0);
    CHECK(s2.w == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s2.exponent == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(solve_saddle(BernsteinModel::stable(0.5, 1.0), 1.0, 0.5), SupportError);
}

TEST_CASE("saddle invariants") {
    for (double a : {0.3, 0.7}) {
        const auto m = BernsteinModel::stable(a);
        for (double t : {0.1, 1.0, 10.0})
            for (double x : log_grid(1e-2, 1e2, 2)) {
                const auto s = solve_saddle(m, t, x);
                CHECK(rel_err(m.derivative(s.w, 1) * t, x) < 1e-10);
                CHECK(s.exponent >= 0.0);
                CHECK(s.saddle_mass > 0.0);
            }
    }
}

TEST_CASE("half-stable closed form") {
    const auto m = BernsteinModel::stable(0.5);
    CHECK(density_saddle(m, 1.0, 1.0).value == doctest::Approx(0.21969564).epsilon(1e-8));
    CHECK(std::abs(density_saddle(m, 1.0, 100.0).value - 2.8139e-4) < 1e-8);
    CHECK(density_saddle(m, 4.0, 1.0).value == doctest::Approx(0.0206626).epsilon(1e-5));
    CHECK(std::abs(density_bromwich(m, 1.0, 1.0).value - 0.21969564) < 1e-7);
    const auto both = density(m, 1.0, 1.0, Method::both);
    CHECK(std::abs(both.ratio - 1.0) < 1e-6);
}

TEST_CASE("both methods agree with the closed form on a grid") {
    const auto m = BernsteinModel::stable(0.5);
    for (double t : log_grid(1e-2, 1e2, 1))
        for (double x : log_grid(1e-3, 1e3, 1)) {
            // log domain: some grid values underflow
            const double exact = testing::half_stable_log_density(t, x);
            CHECK(std::abs(density_saddle(m, t, x).log_value - exact) <= 1e-8);
            CHECK(std::abs(density_bromwich(m, t, x).log_value - exact) <= 1e-6);
        }
}

TEST_CASE("contour independence") {
    for (const auto& m : {BernsteinModel::stable(0.7), BernsteinModel::tempered(1.0, 0.5, 1.0), BernsteinModel::gamma()}) {
        const auto a = density_bromwich(m, 1.0, 0.8);
        const auto b = density_bromwich(m, 1.0, 0.8, {}, 1.2 * a.saddle.w);
        CHECK(rel_err(b.value, a.value) < 1e-6);
    }
}

TEST_CASE("gamma subordinator density is the gamma law") {
    const auto m = BernsteinModel::gamma();
    for (double t : {0.5, 2.0, 5.0})
        for (double x : {0.1, 1.0, 4.0}) {
            const double exact = std::pow(x, t - 1.0) * std::exp(-x) / std::tgamma(t);
            CHECK(rel_err(density_bromwich(m, t, x).value, exact) < 1e-7);
        }
}

TEST_CASE("support flag with drift") {
    const auto m = BernsteinModel::stable(0.5, 1.0);
    const auto r = density(m, 1.0, 0.9, Method::bromwich);
    CHECK(r.value == 0.0);
    CHECK(r.flag == AccuracyFlag::support);
    // shift: p_b(t, x) = p_0(t, x - t b)
    CHECK(rel_err(density(m, 1.0, 2.0, Method::bromwich).value, half_stable_density(1.0, 1.0)) < 1e-7);
}

TEST_CASE("asymptotic limit") {
    const auto m = BernsteinModel::stable(0.5);
    for (double v : asymptotic_limit_check(m, 1.0, {1.0, 10.0, 100.0}))
        CHECK(v == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-7));
    const auto v7 = asymptotic_limit_check(BernsteinModel::stable(0.7), 1.0, {1e3});
    CHECK(std::abs(v7[0] - 0.3989423) < 0.01);
    CHECK_THROWS(asymptotic_limit_check(BernsteinModel::pure_drift(1.0), 1.0, {1.0}));
}

TEST_CASE("saddle ratio improves with saddle mass") {
    for (double a : {0.3, 0.7, 0.9}) {
        const auto m = BernsteinModel::stable(a);
        // saddle_mass = t w^2 (-phi''(w)) = a(1-a) t w^a; choose w for the target mass at t = 1
        auto dev = [&](double mass) {
            const double w = std::pow(mass / (a * (1.0 - a)), 1.0 / a);
            const double x = m.derivative(w, 1);
            return std::abs(density(m, 1.0, x, Method::both).ratio - 1.0);
        };
        CHECK(dev(100.0) < dev(1.0));
    }
}

TEST_CASE("normalization and Laplace round trip") {
    for (const auto& m : {BernsteinModel::stable(0.5), BernsteinModel::stable(0.7), BernsteinModel::tempered(1.0, 0.5, 1.0),
                          BernsteinModel::gamma(), BernsteinModel::log_stable(0.5, 1.0)}) {
        const auto mc = mass_check(m, 1.0, {0.5, 1.0, 2.0, 5.0});
        CHECK(std::abs(mc.mass - 1.0) < 1e-5);
        for (std::size_t i = 0; i < mc.lambdas.size(); ++i) CHECK(std::abs(mc.transform[i] - mc.expected[i]) < 1e-4);
    }
}

TEST_CASE("increment lower bound is positive on a grid") {
    const auto m = BernsteinModel::stable(0.7);
    double worst = 1e300;
    for (double w : log_grid(1e-2, 1e2, 2))
        for (double l : log_grid(1e-3, 1e3, 2)) {
            const double re = m.increment(w, l).real();
            worst = std::min(worst, re / (l * l * -m.derivative(std::max(l, w), 2)));
        }
    CHECK(worst > 0.0);
}

}
