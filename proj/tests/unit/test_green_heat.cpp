#include <cmath>
#include <numbers>

#include "common.hpp"
#include "subdense/bernstein.hpp"
#include "subdense/errors.hpp"
#include "subdense/green_heat.hpp"
#include "subdense/scale_inverse.hpp"

using namespace subdense;
using testing::rel_err;

TEST_SUITE("green_heat") {

TEST_CASE("Green function of the half-stable law") {
    const auto m = BernsteinModel::stable(0.5);
    const auto g1 = green(m, 1.0);
    CHECK(g1.value == doctest::Approx(1.0 / std::sqrt(std::numbers::pi)).epsilon(1e-6));
    CHECK(g1.estimate_form == doctest::Approx(1.0).epsilon(1e-12));
    const auto g4 = green(m, 4.0);
    CHECK(g4.value == doctest::Approx(0.5 / std::sqrt(std::numbers::pi)).epsilon(1e-6));
    CHECK(g4.estimate_form == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(g1.inner + g1.outer == doctest::Approx(g1.value));
}

TEST_CASE("Green ratio is 1/Gamma(alpha) and constant in x") {
    for (double a : {0.3, 0.7}) {
        const auto m = BernsteinModel::stable(a);
        double lo = 1e300, hi = 0.0;
        for (double x : log_grid(1e-1, 1e2, 2)) {
            const double r = green(m, x).ratio;
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        CHECK(hi / lo <= 1.01);
        CHECK(std::abs(hi - 1.0 / std::tgamma(a)) < 1e-3);
    }
}

TEST_CASE("transform identity") {
    const auto r = green_transform_identity(BernsteinModel::stable(0.5), {1.0, 4.0});
    CHECK(std::abs(r.rows[0].transform - 1.0) < 1e-3);
    CHECK(std::abs(r.rows[1].transform - 0.5) < 1e-3);
    CHECK(r.hint.empty());
    CHECK_THROWS_AS(green_transform_identity(BernsteinModel::pure_drift(1.0), {1.0}), CapabilityError);
    CHECK_THROWS_AS(green(BernsteinModel::pure_drift(1.0), 1.0), CapabilityError);
}

TEST_CASE("f and its inverse") {
    const auto m = BernsteinModel::stable(0.5);
    // f(x) = varphi(x)/phi'(x) = 0.25 sqrt x / (0.5 / sqrt x) = x / 2
    CHECK(green_f(m, 3.0) == doctest::Approx(1.5));
    CHECK(green_f_inverse(m, 1.5) == doctest::Approx(3.0).epsilon(1e-8));
}

TEST_CASE("heat profile shapes") {
    const auto f = HeatProfile::sierpinski();
    CHECK(f.phi1(0.0) == 1.0);
    CHECK(f.n == doctest::Approx(std::log(3.0) / std::log(2.0)));
    f.validate();
    for (double n : {1.0, 3.0, 10.0}) HeatProfile::gaussian(n, 1.0, 1.0).validate();
    CHECK_THROWS_AS(HeatProfile::gaussian(1.0, 0.5, 1.0).validate(), SpecFormatError);
    CHECK_THROWS_AS(HeatProfile::fractal(1.0, 0.5).validate(), SpecFormatError);
}

TEST_CASE("case split and estimate forms") {
    const auto m = BernsteinModel::stable(0.5);
    const auto p = HeatProfile::gaussian(1.0, 1.0, 1.0);
    double coord = 0.0;
    CHECK(heat_case(m, p, 1.0, 10.0, &coord) == HeatCase::far);
    CHECK(coord == doctest::Approx(0.1));
    CHECK(heat_estimate_form(m, p, 1.0, 10.0) == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(heat_case(m, p, 1.0, 0.1, &coord) == HeatCase::near);
    CHECK(coord == doctest::Approx(10.0));
    CHECK(heat_estimate_form(m, p, 1.0, 0.1) == doctest::Approx(1.0).epsilon(1e-12));
    // boundary t phi(tau^-gamma) = 1 is the far case
    CHECK(heat_case(m, p, 1.0, 1.0) == HeatCase::far);
}

TEST_CASE("subordinated heat kernel stays comparable to its estimate") {
    const auto m = BernsteinModel::stable(0.5);
    const auto p = HeatProfile::gaussian(1.0, 1.0, 1.0);
    double lo = 1e300, hi = 0.0;
    for (double tau : log_grid(1e-2, 1e2, 1)) {
        const auto h = heat_kernel_subordinated(m, p, 1.0, tau);
        CHECK(h.lower <= h.upper * (1.0 + 1e-12));
        const double r = h.lower / h.estimate_form;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    CHECK(hi / lo <= 10.0);
    CHECK_THROWS_AS(heat_kernel_subordinated(BernsteinModel::stable(0.5, 1.0), p, 1.0, 1.0), CapabilityError);
}

TEST_CASE("example catalog") {
    const auto c = example_profiles();
    CHECK(c.profiles.size() == 2);
    CHECK(c.log_stable.family() == Family::log_stable);
    // large-time form scales as t^{-n/(a gamma)} log^{-s n/(a gamma)}(2 + 1/t)
    const double n = 2.0, g = 2.0;
    const double r = c.forms.large_time(100.0, n, g) / c.forms.large_time(10.0, n, g);
    const double expect = std::pow(10.0, -n / (0.5 * g)) * std::pow(std::log(2.01) / std::log(2.1), -n / (0.5 * g));
    CHECK(r == doctest::Approx(expect).epsilon(1e-12));
}

}
