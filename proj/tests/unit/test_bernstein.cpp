#include <cmath>
#include <numbers>

#include "common.hpp"
#include "subdense/bernstein.hpp"
#include "subdense/errors.hpp"
#include "subdense/model_io.hpp"
#include "subdense/scale_inverse.hpp"

using namespace subdense;
using testing::rel_err;

TEST_SUITE("bernstein") {

TEST_CASE("closed-form exponents") {
    CHECK(BernsteinModel::stable(0.5).phi(4.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(BernsteinModel::pure_drift(1.0).phi(3.0) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(BernsteinModel::gamma().phi(std::exp(1.0) - 1.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("power density reproduces sqrt by quadrature") {
    const auto m = BernsteinModel::power(0.5 / std::sqrt(std::numbers::pi), 0.5);
    CHECK(std::abs(m.phi_quadrature(1.0) - 1.0) <= 1e-8);
    CHECK(std::abs(m.phi(1.0) - 1.0) <= 1e-12);
}

TEST_CASE("derivatives") {
    const auto m = BernsteinModel::stable(0.5);
    CHECK(m.derivative(0.25, 2) == doctest::Approx(-2.0).epsilon(1e-13));
    CHECK(m.derivative(1.0, 1) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(m.derivative(1.0, 3) == doctest::Approx(0.375).epsilon(1e-13));
    // quadrature route agrees with the closed form
    const auto p = BernsteinModel::power(0.5 / std::sqrt(std::numbers::pi), 0.5);
    for (int k = 1; k <= 3; ++k)
        CHECK(rel_err(p.derivative_quadrature(2.0, k), m.derivative(2.0, k)) < 1e-8);
}

TEST_CASE("complex exponent on the principal branch") {
    const auto m = BernsteinModel::stable(0.5);
    const auto a = m.phi_complex(1.0, 0.0);
    CHECK(a.real() == doctest::Approx(1.0));
    CHECK(std::abs(a.imag()) < 1e-15);
    const auto b = m.phi_complex(0.0, 1.0);
    CHECK(b.real() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(b.imag() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    // increment is accurate where phi_complex - phi cancels
    const auto inc = m.increment(1.0, 1e-9);
    CHECK(inc.imag() == doctest::Approx(0.5e-9).epsilon(1e-8));
}

TEST_CASE("Bernstein sign pattern on a grid") {
    for (const auto& m : {BernsteinModel::stable(0.3), BernsteinModel::stable(0.9), BernsteinModel::gamma(),
                          BernsteinModel::tempered(1.0, 0.5, 1.0), BernsteinModel::log_stable(0.5, 1.0)}) {
        for (double l : log_grid(1e-3, 1e3, 4)) {
            CHECK(m.phi(l) > 0.0);
            CHECK(m.derivative(l, 1) > 0.0);
            CHECK(m.derivative(l, 2) < 0.0);
            CHECK(m.derivative(l, 3) > 0.0);
            // concavity: l phi'(l) <= phi(l)
            CHECK(l * m.derivative(l, 1) <= m.phi(l) * (1.0 + 1e-12));
        }
        CHECK(m.validate().ok);
    }
}

TEST_CASE("subadditivity phi(l x) <= l phi(x) for l >= 1") {
    const auto m = BernsteinModel::tempered(2.0, 0.7, 0.3);
    for (double x : log_grid(1e-2, 1e2, 2))
        for (double l : {1.0, 2.0, 10.0, 100.0}) CHECK(m.phi(l * x) <= l * m.phi(x) * (1.0 + 1e-12));
}

TEST_CASE("complete Bernstein surrogate") {
    const auto s = BernsteinModel::stable(0.5).surrogate();
    for (double l : log_grid(1e-3, 1e3, 4)) {
        const double r = s.phi(l) / std::sqrt(l);
        CHECK(r >= 0.5);
        CHECK(r <= 2.0);
    }
    const auto d = BernsteinModel::pure_drift(1.0).surrogate();
    CHECK(d.phi(3.0) == doctest::Approx(3.0));
}

TEST_CASE("degenerate and invalid models") {
    CHECK(BernsteinModel::pure_drift(2.0).degenerate());
    CHECK_FALSE(BernsteinModel::stable(0.5).degenerate());
    CHECK_THROWS_AS(BernsteinModel::stable(1.5), ModelInvalidError);
    CHECK_THROWS_AS(BernsteinModel::stable(0.5, -1.0), ModelInvalidError);
    CHECK_THROWS_AS(parse_model(R"({"family":"stable","alpha":"x"})"), SpecFormatError);
    CHECK_THROWS_AS(parse_model(R"({"family":"nope"})"), SpecFormatError);
}

TEST_CASE("model files round through the loader") {
    const auto m = load_model(testing::model_path("stable05.json"));
    CHECK(m.phi(4.0) == doctest::Approx(2.0));
    const auto t = load_model(testing::model_path("tempered.json"));
    CHECK(t.phi(1.0) == doctest::Approx(t.phi_quadrature(1.0)).epsilon(1e-8));
}

}
