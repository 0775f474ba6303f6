#include <cmath>
#include <limits>
#include <numbers>

#include "common.hpp"
#include "subdense/bernstein.hpp"
#include "subdense/errors.hpp"
#include "subdense/scale_inverse.hpp"

using namespace subdense;
using testing::rel_err;

namespace {
const double kSqrtPi = std::sqrt(std::numbers::pi);
}

TEST_SUITE("scale_inverse") {

TEST_CASE("running sup") {
    CHECK(running_sup([](double x) { return std::sqrt(x); }, 9.0, true) == doctest::Approx(3.0).epsilon(1e-14));
    const auto m = BernsteinModel::stable(0.5);
    CHECK(running_sup([&](double x) { return m.varphi(x); }, 4.0) == doctest::Approx(0.5).epsilon(1e-10));
    // interior maximum of x e^{-x} sin^2-modulated bump at x = 1
    auto f = [](double x) { return x * std::exp(-x) * (1.0 + 0.1 * std::sin(3.0 * x)); };
    double best = 0.0;
    for (int i = 1; i <= 2000000; ++i) best = std::max(best, f(10.0 * i / 2000000.0));
    CHECK(std::abs(running_sup(f, 10.0) - best) < 1e-6);
}

TEST_CASE("generalized inverse") {
    auto id = [](double r) { return r; };
    CHECK(generalized_inverse(id, 7.0, InverseSide::right) == doctest::Approx(7.0).epsilon(1e-12));
    auto psi = [](double r) { return std::sqrt(r) / std::sqrt(2.0); };
    CHECK(generalized_inverse(psi, 1.0, InverseSide::right) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(psi_inverse(BernsteinModel::stable(0.5), 1.0) == doctest::Approx(2.0).epsilon(1e-8));

    // plateau at level 1 on [1, 3]
    auto step = [](double r) { return r < 1.0 ? r : (r <= 3.0 ? 1.0 : r - 2.0); };
    CHECK(generalized_inverse(step, 1.0, InverseSide::right) == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(generalized_inverse(step, 1.0, InverseSide::left) == doctest::Approx(1.0).epsilon(1e-9));

    auto bounded = [](double r) { return r / (1.0 + r); };
    CHECK(std::isinf(generalized_inverse(bounded, 2.0, InverseSide::right)));
    CHECK_THROWS_AS(generalized_inverse([](double r) { return 1.0 + r; }, 0.5, InverseSide::right), DomainError);
}

TEST_CASE("inverse of the running sup is a left inverse for increasing f") {
    for (auto f : {RealFn([](double x) { return std::sqrt(x); }), RealFn([](double x) { return std::log1p(x); }),
                   RealFn([](double x) { return x * x * x; })})
        for (double x : log_grid(1e-3, 1e3, 4)) {
            const double y = generalized_inverse([&](double r) { return running_sup(f, r, true); }, f(x),
                                                 InverseSide::right);
            CHECK(rel_err(y, x) < 1e-10);
        }
}

TEST_CASE("concentration functions of the half-stable law") {
    const auto m = BernsteinModel::stable(0.5);
    CHECK(std::abs(concentration_K(m, 1.0) - 1.0 / (3.0 * kSqrtPi)) < 1e-6);
    CHECK(std::abs(concentration_h(m, 1.0) - 4.0 / (3.0 * kSqrtPi)) < 1e-6);
    CHECK(std::abs(psi_star(m, 1.0) - std::sqrt(0.5)) < 1e-6);
    const auto d = BernsteinModel::pure_drift(1.0);
    CHECK(concentration_K(d, 1.0) == 0.0);
    CHECK(concentration_h(d, 1.0) == 0.0);
    CHECK(psi_star(d, 1.0) == 0.0);
}

TEST_CASE("h from K and the psi* bracket") {
    for (const auto& m : {BernsteinModel::stable(0.3), BernsteinModel::stable(0.7),
                          BernsteinModel::tempered(1.0, 0.5, 1.0), BernsteinModel::gamma()}) {
        for (double r : log_grid(1e-2, 1e2, 2)) {
            const double h = concentration_h(m, r);
            CHECK(rel_err(concentration_h_from_K(m, r), h) < 1e-6);
            CHECK(h >= concentration_K(m, r));
            const double ps = psi_star(m, 1.0 / r);
            CHECK(ps > h / 24.0);
            CHECK(ps < 2.0 * h);
        }
    }
}

TEST_CASE("scaling estimator") {
    const auto m = BernsteinModel::stable(0.5);
    auto d2 = [&](double l) { return -m.derivative(l, 2); };
    for (Side side : {Side::lower, Side::upper}) {
        const auto r = estimate_scaling(d2, 1e-3, 1e3, side);
        CHECK(std::abs(r.index + 1.5) <= 0.02);
        CHECK(std::abs(r.constant - 1.0) <= 0.01);
    }
    const auto c = estimate_scaling([](double) { return 2.0; }, 1e-3, 1e3, Side::lower);
    CHECK(std::abs(c.index) < 1e-12);
    CHECK(c.constant == doctest::Approx(1.0));
    CHECK_THROWS(estimate_scaling([](double) { return 0.0; }, 1e-3, 1e3, Side::lower));

    const auto g = estimate_scaling([](double l) { return 1.0 / ((1.0 + l) * (1.0 + l)); }, 1e-3, 1e3, Side::lower);
    CHECK(g.index <= -2.0 + 0.02);
    const auto audit = scaling_audit(BernsteinModel::gamma());
    CHECK_FALSE(audit.wlsc_d2);
    CHECK_THROWS_AS(require_hypotheses(audit, true, false, false, false, "test"), CapabilityError);
}

TEST_CASE("scaling audit recovers the stable index") {
    for (double a : {0.3, 0.5, 0.7, 0.9}) {
        const auto audit = scaling_audit(BernsteinModel::stable(a));
        CHECK(audit.wlsc_d2);
        CHECK(audit.wusc_d2);
        CHECK(std::abs(audit.d2_lower.index - (a - 2.0)) <= 0.02);
        CHECK(std::abs(audit.alpha_hat - a) <= 0.02);
        CHECK(audit.x0 == 0.0);
    }
}

TEST_CASE("tail scaling") {
    const auto s = tail_scaling_check(BernsteinModel::stable(0.5), 0.0, 0.5);
    CHECK(s.pass);
    CHECK(s.constant == doctest::Approx(1.0).epsilon(1e-6));
    // an exponential cutoff only steepens the tail; a logarithmic tail is too flat
    CHECK(tail_scaling_check(BernsteinModel::tempered(1.0, 0.5, 50.0), 0.0, 0.5).pass);
    const auto g = tail_scaling_check(BernsteinModel::gamma(), 0.0, 0.5);
    CHECK_FALSE(g.pass);
    CHECK(g.index < 0.5);
    CHECK(tail_scaling_check(BernsteinModel::pure_drift(1.0), 0.0, 0.5).pass);
}

TEST_CASE("varphi profile and its doubling") {
    const VarphiProfile p(BernsteinModel::stable(0.5));
    CHECK(p.monotone());
    for (double x : log_grid(1e-3, 1e3, 2)) {
        CHECK(p.value(x) == doctest::Approx(0.25 * std::sqrt(x)));
        CHECK(p.sup(2.0 * x) <= 4.0 * p.sup(x) * (1.0 + 1e-12));
        for (double l : {2.0, 10.0, 100.0}) CHECK(p.sup(l * x) <= l * l * p.sup(x) * (1.0 + 1e-12));
        // varphi^{-1}(r) = 16 r^2
        CHECK(rel_err(p.inverse(x), 16.0 * x * x) < 1e-8);
    }
}

TEST_CASE("inequality audit") {
    const auto m = BernsteinModel::stable(0.5);
    const auto rep = inequality_audit(m, scaling_audit(m));
    CHECK(rep.pass);
    CHECK_FALSE(rep.skipped);
    CHECK_FALSE(rep.lines.empty());
    const auto d = BernsteinModel::pure_drift(1.0);
    const auto sk = inequality_audit(d, scaling_audit(d));
    CHECK(sk.skipped);
    CHECK(sk.notice.find("φ″≡0") != std::string::npos);
}

}
