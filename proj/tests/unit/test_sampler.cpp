#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>

#include "common.hpp"
#include "subdense/bernstein.hpp"
#include "subdense/errors.hpp"
#include "subdense/sampler.hpp"

using namespace subdense;

namespace {
// P(T_t <= x) for the half-stable law
double half_stable_cdf(double t, double x) { return x <= 0.0 ? 0.0 : std::erfc(t / (2.0 * std::sqrt(x))); }
}  // namespace

TEST_SUITE("sampler") {

TEST_CASE("Philox known answers") {
    const auto z = Philox::block({0, 0, 0, 0}, {0, 0});
    CHECK(z == std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    const auto f = Philox::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
    CHECK(f == std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    const auto p = Philox::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
    CHECK(p == std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streams are reproducible and distinct") {
    Philox a(7, 3), b(7, 3), c(7, 4);
    for (int i = 0; i < 10; ++i) {
        const auto x = a(), y = b(), z = c();
        CHECK(x == y);
        CHECK(x != z);
    }
    Philox u(1, 0);
    for (int i = 0; i < 1000; ++i) {
        const double v = u.uniform();
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("exact half-stable sampler") {
    const auto d = half_stable_exact_sampler(1.0, 20000, 11);
    CHECK(std::is_sorted(d.samples.begin(), d.samples.end()));
    CHECK(ks_one_sample(d.samples, [](double x) { return half_stable_cdf(1.0, x); }) < 0.015);
    // median of t^2 / (2 Z^2): t^2 / (2 q^2), q the 0.75 normal quantile
    const double q = std::sqrt(2.0) * boost::math::erf_inv(0.5);
    CHECK(quantile(d.samples, 0.5) == doctest::Approx(1.0 / (2.0 * q * q)).epsilon(0.05));
}

TEST_CASE("generic sampler against the closed form") {
    const auto m = BernsteinModel::stable(0.5);
    const auto d = sample(m, 1.0, 20000, 1e-6, 5);
    CHECK(d.samples.size() == 20000);
    CHECK(d.jump_rate > 0.0);
    CHECK(ks_one_sample(d.samples, [](double x) { return half_stable_cdf(1.0, x); }) < 0.015);
    const auto again = sample(m, 1.0, 20000, 1e-6, 5);
    CHECK(again.samples == d.samples);
}

TEST_CASE("Laplace transform of samples") {
    const auto m = BernsteinModel::tempered(1.0, 0.5, 1.0);
    const auto d = sample(m, 1.0, 20000, 1e-6, 9);
    for (const auto& e : empirical_laplace(d, m, {0.5, 1.0, 2.0})) CHECK(std::abs(e.mean - e.expected) < 4.0 * e.stderr_);
    const auto g = BernsteinModel::gamma();
    const auto dg = sample(g, 2.0, 20000, 1e-8, 9);
    for (const auto& e : empirical_laplace(dg, g, {0.5, 1.0, 2.0})) CHECK(std::abs(e.mean - e.expected) < 4.0 * e.stderr_);
}

TEST_CASE("pure drift and implicit measures") {
    const auto d = sample(BernsteinModel::pure_drift(2.0), 1.0, 100, 1e-6, 1);
    CHECK(d.samples.front() == 2.0);
    CHECK(d.samples.back() == 2.0);
    CHECK_FALSE(d.warning.empty());
    CHECK_THROWS_AS(sample(BernsteinModel::log_stable(0.5, 1.0), 1.0, 10, 1e-6, 1), CapabilityError);
}

TEST_CASE("statistics helpers") {
    std::vector<double> s;
    for (int i = 1; i <= 1000; ++i) s.push_back(i / 1000.0);
    CHECK(ks_one_sample(s, [](double x) { return std::clamp(x, 0.0, 1.0); }) <= 1e-3 + 1e-12);
    CHECK(ks_two_sample(s, s) == 0.0);
    CHECK(quantile(s, 0.5) == doctest::Approx(0.5).epsilon(1e-2));
    EmpiricalDist d;
    d.samples = s;
    const auto b = bin_density(d, 0.5, 0.1);
    CHECK(b.value == doctest::Approx(1.0).epsilon(0.02));
    const auto kde = empirical_density(d, {0.5});
    CHECK(kde[0] == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("Pruitt ratios are bounded") {
    const auto rep = pruitt_check(BernsteinModel::stable(0.5), {0.01, 0.1}, {0.5, 1.0}, 4000);
    CHECK(rep.rows.size() == 4);
    CHECK(rep.pass);
    CHECK(rep.constant <= 10.0);
    CHECK(rep.min_ratio > 0.0);
}

}
