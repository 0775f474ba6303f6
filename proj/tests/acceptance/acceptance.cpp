// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "subdense/bernstein.hpp"
#include "subdense/bounds.hpp"
#include "subdense/density.hpp"
#include "subdense/errors.hpp"
#include "subdense/green_heat.hpp"
#include "subdense/sampler.hpp"
#include "subdense/scale_inverse.hpp"

using namespace subdense;

namespace {

const double kSqrtPi = std::sqrt(std::numbers::pi);

double half_stable_log_density(double t, double x) {
    return std::log(t / (2.0 * kSqrtPi)) - 1.5 * std::log(x) - t * t / (4.0 * x);
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// 1
Outcome half_stable_exactness() {
    const auto m = BernsteinModel::stable(0.5);
    std::vector<double> tg, xg;  // 20 log-spaced points per axis
    for (int i = 0; i < 20; ++i) {
        tg.push_back(std::pow(10.0, -2.0 + 4.0 * i / 19.0));
        xg.push_back(std::pow(10.0, -3.0 + 6.0 * i / 19.0));
    }
    double worst_saddle = 0.0, worst_bromwich = 0.0;
    for (double t : tg)
        for (double x : xg) {
            const double exact = half_stable_log_density(t, x);
            // log-domain error equals relative error to first order; some values underflow
            worst_saddle = std::max(worst_saddle, std::abs(std::expm1(density_saddle(m, t, x).log_value - exact)));
            worst_bromwich = std::max(worst_bromwich, std::abs(std::expm1(density_bromwich(m, t, x).log_value - exact)));
        }
    // the oracle itself: int e^{-l x} p(t,x) dx = e^{-t sqrt l}
    boost::math::quadrature::exp_sinh<double> integrator;
    double worst_laplace = 0.0;
    for (double t : {0.1, 1.0, 10.0})
        for (double l : {0.5, 1.0, 2.0, 5.0}) {
            auto f = [&](double x) { return x > 0.0 ? std::exp(half_stable_log_density(t, x) - l * x) : 0.0; };
            const double v = integrator.integrate(f);
            worst_laplace = std::max(worst_laplace, std::abs(v - std::exp(-t * std::sqrt(l))));
        }
    return {worst_saddle <= 1e-8 && worst_bromwich <= 1e-6 && worst_laplace <= 1e-6,
            "saddle " + fmt(worst_saddle) + ", bromwich " + fmt(worst_bromwich) + ", oracle Laplace " +
                fmt(worst_laplace)};
}

// 2
Outcome saddle_asymptotic() {
    std::ostringstream os;
    bool ok = true;
    for (double a : {0.3, 0.7, 0.9}) {
        const auto m = BernsteinModel::stable(a);
        double dev_low = 0.0, dev_high = 0.0;
        // saddle_mass = a(1-a) t w^a at t = 1
        auto dev_at = [&](double mass) {
            const double w = std::pow(mass / (a * (1.0 - a)), 1.0 / a);
            const double x = m.derivative(w, 1);
            const auto r = density(m, 1.0, x, Method::both);
            return std::abs(r.ratio - 1.0);
        };
        for (double mass : {1.0, 1.25, 1.5, 1.75, 2.0}) dev_low = std::max(dev_low, dev_at(mass));
        for (double mass : log_grid(50.0, 5e3, 4)) dev_high = std::max(dev_high, dev_at(mass));
        ok = ok && dev_high <= 0.05 && dev_high < dev_low;
        os << "a=" << a << ": " << fmt(dev_high) << " (mass>=50) vs " << fmt(dev_low) << " (mass in [1,2]); ";
    }
    return {ok, os.str()};
}

// 3
Outcome normalized_limit() {
    const auto v = asymptotic_limit_check(BernsteinModel::stable(0.7), 1.0, {1e3});
    const double target = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    return {std::abs(v[0] - target) <= 0.02, "value " + fmt(v[0]) + " vs " + fmt(target)};
}

// 4
Outcome tail_regime() {
    const BoundsEngine e(BernsteinModel::stable(0.5));
    double lo = 1e300, hi = 0.0;
    bool all_tail = true;
    for (double x : log_grid(2.0, 200.0, 8)) {
        const auto band = e.sharp_estimate(1.0, x);
        all_tail = all_tail && band.regime == Regime::tail;
        const double p = std::exp(half_stable_log_density(1.0, x));
        const double r = p / (std::sqrt(1.0 / x) / x);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    const auto sw = e.sandwich_audit({0.1, 1.0, 10.0}, log_grid(1e-2, 1e2, 4));
    const double spread = sw.max_ratio / sw.min_ratio;
    return {all_tail && lo >= 0.2 && hi <= 1.2 && spread <= 10.0,
            "tail ratio in [" + fmt(lo) + ", " + fmt(hi) + "], sandwich spread " + fmt(spread)};
}

std::vector<std::pair<std::string, BernsteinModel>> bound_models() {
    return {{"stable 0.3", BernsteinModel::stable(0.3)},
            {"stable 0.5", BernsteinModel::stable(0.5)},
            {"stable 0.7", BernsteinModel::stable(0.7)},
            {"log-stable (0.5, 1)", BernsteinModel::log_stable(0.5, 1.0)}};
}

// 5
Outcome upper_envelope() {
    std::ostringstream os;
    bool ok = true;
    for (const auto& [name, m] : bound_models()) {
        const BoundsEngine e(m);
        const auto env = e.envelope_audit({0.01, 0.1, 1.0, 10.0}, log_grid(1e-2, 1e3, 4));
        ok = ok && env.points > 0 && env.constant <= 20.0;
        os << name << ": C=" << fmt(env.constant) << "; ";
    }
    return {ok, os.str()};
}

// 6
Outcome lower_bound() {
    std::ostringstream os;
    bool ok = true;
    for (const auto& [name, m] : bound_models()) {
        const BoundsEngine e(m);
        double worst = 1e300;
        for (double t : {0.1, 1.0, 10.0}) worst = std::min(worst, e.lower_bound_check(t, 1.0, 1.0).constant);
        ok = ok && worst >= 1e-3;
        os << name << ": c=" << fmt(worst) << "; ";
    }
    return {ok, os.str()};
}

// 7
Outcome green_function() {
    std::ostringstream os;
    bool ok = true;
    for (double a : {0.5, 0.7}) {
        const auto m = BernsteinModel::stable(a);
        double lo = 1e300, hi = 0.0;
        for (double x : log_grid(0.1, 10.0, 4)) {
            const double r = green(m, x).ratio;
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        const double target = 1.0 / std::tgamma(a);
        const auto tr = green_transform_identity(m, {0.5, 1.0, 2.0, 4.0});
        ok = ok && hi / lo - 1.0 <= 0.01 && std::abs(lo - target) <= 1e-3 && std::abs(hi - target) <= 1e-3 &&
             tr.max_rel_error <= 1e-3;
        os << "a=" << a << ": ratio in [" << fmt(lo) << ", " << fmt(hi) << "] vs " << fmt(target)
           << ", transform err " << fmt(tr.max_rel_error) << "; ";
    }
    return {ok, os.str()};
}

// 8
Outcome concentration() {
    double worst_identity = 0.0, bracket_lo = 1e300, bracket_hi = 0.0;
    bool strict = true;
    for (const auto& m : {BernsteinModel::stable(0.3), BernsteinModel::stable(0.5), BernsteinModel::stable(0.7),
                          BernsteinModel::tempered(1.0, 0.5, 1.0), BernsteinModel::gamma()})
        for (double r : log_grid(1e-2, 1e2, 4)) {
            const double h = concentration_h(m, r);
            worst_identity = std::max(worst_identity, std::abs(concentration_h_from_K(m, r) / h - 1.0));
            const double q = psi_star(m, 1.0 / r) / h;
            bracket_lo = std::min(bracket_lo, q);
            bracket_hi = std::max(bracket_hi, q);
            strict = strict && q > 1.0 / 24.0 && q < 2.0;
        }
    const auto m = BernsteinModel::stable(0.5);
    const double dK = std::abs(concentration_K(m, 1.0) - 1.0 / (3.0 * kSqrtPi));
    const double dh = std::abs(concentration_h(m, 1.0) - 4.0 / (3.0 * kSqrtPi));
    const double dp = std::abs(psi_star(m, 1.0) - std::sqrt(0.5));
    return {worst_identity <= 1e-6 && strict && dK <= 1e-6 && dh <= 1e-6 && dp <= 1e-6,
            "identity " + fmt(worst_identity) + ", psi*/h in [" + fmt(bracket_lo) + ", " + fmt(bracket_hi) +
                "], K/h/psi* errors " + fmt(dK) + "/" + fmt(dh) + "/" + fmt(dp)};
}

// 9
Outcome scaling_estimator() {
    std::ostringstream os;
    bool ok = true;
    for (double a : {0.3, 0.5, 0.7, 0.9}) {
        const auto m = BernsteinModel::stable(a);
        auto d2 = [&](double l) { return -m.derivative(l, 2); };
        for (Side side : {Side::lower, Side::upper}) {
            const auto r = estimate_scaling(d2, 1e-3, 1e3, side);
            ok = ok && std::abs(r.index - (a - 2.0)) <= 0.02 && std::abs(r.constant - 1.0) <= 0.01 && r.pass;
        }
        os << "a=" << a << " ok; ";
    }
    auto gd2 = [](double l) { return 1.0 / ((1.0 + l) * (1.0 + l)); };
    const auto g = estimate_scaling(gd2, 1e-3, 1e3, Side::lower);
    const auto audit = scaling_audit(BernsteinModel::gamma());
    bool rejected = g.index <= -2.0 + 0.02 && !audit.wlsc_d2;
    try {
        require_hypotheses(audit, true, false, false, false, "gamma");
        rejected = false;
    } catch (const CapabilityError&) {
    }
    os << "gamma lower index " << fmt(g.index) << (rejected ? " rejected" : " NOT rejected");
    return {ok && rejected, os.str()};
}

// 10
Outcome monte_carlo() {
    const auto m = BernsteinModel::stable(0.5);
    const std::size_t n = 100000;
    const auto generic = sample(m, 1.0, n, 1e-8, 20240601);
    const auto exact = half_stable_exact_sampler(1.0, n, 20240602);
    const double ks = ks_two_sample(generic.samples, exact.samples);
    const auto pr = pruitt_check(m, {0.001, 0.01, 0.1}, {0.5, 1.0, 2.0}, 20000, 7);
    return {ks < 0.01 && pr.pass,
            "two-sample KS " + fmt(ks) + ", Pruitt ratios in [" + fmt(pr.min_ratio) + ", " + fmt(pr.constant) +
                "] (limit " + fmt(pr.limit) + ")"};
}

// 11
Outcome heat_comparability() {
    const auto cat = example_profiles();
    const auto& m = cat.log_stable;
    const auto p = HeatProfile::sierpinski();
    double lo = 1e300, hi = 0.0;
    bool split_ok = true;
    for (double t : {0.1, 1.0})
        for (double tau : log_grid(1e-2, 1e2, 2)) {
            const auto h = heat_kernel_subordinated(m, p, t, tau);
            const double coord = t * m.phi(std::pow(tau, -p.gamma));
            split_ok = split_ok && h.case_coordinate == coord &&
                       h.regime == (coord <= 1.0 ? HeatCase::far : HeatCase::near);
            const double r = h.lower / h.estimate_form;
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
    // straddle the boundary t phi(tau^-gamma) = 1
    for (double t : {0.1, 1.0}) {
        const double tau_star = std::pow(m.inverse(1.0 / t), -1.0 / p.gamma);
        split_ok = split_ok && heat_case(m, p, t, tau_star * (1.0 + 1e-9)) == HeatCase::far &&
                   heat_case(m, p, t, tau_star * (1.0 - 1e-9)) == HeatCase::near;
    }
    return {hi / lo <= 10.0 && split_ok,
            "ratio in [" + fmt(lo) + ", " + fmt(hi) + "] (spread " + fmt(hi / lo) + "), case split " +
                (split_ok ? "exact" : "MISMATCH")};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "half-stable exactness", half_stable_exactness},
        {2, "saddle asymptotic at large saddle mass", saddle_asymptotic},
        {3, "normalized density limit", normalized_limit},
        {4, "tail regime and sandwich spread", tail_regime},
        {5, "upper envelope constant", upper_envelope},
        {6, "lower bound on the central interval", lower_bound},
        {7, "Green function", green_function},
        {8, "concentration identities", concentration},
        {9, "scaling estimator", scaling_estimator},
        {10, "Monte Carlo cross-check", monte_carlo},
        {11, "subordinated heat kernel comparability", heat_comparability},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.id == 1 && secs > 30.0) {
            o.pass = false;
            o.detail += ", over the 30 s budget";
        }
        if (c.id == 2 && secs > 120.0) {
            o.pass = false;
            o.detail += ", over the 2 min budget";
        }
        if (!o.pass) ++failed;
        std::printf("%s  criterion %2d  %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                    secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
