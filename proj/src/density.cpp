#include "subdense/density.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "subdense/errors.hpp"
#include "subdense/quadrature.hpp"

namespace subdense {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Where exp(Re E) is below every double we care about.
constexpr double kNegligible = -40.0;

struct ContourIntegral {
    double value = 0.0;  // int_0^inf Re exp(E(l)) dl
    double error = 0.0;
    int evaluations = 0;
    bool warning = false;
    std::string note;
};

// E(l) = i l x - t (phi(w + i l) - phi(w)). Pieces grow geometrically while
// the phase is slow and shrink to half-periods once it is fast; partial
// sums over half-periods alternate and go through Wynn's epsilon.
ContourIntegral contour_integral(const BernsteinModel& m, double t, double x, double w, double sigma,
                                 double lambda_cap, double monitor_index, double rel_tol) {
    ContourIntegral out;
    auto exponent = [&](double l) {
        const std::complex<double> d = m.increment(w, l);
        return std::complex<double>(-t * d.real(), l * x - t * d.imag());
    };
    // Deep in the tail t|phi(w+il) - phi(w)| stays tiny over many periods and
    // the integral is a small remainder of int cos(l x) dl = 0. Integrate
    // Re e^{ilx}(e^{-t d} - 1) instead, so the cancellation never happens.
    const bool subtract = x > 0.0 && t * std::abs(m.increment(w, 40.0 * std::numbers::pi / x)) < 0.1;
    auto integrand = [&](double l) {
        ++out.evaluations;
        if (subtract) {
            const std::complex<double> d = m.increment(w, l);
            const double a = -t * d.real(), b = -t * d.imag();
            const double sb = std::sin(0.5 * b);
            const double q_re = std::expm1(a) * std::cos(b) - 2.0 * sb * sb;
            const double q_im = std::exp(a) * std::sin(b);
            return std::cos(l * x) * q_re - std::sin(l * x) * q_im;
        }
        const auto e = exponent(l);
        if (e.real() < -700.0) return 0.0;
        return std::exp(e.real()) * std::cos(e.imag());
    };

    const double curv = sigma > 0 ? 1.0 / (sigma * sigma) : 0.0;  // t(-phi''(w))
    const double mass = curv * w * w;
    quad::WynnEpsilon wynn;
    double sum = 0.0;
    double lo = 0.0;
    double lo_phase = 0.0;
    int quiet = 0;
    int pushes = 0;
    const int max_pieces = 200000;
    const int max_evaluations = 4000000;
    for (int k = 0; k < max_pieces; ++k) {
        // Local phase rate from a forward difference.
        const double h = 1e-7 * std::max(lo, sigma);
        const double rate = std::max((exponent(lo + h).imag() - lo_phase) / h, 0.0);
        double len = lo == 0.0 ? sigma : lo;  // at most doubling
        if (rate > 0.0) len = std::min(len, std::numbers::pi / rate);
        len = std::max(len, 1e-6 * sigma);
        double hi = lo + len;
        const bool oscillating = rate > 0.0 && std::numbers::pi / rate <= lo;
        if (oscillating) {
            // Land on the next zero of cos(Im E) by secant steps.
            const double target = (std::floor(lo_phase / std::numbers::pi - 0.25) + 1.5) * std::numbers::pi;
            double a = lo, fa = lo_phase - target;
            double c = lo + (target - lo_phase) / rate;
            for (int it = 0; it < 4; ++it) {
                const double fc = exponent(c).imag() - target;
                if (std::abs(fc) < 1e-9 || fc == fa) break;
                const double next = c - fc * (c - a) / (fc - fa);
                a = c;
                fa = fc;
                c = std::clamp(next, lo + 0.05 * len, lo + 4.0 * len);
            }
            hi = c;
            len = hi - lo;
        }
        if (hi > lambda_cap) {
            out.warning = true;
            throw NumericalIntegrityError("contour integral: integrand not decaying by lambda=" +
                                          std::to_string(lambda_cap));
        }
        if (out.evaluations > max_evaluations)
            throw NumericalIntegrityError("contour integral: evaluation budget exhausted at lambda=" +
                                          std::to_string(lo) + " (sigma=" + std::to_string(sigma) + ")");
        quad::Tolerance tol{std::min(1e-12, rel_tol * 1e-2), 1e-3 * rel_tol * std::abs(sum), 100};
        auto piece = quad::integrate(integrand, lo, hi, tol);
        sum += piece.value;
        out.error += piece.error;
        const auto e_hi = exponent(hi);

        // Decay monitor: t Re(phi(w+il) - phi(w)) should grow at least like
        // min(u^2, u^a M^(1-a/2)) in u = l / sigma.
        const double u = hi / sigma;
        if (u >= 4.0 && !subtract) {
            const double predicted = std::min(u * u, std::pow(u, monitor_index) *
                                                          std::pow(mass, 1.0 - monitor_index / 2));
            if (-e_hi.real() < 1e-3 * predicted && !out.warning) {
                out.warning = true;
                out.note = "integrand decays slower than the scaling bound predicts";
            }
        }

        const double scale = std::max(std::abs(sum), 1e-300);
        if (!subtract && e_hi.real() < kNegligible + std::log(scale) - std::log(std::max(len, 1e-300) + hi) + std::log(1e-2)) {
            if (++quiet >= 2) {
                out.value = sum;
                return out;
            }
        } else {
            quiet = 0;
        }

        // Alternating half-periods once the phase is fast.
        if (oscillating && e_hi.imag() >= 6.0 * std::numbers::pi) {
            wynn.set_tolerance(rel_tol * 1e-1 * scale);
            const double acc = wynn.push(sum);
            ++pushes;
            if (pushes >= 10 && wynn.converged()) {
                out.value = acc;
                out.error += wynn.last_change();
                return out;
            }
        }
        lo = hi;
        lo_phase = e_hi.imag();
    }
    throw NumericalIntegrityError("contour integral: no convergence after " + std::to_string(max_pieces) +
                                  " pieces");
}

double monitor_index_for(const BernsteinModel& m) {
    const double a = m.alpha();
    if (std::isfinite(a) && a > 0.0 && a < 1.0) return a;
    return 0.5;
}

// Distance u = w + theta from the saddle to the edge of analyticity, computed
// without forming w (w = u - theta cancels once u << theta).
double edge_distance(const BernsteinModel& m, double t, double x) {
    const auto& nu = m.levy();
    const double y = x / t - m.drift();
    const double a = nu.alpha();
    const double K = a == 0.0 ? nu.c() : -nu.c() * std::tgamma(-a);
    return a == 0.0 ? K / y : std::pow(y / (K * a), 1.0 / (a - 1.0));
}

// Tempered law as an exponential tilt of the untempered one:
// p(t,x) = e^{-theta x + t(b theta + phi0(theta))} p0(t,x); alpha = 0 is the gamma law.
DensityResult tilted_density(const BernsteinModel& m, double t, double x, const DensityOptions& opt) {
    const auto& nu = m.levy();
    const double th = nu.theta(), b = m.drift();
    DensityResult r;
    r.method = Method::bromwich;
    if (nu.alpha() == 0.0) {
        const double k = nu.c() * t;
        const double z = x - t * b;
        r.log_value = k * std::log(th) + (k - 1.0) * std::log(z) - th * z - std::lgamma(k);
        r.note = "gamma law";
    } else {
        const auto base = BernsteinModel::power(nu.c(), nu.alpha(), b);
        const auto p0 = density_bromwich(base, t, x, opt);
        if (!(p0.value > 0.0)) throw NumericalIntegrityError("tilted density: untempered density not positive");
        r.log_value = -th * x + t * (b * th + base.phi(th)) + p0.log_value;
        r.error = p0.error;
        r.evaluations = p0.evaluations;
        r.flag = p0.flag;
        r.note = "exponential tilt of the untempered law";
    }
    r.value = std::exp(r.log_value);
    r.bromwich_value = r.value;
    r.normalized = kNaN;
    r.saddle.t = t;
    r.saddle.x = x;
    return r;
}

}  // namespace

const char* to_string(Method m) {
    switch (m) {
        case Method::saddle: return "saddle";
        case Method::bromwich: return "bromwich";
        case Method::both: return "both";
    }
    return "?";
}

const char* to_string(AccuracyFlag f) {
    switch (f) {
        case AccuracyFlag::ok: return "ok";
        case AccuracyFlag::outside_region: return "outside_region";
        case AccuracyFlag::quadrature_warning: return "quadrature_warning";
        case AccuracyFlag::support: return "support";
    }
    return "?";
}

Method parse_method(const std::string& s) {
    if (s == "saddle") return Method::saddle;
    if (s == "bromwich") return Method::bromwich;
    if (s == "both") return Method::both;
    throw DomainError("unknown method '" + s + "' (saddle|bromwich|both)");
}

SaddleSolution solve_saddle(const BernsteinModel& m, double t, double x) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("t must be positive and finite");
    if (!std::isfinite(x)) throw DomainError("x must be finite");
    const double b = m.drift();
    if (x <= t * b) throw SupportError("density concentrates at/right of tb: x=" + std::to_string(x) +
                                       " <= tb=" + std::to_string(t * b));
    if (m.degenerate()) throw SupportError("degenerate model: T_t = bt is deterministic");
    const double top = m.phi_prime_zero();
    if (std::isfinite(top) && x >= t * top)
        throw DomainError("x out of range: x >= t phi'(0+) = " + std::to_string(t * top));
    SaddleSolution s;
    s.t = t;
    s.x = x;
    s.w = m.inverse_derivative(x / t);
    const Jet j = m.jet(s.w);
    s.curvature = -j.d2;
    s.saddle_mass = t * s.w * s.w * s.curvature;
    // phi(w) - w phi'(w) = (phi(w) - b w) - w (phi'(w) - b), both nonnegative.
    s.exponent = t * std::max(j.v - b * s.w - s.w * m.jump_derivative(s.w), 0.0);
    s.prefactor = 1.0 / std::sqrt(2.0 * std::numbers::pi * t * s.curvature);
    return s;
}

DensityResult density_saddle(const BernsteinModel& m, double t, double x, const DensityOptions& opt) {
    DensityResult r;
    r.method = Method::saddle;
    r.saddle = solve_saddle(m, t, x);
    r.log_value = std::log(r.saddle.prefactor) - r.saddle.exponent;
    r.value = std::exp(r.log_value);
    r.saddle_value = r.value;
    r.flag = r.saddle.saddle_mass > opt.m0 ? AccuracyFlag::ok : AccuracyFlag::outside_region;
    return r;
}

DensityResult density_bromwich(const BernsteinModel& m, double t, double x, const DensityOptions& opt,
                               double w_contour) {
    DensityResult r;
    r.method = Method::bromwich;
    const double top = m.phi_prime_zero();
    const bool beyond = std::isfinite(top) && x >= t * top && x > t * m.drift();
    const bool continued = beyond && m.analytic_edge() < 0.0;
    if (continued) {
        // The saddle point sits left of the origin, inside the half-plane
        // where the closed form continues analytically.
        if (w_contour == 0.0 && edge_distance(m, t, x) < 1e-3 * -m.analytic_edge())
            return tilted_density(m, t, x, opt);
        SaddleSolution& s = r.saddle;
        s.t = t;
        s.x = x;
        s.w = m.continued_inverse_derivative(x / t);
        if (!(s.w - m.analytic_edge() > 1e-280 * -m.analytic_edge()))
            throw DomainError("x too far in the exponential tail for the contour method");
        const Jet js = m.jet(s.w);
        s.curvature = -js.d2;
        s.saddle_mass = t * s.w * s.w * s.curvature;
        s.exponent = t * (js.v - s.w * js.d1);
        s.prefactor = 1.0 / std::sqrt(2.0 * std::numbers::pi * t * s.curvature);
    } else if (beyond) {
        // No saddle point on the positive axis; any abscissa w > 0 inverts
        // the transform, and w x = 1/4 keeps e^{w x} harmless.
        r.saddle.t = t;
        r.saddle.x = x;
    } else {
        r.saddle = solve_saddle(m, t, x);
    }
    const double w = w_contour != 0.0 ? w_contour : (beyond && !continued) ? 0.25 / x : r.saddle.w;
    if ((!beyond || continued) && w < r.saddle.w - 1e-12 * std::abs(r.saddle.w))
        throw DomainError("contour abscissa must not lie left of the saddle point");
    const Jet j = m.jet(w);
    const double sigma = 1.0 / std::sqrt(t * -j.d2);
    double scale = w;
    const double y = 1.0 / t;
    if (y < m.phi_infinity()) {
        try {
            scale = std::max(scale, m.inverse(y));
        } catch (const DomainError&) {
            scale = 1e280;  // phi^{-1}(1/t) overflows: leave the cap to the budget
        }
    }
    const double cap = std::min(1e12 * scale, 1e290);
    auto ci = contour_integral(m, t, x, w, sigma, cap, monitor_index_for(m), opt.rel_tol);
    // p = e^{w x - t phi(w)} / pi * int_0^inf Re e^{E}
    const double log_front = w * x - t * j.v;
    const double log_abs = log_front + std::log(std::abs(ci.value) / std::numbers::pi);
    r.value = ci.value == 0.0 ? 0.0 : std::copysign(std::exp(log_abs), ci.value);
    r.bromwich_value = r.value;
    r.log_value = ci.value > 0 ? log_abs : kNaN;
    if (beyond && !continued) {
        r.normalized = kNaN;
    } else {
        // Normalized against the saddle-point scale.
        const double sigma0 = 1.0 / std::sqrt(t * r.saddle.curvature);
        r.normalized = std::exp(log_front + r.saddle.exponent) * ci.value / (std::numbers::pi * sigma0);
    }
    r.error = ci.value != 0 ? ci.error / std::abs(ci.value) : kInf;
    r.evaluations = ci.evaluations;
    r.note = ci.note;
    if (ci.warning) r.flag = AccuracyFlag::quadrature_warning;
    else if ((beyond && !continued) || r.saddle.saddle_mass <= opt.m0) r.flag = AccuracyFlag::outside_region;
    if (r.value < 0) {
        r.flag = AccuracyFlag::quadrature_warning;
        if (r.note.empty()) r.note = "negative inversion: model may not be a Bernstein function";
    }
    return r;
}

DensityResult density(const BernsteinModel& m, double t, double x, Method method, const DensityOptions& opt) {
    if (!(t > 0.0)) throw DomainError("t must be positive");
    if (x <= t * m.drift()) {
        DensityResult r;
        r.method = method;
        r.value = 0.0;
        r.log_value = -kInf;
        r.flag = AccuracyFlag::support;
        r.note = "x <= t b";
        return r;
    }
    switch (method) {
        case Method::saddle: return density_saddle(m, t, x, opt);
        case Method::bromwich: return density_bromwich(m, t, x, opt);
        case Method::both: {
            auto s = density_saddle(m, t, x, opt);
            auto b = density_bromwich(m, t, x, opt);
            b.method = Method::both;
            b.saddle_value = s.value;
            b.ratio = std::exp(s.log_value - b.log_value);
            if (b.flag == AccuracyFlag::ok && s.flag != AccuracyFlag::ok) b.flag = s.flag;
            return b;
        }
    }
    throw DomainError("unknown method");
}

std::vector<double> asymptotic_limit_check(const BernsteinModel& m, double x, const std::vector<double>& t_grid) {
    if (m.degenerate()) throw CapabilityError("asymptotic limit: degenerate model (phi'' == 0)");
    if (m.drift() != 0.0) throw CapabilityError("asymptotic limit: requires b = 0");
    std::vector<double> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) out.push_back(density_bromwich(m, t, x).normalized);
    return out;
}

MassCheck mass_check(const BernsteinModel& m, double t, const std::vector<double>& lambdas, int digits) {
    MassCheck mc;
    mc.lambdas = lambdas;
    const double b = m.drift();
    const double rel = std::pow(10.0, -std::clamp(digits, 4, 12));
    // y = x - tb, integrated in log y over a range found from both tail bounds.
    const double w0 = 1.0 / t < m.phi_infinity() ? m.inverse(1.0 / t) : 1.0;
    const double pivot = std::max(t * m.jump_derivative(w0), 1e-300);
    // P(T_t - tb > y) <= 2 t phi(1/y): cut where that is below rel/10.
    double y_hi = pivot;
    auto p_at = [&](double y) { return density_bromwich(m, t, t * b + y).value; };
    while (2.0 * t * m.phi(1.0 / y_hi) > 0.1 * rel && y_hi < 1e300 && p_at(y_hi) * y_hi > 1e-6 * rel) y_hi *= 10.0;
    // P(T_t - tb < y) <= e^{l y - t (phi(l) - b l)}: cut where that is small.
    double y_lo = pivot;
    auto left_bound = [&](double y) {
        double best = 1.0;
        for (double k : {1.0, 10.0, 100.0, 1000.0}) {
            const double l = k / y;
            best = std::min(best, std::exp(k - t * (m.phi(l) - b * l)));
        }
        return best;
    };
    while (left_bound(y_lo) > 0.1 * rel && y_lo > 1e-280) y_lo *= 0.1;
    auto both_sides = [&](auto&& g, double size) {
        const quad::Tolerance tol{rel, 1e-2 * rel * size, 2000};
        auto h = [&](double v) {
            const double y = std::exp(v);
            return g(y) * y;
        };
        std::vector<double> cuts;
        for (double v = std::log(y_lo); v < std::log(y_hi); v += 2.0) cuts.push_back(v);
        cuts.push_back(std::log(y_hi));
        return quad::integrate_pieces(h, cuts, tol).value;
    };
    mc.mass = both_sides(p_at, 1.0);
    for (double l : lambdas) {
        mc.expected.push_back(std::exp(-t * m.phi(l)));
        mc.transform.push_back(
            both_sides([&](double y) { return std::exp(-l * (t * b + y)) * p_at(y); }, mc.expected.back()));
    }
    return mc;
}

}  // namespace subdense
