#include "subdense/green_heat.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "subdense/density.hpp"
#include "subdense/errors.hpp"
#include "subdense/parallel.hpp"
#include "subdense/quadrature.hpp"

namespace subdense {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMonotoneLimit = 1e3;

bool has_density(const BernsteinModel& m) {
    const auto k = m.levy().kind();
    return k != LevyKind::none && k != LevyKind::implicit;
}

double density_or_zero(const BernsteinModel& m, double t, double x) {
    if (x <= t * m.drift()) return 0.0;
    return density_bromwich(m, t, x).value;
}

}  // namespace

double green_f(const BernsteinModel& m, double x) { return m.varphi(x) / m.derivative(x, 1); }

double green_f_inverse(const BernsteinModel& m, double s) {
    auto f = [&m](double x) { return green_f(m, x); };
    return generalized_inverse([&](double r) { return running_sup(f, r); }, s, InverseSide::right);
}

GreenResult green_unchecked(const BernsteinModel& m, double x, double rel_tol) {
    if (m.degenerate()) throw CapabilityError("green: degenerate model (phi'' == 0)");
    if (!(x > 0.0)) throw DomainError("green: x must be positive");
    GreenResult g;
    g.x = x;
    g.split = x / m.derivative(green_f_inverse(m, 1.0 / x), 1);
    auto p = [&](double t) { return density_or_zero(m, t, x); };
    const quad::Tolerance tol{rel_tol, 0.0, 2000};
    auto inner = quad::integrate_log_side(p, g.split, -1.0, tol);
    auto outer = quad::integrate_log_side(p, g.split, +1.0, tol);
    if (!inner.converged || !outer.converged) throw NumericalIntegrityError("green: t-integral did not converge");
    g.inner = inner.value;
    g.outer = outer.value;
    g.value = g.inner + g.outer;
    g.estimate_form = 1.0 / (x * m.phi(1.0 / x));
    g.ratio = g.value / g.estimate_form;
    return g;
}

GreenResult green(const BernsteinModel& m, double x, const GreenOptions& opt) {
    if (m.degenerate()) throw CapabilityError("green: degenerate model (phi'' == 0)");
    const auto audit = scaling_audit(m);
    require_hypotheses(audit, false, false, true, true, "green");
    const bool monotone = has_density(m) && m.levy().monotonicity_ratio() <= kMonotoneLimit;
    if (!monotone && !(audit.alpha_hat > 0.5))
        throw CapabilityError("green: needs an almost monotone Levy density or alpha > 1/2");
    const double x0 = audit.x0_for(false, false, true, true);
    if (x0 > 0.0 && !(x < opt.A / x0)) {
        std::ostringstream os;
        os << "green: x=" << x << " outside x < A/x0 = " << opt.A / x0;
        throw DomainError(os.str());
    }
    return green_unchecked(m, x, opt.rel_tol);
}

TransformReport green_transform_identity(const BernsteinModel& m, const std::vector<double>& lambdas) {
    if (m.degenerate()) throw CapabilityError("green transform: degenerate model (phi'' == 0)");
    if (lambdas.empty()) return {};
    for (double l : lambdas)
        if (!(l > 0.0)) throw DomainError("green transform: lambda must be positive");
    const auto [lmin, lmax] = std::minmax_element(lambdas.begin(), lambdas.end());
    TransformReport rep;
    rep.x_lo = 1e-7 / *lmax;
    rep.x_hi = 45.0 / *lmin;

    // Gauss-Legendre panels of width 2 in v = log x; G is shared by every lambda.
    using GL = boost::math::quadrature::gauss<double, 10>;
    const auto& nodes = GL::abscissa();
    const auto& weights = GL::weights();
    std::vector<double> xs, ws, G;
    auto add_range = [&](double x_lo, double x_hi) {
        const double v_lo = std::log(x_lo), v_hi = std::log(x_hi);
        const int panels = static_cast<int>(std::ceil((v_hi - v_lo) / 2.0));
        const double h = (v_hi - v_lo) / panels;
        const std::size_t first = xs.size();
        for (int k = 0; k < panels; ++k) {
            const double c = v_lo + (k + 0.5) * h;
            for (std::size_t i = 0; i < nodes.size(); ++i)
                for (double sgn : {-1.0, 1.0}) {
                    const double v = c + sgn * 0.5 * h * nodes[i];
                    xs.push_back(std::exp(v));
                    ws.push_back(0.5 * h * weights[i] * std::exp(v));
                }
        }
        G.resize(xs.size());
        parallel_for(xs.size() - first, [&](std::size_t i) { G[first + i] = green_unchecked(m, xs[first + i], 1e-8).value; });
    };

    // Below x_lo the renewal mass U(x_lo) = int_0^x_lo G is taken from its
    // Tauberian asymptote 1/(phi(1/x_lo) Gamma(1 + rho)), rho = kappa + 1 the
    // local index of x G(x). Exact for stable laws; for slowly varying phi
    // the relative error is O(1/log(1/x_lo)), so x_lo is pushed down.
    const double scale = 1.0 / m.phi(*lmax);
    double head = 0.0, rho = 0.0;
    add_range(rep.x_lo, rep.x_hi);
    for (;;) {
        std::size_t i0 = 0;
        for (std::size_t i = 0; i < xs.size(); ++i)
            if (xs[i] < xs[i0]) i0 = i;
        std::size_t i1 = i0 == 0 ? 1 : 0;
        for (std::size_t i = 0; i < xs.size(); ++i)
            if (i != i0 && xs[i] < xs[i1]) i1 = i;
        rho = 1.0 + std::log(G[i1] / G[i0]) / std::log(xs[i1] / xs[i0]);
        if (!(rho > 0.0)) throw NumericalIntegrityError("green transform: G is not integrable at 0");
        head = 1.0 / (m.phi(1.0 / rep.x_lo) * std::tgamma(1.0 + rho));
        if (rho > 0.2 || head / std::log(1.0 / rep.x_lo) < 2e-4 * scale || rep.x_lo < 1e-100) break;
        const double next = rep.x_lo * 1e-12;
        add_range(next, rep.x_lo);
        rep.x_lo = next;
    }

    for (double l : lambdas) {
        double sum = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) sum += ws[i] * std::exp(-l * xs[i]) * G[i];
        TransformRow row;
        row.lambda = l;
        row.transform = sum + head;
        row.expected = 1.0 / m.phi(l);
        row.rel_error = std::abs(row.transform / row.expected - 1.0);
        rep.max_rel_error = std::max(rep.max_rel_error, row.rel_error);
        rep.rows.push_back(row);
        if (rho <= 0.2 && head / std::log(1.0 / rep.x_lo) > 2e-4 * row.transform && rep.hint.empty()) rep.hint = "lower x range too narrow: widen below x_lo";
    }
    return rep;
}

double HeatProfile::phi1(double s) const {
    if (kind == ProfileKind::fractal) return std::exp(-std::pow(s, gamma / (gamma - 1.0)));
    return std::exp(-c1 * s * s);
}

double HeatProfile::phi2(double s) const {
    if (kind == ProfileKind::fractal) return std::exp(-std::pow(s, gamma / (gamma - 1.0)));
    return std::exp(-c2 * s * s);
}

void HeatProfile::validate() const {
    if (!(n > 0.0)) throw SpecFormatError("n", "must be positive");
    if (!(gamma > 1.0)) throw SpecFormatError("gamma", "must be > 1");
    if (kind == ProfileKind::gaussian) {
        if (!(c2 > 0.0)) throw SpecFormatError("c2", "must be positive");
        if (!(c1 >= c2)) throw SpecFormatError("c1", "must be >= c2 so that Phi1 <= Phi2");
    }
    if (!(phi1(1.0) > 0.0)) throw SpecFormatError("profile", "Phi1(1) must be positive");
    double sup = 0.0, last = 0.0;
    for (double s : log_grid(1e-3, 1e6, 8)) {
        last = phi2(s) * std::pow(1.0 + s, n + gamma);
        sup = std::max(sup, last);
        if (phi1(s) > phi2(s) * (1.0 + 1e-12)) throw SpecFormatError("profile", "Phi1 <= Phi2 violated");
    }
    if (!std::isfinite(sup) || last > 1e-3 * sup)
        throw SpecFormatError("profile", "Phi2(s)(1+s)^(n+gamma) is not bounded");
}

std::string HeatProfile::describe() const {
    std::ostringstream os;
    if (kind == ProfileKind::fractal)
        os << "fractal(n=" << n << ", gamma=" << gamma << ")";
    else
        os << "gaussian(n=" << n << ", gamma=" << gamma << ", c1=" << c1 << ", c2=" << c2 << ")";
    return os.str();
}

HeatProfile HeatProfile::fractal(double n, double gamma) {
    HeatProfile p;
    p.kind = ProfileKind::fractal;
    p.n = n;
    p.gamma = gamma;
    p.validate();
    return p;
}

HeatProfile HeatProfile::gaussian(double n, double c1, double c2) {
    HeatProfile p;
    p.kind = ProfileKind::gaussian;
    p.n = n;
    p.gamma = 2.0;
    p.c1 = c1;
    p.c2 = c2;
    p.validate();
    return p;
}

HeatProfile HeatProfile::sierpinski() { return fractal(std::log(3.0) / std::log(2.0), std::log(5.0) / std::log(2.0)); }

const char* to_string(HeatCase c) { return c == HeatCase::far ? "far" : "near"; }

HeatCase heat_case(const BernsteinModel& m, const HeatProfile& p, double t, double tau, double* coordinate) {
    const double c = t * m.phi(std::pow(tau, -p.gamma));
    if (coordinate) *coordinate = c;
    return c <= 1.0 ? HeatCase::far : HeatCase::near;
}

double heat_estimate_form(const BernsteinModel& m, const HeatProfile& p, double t, double tau) {
    double c = 0.0;
    if (heat_case(m, p, t, tau, &c) == HeatCase::far) return c * std::pow(tau, -p.n);
    if (!(1.0 / t < m.phi_infinity())) throw DomainError("heat kernel: phi^{-1}(1/t) undefined");
    return std::pow(m.inverse(1.0 / t), p.n / p.gamma);
}

HeatKernelResult heat_kernel_subordinated(const BernsteinModel& m, const HeatProfile& p, double t, double tau) {
    if (!(t > 0.0) || !(tau > 0.0)) throw DomainError("heat kernel: t and tau must be positive");
    p.validate();
    HeatKernelResult r;
    if (m.drift() != 0.0) throw CapabilityError("heat kernel: requires b = 0");
    const auto audit = scaling_audit(m);
    require_hypotheses(audit, false, false, true, true, "heat kernel");
    if (has_density(m)) {
        if (!(m.levy().monotonicity_ratio() <= kMonotoneLimit))
            throw CapabilityError("heat kernel: Levy density is not almost monotone");
    } else {
        r.note = "almost monotone Levy density not checkable (no explicit density)";
    }
    const double x0 = audit.x0_for(false, false, true, true);
    if (!(std::pow(tau, -p.gamma) > x0)) {
        std::ostringstream os;
        os << "heat kernel: tau^-gamma=" << std::pow(tau, -p.gamma) << " must exceed x0=" << x0;
        throw DomainError(os.str());
    }
    r.regime = heat_case(m, p, t, tau, &r.case_coordinate);
    r.estimate_form = heat_estimate_form(m, p, t, tau);

    // int s^{-n/gamma} Phi(tau s^{-1/gamma}) p(t, s) ds in log s, split at the
    // scale of T_t and at s = tau^gamma.
    const double s_typ = 1.0 / m.inverse(1.0 / t);
    const double s_tau = std::pow(tau, p.gamma);
    const double a = std::min(s_typ, s_tau), b = std::max(s_typ, s_tau);
    auto integral = [&](auto&& profile) {
        auto g = [&](double s) {
            const double shape = profile(tau * std::pow(s, -1.0 / p.gamma));
            if (shape == 0.0) return 0.0;
            return std::pow(s, -p.n / p.gamma) * shape * density_bromwich(m, t, s).value;
        };
        const quad::Tolerance tol{1e-7, 0.0, 2000};
        double total = quad::integrate_log_side(g, a, -1.0, tol).value;
        total += quad::integrate_log_side(g, b, +1.0, tol).value;
        if (b > a) {
            auto h = [&](double v) {
                const double s = std::exp(v);
                return g(s) * s;
            };
            std::vector<double> cuts;
            for (double v = std::log(a); v < std::log(b); v += 2.0) cuts.push_back(v);
            cuts.push_back(std::log(b));
            total += quad::integrate_pieces(h, cuts, tol).value;
        }
        return total;
    };
    r.lower = integral([&](double s) { return p.phi1(s); });
    r.upper = p.kind == ProfileKind::fractal ? r.lower : integral([&](double s) { return p.phi2(s); });
    return r;
}

double LogStableForms::large_time(double t, double n, double gamma) const {
    const double e = n / (alpha * gamma);
    return std::pow(t, -e) * std::pow(std::log(2.0 + 1.0 / t), -sigma * e);
}

double LogStableForms::far_field(double t, double tau, double n, double gamma) const {
    return t * std::pow(tau, -alpha * gamma - n) * std::pow(std::log(2.0 + std::pow(tau, -gamma)), sigma);
}

ExampleCatalog example_profiles() {
    return ExampleCatalog{
        {{"fractal", HeatProfile::sierpinski()}, {"manifold", HeatProfile::gaussian(2.0, 0.5, 0.25)}},
        BernsteinModel::log_stable(0.5, 1.0),
        LogStableForms{0.5, 1.0},
    };
}

}  // namespace subdense
