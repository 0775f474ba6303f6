#include "subdense/bernstein.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace subdense {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
using cplx = std::complex<double>;

enum class Form { none, power, tempered, log_stable };

// Relative tolerance for every integral against nu.
const quad::Tolerance kTol{1e-10, 0.0, 4000};

// Gaver-Stehfest inversion of F(l)/l at r, i.e. the distribution function
// whose Laplace-Stieltjes transform is F. Real arguments only.
template <class F>
double stehfest_cdf(F&& f, double r) {
    constexpr int N = 14;
    constexpr int H = N / 2;
    auto fact = [](int n) { return std::tgamma(n + 1.0); };
    const double ln2 = std::numbers::ln2;
    double sum = 0.0;
    for (int k = 1; k <= N; ++k) {
        double v = 0.0;
        for (int j = (k + 1) / 2; j <= std::min(k, H); ++j)
            v += std::pow(j, H) * fact(2 * j) / (fact(H - j) * fact(j) * fact(j - 1) * fact(k - j) * fact(2 * j - k));
        if ((k + H) % 2 == 1) v = -v;
        const double l = k * ln2 / r;
        sum += v * f(l) / l;
    }
    return sum * ln2 / r;
}

void require_positive(double lambda, const char* what) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        std::ostringstream os;
        os << what << " needs a finite argument > 0 (got " << lambda << ")";
        throw DomainError(os.str());
    }
}

// Solve g(v) = 0 for a monotone g on [-745, 745], starting from v = 0.
template <class G>
double solve_monotone(G&& g, double start = 0.0) {
    double a = start, b = start;
    double ga = g(a);
    if (ga == 0.0) return a;
    double step = 1.0;
    double gb = ga;
    // Walk in the direction that reduces |g| until the sign flips.
    const double probe = g(start + 1e-3);
    const double dir = ((probe - ga) > 0.0) == (ga < 0.0) ? 1.0 : -1.0;
    while (true) {
        b = a + dir * step;
        if (std::abs(b) > 745.0) throw DomainError("root bracket left the representable range");
        gb = g(b);
        if ((gb > 0.0) != (ga > 0.0) || gb == 0.0) break;
        a = b;
        ga = gb;
        step *= 2.0;
    }
    if (gb == 0.0) return b;
    double lo = std::min(a, b), hi = std::max(a, b);
    double glo = lo == a ? ga : gb;
    double ghi = hi == b ? gb : ga;
    std::uintmax_t iters = 200;
    auto tol = [](double x, double y) { return std::abs(x - y) <= 1e-15 * std::max(1.0, std::abs(x)); };
    auto r = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi, tol, iters);
    return 0.5 * (r.first + r.second);
}

}  // namespace

const char* to_string(Family f) {
    switch (f) {
        case Family::drift: return "drift";
        case Family::stable: return "stable";
        case Family::power: return "power";
        case Family::power_log: return "power_log";
        case Family::tempered: return "tempered";
        case Family::gamma: return "gamma";
        case Family::log_stable: return "log_stable";
        case Family::custom: return "custom";
        case Family::surrogate: return "surrogate";
    }
    return "?";
}

struct BernsteinModel::State {
    Family family = Family::drift;
    std::string tag;
    double b = 0.0;
    LevyMeasure levy;
    Form form = Form::none;
    double K = 0.0;  // power: phi = K l^alpha; tempered: -c Gamma(-alpha) (or c at alpha = 0)
    double alpha = kNaN, sigma = kNaN, theta = kNaN, c = kNaN;
    std::shared_ptr<const LevyMeasure> base;  // surrogate: the measure inside the rational kernel

    Jet closed_jet(double l) const;
    Jet quadrature_jet(double l) const;
    Jet cbf_jet(double l) const;
    cplx closed_increment(double w, double l) const;
    cplx quadrature_increment(double w, double l) const;
    cplx cbf_increment(double w, double l) const;
};

Jet BernsteinModel::State::closed_jet(double l) const {
    const Jet z = Jet::variable(l);
    switch (form) {
        case Form::power: return K * pow(z, alpha);
        case Form::tempered: {
            const Jet u = theta + z;
            if (alpha == 0.0) {
                Jet j = K * log(u);
                j.v = K * std::log1p(l / theta);
                return j;
            }
            Jet j = K * pow(u, alpha);
            j.v = K * std::pow(theta, alpha) * std::expm1(alpha * std::log1p(l / theta));
            return j;
        }
        case Form::log_stable: return pow(z, alpha) * pow(log(2.0 + z), sigma);
        case Form::none: break;
    }
    return Jet::constant(0.0);
}

Jet BernsteinModel::State::quadrature_jet(double l) const {
    if (levy.is_zero()) return Jet::constant(0.0);
    const double pivot = 1.0 / l;
    auto need = [](const quad::Result& r, const char* what) {
        if (!r.converged || !std::isfinite(r.value))
            throw ModelInvalidError(std::string("integral for ") + what + " did not converge");
        return r.value;
    };
    Jet j;
    j.v = need(levy.integrate([l](double s) { return -std::expm1(-l * s); }, 0.0, kInf, pivot, kTol), "phi");
    j.d1 = need(levy.integrate([l](double s) { return s * std::exp(-l * s); }, 0.0, kInf, pivot, kTol), "phi'");
    j.d2 = -need(levy.integrate([l](double s) { return s * s * std::exp(-l * s); }, 0.0, kInf, pivot, kTol),
                 "phi''");
    j.d3 = need(levy.integrate([l](double s) { return s * s * s * std::exp(-l * s); }, 0.0, kInf, pivot, kTol),
                "phi'''");
    return j;
}

Jet BernsteinModel::State::cbf_jet(double l) const {
    const LevyMeasure& nu = *base;
    const double pivot = 1.0 / l;
    auto need = [](const quad::Result& r) {
        if (!r.converged || !std::isfinite(r.value))
            throw ModelInvalidError("integral for the complete Bernstein surrogate did not converge");
        return r.value;
    };
    Jet j;
    j.v = need(nu.integrate([l](double u) { return l * u / (l * u + 1.0); }, 0.0, kInf, pivot, kTol));
    j.d1 = need(nu.integrate(
        [l](double u) {
            const double q = l * u + 1.0;
            return u / (q * q);
        },
        0.0, kInf, pivot, kTol));
    j.d2 = -need(nu.integrate(
        [l](double u) {
            const double q = l * u + 1.0;
            return 2.0 * u * u / (q * q * q);
        },
        0.0, kInf, pivot, kTol));
    j.d3 = need(nu.integrate(
        [l](double u) {
            const double q = l * u + 1.0;
            return 6.0 * u * u * u / (q * q * q * q);
        },
        0.0, kInf, pivot, kTol));
    return j;
}

cplx BernsteinModel::State::closed_increment(double w, double l) const {
    const cplx il(0.0, l);
    switch (form) {
        case Form::power:
            if (w == 0.0) return K * std::pow(il, alpha);
            return K * std::pow(w, alpha) * expm1(alpha * log1p(il / w));
        case Form::tempered: {
            const double u = theta + w;
            if (alpha == 0.0) return K * log1p(il / u);
            return K * std::pow(u, alpha) * expm1(alpha * log1p(il / u));
        }
        case Form::log_stable: {
            if (w == 0.0) return std::pow(il, alpha) * std::pow(std::log(cplx(2.0, l)), sigma);
            const double L = std::log(2.0 + w);
            const double base_value = std::pow(w, alpha) * std::pow(L, sigma);
            return base_value * expm1(alpha * log1p(il / w) + sigma * log1p(log1p(il / (2.0 + w)) / L));
        }
        case Form::none: break;
    }
    return 0.0;
}

cplx BernsteinModel::State::quadrature_increment(double w, double l) const {
    if (levy.is_zero() || l == 0.0) return 0.0;
    const double sign = l < 0.0 ? -1.0 : 1.0;
    const double al = std::abs(l);
    const double a = std::numbers::pi / al;
    auto need = [](const quad::Result& r) {
        if (!std::isfinite(r.value)) throw ModelInvalidError("complex exponent integral is not finite");
        return r.value;
    };
    // (0, a]: no sign changes; 1 - cos written as 2 sin^2 to keep accuracy.
    const double near_re = need(levy.integrate(
        [al, w](double s) {
            const double h = std::sin(0.5 * al * s);
            return 2.0 * h * h * std::exp(-w * s);
        },
        0.0, a, a, kTol));
    const double near_im = need(
        levy.integrate([al, w](double s) { return std::sin(al * s) * std::exp(-w * s); }, 0.0, a, a, kTol));
    // [a, inf): plain mass minus an oscillatory part summed by panels.
    const double mass = need(levy.integrate([w](double s) { return std::exp(-w * s); }, a, kInf, a, kTol));
    const double scale = std::max({std::abs(near_re) + mass, std::abs(near_im), 1e-300});
    auto envelope = [this, w](double s) { return levy.mono_constant() * levy.density(s) * std::exp(-w * s); };
    const double abs_tol = 1e-12 * scale;
    auto cos_part = quad::oscillatory_tail(
        [this, al, w](double s) { return std::cos(al * s) * std::exp(-w * s) * levy.density(s); }, envelope, a,
        std::numbers::pi / al, abs_tol);
    auto sin_part = quad::oscillatory_tail(
        [this, al, w](double s) { return std::sin(al * s) * std::exp(-w * s) * levy.density(s); }, envelope, a,
        std::numbers::pi / al, abs_tol);
    if (!cos_part.converged || !sin_part.converged)
        throw ModelInvalidError("oscillatory tail of the complex exponent did not converge");
    return {near_re + mass - cos_part.value, sign * (near_im + sin_part.value)};
}

cplx BernsteinModel::State::cbf_increment(double w, double l) const {
    if (l == 0.0) return 0.0;
    const LevyMeasure& nu = *base;
    const double pivot = 1.0 / std::max(w, std::abs(l));
    // i l u / ((w u + 1)((w + i l) u + 1)) split into real and imaginary parts.
    const auto re = nu.integrate(
        [w, l](double u) {
            const double a = w * u + 1.0, be = l * u;
            return be * be / (a * (a * a + be * be));
        },
        0.0, kInf, pivot, kTol);
    const auto im = nu.integrate(
        [w, l](double u) {
            const double a = w * u + 1.0, be = l * u;
            return be / (a * a + be * be);
        },
        0.0, kInf, pivot, kTol);
    if (!re.converged || !im.converged) throw ModelInvalidError("surrogate complex exponent did not converge");
    return {re.value, im.value};
}

namespace {

std::shared_ptr<BernsteinModel::State> new_state(Family f, std::string tag, double b) {
    if (!(b >= 0.0) || !std::isfinite(b)) throw ModelInvalidError("drift b must be finite and >= 0");
    auto s = std::make_shared<BernsteinModel::State>();
    s->family = f;
    s->tag = std::move(tag);
    s->b = b;
    return s;
}

}  // namespace

BernsteinModel BernsteinModel::stable(double alpha, double drift) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ModelInvalidError("stable index alpha must lie in (0, 1)");
    auto s = new_state(Family::stable, "stable", drift);
    s->levy = LevyMeasure::power(alpha / std::tgamma(1.0 - alpha), alpha);
    s->form = Form::power;
    s->K = 1.0;
    s->alpha = alpha;
    s->c = s->levy.c();
    return BernsteinModel(s);
}

BernsteinModel BernsteinModel::power(double c, double alpha, double drift) {
    auto s = new_state(Family::power, "power", drift);
    s->levy = LevyMeasure::power(c, alpha);
    s->form = Form::power;
    s->K = c * std::tgamma(1.0 - alpha) / alpha;
    s->alpha = alpha;
    s->c = c;
    return BernsteinModel(s);
}

BernsteinModel BernsteinModel::power_log(double c, double alpha, double sigma, double drift) {
    auto s = new_state(Family::power_log, "power_log", drift);
    s->levy = LevyMeasure::power_log(c, alpha, sigma);
    s->alpha = alpha;
    s->sigma = sigma;
    s->c = c;
    return BernsteinModel(s);
}

BernsteinModel BernsteinModel::tempered(double c, double alpha, double theta, double drift) {
    auto s = new_state(Family::tempered, "tempered", drift);
    s->levy = LevyMeasure::tempered(c, alpha, theta);
    s->form = Form::tempered;
    s->K = alpha == 0.0 ? c : -c * std::tgamma(-alpha);
    s->alpha = alpha;
    s->theta = theta;
    s->c = c;
    return BernsteinModel(s);
}

BernsteinModel BernsteinModel::gamma(double drift) {
    auto m = tempered(1.0, 0.0, 1.0, drift);
    auto s = std::make_shared<State>(*m.s_);
    s->family = Family::gamma;
    s->tag = "gamma";
    return BernsteinModel(s);
}

BernsteinModel BernsteinModel::log_stable(double alpha, double sigma) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ModelInvalidError("log-stable index alpha must lie in (0, 1)");
    if (!std::isfinite(sigma)) throw ModelInvalidError("log-stable sigma must be finite");
    auto s = new_state(Family::log_stable, "log_stable", 0.0);
    s->levy = LevyMeasure::implicit("log-stable exponent");
    s->form = Form::log_stable;
    s->alpha = alpha;
    s->sigma = sigma;
    return BernsteinModel(s);
}

BernsteinModel BernsteinModel::pure_drift(double b) {
    if (!(b > 0.0)) throw ModelInvalidError("pure drift model needs b > 0");
    return BernsteinModel(new_state(Family::drift, "drift", b));
}

BernsteinModel BernsteinModel::custom(double drift, LevyMeasure levy, std::string tag) {
    auto s = new_state(Family::custom, std::move(tag), drift);
    if (levy.is_zero() && drift == 0.0) throw ModelInvalidError("model with b = 0 and nu = 0 is trivial");
    switch (levy.kind()) {
        case LevyKind::power:
            s->form = Form::power;
            s->K = levy.c() * std::tgamma(1.0 - levy.alpha()) / levy.alpha();
            s->alpha = levy.alpha();
            s->c = levy.c();
            break;
        case LevyKind::tempered:
            s->form = Form::tempered;
            s->K = levy.alpha() == 0.0 ? levy.c() : -levy.c() * std::tgamma(-levy.alpha());
            s->alpha = levy.alpha();
            s->theta = levy.theta();
            s->c = levy.c();
            break;
        case LevyKind::power_log:
            s->alpha = levy.alpha();
            s->sigma = levy.sigma();
            s->c = levy.c();
            break;
        case LevyKind::implicit:
            throw ModelInvalidError("custom models need an explicit Levy density");
        default: break;
    }
    s->levy = std::move(levy);
    return BernsteinModel(s);
}

Family BernsteinModel::family() const { return s_->family; }
const std::string& BernsteinModel::tag() const { return s_->tag; }
double BernsteinModel::drift() const { return s_->b; }
const LevyMeasure& BernsteinModel::levy() const { return s_->levy; }
bool BernsteinModel::has_closed_form() const { return s_->form != Form::none || s_->levy.is_zero(); }
bool BernsteinModel::degenerate() const { return s_->levy.is_zero() && !s_->base; }
double BernsteinModel::alpha() const { return s_->alpha; }
double BernsteinModel::sigma() const { return s_->sigma; }

Jet BernsteinModel::jet(double lambda) const {
    if (!(lambda > 0.0) && lambda > analytic_edge() && !s_->base && s_->form == Form::tempered) {
        // Analytic continuation of the tempered closed form to (-theta, 0].
        Jet j = s_->closed_jet(lambda);
        j.v += s_->b * lambda;
        j.d1 += s_->b;
        return j;
    }
    require_positive(lambda, "phi");
    Jet j;
    if (s_->base)
        j = s_->cbf_jet(lambda);
    else if (s_->form != Form::none)
        j = s_->closed_jet(lambda);
    else {
        j = s_->quadrature_jet(lambda);
        if (!s_->levy.is_zero() && !(j.d1 > 0.0 && j.d2 < 0.0 && j.d3 > 0.0)) {
            std::ostringstream os;
            os << "derivative sign pattern (+,-,+) violated at lambda=" << lambda << ": " << j.d1 << ", " << j.d2
               << ", " << j.d3;
            throw NumericalIntegrityError(os.str());
        }
    }
    j.v += s_->b * lambda;
    j.d1 += s_->b;
    return j;
}

double BernsteinModel::phi(double lambda) const {
    if (lambda == 0.0) return 0.0;
    return jet(lambda).v;
}

double BernsteinModel::derivative(double lambda, int order) const {
    if (order < 1 || order > 3) throw DomainError("derivative order must be 1, 2 or 3");
    return jet(lambda)[order];
}

double BernsteinModel::jump_derivative(double lambda) const { return jet(lambda).d1 - s_->b; }

double BernsteinModel::varphi(double x) const { return x * x * -jet(x).d2; }

double BernsteinModel::phi_quadrature(double lambda) const {
    require_positive(lambda, "phi");
    return s_->b * lambda + s_->quadrature_jet(lambda).v;
}

double BernsteinModel::derivative_quadrature(double lambda, int order) const {
    require_positive(lambda, "phi derivative");
    if (order < 1 || order > 3) throw DomainError("derivative order must be 1, 2 or 3");
    const Jet j = s_->quadrature_jet(lambda);
    return order == 1 ? j.d1 + s_->b : j[order];
}

std::complex<double> BernsteinModel::increment(double w, double lambda) const {
    if (!(w >= 0.0) && !(w > analytic_edge())) throw DomainError("complex exponent needs Re z >= 0");
    cplx inc;
    if (s_->base)
        inc = s_->cbf_increment(w, lambda);
    else if (s_->form != Form::none)
        inc = s_->closed_increment(w, lambda);
    else
        inc = s_->quadrature_increment(w, lambda);
    return inc + cplx(0.0, s_->b * lambda);
}

std::complex<double> BernsteinModel::phi_complex(double w, double lambda) const {
    const cplx inc = increment(w, lambda);
    return w > 0.0 ? phi(w) + inc : inc;
}

double BernsteinModel::phi_prime_zero() const {
    const double b = s_->b;
    if (s_->base) {
        auto r = s_->base->integrate([](double u) { return u; }, 0.0, kInf, 1.0, kTol);
        return r.converged && std::isfinite(r.value) ? b + r.value : kInf;
    }
    switch (s_->form) {
        case Form::power:
        case Form::log_stable: return kInf;
        case Form::tempered:
            return s_->alpha == 0.0 ? b + s_->c / s_->theta
                                    : b + s_->c * std::tgamma(1.0 - s_->alpha) * std::pow(s_->theta, s_->alpha - 1.0);
        case Form::none: break;
    }
    const LevyMeasure& nu = s_->levy;
    switch (nu.kind()) {
        case LevyKind::none: return b;
        case LevyKind::power_log: return kInf;
        case LevyKind::tabulated:
            if (nu.tail_exponents().second >= -2.0) return kInf;
            [[fallthrough]];
        default: {
            auto r = nu.integrate([](double s) { return s; }, 0.0, kInf, 1.0, kTol);
            return r.converged && std::isfinite(r.value) ? b + r.value : kInf;
        }
    }
}

double BernsteinModel::phi_infinity() const {
    if (s_->b > 0.0 || s_->form != Form::none) return kInf;
    const LevyMeasure& nu = s_->base ? *s_->base : s_->levy;
    if (nu.is_zero()) return 0.0;
    if (nu.kind() == LevyKind::power_log) return kInf;
    if (nu.kind() == LevyKind::tabulated && nu.tail_exponents().first <= -1.0) return kInf;
    auto r = nu.integrate([](double) { return 1.0; }, 0.0, kInf, 1.0, kTol);
    return r.converged && std::isfinite(r.value) && r.value < 1e300 ? r.value : kInf;
}

double BernsteinModel::inverse(double y) const {
    if (!(y > 0.0)) throw DomainError("phi inverse needs y > 0");
    if (!(y < phi_infinity())) throw DomainError("phi inverse: y beyond sup phi");
    if (s_->form == Form::power && s_->b == 0.0) return std::pow(y / s_->K, 1.0 / s_->alpha);
    if (s_->levy.is_zero() && !s_->base) return y / s_->b;
    const double ly = std::log(y);
    const double v = solve_monotone([&](double v) { return std::log(phi(std::exp(v))) - ly; });
    return std::exp(v);
}

double BernsteinModel::analytic_edge() const {
    if (!s_->base && s_->form == Form::tempered) return -s_->theta;
    return 0.0;
}

double BernsteinModel::continued_inverse_derivative(double y) const {
    const double b = s_->b;
    if (!(y > b)) throw DomainError("phi' inverse needs y > b");
    if (s_->base || s_->form != Form::tempered) return inverse_derivative(y);
    // phi'(w) = b + K alpha u^(alpha-1), or b + K/u when alpha = 0, u = theta + w
    const double u = s_->alpha == 0.0 ? s_->K / (y - b)
                                      : std::pow((y - b) / (s_->K * s_->alpha), 1.0 / (s_->alpha - 1.0));
    return u - s_->theta;
}

double BernsteinModel::inverse_derivative(double y) const {
    const double b = s_->b;
    if (!(y > b)) throw DomainError("phi' inverse needs y > b");
    if (!(y < phi_prime_zero())) throw DomainError("phi' inverse needs y < phi'(0+)");
    if (s_->form == Form::power) return std::pow((y - b) / (s_->K * s_->alpha), 1.0 / (s_->alpha - 1.0));
    const double ly = std::log(y - b);
    const double v = solve_monotone([&](double v) { return std::log(jump_derivative(std::exp(v))) - ly; });
    return std::exp(v);
}

double BernsteinModel::compensator(double r) const {
    if (!(r > 0.0)) throw DomainError("compensator needs r > 0");
    if (s_->base) {
        // int_(0,r) s m(s) ds with m the surrogate density, integrated in u first.
        auto res = s_->base->integrate(
            [r](double u) {
                const double q = r / u;
                return u * (q > 1e-4 ? -std::expm1(-q) - q * std::exp(-q) : q * q * (0.5 - q / 3.0));
            },
            0.0, kInf, r, kTol);
        return s_->b + res.value;
    }
    if (s_->levy.kind() == LevyKind::implicit) return s_->b + stehfest_cdf([this](double l) { return jump_derivative(l); }, r);
    return s_->b + s_->levy.first_moment_below(r);
}

BernsteinModel BernsteinModel::surrogate() const {
    if (degenerate()) return *this;
    if (s_->base) return *this;
    s_->levy.density(1.0);  // capability check for implicit measures
    auto s = new_state(Family::surrogate, "surrogate(" + s_->tag + ")", s_->b);
    s->base = std::make_shared<const LevyMeasure>(s_->levy);
    s->alpha = s_->alpha;
    s->sigma = s_->sigma;
    std::shared_ptr<const LevyMeasure> base = s->base;
    s->levy = LevyMeasure::functional(
        [base](double x) {
            // m(x) = int e^(-x/u) u^(-1) nu(du)
            auto r = base->integrate([x](double u) { return std::exp(-x / u) / u; }, 0.0, kInf, x, kTol);
            return r.value;
        },
        1.0, "complete Bernstein companion of " + s_->levy.describe());
    return BernsteinModel(s);
}

ValidationReport BernsteinModel::validate() const {
    ValidationReport rep;
    std::vector<double> grid;
    for (int i = 0; i < 20; ++i) grid.push_back(std::pow(10.0, -4.0 + 8.0 * i / 19.0));
    std::vector<Jet> js;
    js.reserve(grid.size());
    auto fail = [&rep](const std::string& msg) {
        rep.ok = false;
        rep.failures.push_back(msg);
    };
    try {
        for (double l : grid) js.push_back(jet(l));
    } catch (const Error& e) {
        fail(e.what());
        return rep;
    }
    const bool flat = degenerate();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Jet& j = js[i];
        const double l = grid[i];
        if (!(j.v > 0.0)) fail("phi not positive at lambda=" + std::to_string(l));
        if (!flat && !(j.d1 > 0.0 && j.d2 < 0.0 && j.d3 > 0.0))
            fail("derivative sign pattern violated at lambda=" + std::to_string(l));
        if (i > 0) {
            if (j.v < js[i - 1].v * (1.0 - 1e-12)) fail("phi decreasing near lambda=" + std::to_string(l));
            if (j.d1 > js[i - 1].d1 * (1.0 + 1e-12)) fail("phi' increasing near lambda=" + std::to_string(l));
        }
        const double conc = (l * j.d1 - j.v) / j.v;
        const double second = (-0.5 * l * l * j.d2 - j.v) / j.v;
        rep.worst_concavity = std::max(rep.worst_concavity, conc);
        rep.worst_second_order = std::max(rep.worst_second_order, second);
        for (std::size_t k = i + 1; k < grid.size(); ++k) {
            const double ratio = grid[k] / l;
            rep.worst_subadditivity = std::max(rep.worst_subadditivity, (js[k].v - ratio * j.v) / (ratio * j.v));
        }
    }
    if (rep.worst_concavity > 1e-12) fail("phi(l) >= l phi'(l) violated");
    if (rep.worst_second_order > 1e-12) fail("phi(l) >= -l^2 phi''(l)/2 violated");
    if (rep.worst_subadditivity > 1e-12) fail("phi(l x) <= l phi(x) violated");
    if (s_->levy.has_density() && !s_->levy.is_zero() && s_->levy.kind() != LevyKind::functional) {
        auto r = s_->levy.integrability();
        rep.integrability = r.value;
        if (!r.converged || !std::isfinite(r.value)) fail("integral of min(1,s) nu(ds) is not finite");
    }
    return rep;
}

std::string BernsteinModel::describe() const {
    std::ostringstream os;
    os << s_->tag;
    switch (s_->family) {
        case Family::stable: os << "(alpha=" << s_->alpha << ")"; break;
        case Family::log_stable: os << "(alpha=" << s_->alpha << ", sigma=" << s_->sigma << ")"; break;
        case Family::drift: break;
        default: os << "[" << (s_->base ? s_->base->describe() : s_->levy.describe()) << "]"; break;
    }
    if (s_->b > 0.0) os << " + drift " << s_->b;
    return os.str();
}

}  // namespace subdense
