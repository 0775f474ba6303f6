#include "subdense/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "subdense/density.hpp"
#include "subdense/errors.hpp"
#include "subdense/parallel.hpp"

namespace subdense {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool has_density(const BernsteinModel& m) {
    const auto k = m.levy().kind();
    return k != LevyKind::none && k != LevyKind::implicit;
}

// Largest nu(y)/nu(x), y >= x, accepted as "almost monotone".
constexpr double kMonotoneLimit = 1e3;

}  // namespace

const char* to_string(Regime r) { return r == Regime::bulk ? "bulk" : "tail"; }

ZetaEta::ZetaEta(VarphiProfile profile, double x0) : profile_(std::move(profile)), x0_(x0) {
    if (x0_ > 0.0) A_ = profile_.sup(x0_) / profile_.model().phi(x0_);
}

double ZetaEta::zeta(double s) const {
    if (s < 0.0 || std::isnan(s)) throw DomainError("zeta needs s >= 0");
    if (s == 0.0) return kInf;
    if (x0_ == 0.0 || s <= 1.0 / x0_) return profile_.sup(1.0 / s);
    return A_ * profile_.model().phi(1.0 / s);
}

double ZetaEta::eta(double s) const {
    if (s == 0.0) return kInf;
    return zeta(s) / s;
}

double ZetaEta::doubling_constant(double lo, double hi, int per_decade) const {
    double worst = 0.0;
    for (double s : log_grid(lo, hi, per_decade)) worst = std::max(worst, zeta(s / 2) / zeta(s));
    return worst;
}

BoundsEngine::BoundsEngine(BernsteinModel m, const ScalingGrid& grid)
    : BoundsEngine(m, scaling_audit(m, grid)) {}

BoundsEngine::BoundsEngine(BernsteinModel m, ScalingAudit audit)
    : m_(std::move(m)), audit_(std::move(audit)), profile_(m_), zeta_(profile_, audit_.x0_for(true, false, false, false)) {
}

double BoundsEngine::x0_upper() const { return audit_.x0_for(true, false, false, false); }
double BoundsEngine::x0_lower() const { return audit_.x0_for(true, true, false, false); }
double BoundsEngine::x0_sharp() const { return audit_.x0_for(true, false, true, true); }

double BoundsEngine::window(double x0) const { return x0 > 0.0 ? 1.0 / profile_.value(x0) : kInf; }

void BoundsEngine::require_window(double t, double x0, const char* what) const {
    if (!(t > 0.0)) throw DomainError(std::string(what) + ": t must be positive");
    const double w = window(x0);
    if (!(t < w)) {
        std::ostringstream os;
        os << what << ": t=" << t << " outside 0 < t < 1/varphi(x0) = " << w << " (x0=" << x0 << ")";
        throw DomainError(os.str());
    }
}

double BoundsEngine::compensator_shift(double t) const {
    if (m_.levy().kind() == LevyKind::none) return t * m_.drift();
    const double r = 1.0 / psi_inverse(m_, 1.0 / t);
    return t * m_.compensator(r);
}

double BoundsEngine::upper_bound_general(double t, double offset) const {
    require_hypotheses(audit_, true, false, false, false, "upper bound");
    require_window(t, x0_upper(), "upper bound");
    const double scale = profile_.inverse(1.0 / t);
    const double z = zeta_.zeta(std::abs(offset));
    return scale * std::min(1.0, t * z);
}

double BoundsEngine::upper_envelope(double t, double offset) const {
    const double scale = profile_.inverse(1.0 / t);
    if (offset == 0.0) return scale;
    return std::min(scale, t * zeta_.eta(std::abs(offset)));
}

double BoundsEngine::upper_bound_density(double t, double offset) const {
    require_hypotheses(audit_, true, false, false, false, "density upper bound");
    if (!has_density(m_))
        throw CapabilityError("density upper bound: no Levy density available; use upper_bound_general");
    const double mono = m_.levy().monotonicity_ratio();
    if (!(mono <= kMonotoneLimit))
        throw CapabilityError("density upper bound: Levy density is not almost monotone; use upper_bound_general");
    require_window(t, x0_upper(), "density upper bound");
    return upper_envelope(t, offset);
}

EnvelopeReport BoundsEngine::envelope_audit(const std::vector<double>& t_grid, const std::vector<double>& x_grid) const {
    require_hypotheses(audit_, true, false, false, false, "envelope audit");
    struct Job {
        double t, x;
    };
    std::vector<Job> jobs;
    const double w = window(x0_upper());
    for (double t : t_grid)
        if (t < w)
            for (double x : x_grid)
                if (x > t * m_.drift()) jobs.push_back({t, x});
    std::vector<double> shift(jobs.size());
    for (std::size_t i = 0; i < jobs.size(); ++i)
        shift[i] = i > 0 && jobs[i].t == jobs[i - 1].t ? shift[i - 1] : compensator_shift(jobs[i].t);
    std::vector<double> ratio(jobs.size(), 0.0);
    parallel_for(jobs.size(), [&](std::size_t i) {
        const double p = density_bromwich(m_, jobs[i].t, jobs[i].x).value;
        ratio[i] = p / upper_envelope(jobs[i].t, jobs[i].x - shift[i]);
    });
    EnvelopeReport rep;
    rep.points = jobs.size();
    if (!jobs.empty()) {
        rep.constant = *std::max_element(ratio.begin(), ratio.end());
        rep.min_ratio = *std::min_element(ratio.begin(), ratio.end());
    }
    return rep;
}

LowerRegion BoundsEngine::lower_bound_region(double t, double rho1, double rho2) const {
    require_hypotheses(audit_, true, true, false, false, "lower bound");
    if (!(t > 0.0)) throw DomainError("lower bound: t must be positive");
    if (rho1 < 0.0 || rho2 < 0.0) throw DomainError("lower bound: rho1, rho2 must be >= 0");
    LowerRegion r;
    r.scale = profile_.inverse(1.0 / t);
    r.center = t * m_.derivative(r.scale, 1);
    r.lo = r.center - rho1 / r.scale;
    r.hi = r.center + rho2 / r.scale;
    r.in_window = t < window(x0_lower());
    return r;
}

LowerCheck BoundsEngine::lower_bound_check(double t, double rho1, double rho2, int points) const {
    LowerCheck c;
    c.region = lower_bound_region(t, rho1, rho2);
    const double floor = t * m_.drift();
    const double lo = std::max(c.region.lo, floor + 1e-9 * std::max(std::abs(c.region.center), 1e-300));
    const double hi = c.region.hi;
    if (hi < lo) throw DomainError("lower bound: the interval lies left of the support");
    const int n = hi > lo ? std::max(points, 2) : 1;
    for (int i = 0; i < n; ++i) c.xs.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
    c.ps.assign(c.xs.size(), 0.0);
    parallel_for(c.xs.size(), [&](std::size_t i) { c.ps[i] = density_bromwich(m_, t, c.xs[i]).value; });
    c.constant = kInf;
    for (double p : c.ps) c.constant = std::min(c.constant, p / c.region.scale);
    return c;
}

LevyLowerReport BoundsEngine::levy_lower_check(const std::vector<double>& xs, double t) const {
    if (!has_density(m_)) throw CapabilityError("Levy lower check: no Levy density available");
    LevyLowerReport r;
    r.second_min = r.phi_min = r.density_min = kInf;
    std::vector<double> p(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) { p[i] = density_bromwich(m_, t, xs[i]).value; });
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double x = xs[i];
        const double nu = m_.levy().density(x);
        const double a = nu * x * x * x / -m_.derivative(1.0 / x, 2);
        const double b = nu * x / m_.phi(1.0 / x);
        const double c = p[i] / (t * nu);
        r.second_min = std::min(r.second_min, a);
        r.second_max = std::max(r.second_max, a);
        r.phi_min = std::min(r.phi_min, b);
        r.phi_max = std::max(r.phi_max, b);
        r.density_min = std::min(r.density_min, c);
        r.density_max = std::max(r.density_max, c);
    }
    r.pass = r.second_min > 0 && r.phi_min > 0 && r.density_min > 0 && std::isfinite(r.second_max) &&
             std::isfinite(r.phi_max) && std::isfinite(r.density_max);
    return r;
}

void BoundsEngine::require_sharp() const {
    require_hypotheses(audit_, true, false, true, true, "sharp estimate");
    if (m_.drift() != 0.0) throw CapabilityError("sharp estimate: requires b = 0");
    if (!has_density(m_)) throw CapabilityError("sharp estimate: needs an almost monotone Levy density");
    if (!(m_.levy().monotonicity_ratio() <= kMonotoneLimit))
        throw CapabilityError("sharp estimate: Levy density is not almost monotone");
}

EstimateBand BoundsEngine::sharp_estimate(double t, double x, double chi1, double chi2) const {
    require_sharp();
    require_window(t, x0_sharp(), "sharp estimate");
    if (!(x > 0.0)) throw DomainError("sharp estimate: x must be positive");
    if (x0_sharp() > 0.0 && !(x < 1.0 / x0_sharp())) {
        std::ostringstream os;
        os << "sharp estimate: x=" << x << " outside x < 1/x0 = " << 1.0 / x0_sharp();
        throw DomainError(os.str());
    }
    if (!(0.0 < chi1 && chi1 < chi2)) throw DomainError("sharp estimate: need 0 < chi1 < chi2");
    EstimateBand band;
    const double inv = m_.inverse(1.0 / t);
    band.regime_coordinate = x * inv;
    if (band.regime_coordinate <= 1.0) {
        band.regime = Regime::bulk;
        band.lower_form = band.upper_form = density_saddle(m_, t, x).value;
    } else {
        band.regime = Regime::tail;
        band.lower_form = band.upper_form = t / x * m_.phi(1.0 / x);
    }
    band.plateau = band.regime_coordinate >= chi1 && band.regime_coordinate <= chi2;
    band.plateau_form = inv;
    return band;
}

SandwichReport BoundsEngine::sandwich_audit(const std::vector<double>& t_grid, const std::vector<double>& x_grid,
                                            double spread) const {
    SandwichReport rep;
    rep.spread_limit = spread;
    require_sharp();
    const double x_max = x0_sharp() > 0.0 ? 1.0 / x0_sharp() : kInf;
    for (double t : t_grid)
        for (double x : x_grid)
            if (x < x_max) rep.rows.push_back({t, x, Regime::bulk, 0.0, 0.0, 0.0});
    if (rep.rows.empty()) throw DomainError("sandwich audit: no grid point with x < 1/x0");
    sharp_estimate(rep.rows.front().t, rep.rows.front().x);
    parallel_for(rep.rows.size(), [&](std::size_t i) {
        auto& row = rep.rows[i];
        const auto band = sharp_estimate(row.t, row.x);
        row.regime = band.regime;
        row.form = band.upper_form;
        row.p = density_bromwich(m_, row.t, row.x).value;
        row.ratio = row.p / row.form;
    });
    rep.min_ratio = kInf;
    rep.max_ratio = 0.0;
    for (const auto& row : rep.rows) {
        rep.min_ratio = std::min(rep.min_ratio, row.ratio);
        rep.max_ratio = std::max(rep.max_ratio, row.ratio);
    }
    rep.pass = !rep.rows.empty() && rep.min_ratio > 0.0 && rep.max_ratio / rep.min_ratio <= spread;
    return rep;
}

}  // namespace subdense
