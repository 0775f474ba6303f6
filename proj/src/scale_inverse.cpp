#include "subdense/scale_inverse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace subdense {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGolden = 0.6180339887498949;

// Golden-section search for the max (sign=+1) or min (sign=-1) of f on
// [a, b] in log coordinates.
double golden_polish(const RealFn& f, double a, double b, double sign) {
    double la = std::log(a), lb = std::log(b);
    double c = lb - kGolden * (lb - la);
    double d = la + kGolden * (lb - la);
    double fc = sign * f(std::exp(c));
    double fd = sign * f(std::exp(d));
    for (int it = 0; it < 60 && lb - la > 1e-12; ++it) {
        if (fc > fd) {
            lb = d;
            d = c;
            fd = fc;
            c = lb - kGolden * (lb - la);
            fc = sign * f(std::exp(c));
        } else {
            la = c;
            c = d;
            fc = fd;
            d = la + kGolden * (lb - la);
            fd = sign * f(std::exp(d));
        }
    }
    return sign * std::max(fc, fd);
}

double scan_extreme(const RealFn& f, double lo, double hi, double sign, int per_decade) {
    const auto grid = log_grid(lo, hi, per_decade);
    std::size_t best = 0;
    double best_val = -kInf;
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        vals[i] = sign * f(grid[i]);
        if (vals[i] > best_val) {
            best_val = vals[i];
            best = i;
        }
    }
    if (grid.size() < 3) return sign * best_val;
    const double a = grid[best == 0 ? 0 : best - 1];
    const double b = grid[std::min(best + 1, grid.size() - 1)];
    const double polished = sign * golden_polish(f, a, b, sign);
    return sign * std::max(best_val, polished);
}

const char* d2_lower_name = "WLSC(α−2), α>0";
const char* d2_upper_name = "WUSC(β−2), β<1";
const char* phi_lower_name = "φ ∈ WLSC(α), α>0";
const char* phi_upper_name = "φ ∈ WUSC(β), β<1";

}  // namespace

const char* to_string(Side s) { return s == Side::lower ? "lower" : "upper"; }

std::vector<double> log_grid(double lo, double hi, int per_decade) {
    if (!(lo > 0.0) || !(hi >= lo)) throw DomainError("log grid needs 0 < lo <= hi");
    if (hi == lo) return {lo};
    const int n = std::max(2, static_cast<int>(std::ceil(per_decade * std::log10(hi / lo))) + 1);
    std::vector<double> g(static_cast<std::size_t>(n));
    const double step = std::log(hi / lo) / (n - 1);
    for (int i = 0; i < n; ++i) g[i] = lo * std::exp(step * i);
    g.front() = lo;
    g.back() = hi;
    return g;
}

double running_sup(const RealFn& f, double r, bool nondecreasing, double floor_ratio) {
    if (!(r > 0.0)) throw DomainError("running sup needs r > 0");
    if (nondecreasing) return f(r);
    const double lo = std::max(r * floor_ratio, std::numeric_limits<double>::min());
    return scan_extreme(f, lo, r, +1.0, 16);
}

double running_inf_from(const RealFn& f, double r, bool nondecreasing, double ceil_ratio) {
    if (!(r > 0.0)) throw DomainError("running inf needs r > 0");
    if (nondecreasing) return f(r);
    const double hi = std::min(r * ceil_ratio, std::numeric_limits<double>::max());
    return scan_extreme(f, r, hi, -1.0, 16);
}

double generalized_inverse(const RealFn& f_star, double s, InverseSide side) {
    // Invariant for right: f*(lo) <= s < f*(hi); for left: f*(lo) < s <= f*(hi).
    auto below = [&](double r) {
        const double v = f_star(r);
        return side == InverseSide::right ? v <= s : v < s;
    };
    double lv = 0.0, hv = 0.0;
    if (below(1.0)) {
        lv = 0.0;
        double step = 1.0;
        hv = lv + step;
        while (below(std::exp(hv))) {
            lv = hv;
            step *= 2.0;
            hv = lv + step;
            if (hv > 700.0) {
                if (below(std::exp(700.0))) return kInf;
                hv = 700.0;
                break;
            }
        }
    } else {
        hv = 0.0;
        double step = 1.0;
        lv = hv - step;
        while (!below(std::exp(lv))) {
            hv = lv;
            step *= 2.0;
            lv = hv - step;
            if (lv < -700.0) {
                if (!below(std::exp(-700.0)))
                    throw DomainError("generalized inverse: level s is at or below f*(0+)");
                lv = -700.0;
                break;
            }
        }
    }
    for (int it = 0; it < 300 && hv - lv > 1e-14 * std::max(1.0, std::abs(lv)); ++it) {
        const double mid = 0.5 * (lv + hv);
        if (below(std::exp(mid)))
            lv = mid;
        else
            hv = mid;
    }
    return std::exp(0.5 * (lv + hv));
}

double concentration_K(const BernsteinModel& m, double r) {
    if (!(r > 0.0)) throw DomainError("K(r) needs r > 0");
    if (m.levy().is_zero()) return 0.0;
    return m.levy().second_moment_below(r) / (r * r);
}

double concentration_h(const BernsteinModel& m, double r) {
    if (!(r > 0.0)) throw DomainError("h(r) needs r > 0");
    if (m.levy().is_zero()) return 0.0;
    return concentration_K(m, r) + m.levy().tail(r);
}

double concentration_h_from_K(const BernsteinModel& m, double r) {
    if (m.levy().is_zero()) return 0.0;
    auto res = quad::integrate_log_side([&m](double s) { return concentration_K(m, s) / s; }, r, +1.0,
                                        {1e-10, 0.0, 4000});
    if (!res.converged) throw ModelInvalidError("integral of K(s)/s did not converge");
    return 2.0 * res.value;
}

double psi_real(const BernsteinModel& m, double xi) {
    if (m.degenerate() || xi == 0.0) return 0.0;
    return m.increment(0.0, std::abs(xi)).real();
}

double psi_star(const BernsteinModel& m, double r) {
    if (!(r > 0.0)) throw DomainError("psi* needs r > 0");
    if (m.degenerate()) return 0.0;
    const double value = running_sup([&m](double xi) { return psi_real(m, xi); }, r);
    if (m.levy().has_density() && !m.levy().is_zero()) {
        const double h = concentration_h(m, 1.0 / r);
        if (!(value >= h / 24.0 && value <= 2.0 * h)) {
            std::ostringstream os;
            os << "psi*(" << r << ")=" << value << " outside [h/24, 2h] with h(1/r)=" << h;
            throw NumericalIntegrityError(os.str());
        }
    }
    return value;
}

double psi_inverse(const BernsteinModel& m, double s) {
    return generalized_inverse([&m](double r) { return psi_star(m, r); }, s, InverseSide::right);
}

ScalingReport estimate_scaling(const RealFn& f, double lo, double hi, Side side, const std::string& target,
                               int per_decade) {
    const auto grid = log_grid(lo, hi, per_decade);
    const std::size_t n = grid.size();
    std::vector<double> lx(n), lf(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = f(grid[i]);
        if (!(v > 0.0) || !std::isfinite(v)) {
            std::ostringstream os;
            os << target << " vanishes or is not finite at x=" << grid[i] << " (value " << v << ")";
            throw DomainError(os.str());
        }
        lx[i] = std::log(grid[i]);
        lf[i] = std::log(v);
    }
    const double sign = side == Side::lower ? 1.0 : -1.0;
    double idx = n > 1 ? sign * kInf : 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double sl = (lf[j] - lf[i]) / (lx[j] - lx[i]);
            idx = side == Side::lower ? std::min(idx, sl) : std::max(idx, sl);
        }
    double cst = 1.0;
    if (n > 1) {
        cst = side == Side::lower ? kInf : 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double c = std::exp(lf[j] - lf[i] - idx * (lx[j] - lx[i]));
                cst = side == Side::lower ? std::min(cst, c) : std::max(cst, c);
            }
    }
    ScalingReport rep;
    rep.target = target;
    rep.side = side;
    rep.index = idx;
    rep.constant = cst;
    rep.range_lo = lo;
    rep.range_hi = hi;
    rep.pass = std::isfinite(idx) && (side == Side::lower ? (cst > 0.0 && cst <= 1.0 + 1e-9) : cst >= 1.0 - 1e-9);
    return rep;
}

ScalingReport scaling_with_threshold(const RealFn& f, const ScalingGrid& g, Side side,
                                     const std::function<bool(double)>& accept, const std::string& target) {
    const auto grid = log_grid(g.lo, g.hi, g.per_decade);
    const std::size_t n = grid.size();
    std::vector<double> lx(n), lf(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = f(grid[i]);
        if (!(v > 0.0) || !std::isfinite(v)) {
            std::ostringstream os;
            os << target << " vanishes or is not finite at x=" << grid[i];
            throw DomainError(os.str());
        }
        lx[i] = std::log(grid[i]);
        lf[i] = std::log(v);
    }
    const bool lower = side == Side::lower;
    auto better = [lower](double a, double b) { return lower ? std::min(a, b) : std::max(a, b); };
    const double init = lower ? kInf : -kInf;
    // suffix[i]: extreme slope over pairs with both points at index >= i.
    std::vector<double> suffix(n, init);
    for (std::size_t a = n - 1; a-- > 0;) {
        double row = init;
        for (std::size_t b = a + 1; b < n; ++b) row = better(row, (lf[b] - lf[a]) / (lx[b] - lx[a]));
        suffix[a] = better(row, suffix[a + 1]);
    }
    std::size_t start = n;
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (accept(suffix[i])) {
            start = i;
            break;
        }
    ScalingReport rep;
    if (start == n) {
        rep = estimate_scaling(f, g.lo, g.hi, side, target, g.per_decade);
        rep.x0 = g.hi;
        rep.pass = false;
        return rep;
    }
    rep = estimate_scaling(f, grid[start], g.hi, side, target, g.per_decade);
    rep.x0 = start == 0 ? 0.0 : grid[start];
    rep.pass = rep.pass && accept(rep.index);
    return rep;
}

TailScalingResult tail_scaling_check(const BernsteinModel& m, double x0, double a, int per_decade) {
    if (!(a > 0.0)) throw DomainError("tail scaling check needs alpha > 0");
    TailScalingResult out;
    if (m.levy().is_zero()) {
        out.pass = true;
        return out;
    }
    const double lo = std::max(x0 * (1.0 + 1e-12), 3.1622776601683794e-4);
    const double hi = 3.1622776601683795e3;
    if (!(hi > lo)) {
        out.pass = true;
        return out;
    }
    const auto grid = log_grid(lo, hi, per_decade);
    std::vector<double> g(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) g[i] = m.levy().tail(1.0 / grid[i]);
    double idx = kInf, worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = i + 1; j < grid.size(); ++j) {
            const double ratio = grid[j] / grid[i];
            idx = std::min(idx, std::log(g[j] / g[i]) / std::log(ratio));
            worst = std::max(worst, g[i] / g[j] * std::pow(ratio, a));
        }
    out.index = idx;
    out.constant = worst;
    out.pass = idx >= a - 1e-6;
    return out;
}

std::vector<std::string> ScalingAudit::failures(bool d2l, bool d2u, bool pl, bool pu) const {
    std::vector<std::string> out;
    if (degenerate) {
        out.push_back("degenerate: φ″≡0");
        return out;
    }
    if (d2l && !wlsc_d2) out.push_back(d2_lower_name);
    if (d2u && !wusc_d2) out.push_back(d2_upper_name);
    if (pl && !wlsc_phi) out.push_back(phi_lower_name);
    if (pu && !wusc_phi) out.push_back(phi_upper_name);
    return out;
}

double ScalingAudit::x0_for(bool d2l, bool d2u, bool pl, bool pu) const {
    double x = 0.0;
    if (d2l) x = std::max(x, d2_lower.x0);
    if (d2u) x = std::max(x, d2_upper.x0);
    if (pl) x = std::max(x, phi_lower.x0);
    if (pu) x = std::max(x, phi_upper.x0);
    return x;
}

ScalingAudit scaling_audit(const BernsteinModel& m, const ScalingGrid& grid) {
    ScalingAudit a;
    if (m.degenerate()) {
        a.degenerate = true;
        return a;
    }
    const RealFn d2 = [&m](double x) { return -m.derivative(x, 2); };
    const RealFn ph = [&m](double x) { return m.phi(x); };
    a.d2_lower = scaling_with_threshold(
        d2, grid, Side::lower, [](double idx) { return idx + 2.0 >= kIndexMargin; }, "-phi''");
    a.d2_upper = scaling_with_threshold(
        d2, grid, Side::upper, [](double idx) { return idx + 2.0 <= 1.0 - kIndexMargin; }, "-phi''");
    a.phi_lower =
        scaling_with_threshold(ph, grid, Side::lower, [](double idx) { return idx >= kIndexMargin; }, "phi");
    a.phi_upper = scaling_with_threshold(
        ph, grid, Side::upper, [](double idx) { return idx <= 1.0 - kIndexMargin; }, "phi");
    a.alpha_hat = a.d2_lower.index + 2.0;
    a.beta_hat = a.d2_upper.index + 2.0;
    a.wlsc_d2 = a.d2_lower.pass;
    a.wusc_d2 = a.d2_upper.pass;
    a.wlsc_phi = a.phi_lower.pass;
    a.wusc_phi = a.phi_upper.pass;
    for (const ScalingReport* r : {&a.d2_lower, &a.d2_upper, &a.phi_lower, &a.phi_upper})
        if (r->pass) a.x0 = std::max(a.x0, r->x0);
    return a;
}

void require_hypotheses(const ScalingAudit& a, bool d2l, bool d2u, bool pl, bool pu, const std::string& context) {
    const auto f = a.failures(d2l, d2u, pl, pu);
    if (f.empty()) return;
    std::string msg = context + ": ";
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (i) msg += "; ";
        msg += f[i];
        if (!a.degenerate) msg += ": failed";
    }
    throw CapabilityError(msg);
}

VarphiProfile::VarphiProfile(BernsteinModel m) : m_(std::move(m)) {
    if (m_.degenerate()) throw CapabilityError("varphi profile: degenerate: φ″≡0");
    monotone_ = true;
    double prev = 0.0;
    for (double x : log_grid(1e-8, 1e8, 8)) {
        const double v = value(x);
        if (v < prev * (1.0 - 1e-12)) {
            monotone_ = false;
            break;
        }
        prev = v;
    }
}

double VarphiProfile::value(double x) const { return m_.varphi(x); }

double VarphiProfile::sup(double r) const {
    return running_sup([this](double x) { return value(x); }, r, monotone_);
}

double VarphiProfile::inf_from(double r) const {
    return running_inf_from([this](double x) { return value(x); }, r, monotone_);
}

double VarphiProfile::inverse(double s) const {
    return generalized_inverse([this](double r) { return sup(r); }, s, InverseSide::right);
}

double VarphiProfile::lower_inverse(double s) const {
    return generalized_inverse([this](double r) { return inf_from(r); }, s, InverseSide::left);
}

InequalityAudit inequality_audit(const BernsteinModel& m, const ScalingAudit& sa, int per_decade) {
    InequalityAudit out;
    if (m.degenerate()) {
        out.skipped = true;
        out.notice = "φ″≡0";
        return out;
    }
    const double lo = std::max(sa.x0 * (1.0 + 1e-9), 3.1622776601683794e-4);
    const double hi = 3.1622776601683795e3;
    const auto grid = log_grid(lo, hi, per_decade);
    const VarphiProfile prof(m);
    const double b = m.drift();

    auto line = [&](std::string name, std::string statement, bool hyp, const RealFn& ratio,
                    bool upper_matters) {
        InequalityLine l;
        l.name = std::move(name);
        l.statement = std::move(statement);
        l.hypothesis = hyp;
        l.lower = kInf;
        l.upper = -kInf;
        try {
            for (double x : grid) {
                const double r = ratio(x);
                l.lower = std::min(l.lower, r);
                l.upper = std::max(l.upper, r);
            }
        } catch (const CapabilityError& e) {
            l.note = e.what();
            l.hypothesis = false;
        }
        const double c = upper_matters ? l.upper : 1.0 / l.lower;
        const bool bounded = std::isfinite(c) && c <= 1e6 && l.lower > 0.0;
        l.pass = !l.hypothesis || bounded;
        if (!l.hypothesis && l.note.empty()) l.note = "hypothesis not met; constant reported only";
        out.pass = out.pass && l.pass;
        out.lines.push_back(std::move(l));
    };

    line("third_derivative", "-phi''(x) >= C x phi'''(x)", sa.wlsc_d2,
         [&](double x) {
             const Jet j = m.jet(x);
             return -j.d2 / (x * j.d3);
         },
         false);
    line("euler_ratio", "x phi'(x) <= phi(x) <= C x phi'(x)", sa.wlsc_phi,
         [&](double x) {
             const Jet j = m.jet(x);
             return j.v / (x * j.d1);
         },
         true);
    {
        // the left inequality must hold with constant 1
        auto& l = out.lines.back();
        if (l.lower < 1.0 - 1e-12) {
            l.pass = false;
            out.pass = false;
            l.note = "x phi'(x) <= phi(x) violated";
        }
    }
    const double beta = std::min(sa.beta_hat, 1.0 - 1e-9);
    line("derivative_upper", "phi'(x) <= C/(1-beta) x(-phi''(x)) + b", sa.wusc_d2,
         [&](double x) {
             const Jet j = m.jet(x);
             return (j.d1 - b) * (1.0 - beta) / (x * -j.d2);
         },
         true);
    line("varphi_sup_vs_phi", "varphi*(x) ~ phi(x)", sa.wlsc_d2 && sa.wusc_d2 && b == 0.0,
         [&](double x) { return prof.sup(x) / m.phi(x); }, true);
    {
        auto& l = out.lines.back();
        if (l.hypothesis && !(l.lower > 1e-6)) {
            l.pass = false;
            out.pass = false;
        }
    }
    const auto coarse = log_grid(lo, hi, 1);
    {
        InequalityLine l;
        l.name = "psi_vs_varphi_inverse";
        l.statement = "psi^{-1}(r) ~ varphi^{-1}(r)";
        l.hypothesis = sa.wlsc_d2;
        l.lower = kInf;
        l.upper = -kInf;
        for (double x : coarse) {
            const double r = prof.value(x);
            const double q = psi_inverse(m, r) / prof.inverse(r);
            l.lower = std::min(l.lower, q);
            l.upper = std::max(l.upper, q);
        }
        const bool bounded = std::isfinite(l.upper) && l.upper <= 1e6 && l.lower >= 1e-6;
        l.pass = !l.hypothesis || bounded;
        out.pass = out.pass && l.pass;
        out.lines.push_back(std::move(l));
    }
    if (m.levy().has_density()) {
        line("second_moment", "C(-phi''(x)) <= int_(0,1/x) s^2 nu(ds)", sa.wlsc_d2,
             [&](double x) { return m.levy().second_moment_below(1.0 / x) / -m.derivative(x, 2); }, false);
    } else {
        InequalityLine l;
        l.name = "second_moment";
        l.statement = "C(-phi''(x)) <= int_(0,1/x) s^2 nu(ds)";
        l.note = "Levy density unavailable; skipped";
        out.lines.push_back(std::move(l));
    }
    line("exponent_vs_varphi", "phi(x) - x phi'(x) <= C varphi(x)", sa.wlsc_d2,
         [&](double x) {
             const Jet j = m.jet(x);
             return (j.v - x * j.d1) / (x * x * -j.d2);
         },
         true);
    return out;
}

}  // namespace subdense
