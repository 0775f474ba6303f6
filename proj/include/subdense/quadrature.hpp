#pragma once

// Adaptive quadrature used throughout the engine: global-adaptive
// Gauss-Kronrod (10/21), log-substituted integrals over (0, inf), and
// oscillatory tails summed panel-by-panel with Wynn's epsilon algorithm.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace subdense::quad {

struct Result {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
    bool converged = true;

    Result& operator+=(const Result& o) {
        value += o.value;
        error += o.error;
        evaluations += o.evaluations;
        converged = converged && o.converged;
        return *this;
    }
};

struct Tolerance {
    double rel = 1e-10;
    double abs = 0.0;
    int max_intervals = 4000;
};

namespace detail {

// Gauss-Kronrod 21-point abscissae and weights (QUADPACK qk21).
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208545107054, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gk21(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = fc * kWgk[10];
    double resg = 0.0;
    double resabs = std::abs(resk);
    std::array<double, 21> vals{};
    vals[10] = fc;
    for (int j = 0; j < 10; ++j) {
        const double dx = h * kXgk[j];
        const double f1 = f(c - dx);
        const double f2 = f(c + dx);
        vals[j] = f1;
        vals[20 - j] = f2;
        resk += kWgk[j] * (f1 + f2);
        resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    // Gauss nodes are the odd-indexed Kronrod nodes; the centre is not a
    // 10-point Gauss node.
    const double mean = resk * 0.5;
    double resasc = kWgk[10] * std::abs(fc - mean);
    for (int j = 0; j < 10; ++j)
        resasc += kWgk[j] * (std::abs(vals[j] - mean) + std::abs(vals[20 - j] - mean));
    double err = std::abs((resk - resg) * h);
    resasc *= std::abs(h);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    if (resabs * std::abs(h) > std::numeric_limits<double>::min() / (50 * eps))
        err = std::max(50 * eps * resabs * std::abs(h), err);
    return {a, b, resk * h, err};
}

}  // namespace detail

/// Global adaptive Gauss-Kronrod on [a, b] (bisect the worst segment).
template <class F>
Result integrate(F&& f, double a, double b, const Tolerance& tol = {}) {
    Result out;
    if (a == b) return out;
    std::priority_queue<detail::Segment> heap;
    auto first = detail::gk21(f, a, b);
    heap.push(first);
    double total = first.value;
    double err = first.error;
    out.evaluations = 21;
    int intervals = 1;
    while (err > std::max(tol.abs, tol.rel * std::abs(total))) {
        if (intervals >= tol.max_intervals) {
            out.converged = false;
            break;
        }
        auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > std::min(worst.a, worst.b) && mid < std::max(worst.a, worst.b))) {
            heap.push(worst);
            out.converged = false;
            break;
        }
        auto left = detail::gk21(f, worst.a, mid);
        auto right = detail::gk21(f, mid, worst.b);
        out.evaluations += 42;
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++intervals;
    }
    // Re-sum to shed accumulated rounding from the running updates.
    double sum = 0.0, esum = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        esum += heap.top().error;
        heap.pop();
    }
    out.value = sum;
    out.error = esum;
    return out;
}

/// Integrate over consecutive breakpoints, each piece adaptively.
template <class F>
Result integrate_pieces(F&& f, const std::vector<double>& breaks, const Tolerance& tol = {}) {
    Result out;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) out += integrate(f, breaks[i], breaks[i + 1], tol);
    return out;
}

/// Wynn's epsilon algorithm on a sequence of partial sums.
class WynnEpsilon {
public:
    explicit WynnEpsilon(double tol = 1e-14) : tol_(tol) {}

    /// Feed the next partial sum; returns the current extrapolated limit.
    double push(double partial_sum) {
        constexpr double tiny = 1e-300;
        constexpr double huge = 1e300;
        table_.push_back(partial_sum);
        double carry = 0.0;
        for (std::size_t j = table_.size() - 1; j > 0; --j) {
            const double prev = carry;
            carry = table_[j - 1];
            const double diff = table_[j] - carry;
            table_[j - 1] = std::abs(diff) <= tiny ? huge : prev + 1.0 / diff;
        }
        double value = table_.size() % 2 == 1 ? table_[0] : table_[1];
        if (!(std::abs(value) < 1e-2 * huge)) value = last_;
        delta_ = std::abs(value - last_);
        stable_ = delta_ <= tol_ ? stable_ + 1 : 0;
        last_ = value;
        return value;
    }

    double estimate() const { return last_; }
    double last_change() const { return delta_; }
    bool converged() const { return stable_ >= 3; }
    void set_tolerance(double tol) { tol_ = tol; }

private:
    std::vector<double> table_;
    double tol_;
    double last_ = 0.0;
    double delta_ = std::numeric_limits<double>::infinity();
    int stable_ = 0;
};

/// Sum of an oscillatory integrand over [a, inf) in panels of length
/// `panel`, accelerated by Wynn's epsilon. `envelope(x)` bounds |f| beyond x
/// and lets the sum stop early once the remaining tail is negligible.
template <class F, class Env>
Result oscillatory_tail(F&& f, Env&& envelope, double a, double panel, double abs_tol,
                        int max_panels = 20000) {
    Result out;
    WynnEpsilon eps(abs_tol);
    double partial = 0.0;
    double scale = 0.0;
    Tolerance panel_tol{1e-13, abs_tol * 1e-3, 200};
    for (int k = 0; k < max_panels; ++k) {
        const double lo = a + k * panel;
        const double hi = lo + panel;
        auto piece = integrate(f, lo, hi, panel_tol);
        out.evaluations += piece.evaluations;
        out.error += piece.error;
        partial += piece.value;
        scale = std::max(scale, std::abs(piece.value));
        const double acc = eps.push(partial);
        const double tail_bound = envelope(hi) * panel;
        if (tail_bound < abs_tol * 1e-3 && k > 2) {
            out.value = partial;
            return out;
        }
        if (k >= 8 && eps.converged()) {
            out.value = acc;
            out.error += eps.last_change();
            return out;
        }
        eps.set_tolerance(std::max(abs_tol, 1e-15 * scale));
    }
    out.value = eps.estimate();
    out.error += eps.last_change();
    out.converged = false;
    return out;
}

/// One side of a log-substituted integral: sign=+1 gives the integral of g
/// over [pivot, inf), sign=-1 over (0, pivot]. Chunks of growing width in
/// v = log(s/pivot) are added until two consecutive chunks are negligible.
template <class F>
Result integrate_log_side(F&& g, double pivot, double sign, const Tolerance& tol = {}) {
    auto h = [&](double v) {
        const double s = pivot * std::exp(sign * v);
        if (s == 0.0 || !std::isfinite(s)) return 0.0;
        return g(s) * s;
    };
    constexpr double kMaxV = 700.0;
    Result acc;
    double lo = 0.0;
    double width = 2.0;
    int quiet = 0;
    while (lo < kMaxV) {
        const double hi = std::min(lo + width, kMaxV);
        Tolerance t = tol;
        t.abs = std::max(tol.abs, tol.rel * std::abs(acc.value)) * 0.1;
        acc += integrate(h, lo, hi, t);
        const double thresh = std::max(tol.abs, tol.rel * std::abs(acc.value)) * 1e-2;
        const double last = std::abs(h(hi)) * width;
        quiet = last <= thresh ? quiet + 1 : 0;
        if (quiet >= 2) return acc;
        lo = hi;
        width *= 1.5;
    }
    acc.converged = false;
    return acc;
}

/// Integral of g over (0, inf), split at `pivot`.
template <class F>
Result integrate_half_line(F&& g, double pivot, const Tolerance& tol = {}) {
    Result out = integrate_log_side(g, pivot, +1.0, tol);
    out += integrate_log_side(g, pivot, -1.0, tol);
    return out;
}

}  // namespace subdense::quad
