#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "subdense/errors.hpp"
#include "subdense/quadrature.hpp"

namespace subdense {

enum class LevyKind {
    none,        ///< nu = 0 (pure drift)
    power,       ///< c s^(-1-alpha)
    power_log,   ///< c s^(-1-alpha) log^sigma(2 + 1/s)
    tempered,    ///< c s^(-1-alpha) e^(-theta s)
    tabulated,   ///< log-log interpolated table with power-law ends
    functional,  ///< density supplied by a callable
    implicit,    ///< exponent known in closed form only; no density
};

const char* to_string(LevyKind kind);

/// Levy measure on (0, inf) with a density. Immutable; cheap to copy.
class LevyMeasure {
public:
    static LevyMeasure none();
    static LevyMeasure power(double c, double alpha);
    static LevyMeasure power_log(double c, double alpha, double sigma);
    static LevyMeasure tempered(double c, double alpha, double theta);
    /// `points` are (s, nu(s)) with strictly increasing s and positive values;
    /// below the first knot nu ~ s^p0, above the last nu ~ s^p_inf.
    static LevyMeasure tabulated(std::vector<std::pair<double, double>> points, double p0, double p_inf,
                                 double mono_constant);
    static LevyMeasure functional(std::function<double(double)> density, double mono_constant,
                                  std::string label);
    static LevyMeasure implicit(std::string label);

    LevyKind kind() const { return kind_; }
    bool is_zero() const { return kind_ == LevyKind::none; }
    bool has_density() const { return kind_ != LevyKind::implicit; }
    double c() const { return c_; }
    double alpha() const { return alpha_; }
    double sigma() const { return sigma_; }
    double theta() const { return theta_; }
    double mono_constant() const { return mono_; }
    const std::vector<std::pair<double, double>>& points() const { return points_; }
    std::pair<double, double> tail_exponents() const { return {p0_, p_inf_}; }

    /// nu(s) for s > 0. Throws CapabilityError for implicit measures.
    double density(double s) const;

    /// Knots where the density is not smooth (tabulated only).
    const std::vector<double>& knots() const { return knots_; }

    /// Integral of f(s) nu(s) over (lo, hi); lo may be 0 and hi may be inf.
    /// `pivot` is a scale where the integrand changes character.
    template <class F>
    quad::Result integrate(F&& f, double lo, double hi, double pivot,
                           const quad::Tolerance& tol = {1e-10, 0.0, 4000}) const;

    /// nu((r, inf)).
    double tail(double r) const;
    /// integral of s^2 nu(ds) over (0, r).
    double second_moment_below(double r) const;
    /// integral of s nu(ds) over (0, r).
    double first_moment_below(double r) const;
    /// integral of min(1, s) nu(ds); finite for a valid Levy measure.
    quad::Result integrability() const;
    /// Largest nu(y)/nu(x) over grid pairs y >= x (almost-monotonicity).
    double monotonicity_ratio() const;

    std::string describe() const;

private:
    void require_density(const char* what) const;

    LevyKind kind_ = LevyKind::none;
    double c_ = 0.0, alpha_ = 0.0, sigma_ = 0.0, theta_ = 0.0;
    double p0_ = 0.0, p_inf_ = 0.0, mono_ = 1.0;
    std::vector<std::pair<double, double>> points_;
    std::vector<double> knots_;
    std::vector<double> log_s_, log_v_;
    std::shared_ptr<const std::function<double(double)>> fn_;
    std::string label_;
};

template <class F>
quad::Result LevyMeasure::integrate(F&& f, double lo, double hi, double pivot, const quad::Tolerance& tol) const {
    quad::Result out;
    if (kind_ == LevyKind::none || !(hi > lo)) return out;
    require_density("integration against the Levy measure");
    auto g = [&](double s) {
        const double d = density(s);
        return d == 0.0 ? 0.0 : f(s) * d;
    };
    std::vector<double> cuts;
    if (pivot > lo && pivot < hi) cuts.push_back(pivot);
    for (double k : knots_)
        if (k > lo && k < hi) cuts.push_back(k);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    const bool open_left = lo <= 0.0;
    const bool open_right = !std::isfinite(hi);
    if (cuts.empty()) {
        if (open_left && open_right) return quad::integrate_half_line(g, pivot > 0 ? pivot : 1.0, tol);
        if (open_left) return quad::integrate_log_side(g, hi, -1.0, tol);
        if (open_right) return quad::integrate_log_side(g, lo, +1.0, tol);
        cuts = {lo, hi};
    } else {
        if (!open_left) cuts.insert(cuts.begin(), lo);
        if (!open_right) cuts.push_back(hi);
    }
    if (open_left) out += quad::integrate_log_side(g, cuts.front(), -1.0, tol);
    auto glog = [&](double v) {
        const double s = std::exp(v);
        return g(s) * s;
    };
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        out += quad::integrate(glog, std::log(cuts[i]), std::log(cuts[i + 1]), tol);
    if (open_right) out += quad::integrate_log_side(g, cuts.back(), +1.0, tol);
    return out;
}

}  // namespace subdense
