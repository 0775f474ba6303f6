#include "subdense/levy_measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace subdense {

const char* to_string(LevyKind kind) {
    switch (kind) {
        case LevyKind::none: return "none";
        case LevyKind::power: return "power";
        case LevyKind::power_log: return "power_log";
        case LevyKind::tempered: return "tempered";
        case LevyKind::tabulated: return "tabulated";
        case LevyKind::functional: return "functional";
        case LevyKind::implicit: return "implicit";
    }
    return "?";
}

LevyMeasure LevyMeasure::none() { return {}; }

LevyMeasure LevyMeasure::power(double c, double alpha) {
    if (!(c > 0.0)) throw ModelInvalidError("power Levy density needs c > 0");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ModelInvalidError("power Levy density needs 0 < alpha < 1");
    LevyMeasure m;
    m.kind_ = LevyKind::power;
    m.c_ = c;
    m.alpha_ = alpha;
    return m;
}

LevyMeasure LevyMeasure::power_log(double c, double alpha, double sigma) {
    if (!(c > 0.0)) throw ModelInvalidError("power_log Levy density needs c > 0");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ModelInvalidError("power_log Levy density needs 0 < alpha < 1");
    LevyMeasure m;
    m.kind_ = LevyKind::power_log;
    m.c_ = c;
    m.alpha_ = alpha;
    m.sigma_ = sigma;
    return m;
}

LevyMeasure LevyMeasure::tempered(double c, double alpha, double theta) {
    if (!(c > 0.0)) throw ModelInvalidError("tempered Levy density needs c > 0");
    if (!(alpha >= 0.0 && alpha < 1.0)) throw ModelInvalidError("tempered Levy density needs 0 <= alpha < 1");
    if (!(theta > 0.0)) throw ModelInvalidError("tempered Levy density needs theta > 0");
    LevyMeasure m;
    m.kind_ = LevyKind::tempered;
    m.c_ = c;
    m.alpha_ = alpha;
    m.theta_ = theta;
    return m;
}

LevyMeasure LevyMeasure::tabulated(std::vector<std::pair<double, double>> points, double p0, double p_inf,
                                   double mono_constant) {
    if (points.size() < 2) throw ModelInvalidError("tabulated Levy density needs at least two points");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!(points[i].first > 0.0) || !(points[i].second > 0.0))
            throw ModelInvalidError("tabulated Levy density needs positive abscissae and values");
        if (i > 0 && !(points[i].first > points[i - 1].first))
            throw ModelInvalidError("tabulated Levy density abscissae must be strictly increasing");
    }
    if (!(p0 > -2.0)) throw ModelInvalidError("tail exponent at 0 must exceed -2 (integral of s nu(ds) near 0)");
    if (!(p_inf < -1.0)) throw ModelInvalidError("tail exponent at infinity must be below -1 (finite tail mass)");
    if (!(mono_constant >= 1.0)) throw ModelInvalidError("mono_constant must be >= 1");
    LevyMeasure m;
    m.kind_ = LevyKind::tabulated;
    m.points_ = std::move(points);
    m.p0_ = p0;
    m.p_inf_ = p_inf;
    m.mono_ = mono_constant;
    for (const auto& [s, v] : m.points_) {
        m.knots_.push_back(s);
        m.log_s_.push_back(std::log(s));
        m.log_v_.push_back(std::log(v));
    }
    const double ratio = m.monotonicity_ratio();
    if (ratio > mono_constant * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "tabulated Levy density is not almost monotone with declared constant " << mono_constant
           << " (observed " << ratio << ")";
        throw ModelInvalidError(os.str());
    }
    return m;
}

LevyMeasure LevyMeasure::functional(std::function<double(double)> density, double mono_constant,
                                    std::string label) {
    LevyMeasure m;
    m.kind_ = LevyKind::functional;
    m.fn_ = std::make_shared<const std::function<double(double)>>(std::move(density));
    m.mono_ = mono_constant;
    m.label_ = std::move(label);
    return m;
}

LevyMeasure LevyMeasure::implicit(std::string label) {
    LevyMeasure m;
    m.kind_ = LevyKind::implicit;
    m.label_ = std::move(label);
    return m;
}

void LevyMeasure::require_density(const char* what) const {
    if (kind_ == LevyKind::implicit)
        throw CapabilityError(std::string("Levy density unavailable for ") + label_ + ": " + what +
                              " needs nu(s)");
}

double LevyMeasure::density(double s) const {
    if (!(s > 0.0)) return 0.0;
    switch (kind_) {
        case LevyKind::none: return 0.0;
        case LevyKind::power: return c_ * std::pow(s, -1.0 - alpha_);
        case LevyKind::power_log:
            return c_ * std::pow(s, -1.0 - alpha_) * std::pow(std::log(2.0 + 1.0 / s), sigma_);
        case LevyKind::tempered: return c_ * std::pow(s, -1.0 - alpha_) * std::exp(-theta_ * s);
        case LevyKind::tabulated: {
            const double ls = std::log(s);
            if (ls <= log_s_.front()) return std::exp(log_v_.front() + p0_ * (ls - log_s_.front()));
            if (ls >= log_s_.back()) return std::exp(log_v_.back() + p_inf_ * (ls - log_s_.back()));
            const auto it = std::upper_bound(log_s_.begin(), log_s_.end(), ls);
            const std::size_t i = static_cast<std::size_t>(it - log_s_.begin());
            const double w = (ls - log_s_[i - 1]) / (log_s_[i] - log_s_[i - 1]);
            return std::exp(log_v_[i - 1] + w * (log_v_[i] - log_v_[i - 1]));
        }
        case LevyKind::functional: return (*fn_)(s);
        case LevyKind::implicit: require_density("density evaluation"); return 0.0;
    }
    return 0.0;
}

double LevyMeasure::tail(double r) const {
    if (kind_ == LevyKind::none) return 0.0;
    if (kind_ == LevyKind::power) return c_ * std::pow(r, -alpha_) / alpha_;
    auto res = integrate([](double) { return 1.0; }, r, std::numeric_limits<double>::infinity(), r,
                         {1e-11, 0.0, 4000});
    if (!res.converged) throw ModelInvalidError("tail mass nu((r,inf)) did not converge");
    return res.value;
}

double LevyMeasure::second_moment_below(double r) const {
    if (kind_ == LevyKind::none) return 0.0;
    if (kind_ == LevyKind::power) return c_ * std::pow(r, 2.0 - alpha_) / (2.0 - alpha_);
    auto res = integrate([](double s) { return s * s; }, 0.0, r, std::min(r, 1.0), {1e-11, 0.0, 4000});
    if (!res.converged) throw ModelInvalidError("second moment of nu near 0 did not converge");
    return res.value;
}

double LevyMeasure::first_moment_below(double r) const {
    if (kind_ == LevyKind::none) return 0.0;
    if (kind_ == LevyKind::power) return c_ * std::pow(r, 1.0 - alpha_) / (1.0 - alpha_);
    auto res = integrate([](double s) { return s; }, 0.0, r, std::min(r, 1.0), {1e-11, 0.0, 4000});
    if (!res.converged) throw ModelInvalidError("first moment of nu near 0 did not converge");
    return res.value;
}

quad::Result LevyMeasure::integrability() const {
    if (kind_ == LevyKind::power) return {c_ / (1.0 - alpha_) + c_ / alpha_, 0.0, 0, true};
    return integrate([](double s) { return std::min(1.0, s); }, 0.0, std::numeric_limits<double>::infinity(),
                     1.0, {1e-9, 0.0, 4000});
}

double LevyMeasure::monotonicity_ratio() const {
    if (kind_ == LevyKind::none || kind_ == LevyKind::implicit) return 1.0;
    double lo = 1e-6, hi = 1e6;
    if (kind_ == LevyKind::tabulated) {
        lo = points_.front().first * 1e-2;
        hi = points_.back().first * 1e2;
    }
    const int n = static_cast<int>(std::ceil(20.0 * std::log10(hi / lo))) + 1;
    std::vector<double> vals(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) vals[i] = density(lo * std::pow(hi / lo, double(i) / (n - 1)));
    double worst = 1.0;
    double suffix_max = 0.0;
    for (int i = n - 1; i >= 0; --i) {
        suffix_max = std::max(suffix_max, vals[i]);
        if (vals[i] > 0.0) worst = std::max(worst, suffix_max / vals[i]);
    }
    return worst;
}

std::string LevyMeasure::describe() const {
    std::ostringstream os;
    os << to_string(kind_);
    switch (kind_) {
        case LevyKind::power: os << "(c=" << c_ << ", alpha=" << alpha_ << ")"; break;
        case LevyKind::power_log: os << "(c=" << c_ << ", alpha=" << alpha_ << ", sigma=" << sigma_ << ")"; break;
        case LevyKind::tempered: os << "(c=" << c_ << ", alpha=" << alpha_ << ", theta=" << theta_ << ")"; break;
        case LevyKind::tabulated: os << "(" << points_.size() << " points)"; break;
        case LevyKind::functional:
        case LevyKind::implicit: os << "(" << label_ << ")"; break;
        default: break;
    }
    return os.str();
}

}  // namespace subdense
