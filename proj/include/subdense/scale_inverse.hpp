#pragma once

// Running sups, generalized inverses, concentration functions and
// weak-scaling diagnostics.

#include <functional>
#include <string>
#include <vector>

#include "subdense/bernstein.hpp"

namespace subdense {

using RealFn = std::function<double(double)>;

enum class Side { lower, upper };
enum class InverseSide { right, left };

const char* to_string(Side s);

/// log-spaced points, `per_decade` per factor 10, both ends included.
std::vector<double> log_grid(double lo, double hi, int per_decade);

struct ScalingGrid {
    double lo = 3.1622776601683794e-4;  // 10^-3.5
    double hi = 3.1622776601683795e3;   // 10^3.5
    int per_decade = 64;
};

/// sup of f over (0, r]. Grid scan from r * floor_ratio up, then a
/// golden-section polish around the best grid point.
double running_sup(const RealFn& f, double r, bool nondecreasing = false, double floor_ratio = 1e-12);
/// inf of f over [r, inf), scanned up to r * ceil_ratio.
double running_inf_from(const RealFn& f, double r, bool nondecreasing = false, double ceil_ratio = 1e12);

/// right: sup{r : f*(r) <= s}; left: inf{r : f*(r) >= s}. Returns +inf when
/// s exceeds the range; throws DomainError when s <= f*(0+).
double generalized_inverse(const RealFn& f_star, double s, InverseSide side);

/// K(r) = r^-2 int_(0,r) s^2 nu(ds)
double concentration_K(const BernsteinModel& m, double r);
/// h(r) = K(r) + nu((r, inf))
double concentration_h(const BernsteinModel& m, double r);
/// 2 int_r^inf K(s)/s ds, an independent route to h(r).
double concentration_h_from_K(const BernsteinModel& m, double r);

/// Re psi(xi) = int (1 - cos xi s) nu(ds)
double psi_real(const BernsteinModel& m, double xi);
/// sup of Re psi over |xi| <= r. When nu is known the result is checked
/// against h(1/r)/24 <= psi* <= 2 h(1/r).
double psi_star(const BernsteinModel& m, double r);
double psi_inverse(const BernsteinModel& m, double s);

struct ScalingReport {
    std::string target;
    Side side = Side::lower;
    double index = 0.0;
    double constant = 1.0;
    double x0 = 0.0;
    double range_lo = 0.0, range_hi = 0.0;
    bool pass = false;
};

/// Pairwise log-slope scan over the grid on [lo, hi].
ScalingReport estimate_scaling(const RealFn& f, double lo, double hi, Side side, const std::string& target = "f",
                               int per_decade = 64);

/// Like estimate_scaling, but finds the smallest grid threshold x0 beyond
/// which `accept(index)` holds. If none does, x0 = grid hi and pass = false.
ScalingReport scaling_with_threshold(const RealFn& f, const ScalingGrid& grid, Side side,
                                     const std::function<bool(double)>& accept, const std::string& target);

struct TailScalingResult {
    bool pass = false;
    double constant = 1.0;  // worst nu((r,inf)) / (l^a nu((l r, inf)))
    double index = 0.0;     // lower index of x -> nu((1/x, inf))
};

/// nu((r,inf)) <= C l^a nu((l r, inf)) for 0 < r < 1/x0, 0 < l <= 1.
TailScalingResult tail_scaling_check(const BernsteinModel& m, double x0, double a, int per_decade = 16);

/// Margin used when turning an index estimate into a strict inequality.
inline constexpr double kIndexMargin = 0.05;

/// Scaling evidence used as theorem hypotheses.
struct ScalingAudit {
    bool degenerate = false;
    ScalingReport d2_lower, d2_upper;    // -phi''
    ScalingReport phi_lower, phi_upper;  // phi
    double alpha_hat = 0.0;  // lower index of -phi'' plus 2
    double beta_hat = 1.0;   // upper index of -phi'' plus 2
    bool wlsc_d2 = false;    // -phi'' in WLSC(alpha-2), alpha > 0
    bool wusc_d2 = false;    // -phi'' in WUSC(beta-2), beta < 1
    bool wlsc_phi = false;   // phi in WLSC(alpha), alpha > 0
    bool wusc_phi = false;   // phi in WUSC(beta), beta < 1
    double x0 = 0.0;         // threshold that serves every passing report

    /// Threshold serving the requested subset of conditions.
    double x0_for(bool d2_lower_needed, bool d2_upper_needed, bool phi_lower_needed, bool phi_upper_needed) const;

    /// Names of failed conditions among the requested ones.
    std::vector<std::string> failures(bool d2_lower_needed, bool d2_upper_needed, bool phi_lower_needed,
                                      bool phi_upper_needed) const;
};

ScalingAudit scaling_audit(const BernsteinModel& m, const ScalingGrid& grid = {});

/// Throws CapabilityError naming the failed conditions.
void require_hypotheses(const ScalingAudit& a, bool d2_lower, bool d2_upper, bool phi_lower, bool phi_upper,
                        const std::string& context);

/// phi(x) = x^2 (-phi''(x)) with its running sup/inf and their inverses.
class VarphiProfile {
public:
    explicit VarphiProfile(BernsteinModel m);

    double value(double x) const;
    double sup(double r) const;          // varphi*(r)
    double inf_from(double r) const;     // varphi_*(r) = inf over [r, inf)
    double inverse(double s) const;      // varphi^{-1}: right inverse of varphi*
    double lower_inverse(double s) const;  // varphi_{-1}: left inverse of varphi_*
    bool monotone() const { return monotone_; }
    const BernsteinModel& model() const { return m_; }

private:
    BernsteinModel m_;
    bool monotone_ = false;
};

struct InequalityLine {
    std::string name;
    std::string statement;
    double lower = 0.0;  // smallest observed ratio
    double upper = 0.0;  // largest observed ratio
    bool hypothesis = false;
    bool pass = true;
    std::string note;
};

struct InequalityAudit {
    bool skipped = false;
    std::string notice;
    std::vector<InequalityLine> lines;
    bool pass = true;
};

InequalityAudit inequality_audit(const BernsteinModel& m, const ScalingAudit& scaling, int per_decade = 8);

}  // namespace subdense
