#pragma once

// Constant-free estimate envelopes for p(t, x) and empirical audits of the
// constants hidden in them.

#include <string>
#include <vector>

#include "subdense/bernstein.hpp"
#include "subdense/scale_inverse.hpp"

namespace subdense {

/// zeta(s) = varphi*(1/s) for s <= 1/x0, A phi(1/s) beyond; eta(s) = zeta(s)/s.
class ZetaEta {
public:
    ZetaEta(VarphiProfile profile, double x0);

    double zeta(double s) const;
    double eta(double s) const;
    double x0() const { return x0_; }
    double A() const { return A_; }
    /// max of zeta(s/2)/zeta(s) over a log grid on [lo, hi].
    double doubling_constant(double lo, double hi, int per_decade = 8) const;

private:
    VarphiProfile profile_;
    double x0_;
    double A_ = 1.0;
};

enum class Regime { bulk, tail };
const char* to_string(Regime r);

struct EstimateBand {
    Regime regime = Regime::bulk;
    double regime_coordinate = 0.0;  // x phi^{-1}(1/t)
    double lower_form = 0.0;
    double upper_form = 0.0;
    bool plateau = false;            // coordinate within [chi1, chi2]
    double plateau_form = 0.0;       // phi^{-1}(1/t)
};

struct LowerRegion {
    double lo = 0.0, hi = 0.0;
    double center = 0.0;  // t phi'(varphi^{-1}(1/t))
    double scale = 0.0;   // varphi^{-1}(1/t)
    bool in_window = true;
};

struct LowerCheck {
    LowerRegion region;
    double constant = 0.0;  // inf of p / varphi^{-1}(1/t) over sampled points
    std::vector<double> xs, ps;
};

struct LevyLowerReport {
    // nu(x) x^3 / (-phi''(1/x)), nu(x) x / phi(1/x), p(t,x) / (t nu(x))
    double second_min = 0.0, second_max = 0.0;
    double phi_min = 0.0, phi_max = 0.0;
    double density_min = 0.0, density_max = 0.0;
    bool pass = false;
};

struct SandwichRow {
    double t = 0.0, x = 0.0;
    Regime regime = Regime::bulk;
    double form = 0.0, p = 0.0, ratio = 0.0;
};

struct SandwichReport {
    double min_ratio = 0.0, max_ratio = 0.0;
    double spread_limit = 1e3;
    bool pass = false;
    std::vector<SandwichRow> rows;
};

struct EnvelopeReport {
    double constant = 0.0;  // max of p / envelope
    double min_ratio = 0.0;
    std::size_t points = 0;
};

/// Model plus its scaling audit; every estimate checks the hypotheses it needs.
class BoundsEngine {
public:
    explicit BoundsEngine(BernsteinModel m, const ScalingGrid& grid = {});
    BoundsEngine(BernsteinModel m, ScalingAudit audit);

    const BernsteinModel& model() const { return m_; }
    const ScalingAudit& audit() const { return audit_; }
    const VarphiProfile& profile() const { return profile_; }
    const ZetaEta& zeta_eta() const { return zeta_; }

    double x0_upper() const;  // -phi'' lower scaling
    double x0_lower() const;  // both -phi'' scalings
    double x0_sharp() const;  // both phi scalings and the -phi'' lower one
    /// 1/varphi(x0), +inf for x0 = 0.
    double window(double x0) const;

    /// t b_r with r = 1/psi^{-1}(1/t): offsets below are taken from here.
    double compensator_shift(double t) const;

    /// varphi^{-1}(1/t) min{1, t zeta(|offset|)}
    double upper_bound_general(double t, double offset) const;
    /// min{varphi^{-1}(1/t), t eta(|offset|)}; needs an almost monotone nu density.
    double upper_bound_density(double t, double offset) const;
    /// The same formula without the density requirement (for audits).
    double upper_envelope(double t, double offset) const;
    /// max of p_bromwich(t, x) / upper_envelope(t, x - shift) over the grid.
    EnvelopeReport envelope_audit(const std::vector<double>& t_grid, const std::vector<double>& x_grid) const;

    LowerRegion lower_bound_region(double t, double rho1, double rho2) const;
    LowerCheck lower_bound_check(double t, double rho1, double rho2, int points = 9) const;

    LevyLowerReport levy_lower_check(const std::vector<double>& xs, double t = 1.0) const;

    /// Needs t < 1/varphi(x0) and x < 1/x0 with x0 = x0_sharp().
    EstimateBand sharp_estimate(double t, double x, double chi1 = 0.5, double chi2 = 2.0) const;
    /// Grid points with x >= 1/x0 are dropped.
    SandwichReport sandwich_audit(const std::vector<double>& t_grid, const std::vector<double>& x_grid,
                                  double spread = 1e3) const;

private:
    void require_sharp() const;
    void require_window(double t, double x0, const char* what) const;

    BernsteinModel m_;
    ScalingAudit audit_;
    VarphiProfile profile_;
    ZetaEta zeta_;
};

}  // namespace subdense
