#pragma once

// Subordinator models: drift b plus a Levy measure, with closed forms for
// the builtin families and quadrature against nu for everything else.

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "subdense/jet.hpp"
#include "subdense/levy_measure.hpp"

namespace subdense {

enum class Family {
    drift,       ///< nu = 0
    stable,      ///< phi = lambda^alpha
    power,       ///< c s^(-1-alpha), phi = c Gamma(1-alpha)/alpha lambda^alpha
    power_log,   ///< quadrature only
    tempered,    ///< c s^(-1-alpha) e^(-theta s); alpha = 0 is gamma-type
    gamma,       ///< phi = log(1 + lambda)
    log_stable,  ///< phi = lambda^alpha log^sigma(2 + lambda), nu not tracked
    custom,      ///< user supplied Levy measure
    surrogate,   ///< complete Bernstein companion of another model
};

const char* to_string(Family f);

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> failures;
    double worst_subadditivity = 0.0;   // max of phi(l x) - l phi(x), l >= 1, relative
    double worst_concavity = 0.0;       // max of l phi'(l) - phi(l), relative
    double worst_second_order = 0.0;    // max of -l^2 phi''(l)/2 - phi(l), relative
    double integrability = 0.0;         // int min(1,s) nu(ds) when nu is known
};

/// Immutable subordinator model. Copies share state.
class BernsteinModel {
public:
    static BernsteinModel stable(double alpha, double drift = 0.0);
    static BernsteinModel power(double c, double alpha, double drift = 0.0);
    static BernsteinModel power_log(double c, double alpha, double sigma, double drift = 0.0);
    static BernsteinModel tempered(double c, double alpha, double theta, double drift = 0.0);
    static BernsteinModel gamma(double drift = 0.0);
    static BernsteinModel log_stable(double alpha, double sigma);
    static BernsteinModel pure_drift(double b);
    /// Any Levy measure; power and tempered kinds pick up their closed forms.
    static BernsteinModel custom(double drift, LevyMeasure levy, std::string tag = "custom");

    Family family() const;
    const std::string& tag() const;
    double drift() const;
    const LevyMeasure& levy() const;
    bool has_closed_form() const;
    bool degenerate() const;  // phi'' == 0
    double alpha() const;     // family index where meaningful, else NaN
    double sigma() const;

    /// phi and its first three derivatives at lambda > 0.
    Jet jet(double lambda) const;
    double phi(double lambda) const;
    /// order in 1..3
    double derivative(double lambda, int order) const;
    /// phi'(lambda) - b without cancellation.
    double jump_derivative(double lambda) const;
    /// x^2 (-phi''(x))
    double varphi(double x) const;

    /// Same quantities from the integral representation (needs nu).
    double phi_quadrature(double lambda) const;
    double derivative_quadrature(double lambda, int order) const;

    /// phi(w + i lambda) for w >= 0.
    std::complex<double> phi_complex(double w, double lambda) const;
    /// phi(w + i lambda) - phi(w), accurate for small lambda.
    std::complex<double> increment(double w, double lambda) const;

    /// phi'(0+), possibly +inf.
    double phi_prime_zero() const;
    /// sup of phi, possibly +inf.
    double phi_infinity() const;
    /// Plain inverse of phi.
    double inverse(double y) const;
    /// Inverse of phi' on (b, phi'(0+)).
    double inverse_derivative(double y) const;
    /// Left end of the half-line where phi is analytic: -theta for the
    /// tempered closed form, else 0. jet() and increment() accept
    /// arguments down to it.
    double analytic_edge() const;
    /// Inverse of phi' over (analytic_edge, inf); may be negative.
    double continued_inverse_derivative(double y) const;
    /// b_r = b + int_(0,r) s nu(ds).
    double compensator(double r) const;

    /// f(l) = b l + int l u/(l u + 1) nu(du).
    BernsteinModel surrogate() const;

    /// Grid checks run at load time.
    ValidationReport validate() const;
    std::string describe() const;

    struct State;

private:
    explicit BernsteinModel(std::shared_ptr<const State> s) : s_(std::move(s)) {}
    std::shared_ptr<const State> s_;
};

}  // namespace subdense
