#pragma once

// Transition density p(t, x): saddle-point asymptotic and contour inversion.

#include <string>
#include <vector>

#include "subdense/bernstein.hpp"

namespace subdense {

struct SaddleSolution {
    double t = 0.0, x = 0.0;
    double w = 0.0;            // phi'(w) = x/t
    double curvature = 0.0;    // -phi''(w)
    double saddle_mass = 0.0;  // t w^2 (-phi''(w))
    double exponent = 0.0;     // t (phi(w) - w phi'(w))
    double prefactor = 0.0;    // (2 pi t (-phi''(w)))^(-1/2)
};

enum class Method { saddle, bromwich, both };
enum class AccuracyFlag { ok, outside_region, quadrature_warning, support };

const char* to_string(Method m);
const char* to_string(AccuracyFlag f);
Method parse_method(const std::string& s);

struct DensityOptions {
    double m0 = 10.0;        // saddle_mass threshold for the asymptotic region
    double rel_tol = 1e-10;  // contour integral tolerance
};

struct DensityResult {
    double value = 0.0;
    double log_value = 0.0;  // log of value when positive, else NaN
    Method method = Method::saddle;
    SaddleSolution saddle;
    AccuracyFlag flag = AccuracyFlag::ok;
    double saddle_value = 0.0;
    double bromwich_value = 0.0;
    double ratio = 0.0;        // saddle / bromwich when both are known
    double normalized = 0.0;   // p sqrt(t(-phi''(w))) e^{exponent}, contour methods only
    double error = 0.0;        // relative error estimate of the contour integral
    int evaluations = 0;
    std::string note;
};

SaddleSolution solve_saddle(const BernsteinModel& m, double t, double x);

DensityResult density_saddle(const BernsteinModel& m, double t, double x, const DensityOptions& opt = {});

/// Contour inversion along Re z = w_contour (defaults to the saddle point;
/// any w_contour >= saddle gives the same value).
DensityResult density_bromwich(const BernsteinModel& m, double t, double x, const DensityOptions& opt = {},
                               double w_contour = 0.0);

/// Dispatch; x <= t b gives 0 with the support flag.
DensityResult density(const BernsteinModel& m, double t, double x, Method method, const DensityOptions& opt = {});

/// p sqrt(t(-phi''(w))) exp{t(phi(w) - w phi'(w))} along t_grid at fixed x.
std::vector<double> asymptotic_limit_check(const BernsteinModel& m, double x, const std::vector<double>& t_grid);

/// Integral of p(t, .) over (t b, inf) and its Laplace transform, from
/// contour densities on a log grid. Used by normalization checks.
struct MassCheck {
    double mass = 0.0;
    std::vector<double> lambdas;
    std::vector<double> transform;  // int e^{-l x} p(t,x) dx
    std::vector<double> expected;   // e^{-t phi(l)}
};
/// `digits` sets the relative tolerance 10^-digits.
MassCheck mass_check(const BernsteinModel& m, double t, const std::vector<double>& lambdas, int digits = 8);

}  // namespace subdense
