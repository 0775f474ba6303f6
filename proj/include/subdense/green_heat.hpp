#pragma once

// Potential density G(x) = int_0^inf p(t, x) dt and heat kernels of
// processes time-changed by the subordinator.

#include <functional>
#include <string>
#include <vector>

#include "subdense/bernstein.hpp"
#include "subdense/scale_inverse.hpp"

namespace subdense {

struct GreenOptions {
    double A = 1.0;         // window x < A / x0
    double rel_tol = 1e-7;  // t-integral tolerance
};

struct GreenResult {
    double x = 0.0;
    double value = 0.0;          // G(x)
    double estimate_form = 0.0;  // 1 / (x phi(1/x))
    double ratio = 0.0;          // value / estimate_form
    double split = 0.0;          // t* = x / phi'(f^{-1}(1/x))
    double inner = 0.0;          // int over (0, t*)
    double outer = 0.0;          // int over (t*, inf)
};

/// f(x) = varphi(x) / phi'(x)
double green_f(const BernsteinModel& m, double x);
/// Right inverse of the running sup of f.
double green_f_inverse(const BernsteinModel& m, double s);

GreenResult green(const BernsteinModel& m, double x, const GreenOptions& opt = {});
/// Same quadrature without the hypothesis and window checks.
GreenResult green_unchecked(const BernsteinModel& m, double x, double rel_tol = 1e-7);

struct TransformRow {
    double lambda = 0.0;
    double transform = 0.0;  // int_0^inf e^{-l x} G(x) dx
    double expected = 0.0;   // 1 / phi(l)
    double rel_error = 0.0;
};

struct TransformReport {
    std::vector<TransformRow> rows;
    double x_lo = 0.0, x_hi = 0.0;  // quadrature range; beyond it G is extrapolated
    double max_rel_error = 0.0;
    std::string hint;  // set when the range looks too narrow
};

TransformReport green_transform_identity(const BernsteinModel& m, const std::vector<double>& lambdas);

enum class ProfileKind { fractal, gaussian };

/// Heat-kernel shape t^{-n/gamma} Phi(tau t^{-1/gamma}) with lower/upper profiles.
struct HeatProfile {
    ProfileKind kind = ProfileKind::fractal;
    double n = 1.0;
    double gamma = 2.0;
    double c1 = 1.0, c2 = 1.0;  // gaussian exponents, Phi1 = e^{-c1 s^2} <= Phi2 = e^{-c2 s^2}

    double phi1(double s) const;
    double phi2(double s) const;
    /// sup of Phi2(s)(1+s)^{n+gamma} on a grid, and Phi1 <= Phi2; throws SpecFormatError.
    void validate() const;
    std::string describe() const;

    /// exp(-s^{gamma/(gamma-1)})
    static HeatProfile fractal(double n, double gamma);
    static HeatProfile gaussian(double n, double c1, double c2);
    /// Sierpinski gasket: n = log 3 / log 2, gamma = log 5 / log 2.
    static HeatProfile sierpinski();
};

enum class HeatCase { far, near };  // t phi(tau^-gamma) <= 1 or > 1
const char* to_string(HeatCase c);

struct HeatKernelResult {
    double lower = 0.0, upper = 0.0;  // quadratures with Phi1, Phi2
    double estimate_form = 0.0;
    HeatCase regime = HeatCase::far;
    double case_coordinate = 0.0;  // t phi(tau^-gamma)
    std::string note;
};

/// Case split of the subordinated estimate alone (no quadrature).
HeatCase heat_case(const BernsteinModel& m, const HeatProfile& p, double t, double tau, double* coordinate = nullptr);
double heat_estimate_form(const BernsteinModel& m, const HeatProfile& p, double t, double tau);

HeatKernelResult heat_kernel_subordinated(const BernsteinModel& m, const HeatProfile& p, double t, double tau);

/// Worked example forms for phi(s) = s^a log^s(2+s).
struct LogStableForms {
    double alpha, sigma;
    /// t^{-n/(a gamma)} log^{-s n/(a gamma)}(2 + 1/t)
    double large_time(double t, double n, double gamma) const;
    /// t tau^{-a gamma - n} log^s(2 + tau^{-gamma})
    double far_field(double t, double tau, double n, double gamma) const;
};

struct ExampleCatalog {
    std::vector<std::pair<std::string, HeatProfile>> profiles;
    BernsteinModel log_stable;
    LogStableForms forms;
};

ExampleCatalog example_profiles();

}  // namespace subdense
