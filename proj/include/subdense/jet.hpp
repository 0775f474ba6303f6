#pragma once

// Third-order forward-mode derivatives, enough to differentiate the
// closed-form Laplace exponents up to phi'''.

#include <cmath>
#include <complex>

namespace subdense {

struct Jet {
    double v = 0.0;   // value
    double d1 = 0.0;  // first derivative
    double d2 = 0.0;
    double d3 = 0.0;

    static Jet variable(double x) { return {x, 1.0, 0.0, 0.0}; }
    static Jet constant(double c) { return {c, 0.0, 0.0, 0.0}; }

    double operator[](int order) const {
        switch (order) {
            case 0: return v;
            case 1: return d1;
            case 2: return d2;
            default: return d3;
        }
    }
};

inline Jet operator+(Jet a, const Jet& b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2, a.d3 + b.d3}; }
inline Jet operator-(Jet a, const Jet& b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2, a.d3 - b.d3}; }
inline Jet operator+(Jet a, double c) { a.v += c; return a; }
inline Jet operator+(double c, Jet a) { a.v += c; return a; }
inline Jet operator-(double c, const Jet& a) { return {c - a.v, -a.d1, -a.d2, -a.d3}; }
inline Jet operator*(double c, const Jet& a) { return {c * a.v, c * a.d1, c * a.d2, c * a.d3}; }
inline Jet operator*(const Jet& a, double c) { return c * a; }

inline Jet operator*(const Jet& a, const Jet& b) {
    return {a.v * b.v,
            a.d1 * b.v + a.v * b.d1,
            a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2,
            a.d3 * b.v + 3.0 * a.d2 * b.d1 + 3.0 * a.d1 * b.d2 + a.v * b.d3};
}

// g(u) given g, g', g'', g''' at u.v (Faa di Bruno, third order).
inline Jet compose(const Jet& u, double g0, double g1, double g2, double g3) {
    return {g0,
            g1 * u.d1,
            g2 * u.d1 * u.d1 + g1 * u.d2,
            g3 * u.d1 * u.d1 * u.d1 + 3.0 * g2 * u.d1 * u.d2 + g1 * u.d3};
}

inline Jet pow(const Jet& u, double a) {
    const double x = u.v;
    const double p = std::pow(x, a);
    return compose(u, p, a * p / x, a * (a - 1.0) * p / (x * x), a * (a - 1.0) * (a - 2.0) * p / (x * x * x));
}

inline Jet log(const Jet& u) {
    const double x = u.v;
    return compose(u, std::log(x), 1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x));
}

inline Jet exp(const Jet& u) {
    const double e = std::exp(u.v);
    return compose(u, e, e, e, e);
}

// Complex helpers accurate near zero.
inline std::complex<double> log1p(std::complex<double> z) {
    const double a = z.real();
    const double b = z.imag();
    const double mod2m1 = 2.0 * a + a * a + b * b;  // |1+z|^2 - 1
    return {0.5 * std::log1p(mod2m1), std::atan2(b, 1.0 + a)};
}

inline std::complex<double> expm1(std::complex<double> z) {
    const double a = z.real();
    const double b = z.imag();
    const double s = std::sin(0.5 * b);
    return {std::expm1(a) * std::cos(b) - 2.0 * s * s, std::exp(a) * std::sin(b)};
}

}  // namespace subdense
