#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "doctest.h"

namespace testing {

inline std::string model_path(const std::string& name) { return std::string(SUBDENSE_MODELS_DIR) + "/" + name; }

/// (t / (2 sqrt pi)) x^{-3/2} e^{-t^2/(4x)}
inline double half_stable_density(double t, double x) {
    return t / (2.0 * std::sqrt(std::numbers::pi)) * std::pow(x, -1.5) * std::exp(-t * t / (4.0 * x));
}

inline double half_stable_log_density(double t, double x) {
    return std::log(t / (2.0 * std::sqrt(std::numbers::pi))) - 1.5 * std::log(x) - t * t / (4.0 * x);
}

inline double rel_err(double a, double b) { return std::abs(a / b - 1.0); }

}  // namespace testing
