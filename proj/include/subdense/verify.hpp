#pragma once

// One-shot suite: every audit in the library run against a single model,
// reduced to a JSON verdict.

#include <string>
#include <vector>

#include <json.hpp>

#include "subdense/bernstein.hpp"

namespace subdense {

enum class CheckStatus { pass, fail, not_applicable };
const char* to_string(CheckStatus s);

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::pass;
    std::string detail;
    nlohmann::json values = nlohmann::json::object();
};

struct VerifyOptions {
    bool include_green = true;
    double mass_tolerance = 1e-6;
};

struct VerifyReport {
    std::string model;
    bool degenerate = false;
    std::vector<CheckResult> checks;
    bool pass() const;
    nlohmann::json to_json() const;
    /// Single line for degenerate models, a table otherwise.
    std::string summary() const;
};

VerifyReport verify(const BernsteinModel& m, const VerifyOptions& opt = {});

}  // namespace subdense
