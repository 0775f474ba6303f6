#include "subdense/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "subdense/bounds.hpp"
#include "subdense/density.hpp"
#include "subdense/errors.hpp"
#include "subdense/format.hpp"
#include "subdense/green_heat.hpp"
#include "subdense/scale_inverse.hpp"

namespace subdense {

namespace {

using nlohmann::json;

json scaling_json(const ScalingReport& r) {
    return {{"target", r.target},
            {"side", r.side == Side::lower ? "lower" : "upper"},
            {"index", r.index},
            {"constant", r.constant},
            {"x0", r.x0},
            {"pass", r.pass}};
}

// Runs one check; capability errors mean the theorem does not apply.
CheckResult run(const std::string& name, const std::function<void(CheckResult&)>& body) {
    CheckResult c;
    c.name = name;
    try {
        body(c);
    } catch (const CapabilityError& e) {
        c.status = CheckStatus::not_applicable;
        c.detail = e.what();
    } catch (const Error& e) {
        c.status = CheckStatus::fail;
        c.detail = e.what();
    }
    return c;
}

std::vector<double> below(const std::vector<double>& grid, double limit) {
    std::vector<double> out;
    for (double v : grid)
        if (v < limit) out.push_back(v);
    return out;
}

}  // namespace

const char* to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        case CheckStatus::not_applicable: return "not_applicable";
    }
    return "?";
}

bool VerifyReport::pass() const {
    return std::none_of(checks.begin(), checks.end(), [](const auto& c) { return c.status == CheckStatus::fail; });
}

json VerifyReport::to_json() const {
    json doc{{"model", model}, {"degenerate", degenerate}, {"pass", pass()}};
    if (degenerate) {
        doc["verdict"] = "degenerate: phi'' == 0";
        return doc;
    }
    json arr = json::array();
    for (const auto& c : checks)
        arr.push_back({{"name", c.name}, {"status", to_string(c.status)}, {"detail", c.detail}, {"values", c.values}});
    doc["checks"] = arr;
    return doc;
}

std::string VerifyReport::summary() const {
    if (degenerate) return "degenerate: phi'' == 0\n";
    std::ostringstream os;
    std::size_t passed = 0, failed = 0;
    for (const auto& c : checks) {
        os << to_string(c.status) << "  " << c.name;
        if (!c.detail.empty()) os << "  (" << c.detail << ")";
        os << '\n';
        passed += c.status == CheckStatus::pass;
        failed += c.status == CheckStatus::fail;
    }
    os << passed << " passed, " << failed << " failed, " << checks.size() - passed - failed << " not applicable\n";
    return os.str();
}

VerifyReport verify(const BernsteinModel& m, const VerifyOptions& opt) {
    VerifyReport rep;
    rep.model = m.describe();
    if (m.degenerate()) {
        rep.degenerate = true;
        return rep;
    }

    rep.checks.push_back(run("validation", [&](CheckResult& c) {
        const auto v = m.validate();
        c.values = {{"subadditivity", v.worst_subadditivity},
                    {"concavity", v.worst_concavity},
                    {"second_order", v.worst_second_order}};
        if (!v.ok) {
            c.status = CheckStatus::fail;
            for (const auto& f : v.failures) c.detail += (c.detail.empty() ? "" : "; ") + f;
        }
    }));

    const ScalingAudit audit = scaling_audit(m);
    rep.checks.push_back(run("scaling", [&](CheckResult& c) {
        c.values = {{"d2_lower", scaling_json(audit.d2_lower)},
                    {"d2_upper", scaling_json(audit.d2_upper)},
                    {"phi_lower", scaling_json(audit.phi_lower)},
                    {"phi_upper", scaling_json(audit.phi_upper)},
                    {"alpha_hat", audit.alpha_hat},
                    {"beta_hat", audit.beta_hat},
                    {"x0", audit.x0}};
        const auto failed = audit.failures(true, true, true, true);
        for (const auto& f : failed) c.detail += (c.detail.empty() ? "" : "; ") + f;
        // Scaling conditions are hypotheses, not claims: failures are reported
        // and every dependent check below is marked not applicable.
        if (audit.x0 > 0.0) c.detail += (c.detail.empty() ? "" : "; ") + std::string("windows restricted by x0>0");
    }));

    rep.checks.push_back(run("inequalities", [&](CheckResult& c) {
        const auto ia = inequality_audit(m, audit);
        json lines = json::array();
        for (const auto& l : ia.lines)
            lines.push_back({{"name", l.name}, {"lower", l.lower}, {"upper", l.upper}, {"pass", l.pass}});
        c.values = {{"lines", lines}};
        if (ia.skipped) {
            c.status = CheckStatus::not_applicable;
            c.detail = ia.notice;
        } else if (!ia.pass) {
            c.status = CheckStatus::fail;
        }
    }));

    rep.checks.push_back(run("concentration", [&](CheckResult& c) {
        double worst_identity = 0.0, lo = 1e300, hi = 0.0;
        for (double r : log_grid(1e-2, 1e2, 4)) {
            const double h = concentration_h(m, r);
            worst_identity = std::max(worst_identity, std::abs(concentration_h_from_K(m, r) / h - 1.0));
            const double ratio = psi_star(m, 1.0 / r) / h;
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        c.values = {{"identity_error", worst_identity}, {"psi_star_over_h_min", lo}, {"psi_star_over_h_max", hi}};
        if (!(worst_identity <= 1e-6 && lo > 1.0 / 24.0 && hi < 2.0)) c.status = CheckStatus::fail;
    }));

    rep.checks.push_back(run("normalization", [&](CheckResult& c) {
        double worst_mass = 0.0, worst_laplace = 0.0;
        for (double t : {0.1, 1.0, 10.0}) {
            const auto mc = mass_check(m, t, {0.5, 1.0, 2.0});
            worst_mass = std::max(worst_mass, std::abs(mc.mass - 1.0));
            for (std::size_t i = 0; i < mc.lambdas.size(); ++i)
                worst_laplace = std::max(worst_laplace, std::abs(mc.transform[i] - mc.expected[i]));
        }
        c.values = {{"mass_error", worst_mass}, {"laplace_error", worst_laplace}};
        if (!(worst_mass <= opt.mass_tolerance && worst_laplace <= opt.mass_tolerance)) c.status = CheckStatus::fail;
    }));

    const BoundsEngine engine(m, audit);
    rep.checks.push_back(run("upper_envelope", [&](CheckResult& c) {
        const auto ts = below({0.01, 0.1, 1.0, 10.0}, engine.window(engine.x0_upper()));
        const auto env = engine.envelope_audit(ts, log_grid(1e-2, 1e3, 4));
        c.values = {{"constant", env.constant}, {"points", env.points}, {"window", engine.window(engine.x0_upper())}};
        if (env.points == 0) {
            c.status = CheckStatus::not_applicable;
            c.detail = "no grid point inside the time window";
        } else if (!(env.constant <= 20.0)) {
            c.status = CheckStatus::fail;
        }
    }));

    rep.checks.push_back(run("lower_bound", [&](CheckResult& c) {
        double worst = 1e300;
        json per_t = json::array();
        for (double t : below({0.1, 1.0, 10.0}, engine.window(engine.x0_lower()))) {
            const auto lc = engine.lower_bound_check(t, 1.0, 1.0);
            worst = std::min(worst, lc.constant);
            per_t.push_back({{"t", t}, {"constant", lc.constant}});
        }
        c.values = {{"rows", per_t}, {"window", engine.window(engine.x0_lower())}};
        if (per_t.empty()) {
            c.status = CheckStatus::not_applicable;
            c.detail = "no t inside the time window";
        } else if (!(worst >= 1e-3)) {
            c.status = CheckStatus::fail;
        }
    }));

    rep.checks.push_back(run("sandwich", [&](CheckResult& c) {
        const auto ts = below({0.1, 1.0, 10.0}, engine.window(engine.x0_sharp()));
        if (ts.empty()) throw CapabilityError("no t inside the time window");
        const auto sw = engine.sandwich_audit(ts, log_grid(1e-2, 1e2, 2));
        c.values = {{"min_ratio", sw.min_ratio}, {"max_ratio", sw.max_ratio}, {"window", engine.window(engine.x0_sharp())}};
        if (!sw.pass) c.status = CheckStatus::fail;
    }));

    if (opt.include_green)
        rep.checks.push_back(run("green_identity", [&](CheckResult& c) {
            green(m, 1.0);  // hypothesis gate
            const auto tr = green_transform_identity(m, {0.5, 1.0, 2.0, 4.0});
            c.values = {{"max_rel_error", tr.max_rel_error}, {"x_lo", tr.x_lo}, {"x_hi", tr.x_hi}};
            if (!tr.hint.empty()) c.detail = tr.hint;
            if (!(tr.max_rel_error <= 1e-3)) c.status = CheckStatus::fail;
        }));
    return rep;
}

}  // namespace subdense
