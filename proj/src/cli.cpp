#include "subdense/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include "subdense/bounds.hpp"
#include "subdense/density.hpp"
#include "subdense/errors.hpp"
#include "subdense/format.hpp"
#include "subdense/green_heat.hpp"
#include "subdense/model_io.hpp"
#include "subdense/parallel.hpp"
#include "subdense/quadrature.hpp"
#include "subdense/sampler.hpp"
#include "subdense/scale_inverse.hpp"
#include "subdense/verify.hpp"

namespace subdense {

namespace {

using nlohmann::json;

struct RunConfig {
    std::string model_path;
    std::string out = "-";
    std::string t = "1";
    std::string x = "1";
    std::string method = "both";
    double m0 = 10.0;
    double rel_tol = 1e-10;
    double A = 1.0;
    std::string lambdas;
    std::string profile_path;
    std::string tau = "0.01:100:9";
    std::size_t n = 10000;
    double eps = 1e-6;
    std::uint64_t seed = 1;
    std::string format = "csv";
    std::string summary;
    bool ks = false;
    std::string traces;
    bool no_green = false;
};

std::string json_text(const json& doc) { return doc.dump(2) + "\n"; }

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
    if (cfg.out == "-")
        out << text;
    else
        write_atomic(cfg.out, text);
}

int cmd_density(const RunConfig& cfg, std::ostream& out) {
    const auto m = load_model(cfg.model_path);
    const Method method = parse_method(cfg.method);
    if (method != Method::bromwich) {
        // The saddle expression is only meaningful under lower scaling of -phi''.
        require_hypotheses(scaling_audit(m), true, false, false, false, "density (" + cfg.method + ")");
    }
    DensityOptions opt;
    opt.m0 = cfg.m0;
    opt.rel_tol = cfg.rel_tol;
    const auto ts = parse_grid(cfg.t), xs = parse_grid(cfg.x);
    std::vector<DensityResult> res(ts.size() * xs.size());
    parallel_for(res.size(), [&](std::size_t i) { res[i] = density(m, ts[i / xs.size()], xs[i % xs.size()], method, opt); });
    std::ostringstream csv;
    csv << "t,x,value,method,w,saddle_mass,exponent,ratio,flag\n";
    for (std::size_t i = 0; i < res.size(); ++i) {
        const auto& r = res[i];
        const double t = ts[i / xs.size()], x = xs[i % xs.size()];
        csv << format_number(t) << ',' << format_number(x) << ',' << format_number(r.value) << ','
            << to_string(r.method) << ',' << format_number(r.saddle.w) << ',' << format_number(r.saddle.saddle_mass)
            << ',' << format_number(r.saddle.exponent) << ',' << format_number(method == Method::both ? r.ratio : 1.0)
            << ',' << to_string(r.flag) << '\n';
    }
    emit(cfg, out, csv.str());
    return exit_code::ok;
}

int cmd_bounds(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const BoundsEngine engine(load_model(cfg.model_path));
    const auto rep = engine.sandwich_audit(parse_grid(cfg.t), parse_grid(cfg.x));
    std::ostringstream csv;
    csv << "t,x,regime,lower_form,upper_form,p_bromwich,ratio\n";
    for (const auto& r : rep.rows)
        csv << format_number(r.t) << ',' << format_number(r.x) << ',' << to_string(r.regime) << ','
            << format_number(r.form) << ',' << format_number(r.form) << ',' << format_number(r.p) << ','
            << format_number(r.ratio) << '\n';
    emit(cfg, out, csv.str());
    err << "sandwich spread " << format_number(rep.max_ratio / rep.min_ratio, 6) << " (limit "
        << format_number(rep.spread_limit) << "): " << (rep.pass ? "pass" : "fail") << '\n';
    return exit_code::ok;
}

json scaling_json(const ScalingReport& r) {
    return {{"target", r.target}, {"side", r.side == Side::lower ? "lower" : "upper"}, {"index", r.index},
            {"constant", r.constant}, {"x0", r.x0}, {"range", {r.range_lo, r.range_hi}}, {"pass", r.pass}};
}

json audit_json(const ScalingAudit& a) {
    if (a.degenerate) return {{"degenerate", true}, {"verdict", "degenerate: phi'' == 0"}};
    return {{"degenerate", false},
            {"d2_lower", scaling_json(a.d2_lower)},
            {"d2_upper", scaling_json(a.d2_upper)},
            {"phi_lower", scaling_json(a.phi_lower)},
            {"phi_upper", scaling_json(a.phi_upper)},
            {"alpha_hat", a.alpha_hat},
            {"beta_hat", a.beta_hat},
            {"wlsc_d2", a.wlsc_d2},
            {"wusc_d2", a.wusc_d2},
            {"wlsc_phi", a.wlsc_phi},
            {"wusc_phi", a.wusc_phi},
            {"x0", a.x0},
            {"failures", a.failures(true, true, true, true)}};
}

int cmd_audit(const RunConfig& cfg, std::ostream& out) {
    const auto m = load_model(cfg.model_path);
    const auto a = scaling_audit(m);
    json doc{{"model", m.describe()}, {"scaling", audit_json(a)}};
    if (!a.degenerate) {
        const auto ia = inequality_audit(m, a);
        json lines = json::array();
        for (const auto& l : ia.lines)
            lines.push_back({{"name", l.name}, {"statement", l.statement}, {"lower", l.lower}, {"upper", l.upper},
                             {"hypothesis", l.hypothesis}, {"pass", l.pass}, {"note", l.note}});
        doc["inequalities"] = {{"skipped", ia.skipped}, {"notice", ia.notice}, {"pass", ia.pass}, {"lines", lines}};
    }
    emit(cfg, out, json_text(doc));
    return exit_code::ok;
}

int cmd_scaling_report(const RunConfig& cfg, std::ostream& out) {
    const auto m = load_model(cfg.model_path);
    const ScalingGrid grid;
    emit(cfg, out, json_text({{"model", m.describe()}, {"scaling", audit_json(scaling_audit(m, grid))}}));
    if (!cfg.traces.empty()) {
        CsvTable table({"x", "phi", "neg_phi2", "varphi"});
        for (double x : log_grid(grid.lo, grid.hi, 8)) table.add_row({x, m.phi(x), -m.derivative(x, 2), m.varphi(x)});
        write_atomic(cfg.traces, table.str());
    }
    return exit_code::ok;
}

int cmd_green(const RunConfig& cfg, std::ostream& out) {
    const auto m = load_model(cfg.model_path);
    if (!cfg.lambdas.empty()) {
        const auto rep = green_transform_identity(m, parse_grid(cfg.lambdas));
        CsvTable table({"lambda", "transform", "expected", "rel_error"});
        for (const auto& r : rep.rows) table.add_row({r.lambda, r.transform, r.expected, r.rel_error});
        emit(cfg, out, table.str());
        return exit_code::ok;
    }
    GreenOptions opt;
    opt.A = cfg.A;
    const auto xs = parse_grid(cfg.x);
    green(m, xs.front(), opt);  // hypothesis failures before the fan-out
    std::vector<GreenResult> res(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) { res[i] = green(m, xs[i], opt); });
    CsvTable table({"x", "G", "estimate_form", "ratio", "split"});
    for (const auto& g : res) table.add_row({g.x, g.value, g.estimate_form, g.ratio, g.split});
    emit(cfg, out, table.str());
    return exit_code::ok;
}

int cmd_heat_kernel(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto m = load_model(cfg.model_path);
    const HeatProfile p = cfg.profile_path.empty() ? HeatProfile::sierpinski() : load_profile(cfg.profile_path);
    const auto ts = parse_grid(cfg.t), taus = parse_grid(cfg.tau);
    std::vector<HeatKernelResult> res(ts.size() * taus.size());
    heat_kernel_subordinated(m, p, ts.front(), taus.front());
    parallel_for(res.size(), [&](std::size_t i) {
        res[i] = heat_kernel_subordinated(m, p, ts[i / taus.size()], taus[i % taus.size()]);
    });
    std::ostringstream csv;
    csv << "t,tau,case,coordinate,lower,upper,estimate_form,ratio\n";
    for (std::size_t i = 0; i < res.size(); ++i) {
        const auto& r = res[i];
        csv << format_number(ts[i / taus.size()]) << ',' << format_number(taus[i % taus.size()]) << ','
            << to_string(r.regime) << ',' << format_number(r.case_coordinate) << ',' << format_number(r.lower) << ','
            << format_number(r.upper) << ',' << format_number(r.estimate_form) << ','
            << format_number(r.lower / r.estimate_form) << '\n';
    }
    emit(cfg, out, csv.str());
    if (!res.empty() && !res.front().note.empty()) err << "note: " << res.front().note << '\n';
    return exit_code::ok;
}

double analytic_cdf(const BernsteinModel& m, double t, double x) {
    if (x <= t * m.drift()) return 0.0;
    auto p = [&](double y) { return density(m, t, y, Method::bromwich).value; };
    return quad::integrate_log_side(p, x, -1.0, {1e-8, 0.0, 2000}).value;
}

int cmd_sample(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto m = load_model(cfg.model_path);
    const double t = parse_grid(cfg.t).front();
    const auto d = sample(m, t, cfg.n, cfg.eps, cfg.seed);
    if (!d.warning.empty()) err << "warning: " << d.warning << '\n';
    if (cfg.format == "bin") {
        if (cfg.out == "-") throw DomainError("binary output needs --out <file>");
        write_atomic(cfg.out, d.samples);
    } else {
        std::string text = "sample\n";
        for (double v : d.samples) text += format_number(v) + '\n';
        emit(cfg, out, text);
    }
    json q = json::object();
    for (double level : {0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99})
        q[format_number(level)] = quantile(d.samples, level);
    json summary{{"t", t},
                 {"n", cfg.n},
                 {"eps", cfg.eps},
                 {"seed", cfg.seed},
                 {"drift_used", d.drift_used},
                 {"jump_rate", d.jump_rate},
                 {"omitted_variance", d.omitted_variance},
                 {"quantiles", q}};
    // Moments only where the Levy measure makes them finite.
    const auto kind = m.levy().kind();
    if (kind == LevyKind::none || kind == LevyKind::tempered) {
        double mean = 0.0, m2 = 0.0;
        for (std::size_t i = 0; i < d.samples.size(); ++i) {
            const double delta = d.samples[i] - mean;
            mean += delta / (i + 1);
            m2 += delta * (d.samples[i] - mean);
        }
        summary["mean"] = mean;
        summary["variance"] = d.samples.size() > 1 ? m2 / (d.samples.size() - 1) : 0.0;
    }
    if (cfg.ks) {
        // KS distance on 200 sample quantiles against the integrated density.
        double worst = 0.0;
        const std::size_t n = d.samples.size();
        for (int k = 1; k < 200; ++k) {
            const std::size_t i = std::min(n - 1, static_cast<std::size_t>(k * n / 200.0));
            const double f = analytic_cdf(m, t, d.samples[i]);
            worst = std::max({worst, std::abs(f - static_cast<double>(i + 1) / n), std::abs(f - static_cast<double>(i) / n)});
        }
        summary["ks_analytic"] = worst;
    }
    if (cfg.summary.empty())
        err << summary.dump() << '\n';
    else
        write_atomic(cfg.summary, json_text(summary));
    return exit_code::ok;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto m = load_model(cfg.model_path);
    VerifyOptions opt;
    opt.include_green = !cfg.no_green;
    const auto rep = verify(m, opt);
    emit(cfg, out, json_text(rep.to_json()));
    err << rep.summary();
    return rep.pass() ? exit_code::ok : exit_code::integrity;
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
    auto number = [&](const std::string& s) {
        double v = 0.0;
        std::size_t used = 0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size()) throw SpecFormatError("grid", "cannot parse '" + s + "' in '" + spec + "'");
        return v;
    };
    std::vector<double> out;
    if (spec.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(spec);
        for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
        if (parts.size() != 3) throw SpecFormatError("grid", "expected lo:hi:n, got '" + spec + "'");
        const double lo = number(parts[0]), hi = number(parts[1]);
        const double n = number(parts[2]);
        if (!(lo > 0.0 && hi >= lo) || n < 1 || n != std::floor(n))
            throw SpecFormatError("grid", "log grid needs 0 < lo <= hi and integer n >= 1: '" + spec + "'");
        const int k = static_cast<int>(n);
        for (int i = 0; i < k; ++i)
            out.push_back(k == 1 ? lo : std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (k - 1)));
        if (k > 1) out.back() = hi;
        return out;
    }
    std::stringstream ss(spec);
    for (std::string part; std::getline(ss, part, ',');) out.push_back(number(part));
    if (out.empty()) throw SpecFormatError("grid", "empty grid");
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"subdense: transition densities of subordinators"};
    app.require_subcommand(1);
    RunConfig cfg;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--model", cfg.model_path, "model spec JSON")->required();
        sub->add_option("--out", cfg.out, "output path, '-' for stdout");
    };
    auto* density_cmd = app.add_subcommand("density", "p(t, x) by saddle point and/or contour inversion");
    add_common(density_cmd);
    density_cmd->add_option("--t,--t-grid", cfg.t, "t value or grid lo:hi:n");
    density_cmd->add_option("--x,--x-grid", cfg.x, "x value or grid lo:hi:n");
    density_cmd->add_option("--method", cfg.method, "saddle|bromwich|both");
    density_cmd->add_option("--m0", cfg.m0, "saddle-mass threshold");
    density_cmd->add_option("--rel-tol", cfg.rel_tol, "contour tolerance");

    auto* bounds_cmd = app.add_subcommand("bounds", "sharp two-sided estimate against the density");
    add_common(bounds_cmd);
    bounds_cmd->add_option("--t,--t-grid", cfg.t);
    bounds_cmd->add_option("--x,--x-grid", cfg.x);

    auto* audit_cmd = app.add_subcommand("audit", "scaling and inequality audit as JSON");
    add_common(audit_cmd);

    auto* scaling_cmd = app.add_subcommand("scaling-report", "scaling audit JSON plus plot traces");
    add_common(scaling_cmd);
    scaling_cmd->add_option("--traces", cfg.traces, "CSV of x, phi, -phi'', varphi");

    auto* green_cmd = app.add_subcommand("green", "potential density G(x)");
    add_common(green_cmd);
    green_cmd->add_option("--x,--x-grid", cfg.x);
    green_cmd->add_option("--A", cfg.A, "window x < A/x0");
    green_cmd->add_option("--lambdas", cfg.lambdas, "emit the Laplace transform identity instead");

    auto* heat_cmd = app.add_subcommand("heat-kernel", "subordinated heat kernel against its estimate");
    add_common(heat_cmd);
    heat_cmd->add_option("--profile", cfg.profile_path, "profile spec JSON (default Sierpinski gasket)");
    heat_cmd->add_option("--t,--t-grid", cfg.t);
    heat_cmd->add_option("--tau,--tau-grid", cfg.tau);

    auto* sample_cmd = app.add_subcommand("sample", "compound-Poisson Monte Carlo samples of T_t");
    add_common(sample_cmd);
    sample_cmd->add_option("--t", cfg.t);
    sample_cmd->add_option("--n", cfg.n);
    sample_cmd->add_option("--eps", cfg.eps, "small-jump cutoff");
    sample_cmd->add_option("--seed", cfg.seed);
    sample_cmd->add_option("--format", cfg.format, "csv|bin")->check(CLI::IsMember({"csv", "bin"}));
    sample_cmd->add_option("--summary", cfg.summary, "JSON summary path (default stderr)");
    sample_cmd->add_flag("--ks", cfg.ks, "KS distance to the integrated density");

    auto* verify_cmd = app.add_subcommand("verify", "run every audit; JSON verdict");
    add_common(verify_cmd);
    verify_cmd->add_flag("--no-green", cfg.no_green, "skip the Green transform identity");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_code::ok;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return exit_code::spec;
    }
    try {
        if (*density_cmd) return cmd_density(cfg, out);
        if (*bounds_cmd) return cmd_bounds(cfg, out, err);
        if (*audit_cmd) return cmd_audit(cfg, out);
        if (*scaling_cmd) return cmd_scaling_report(cfg, out);
        if (*green_cmd) return cmd_green(cfg, out);
        if (*heat_cmd) return cmd_heat_kernel(cfg, out, err);
        if (*sample_cmd) return cmd_sample(cfg, out, err);
        if (*verify_cmd) return cmd_verify(cfg, out, err);
    } catch (const SpecFormatError& e) {
        err << "spec error: " << e.what() << '\n';
        return exit_code::spec;
    } catch (const ModelInvalidError& e) {
        err << "invalid model: " << e.what() << '\n';
        return exit_code::spec;
    } catch (const CapabilityError& e) {
        err << "not applicable: " << e.what() << '\n';
        return exit_code::capability;
    } catch (const DomainError& e) {
        err << "outside domain: " << e.what() << '\n';
        return exit_code::capability;
    } catch (const SupportError& e) {
        err << "outside support: " << e.what() << '\n';
        return exit_code::capability;
    } catch (const NumericalIntegrityError& e) {
        err << "numerical integrity: " << e.what() << '\n';
        return exit_code::integrity;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::integrity;
    }
    return exit_code::spec;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace subdense
