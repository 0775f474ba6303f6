#include "subdense/model_io.hpp"

#include <fstream>
#include <sstream>

namespace subdense {

using nlohmann::json;

namespace {

double number(const json& doc, const char* key) {
    if (!doc.contains(key)) throw SpecFormatError(key, "missing");
    const json& v = doc.at(key);
    if (!v.is_number()) throw SpecFormatError(key, "expected a number");
    return v.get<double>();
}

double number_or(const json& doc, const char* key, double fallback) {
    return doc.contains(key) ? number(doc, key) : fallback;
}

LevyMeasure levy_from_json(const json& levy) {
    if (!levy.is_object()) throw SpecFormatError("levy", "expected an object");
    if (!levy.contains("kind") || !levy.at("kind").is_string()) throw SpecFormatError("levy.kind", "missing");
    const std::string kind = levy.at("kind").get<std::string>();
    if (kind == "none") return LevyMeasure::none();
    if (kind == "power") return LevyMeasure::power(number(levy, "c"), number(levy, "alpha"));
    if (kind == "power_log")
        return LevyMeasure::power_log(number(levy, "c"), number(levy, "alpha"), number(levy, "sigma"));
    if (kind == "tempered")
        return LevyMeasure::tempered(number(levy, "c"), number(levy, "alpha"), number(levy, "theta"));
    if (kind == "tabulated") {
        if (!levy.contains("points") || !levy.at("points").is_array())
            throw SpecFormatError("levy.points", "expected an array of [s, nu(s)] pairs");
        std::vector<std::pair<double, double>> pts;
        std::size_t i = 0;
        for (const json& p : levy.at("points")) {
            if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
                throw SpecFormatError("levy.points[" + std::to_string(i) + "]", "expected [s, nu(s)]");
            pts.emplace_back(p[0].get<double>(), p[1].get<double>());
            ++i;
        }
        if (!levy.contains("tail_exponents") || !levy.at("tail_exponents").is_array() ||
            levy.at("tail_exponents").size() != 2)
            throw SpecFormatError("levy.tail_exponents", "expected [p0, p_inf]");
        const json& te = levy.at("tail_exponents");
        if (!te[0].is_number() || !te[1].is_number())
            throw SpecFormatError("levy.tail_exponents", "expected two numbers");
        if (!levy.contains("mono_constant")) throw SpecFormatError("levy.mono_constant", "missing");
        return LevyMeasure::tabulated(std::move(pts), te[0].get<double>(), te[1].get<double>(),
                                      number(levy, "mono_constant"));
    }
    throw SpecFormatError("levy.kind", "unknown kind '" + kind + "'");
}

}  // namespace

BernsteinModel model_from_json(const json& doc) {
    if (!doc.is_object()) throw SpecFormatError("<root>", "expected an object");
    if (!doc.contains("family") || !doc.at("family").is_string()) throw SpecFormatError("family", "missing");
    const std::string fam = doc.at("family").get<std::string>();
    const double b = number_or(doc, "drift", 0.0);
    BernsteinModel m = [&] {
        if (fam == "stable") return BernsteinModel::stable(number(doc, "alpha"), b);
        if (fam == "power") return BernsteinModel::power(number(doc, "c"), number(doc, "alpha"), b);
        if (fam == "power_log")
            return BernsteinModel::power_log(number(doc, "c"), number(doc, "alpha"), number(doc, "sigma"), b);
        if (fam == "tempered")
            return BernsteinModel::tempered(number(doc, "c"), number(doc, "alpha"), number(doc, "theta"), b);
        if (fam == "gamma") return BernsteinModel::gamma(b);
        if (fam == "log_stable") {
            if (b != 0.0) throw SpecFormatError("drift", "log_stable takes no drift");
            return BernsteinModel::log_stable(number(doc, "alpha"), number(doc, "sigma"));
        }
        if (fam == "drift") return BernsteinModel::pure_drift(b);
        if (fam == "custom") {
            if (!doc.contains("levy")) throw SpecFormatError("levy", "missing");
            const std::string tag = doc.contains("tag") && doc.at("tag").is_string()
                                        ? doc.at("tag").get<std::string>()
                                        : std::string("custom");
            return BernsteinModel::custom(b, levy_from_json(doc.at("levy")), tag);
        }
        throw SpecFormatError("family", "unknown family '" + fam + "'");
    }();
    const ValidationReport rep = m.validate();
    if (!rep.ok) {
        std::string msg = "model failed load-time checks:";
        for (const auto& f : rep.failures) msg += " " + f + ";";
        throw ModelInvalidError(msg);
    }
    return m;
}

json parse_json_text(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < upto; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::ostringstream os;
        os << origin << ":" << line << ":" << col << ": invalid JSON";
        throw SpecFormatError("<syntax>", os.str());
    }
}

json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SpecFormatError("<file>", "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str(), path);
}

BernsteinModel parse_model(const std::string& text) { return model_from_json(parse_json_text(text, "<string>")); }

BernsteinModel load_model(const std::string& path) { return model_from_json(read_json_file(path)); }

HeatProfile profile_from_json(const json& doc) {
    if (!doc.is_object()) throw SpecFormatError("<root>", "profile spec must be a JSON object");
    if (!doc.contains("kind") || !doc.at("kind").is_string()) throw SpecFormatError("kind", "missing");
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "sierpinski") return HeatProfile::sierpinski();
    if (kind == "fractal") return HeatProfile::fractal(number(doc, "n"), number(doc, "gamma"));
    if (kind == "gaussian") return HeatProfile::gaussian(number(doc, "n"), number(doc, "c1"), number(doc, "c2"));
    throw SpecFormatError("kind", "unknown profile kind '" + kind + "'");
}

HeatProfile load_profile(const std::string& path) { return profile_from_json(read_json_file(path)); }

}  // namespace subdense
