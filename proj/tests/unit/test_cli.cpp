#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "common.hpp"
#include "subdense/cli.hpp"
#include "subdense/format.hpp"
#include <json.hpp>

using namespace subdense;
using testing::model_path;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content) {
    const auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream(p) << content;
    return p.string();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("grid parsing") {
    const auto g = parse_grid("1:100:3");
    REQUIRE(g.size() == 3);
    CHECK(g[0] == doctest::Approx(1.0));
    CHECK(g[1] == doctest::Approx(10.0));
    CHECK(g[2] == doctest::Approx(100.0));
    CHECK(parse_grid("0.5,2") == std::vector<double>{0.5, 2.0});
    CHECK(parse_grid("4") == std::vector<double>{4.0});
    CHECK_THROWS(parse_grid("a:b"));
}

TEST_CASE("number formatting round-trips") {
    for (double v : {0.1, 1.0 / 3.0, 2.8139e-4, 1e300, -5.0}) CHECK(std::stod(format_number(v)) == v);
    CHECK(format_number(1.0 / 0.0) == "inf");
    CsvTable t({"a", "b"});
    t.add_row({1.0, 0.5});
    CHECK(t.str() == "a,b\n1,0.5\n");
}

TEST_CASE("density command") {
    const auto r = run_cli({"density", "--model", model_path("stable05.json"), "--t", "1", "--x", "1", "--method", "both"});
    CHECK(r.code == exit_code::ok);
    CHECK(r.out.rfind("t,x,value,method,w,saddle_mass,exponent,ratio,flag\n", 0) == 0);
    CHECK(r.out.find("1,1,0.21969564") != std::string::npos);
    // deterministic output
    CHECK(run_cli({"density", "--model", model_path("stable05.json"), "--t", "1", "--x", "1", "--method", "both"}).out == r.out);
}

TEST_CASE("capability failures exit 2 with the failed hypothesis") {
    const auto r = run_cli({"density", "--model", model_path("gamma.json"), "--t", "1", "--x", "1", "--method", "saddle"});
    CHECK(r.code == exit_code::capability);
    CHECK(r.err.find("WLSC(α−2), α>0: failed") != std::string::npos);
}

TEST_CASE("malformed input exits 3") {
    const auto bad = temp_file("subdense_bad.json", "{\"family\": \"stable\", \"alpha\": ");
    CHECK(run_cli({"density", "--model", bad, "--t", "1", "--x", "1"}).code == exit_code::spec);
    const auto wrong = temp_file("subdense_wrong.json", "{\"family\": \"stable\", \"alpha\": \"half\"}");
    const auto r = run_cli({"density", "--model", wrong, "--t", "1", "--x", "1"});
    CHECK(r.code == exit_code::spec);
    CHECK(r.err.find("alpha") != std::string::npos);
    CHECK(run_cli({"density", "--t", "1"}).code == exit_code::spec);
    CHECK(run_cli({"no-such-command"}).code == exit_code::spec);
}

TEST_CASE("green and heat-kernel commands") {
    const auto g = run_cli({"green", "--model", model_path("stable05.json"), "--x", "1,4"});
    CHECK(g.code == exit_code::ok);
    CHECK(g.out.find("0.56418958") != std::string::npos);
    const auto h = run_cli({"heat-kernel", "--model", model_path("stable05.json"), "--profile",
                            model_path("gaussian_profile.json"), "--t", "1", "--tau", "0.1,10"});
    CHECK(h.code == exit_code::ok);
    CHECK(h.out.find(",near,") != std::string::npos);
    CHECK(h.out.find(",far,") != std::string::npos);
}

TEST_CASE("sample command writes reproducible files") {
    const auto dir = std::filesystem::temp_directory_path();
    const auto a = (dir / "subdense_a.csv").string(), b = (dir / "subdense_b.csv").string();
    for (const auto& p : {a, b})
        CHECK(run_cli({"sample", "--model", model_path("stable05.json"), "--t", "1", "--n", "500", "--eps", "1e-4",
                       "--seed", "3", "--out", p})
                  .code == exit_code::ok);
    std::ifstream fa(a), fb(b);
    const std::string sa((std::istreambuf_iterator<char>(fa)), {}), sb((std::istreambuf_iterator<char>(fb)), {});
    CHECK(sa == sb);
    CHECK(std::count(sa.begin(), sa.end(), '\n') == 501);
}

TEST_CASE("bounds and audit commands") {
    const auto b = run_cli({"bounds", "--model", model_path("stable05.json"), "--t", "1", "--x", "0.25,100"});
    CHECK(b.code == exit_code::ok);
    CHECK(b.out.find(",tail,") != std::string::npos);
    const auto a = run_cli({"audit", "--model", model_path("stable05.json")});
    CHECK(a.code == exit_code::ok);
    const auto doc = nlohmann::json::parse(a.out);
    CHECK(doc.contains("scaling"));
    const auto d = run_cli({"bounds", "--model", model_path("gamma.json"), "--t", "1", "--x", "1"});
    CHECK(d.code == exit_code::capability);
}

TEST_CASE("verify on a degenerate model") {
    const auto r = run_cli({"verify", "--model", model_path("drift.json")});
    CHECK(r.code == exit_code::ok);
    CHECK(r.out.find("degenerate") != std::string::npos);
}

}
