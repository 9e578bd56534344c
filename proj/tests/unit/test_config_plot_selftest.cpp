#include "smisga/config_io.hpp"
#include "smisga/plot.hpp"
#include "smisga/selftest.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>

using namespace smisga;
using nlohmann::json;

TEST_CASE("config files fill only the keys they name") {
    const RunConfig rc = parse_run_config(json::parse(R"({
        "solver": {"theta": 1e-6, "window_N": 5, "upper_bound_gate": false},
        "grid": {"ensembles": ["bernoulli"], "n": [256, 512], "noise_h": [7]},
        "solvers": ["isga"],
        "seed": 7,
        "jobs": 3
    })"));
    CHECK(rc.solver.theta == 1e-6);
    CHECK(rc.solver.window_N == 5);
    CHECK_FALSE(rc.solver.upper_bound_gate);
    CHECK(rc.solver.mu == SolverConfig{}.mu);
    REQUIRE(rc.grid);
    CHECK(rc.grid->ensembles == std::vector{EnsembleKind::bernoulli});
    CHECK(rc.grid->n == std::vector<Index>{256, 512});
    CHECK(rc.grid->delta == GridAxes::full().delta);
    CHECK(rc.grid->size() == 2 * 3 * 3 * 1);
    CHECK(*rc.solvers == std::vector<std::string>{"isga"});
    CHECK(*rc.seed == 7);
    CHECK(*rc.jobs == 3);

    const RunConfig empty = parse_run_config(json::object());
    CHECK_FALSE(empty.grid);
    CHECK_FALSE(empty.seed);
}

TEST_CASE("config files reject unknown or invalid content") {
    for (const char* text : {R"({"solvr": {}})", R"({"solver": {"muu": 1}})", R"({"grid": {"m": [3]}})",
                             R"({"solver": {"mu": "big"}})", R"({"solver": {"mu": -1}})",
                             R"({"grid": {"n": [1000]}})", R"({"grid": {"ensembles": ["gauss"]}})",
                             R"({"grid": {"delta": []}})", R"({"solvers": ["twist"]})", R"({"seed": -4})",
                             R"({"jobs": 0})", R"([1, 2])"}) {
        CAPTURE(text);
        CHECK_THROWS_AS(parse_run_config(json::parse(text)), ConfigError);
    }
}

TEST_CASE("config file loading") {
    const std::string path = "smisga_test_config.json";
    {
        std::ofstream os(path);
        os << R"({"solver": {"max_iter": 12}})";
    }
    CHECK(load_run_config(path).solver.max_iter == 12);
    {
        std::ofstream os(path);
        os << "{ not json";
    }
    CHECK_THROWS_AS(load_run_config(path), ConfigError);
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_run_config("/nonexistent/cfg.json"), std::runtime_error);
}

TEST_CASE("resolved config serializes back to an equal config") {
    SolverConfig c;
    c.mu = 0.5;
    c.max_iter = 77;
    json j;
    j["solver"] = to_json(c);
    j["grid"] = to_json(GridAxes::reduced());
    const RunConfig rc = parse_run_config(j);
    CHECK(rc.solver.mu == 0.5);
    CHECK(rc.solver.max_iter == 77);
    CHECK(rc.grid->size() == 432);
}

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("profile svg has one polyline per solver") {
    std::vector<ProfileCurve> curves{{"smisga", {{1.0, 0.5}, {2.0, 0.75}, {8.0, 1.0}}},
                                     {"a<b&c", {{1.0, 0.5}, {2.0, 0.5}, {8.0, 0.9}}}};
    std::stringstream ss;
    write_profile_svg(ss, Metric::n_fun, curves);
    const std::string svg = ss.str();
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(count(svg, "<polyline") == 2);
    CHECK(svg.find("a&lt;b&amp;c") != std::string::npos);
    CHECK(svg.find("a<b") == std::string::npos);
    CHECK(count(svg, "<svg") == 1);
    CHECK(count(svg, "</svg>") == 1);

    std::stringstream flat;
    write_profile_svg(flat, Metric::n_iter, {{"only", {{1.0, 1.0}}}});
    CHECK(count(flat.str(), "<polyline") == 1);
    CHECK(flat.str().find("nan") == std::string::npos);
}

TEST_CASE("trace svg") {
    std::stringstream ss;
    write_trace_svg(ss, {{"smisga", {3.0, 2.0, 1.5, 1.25}}, {"fista", {3.0, 1.0, 1.0}}});
    const std::string svg = ss.str();
    CHECK(count(svg, "<polyline") == 2);
    CHECK(svg.find("nan") == std::string::npos);
    CHECK(svg.find("inf") == std::string::npos);
}

TEST_CASE("xml escaping") {
    CHECK(xml_escape("a&b<c>\"d'") == "a&amp;b&lt;c&gt;&quot;d&apos;");
    CHECK(xml_escape("plain") == "plain");
}

TEST_CASE("selftest passes by default and detects a flipped acceptance test") {
    for (std::uint64_t seed : {1ULL, 2ULL, 20240917ULL}) {
        for (const auto& g : run_selftest({seed, false})) {
            CAPTURE(g.name);
            CAPTURE(g.detail);
            CHECK(g.passed);
        }
    }
    bool acceptance_failed = false;
    for (const auto& g : run_selftest({20240917, true}))
        if (g.name.find("semi-monotone acceptance") != std::string::npos) acceptance_failed = !g.passed;
    CHECK(acceptance_failed);
}
