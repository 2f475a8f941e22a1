#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>

#include "k3kit/config.hpp"
#include "k3kit/suite.hpp"

using namespace k3kit;
using ser::json;

namespace {

json reference_json() {
    std::ifstream in(std::string(K3KIT_FIXTURE_DIR) + "/reference.json");
    REQUIRE(in);
    return json::parse(in);
}

} // namespace

TEST_CASE("reference config loads and validates", "[config]") {
    auto config = cfg::load_config(std::string(K3KIT_FIXTURE_DIR) + "/reference.json");
    CHECK(config.seed == 20250817);
    CHECK(config.gluing.R == 2.0);
    CHECK(config.warnings.empty());
    CHECK(config.geometry.pair.precision_bits == 113);
    CHECK_FALSE(config.theta_override.has_value());
}

TEST_CASE("validation collects every violation", "[config]") {
    json j = reference_json();
    j["gluing"]["s"] = json::array({1.5, 0.0});
    j["weights"]["R1"] = 3.0;  // violates R1 < R2
    try {
        cfg::config_from_json(j);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        REQUIRE(e.violations.size() >= 2);
        bool saw_s = false, saw_weights = false;
        for (const auto& v : e.violations) {
            if (v.find("s") != std::string::npos) saw_s = true;
            if (v.find("weights") != std::string::npos) saw_weights = true;
        }
        CHECK(saw_s);
        CHECK(saw_weights);
    }
}

TEST_CASE("unknown keys are rejected", "[config]") {
    json j = reference_json();
    j["geometry"]["unexpected"] = 1;
    CHECK_THROWS_AS(cfg::config_from_json(j), ValidationError);
    json j2 = reference_json();
    j2["frobnicate"] = true;
    CHECK_THROWS_AS(cfg::config_from_json(j2), ValidationError);
}

TEST_CASE("torrelation policy: warning at float mode, error at exact mode", "[config]") {
    json j = reference_json();
    auto p3 = j["geometry"]["p_plus"][3];
    j["geometry"]["p_plus"][3] = json::array({p3[0].get<double>() + 1e-6, p3[1].get<double>()});
    auto cfg_float = cfg::config_from_json(j);
    REQUIRE_FALSE(cfg_float.warnings.empty());
    CHECK(cfg_float.warnings.front().find("torrelation") != std::string::npos);

    j["mode"] = "exact";
    try {
        cfg::config_from_json(j);
        FAIL("expected ValidationError in exact mode");
    } catch (const ValidationError& e) {
        bool saw = false;
        for (const auto& v : e.violations)
            if (v.find("torrelation") != std::string::npos) saw = true;
        CHECK(saw);
    }
}

TEST_CASE("suite reports are deterministic given config and seed", "[config]") {
    auto config = cfg::load_config(std::string(K3KIT_FIXTURE_DIR) + "/reference.json");
    auto r1 = suite::run_suite(config, "lattice");
    auto r2 = suite::run_suite(config, "lattice");
    CHECK(suite::to_json(r1, false).dump() == suite::to_json(r2, false).dump());
    auto c1 = suite::run_suite(config, "chern");
    auto c2 = suite::run_suite(config, "chern");
    CHECK(suite::to_json(c1, false).dump() == suite::to_json(c2, false).dump());
}

TEST_CASE("suite fails on the non-integral theta fixture", "[config]") {
    auto config = cfg::load_config(std::string(K3KIT_FIXTURE_DIR) + "/nonintegral_theta.json");
    REQUIRE(config.theta_override.has_value());
    auto rep = suite::run_suite(config, "theta");
    CHECK_FALSE(rep.all_pass);
    bool cocycle_failed = false;
    for (const auto& c : rep.checks)
        if (c.name.find("cocycle_identity") != std::string::npos && !c.pass) cocycle_failed = true;
    CHECK(cocycle_failed);
}

TEST_CASE("CLI exit codes: 0 success, 1 invariant failure, 2 usage", "[config][cli]") {
    const std::string cli = K3KIT_CLI_PATH;
    const std::string fixtures = K3KIT_FIXTURE_DIR;
    auto run = [](const std::string& cmd) {
        int status = std::system((cmd + " > /dev/null 2>&1").c_str());
        return WEXITSTATUS(status);
    };
    CHECK(run(cli + " lattice verify") == 0);
    CHECK(run(cli + " suite --config " + fixtures + "/reference.json --suite lattice") == 0);
    CHECK(run(cli + " suite --config " + fixtures + "/nonintegral_theta.json --suite theta") == 1);
    CHECK(run(cli + " suite") == 2);                      // missing required option
    CHECK(run(cli + " suite --config /nonexistent.json") == 2);
    CHECK(run(cli + " check-diophantine --p 1/2 --q 1/3 --exact --n-max 10") == 0);
}

TEST_CASE("CLI suite output is byte-stable with --no-timings", "[config][cli]") {
    const std::string cli = K3KIT_CLI_PATH;
    const std::string fixtures = K3KIT_FIXTURE_DIR;
    auto capture = [&](const std::string& tag) {
        std::string path = "/tmp/k3kit_suite_" + tag + ".json";
        std::string cmd = cli + " suite --config " + fixtures +
                          "/reference.json --suite gluing --no-timings > " + path + " 2>/dev/null";
        REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
        std::ifstream in(path);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };
    CHECK(capture("a") == capture("b"));
}
