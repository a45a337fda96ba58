// SPDX-License-Identifier: MIT
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "chaoslab/experiments.hpp"
#include "chaoslab/kernel_io.hpp"

using namespace chaoslab;

namespace {

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("kernel file round-trip is bitwise lossless") {
    ChaosCoefficients c = generate_family({"complete", 2, 3, 0});
    std::string path = temp_path("chaoslab_fixture.json");
    save_kernel(c, path);
    LoadedKernel lk = load_kernel(path);
    CHECK(lk.warnings.empty());
    REQUIRE(lk.coefficients.level(2) != nullptr);
    for (const auto& [key, v] : c.level(2)->entries()) {
        double loaded = lk.coefficients.level(2)->value_at_canonical(key);
        CHECK(std::memcmp(&loaded, &v, sizeof(double)) == 0);
    }
    // save -> load -> save reproduces the same bytes
    std::string path2 = temp_path("chaoslab_fixture2.json");
    save_kernel(lk.coefficients, path2);
    CHECK(slurp(path) == slurp(path2));
    std::filesystem::remove(path);
    std::filesystem::remove(path2);
}

TEST_CASE("schema errors carry JSON pointers") {
    Json doc;
    doc["max_level"] = 2;
    doc["levels"] = Json::array();
    Json lv;
    lv["m"] = 2;
    lv["entries"] = Json::array({Json::array({Json::array({1, 1}), 0.5})});
    doc["levels"].push_back(lv);
    try {
        kernel_from_json(doc);
        FAIL("expected RepeatedIndex");
    } catch (const RepeatedIndex& e) {
        CHECK(std::string(e.what()).find("/levels/0/entries/0") != std::string::npos);
    }

    Json missing;
    missing["levels"] = Json::array();
    CHECK_THROWS_AS(kernel_from_json(missing), SchemaError);

    Json badlen;
    badlen["max_level"] = 2;
    badlen["levels"] = Json::array();
    Json lv2;
    lv2["m"] = 2;
    lv2["entries"] = Json::array({Json::array({Json::array({1, 2, 3}), 0.5})});
    badlen["levels"].push_back(lv2);
    CHECK_THROWS_AS(kernel_from_json(badlen), SchemaError);
}

TEST_CASE("unsorted keys are canonicalized with a warning") {
    Json doc;
    doc["max_level"] = 2;
    doc["levels"] = Json::array();
    Json lv;
    lv["m"] = 2;
    lv["entries"] = Json::array({Json::array({Json::array({2, 1}), 0.5})});
    doc["levels"].push_back(lv);
    LoadedKernel lk = kernel_from_json(doc);
    CHECK(lk.warnings.size() == 1);
    CHECK(lk.coefficients.level(2)->value_at_canonical({1, 2}) == 0.5);
}

TEST_CASE("kernel hash and report header are deterministic") {
    ChaosCoefficients c = generate_family({"path", 2, 10, 0});
    CHECK(kernel_hash(c) == kernel_hash(c));
    ChaosCoefficients d = generate_family({"path", 2, 11, 0});
    CHECK(kernel_hash(c) != kernel_hash(d));

    Json h = report_header(42, 3, kernel_hash(c));
    CHECK(h["tool_version"] == kVersion);
    CHECK(h["seed"] == 42);
    CHECK(h["shards"] == 3);
    CHECK(h["kernel_hash"] == kernel_hash(c));
}

TEST_CASE("seventeen significant digits round-trip through text") {
    double v = 0.28867513459481287;  // 1/sqrt(12)
    std::string s = format_double(v);
    double back = std::stod(s);
    CHECK(std::memcmp(&back, &v, sizeof(double)) == 0);
}
