// SPDX-License-Identifier: MIT
//
// Kernel file I/O and report plumbing.
//
// Kernel schema:
//   {"max_level": N,
//    "levels": [{"m": 2, "entries": [[[1,2], 0.2886751], ...]}, ...],
//    "meta": {...}}
// Indices are 1-based arrays; values are IEEE doubles serialized with 17
// significant digits, so save/load round-trips bitwise.
#pragma once

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "chaoslab/errors.hpp"
#include "chaoslab/kernel.hpp"
#include "chaoslab/version.hpp"

namespace chaoslab {

using Json = nlohmann::ordered_json;

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct LoadedKernel {
    ChaosCoefficients coefficients;
    std::vector<std::string> warnings;
};

inline LoadedKernel kernel_from_json(const Json& doc) {
    LoadedKernel out;
    if (!doc.is_object() || !doc.contains("max_level") || !doc.contains("levels"))
        throw SchemaError("kernel file must be an object with max_level and levels (at /)");
    if (!doc["max_level"].is_number_integer())
        throw SchemaError("max_level must be an integer (at /max_level)");
    int max_level = doc["max_level"].get<int>();
    if (max_level < 1) throw SchemaError("max_level must be >= 1 (at /max_level)");
    if (!doc["levels"].is_array()) throw SchemaError("levels must be an array (at /levels)");

    std::map<int, SymmetricKernel> levels;
    for (std::size_t li = 0; li < doc["levels"].size(); ++li) {
        const Json& lv = doc["levels"][li];
        std::string lp = "/levels/" + std::to_string(li);
        if (!lv.is_object() || !lv.contains("m") || !lv.contains("entries"))
            throw SchemaError("level must carry m and entries (at " + lp + ")");
        int m = lv["m"].get<int>();
        if (m < 1 || m > max_level)
            throw SchemaError("level m outside 1..max_level (at " + lp + "/m)");
        if (levels.count(m)) throw SchemaError("level m repeated (at " + lp + "/m)");
        std::vector<std::pair<MultiIndex, double>> entries;
        const Json& ea = lv["entries"];
        if (!ea.is_array()) throw SchemaError("entries must be an array (at " + lp + "/entries)");
        for (std::size_t ei = 0; ei < ea.size(); ++ei) {
            std::string ep = lp + "/entries/" + std::to_string(ei);
            const Json& e = ea[ei];
            if (!e.is_array() || e.size() != 2 || !e[0].is_array() || !e[1].is_number())
                throw SchemaError("entry must be [[indices], value] (at " + ep + ")");
            MultiIndex idx;
            for (const Json& x : e[0]) {
                if (!x.is_number_integer() || x.get<int>() < 1)
                    throw SchemaError("indices are 1-based integers (at " + ep + "/0)");
                idx.push_back(x.get<int>());
            }
            if (static_cast<int>(idx.size()) != m)
                throw SchemaError("index tuple length != m (at " + ep + "/0)");
            if (!strictly_increasing(idx)) {
                if (has_repeat(idx))
                    throw RepeatedIndex("repeated index in entry (at " + ep + "/0)");
                out.warnings.push_back("unsorted key canonicalized (at " + ep + "/0)");
            }
            entries.emplace_back(std::move(idx), e[1].get<double>());
        }
        try {
            levels.emplace(m, make_kernel(m, entries));
        } catch (const DuplicateKey& err) {
            throw SchemaError(std::string(err.what()) + " (at " + lp + "/entries)");
        }
    }
    out.coefficients = ChaosCoefficients(max_level, std::move(levels));
    return out;
}

inline Json kernel_to_json(const ChaosCoefficients& c, Json meta = Json::object()) {
    Json doc;
    doc["max_level"] = c.max_level();
    doc["levels"] = Json::array();
    for (const auto& [m, k] : c.levels()) {
        if (k.empty()) continue;
        Json lv;
        lv["m"] = m;
        lv["entries"] = Json::array();
        for (const auto& [key, v] : k.entries()) lv["entries"].push_back(Json::array({key, v}));
        doc["levels"].push_back(std::move(lv));
    }
    doc["meta"] = std::move(meta);
    return doc;
}

inline LoadedKernel load_kernel(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open kernel file '" + path + "'");
    Json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("invalid JSON in '" + path + "': " + e.what());
    }
    return kernel_from_json(doc);
}

inline void save_kernel(const ChaosCoefficients& c, const std::string& path,
                        Json meta = Json::object()) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write kernel file '" + path + "'");
    out << kernel_to_json(c, std::move(meta)).dump(2) << "\n";
}

// FNV-1a over the canonical kernel dump; stamped into every report so two
// runs with identical headers are comparable at a glance.
inline std::string kernel_hash(const ChaosCoefficients& c) {
    std::string dump = kernel_to_json(c).dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : dump) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return buf;
}

inline Json report_header(std::uint64_t seed, int shards, const std::string& hash = "") {
    Json h;
    h["tool_version"] = kVersion;
    h["seed"] = seed;
    h["shards"] = shards;
    if (!hash.empty()) h["kernel_hash"] = hash;
    return h;
}

}  // namespace chaoslab
