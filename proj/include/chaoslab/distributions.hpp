// SPDX-License-Identifier: MIT
//
// Source laws for the Z coordinates: seedable sampler, exact moment table,
// optional density and splitting triple. Every registered law is centered
// with unit variance; registration runs a one-time sample check.
#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "chaoslab/errors.hpp"
#include "chaoslab/oracle.hpp"
#include "chaoslab/rng.hpp"

namespace chaoslab {

// Parameters (z, r, eps) of a local Lebesgue lower bound on the law.
struct DoeblinTriple {
    double z = 0.0;
    double r = 0.0;
    double eps = 0.0;
};

struct SourceDistribution {
    std::string name;
    MomentTable moments;
    std::function<double(Rng&)> draw;
    std::function<double(double)> density;  // empty for discrete laws
    std::optional<DoeblinTriple> doeblin;
};

namespace detail {

inline void validate_moments(const SourceDistribution& d) {
    Rng rng(0x5eedf00dull ^ splitmix64(std::hash<std::string>{}(d.name)));
    const std::size_t n = 1'000'000;
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double x = d.draw(rng);
        sum += x;
        sum_sq += x * x;
    }
    double mean = sum / n;
    double var = sum_sq / n - mean * mean;
    if (std::abs(mean) > 0.01 || std::abs(var - 1.0) > 0.02)
        throw Error("distribution '" + d.name + "' failed the mean-0/variance-1 check");
}

}  // namespace detail

inline const std::vector<SourceDistribution>& registry() {
    static const std::vector<SourceDistribution> dists = [] {
        std::vector<SourceDistribution> v;

        v.push_back({"gaussian", gaussian_table(),
                     [](Rng& rng) { return rng.normal(); },
                     [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); },
                     DoeblinTriple{0.0, 0.5, 0.24}});

        v.push_back({"rademacher", rademacher_table(),
                     [](Rng& rng) { return rng.rademacher(); },
                     nullptr, std::nullopt});

        const double s3 = std::sqrt(3.0);
        v.push_back({"uniform", uniform_table(),
                     [s3](Rng& rng) { return s3 * (2.0 * rng.uniform01() - 1.0); },
                     [s3](double x) { return std::abs(x) <= s3 ? 1.0 / (2.0 * s3) : 0.0; },
                     DoeblinTriple{0.0, 0.5, 0.28}});

        // Laplace with scale 1/sqrt(2); density at |x| = 1 is ~0.1719
        const double b = 1.0 / std::sqrt(2.0);
        v.push_back({"laplace", laplace_table(),
                     [b](Rng& rng) {
                         double u = rng.uniform01() - 0.5;
                         double mag = std::abs(u);
                         while (mag >= 0.5) {
                             u = rng.uniform01() - 0.5;
                             mag = std::abs(u);
                         }
                         return -b * std::copysign(1.0, u) * std::log1p(-2.0 * mag);
                     },
                     [b](double x) { return std::exp(-std::abs(x) / b) / (2.0 * b); },
                     DoeblinTriple{0.0, 0.5, 0.17}});

        for (const auto& d : v) detail::validate_moments(d);
        return v;
    }();
    return dists;
}

inline const SourceDistribution& find_distribution(const std::string& name) {
    for (const auto& d : registry())
        if (d.name == name) return d;
    throw Error("unknown distribution '" + name + "'");
}

}  // namespace chaoslab
