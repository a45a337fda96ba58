// SPDX-License-Identifier: MIT
//
// Seeded Monte Carlo for S_N(c, Z) and the empirical statistics the
// experiments read off the batches.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <thread>
#include <vector>

#include "chaoslab/distributions.hpp"
#include "chaoslab/kernel.hpp"
#include "chaoslab/rng.hpp"

namespace chaoslab {

struct SampleBatch {
    std::vector<double> values;
    std::uint64_t seed = 0;
    int shards = 1;

    [[nodiscard]] std::size_t size() const { return values.size(); }
};

namespace detail {

// Shard k owns a contiguous slice and its own derived seed; the batch is a
// pure function of (seed, shards) no matter how the shards are scheduled.
template <typename Fill>
SampleBatch run_sharded(std::uint64_t seed, std::size_t n, int shards, Fill&& fill) {
    if (n < 1) throw Error("sample count must be >= 1");
    if (shards < 1) throw Error("shard count must be >= 1");
    SampleBatch batch;
    batch.seed = seed;
    batch.shards = shards;
    batch.values.resize(n);
    std::size_t base = n / static_cast<std::size_t>(shards);
    std::size_t extra = n % static_cast<std::size_t>(shards);
    std::vector<std::pair<std::size_t, std::size_t>> slices;  // (offset, len)
    std::size_t offset = 0;
    for (int k = 0; k < shards; ++k) {
        std::size_t len = base + (static_cast<std::size_t>(k) < extra ? 1 : 0);
        slices.emplace_back(offset, len);
        offset += len;
    }
    auto work = [&](int k) {
        Rng rng(shard_seed(seed, static_cast<std::uint64_t>(k)));
        auto [off, len] = slices[static_cast<std::size_t>(k)];
        fill(rng, batch.values.data() + off, len);
    };
    if (shards == 1 || std::thread::hardware_concurrency() <= 1) {
        for (int k = 0; k < shards; ++k) work(k);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(shards));
        for (int k = 0; k < shards; ++k) pool.emplace_back(work, k);
        for (auto& t : pool) t.join();
    }
    return batch;
}

}  // namespace detail

// n i.i.d. replications of S_N(c, Z); each replication draws a fresh
// coordinate vector over the support.
inline SampleBatch sample_series(const ChaosCoefficients& c, const SourceDistribution& dist,
                                 std::uint64_t seed, std::size_t n, int shards = 1) {
    std::size_t J = static_cast<std::size_t>(c.support_bound());
    return detail::run_sharded(seed, n, shards, [&](Rng& rng, double* out, std::size_t len) {
        std::vector<double> z(J);
        for (std::size_t i = 0; i < len; ++i) {
            for (std::size_t j = 0; j < J; ++j) z[j] = dist.draw(rng);
            out[i] = c.evaluate(z);
        }
    });
}

// Draws n raw variates of the law itself (no kernel).
inline SampleBatch sample_law(const SourceDistribution& dist, std::uint64_t seed,
                              std::size_t n, int shards = 1) {
    return detail::run_sharded(seed, n, shards, [&](Rng& rng, double* out, std::size_t len) {
        for (std::size_t i = 0; i < len; ++i) out[i] = dist.draw(rng);
    });
}

struct SampleMoments {
    double mean = 0.0;
    double variance = 0.0;
    double m4 = 0.0;  // fourth central moment
};

inline SampleMoments central_moments(const std::vector<double>& v) {
    SampleMoments out;
    if (v.empty()) return out;
    double n = static_cast<double>(v.size());
    out.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double s2 = 0.0, s4 = 0.0;
    for (double x : v) {
        double d = x - out.mean;
        double d2 = d * d;
        s2 += d2;
        s4 += d2 * d2;
    }
    out.variance = s2 / n;
    out.m4 = s4 / n;
    return out;
}

struct Kappa4Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

// Plain central-moment estimator m4 - 3 m2^2 with a batch-means standard
// error (32 blocks). Bias is O(1/n); every acceptance run uses n >= 1e5.
inline Kappa4Estimate empirical_kappa4(const SampleBatch& batch) {
    std::size_t n = batch.size();
    if (n < 1000) throw TooFewSamples("empirical kappa4 needs at least 1000 samples");
    auto k4_of = [](const std::vector<double>& v) {
        SampleMoments m = central_moments(v);
        return m.m4 - 3.0 * m.variance * m.variance;
    };
    Kappa4Estimate out;
    out.value = k4_of(batch.values);
    const std::size_t blocks = 32;
    std::size_t len = n / blocks;
    std::vector<double> block_vals;
    block_vals.reserve(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        std::vector<double> slice(batch.values.begin() + static_cast<std::ptrdiff_t>(b * len),
                                  batch.values.begin() + static_cast<std::ptrdiff_t>((b + 1) * len));
        block_vals.push_back(k4_of(slice));
    }
    double bm = std::accumulate(block_vals.begin(), block_vals.end(), 0.0) / blocks;
    double var = 0.0;
    for (double x : block_vals) var += (x - bm) * (x - bm);
    var /= (blocks - 1);
    out.std_error = std::sqrt(var / blocks);
    return out;
}

inline double normal_cdf(double x, double variance = 1.0) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0 * variance));
}

// Two-sided empirical-CDF Kolmogorov statistic against a target CDF.
inline double kolmogorov_distance(const SampleBatch& batch,
                                  const std::function<double(double)>& target_cdf) {
    if (!target_cdf) throw Error("kolmogorov_distance needs a target CDF");
    if (batch.values.empty()) throw Error("kolmogorov_distance needs a nonempty batch");
    std::vector<double> sorted = batch.values;
    std::sort(sorted.begin(), sorted.end());
    double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        double f = target_cdf(sorted[i]);
        d = std::max(d, std::max(f - static_cast<double>(i) / n,
                                 static_cast<double>(i + 1) / n - f));
    }
    return d;
}

// Two-sample Kolmogorov statistic, merge scan.
inline double two_sample_ks(const SampleBatch& a, const SampleBatch& b) {
    if (a.values.empty() || b.values.empty()) throw Error("two_sample_ks needs nonempty batches");
    std::vector<double> x = a.values, y = b.values;
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] <= v) ++i;
        while (j < y.size() && y[j] <= v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

struct SmoothDistance {
    double estimate = 0.0;
    double half_width = 0.0;  // 3-sigma CLT half-width from pooled variances
};

// |E f(S(c,Z)) - E f(S(c,Z~))| estimated with fresh independent draws per
// law (no common random numbers; the target is a difference of laws).
inline SmoothDistance smooth_distance(const ChaosCoefficients& c,
                                      const SourceDistribution& dist_a,
                                      const SourceDistribution& dist_b,
                                      const std::function<double(double)>& f,
                                      std::uint64_t seed_a, std::uint64_t seed_b,
                                      std::size_t n, int shards = 1) {
    SampleBatch a = sample_series(c, dist_a, seed_a, n, shards);
    SampleBatch b = sample_series(c, dist_b, seed_b, n, shards);
    double sum_a = 0.0, sum_b = 0.0, sq_a = 0.0, sq_b = 0.0;
    for (double x : a.values) {
        double v = f(x);
        sum_a += v;
        sq_a += v * v;
    }
    for (double x : b.values) {
        double v = f(x);
        sum_b += v;
        sq_b += v * v;
    }
    double nn = static_cast<double>(n);
    double mean_a = sum_a / nn, mean_b = sum_b / nn;
    double var_a = std::max(0.0, sq_a / nn - mean_a * mean_a);
    double var_b = std::max(0.0, sq_b / nn - mean_b * mean_b);
    SmoothDistance out;
    out.estimate = std::abs(mean_a - mean_b);
    out.half_width = 3.0 * std::sqrt((var_a + var_b) / nn);
    return out;
}

}  // namespace chaoslab
