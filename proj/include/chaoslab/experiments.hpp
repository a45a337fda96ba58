// SPDX-License-Identifier: MIT
//
// Bound evaluators and convergence experiments: smooth-distance bounds,
// the fourth-moment bound, the total-variation bound factor report, kernel
// families with known limiting behavior, and the CLT experiment table.
// Unnamed universal constants are caller-supplied parameters; no sharpness
// is claimed anywhere.
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chaoslab/expansion.hpp"
#include "chaoslab/contraction.hpp"
#include "chaoslab/distributions.hpp"
#include "chaoslab/kernel.hpp"
#include "chaoslab/oracle.hpp"
#include "chaoslab/sampling.hpp"

namespace chaoslab {

struct BoundConstants {
    std::map<int, double> b_table;  // Burkholder constants; default b_p = p - 1
    double C_p = 1.0;
    double C_star = 1.0;
    double d_star = 1.0;
    double c_star = 1.0;
    double M_star = 1.0;
    double p_star = 1.0;

    [[nodiscard]] double b(int p) const {
        auto it = b_table.find(p);
        if (it != b_table.end()) {
            if (it->second <= 0.0) throw Error("Burkholder constant must be positive");
            return it->second;
        }
        return static_cast<double>(p - 1);
    }
};

// ---------------------------------------------------------------------------
// Third-order smooth bound:
//   (1/3) ||f'''|| M3^3 N_0(c, M3)^2 eps0(c, M3),
// with M3 = max over both laws of (sqrt(2) b_3 E|Z|^3)^2.
// ---------------------------------------------------------------------------
inline double smooth_bound_rhs(const ChaosCoefficients& c, const SourceDistribution& dist_a,
                               const SourceDistribution& dist_b, double f3_norm,
                               const BoundConstants& constants = {}) {
    double b3 = constants.b(3);
    double abs3 = std::max(dist_a.moments.mu_abs(3), dist_b.moments.mu_abs(3));
    double m3 = std::pow(std::sqrt(2.0) * b3 * abs3, 2.0);
    double n0 = weighted_norm(c, 0, m3);
    return f3_norm / 3.0 * std::pow(m3, 3.0) * n0 * n0 * eps0(c, m3).value;
}

// Fourth-order variant; requires both third moments to vanish.
inline double smooth_bound4_rhs(const ChaosCoefficients& c, const SourceDistribution& dist_a,
                                const SourceDistribution& dist_b, double f4_norm,
                                const BoundConstants& constants = {}) {
    if (dist_a.moments.mu(3) != 0.0 || dist_b.moments.mu(3) != 0.0)
        throw ThirdMomentNonzero("fourth-order bound needs vanishing third moments");
    double b4 = constants.b(4);
    double abs4 = std::max(dist_a.moments.mu_abs(4), dist_b.moments.mu_abs(4));
    double m4 = std::pow(std::sqrt(2.0) * b4 * abs4, 2.0);
    double n0 = weighted_norm(c, 0, m4);
    double e0 = eps0(c, m4).value;
    return f4_norm / 12.0 * std::pow(m4, 4.0) * n0 * n0 * e0 * e0;
}

// ---------------------------------------------------------------------------
// Fourth-moment (Gaussian driver) bound: 3 ||f|| N^3 (2N)! (N!)^3 sum_l k^(1/4),
// and the k^(1/2) variant available when level 1 is absent.
// ---------------------------------------------------------------------------
struct FourthMomentBound {
    double quarter_power = 0.0;               // kappa^(1/4) form
    std::optional<double> half_power;          // kappa^(1/2) form, level 1 absent
    double selected = 0.0;
};

inline FourthMomentBound fourth_moment_bound_rhs(const ChaosCoefficients& c, double f_norm) {
    if (std::abs(series_second_moment(c) - 1.0) > 1e-9)
        throw NotNormalized("fourth-moment bound needs the unit normalization");
    int N = c.max_level();
    double lead = 3.0 * f_norm * std::pow(N, 3.0) * factorial(2 * N) *
                  std::pow(factorial(N), 3.0);
    double quarter = 0.0, half = 0.0;
    for (const auto& [m, k] : c.levels()) {
        double kap = kappa4(c, m);
        quarter += std::pow(kap, 0.25);
        half += std::sqrt(kap);
    }
    FourthMomentBound out;
    out.quarter_power = lead * quarter;
    if (level_norm(c, 1) == 0.0) out.half_power = lead * half;
    out.selected = out.half_power ? *out.half_power : out.quarter_power;
    return out;
}

// ---------------------------------------------------------------------------
// Total-variation bound structure: each computable factor of
//   C*/(m_r r)^d* . M*^N . N^c* . (N!)^(3 p*) ||f|| (kappa-bar^p* + delta-bar)
// with the weighted delta-bar, plus the hypothesis check
//   sum_l l! l delta_l^2 <= i_N / 4.
// ---------------------------------------------------------------------------
struct TvBoundFactors {
    double splitting_factor = 0.0;   // (m_r r)^(-d*)
    double growth_factor = 0.0;      // M*^N
    double poly_factor = 0.0;        // N^c*
    double factorial_factor = 0.0;   // (N!)^(3 p*)
    double kappa_bar = 0.0;
    double kappa_term = 0.0;         // kappa-bar^p*
    double delta_bar_weighted = 0.0;
    double alpha_term = 0.0;         // (1 + 1/alpha_N) kappa-bar
    double assembled = 0.0;          // stated form: ... (kappa^p* + delta)
    double assembled_proof_variant = 0.0;  // ... (kappa + delta)^p*
    bool a9_ok = false;
    double a9_lhs = 0.0;
    double a9_rhs = 0.0;
};

inline TvBoundFactors tv_bound_factors(const ChaosCoefficients& c,
                                       const BoundConstants& constants, double m_r, double r) {
    if (m_r <= 0.0 || r <= 0.0) throw Error("tv_bound_factors needs positive m_r and r");
    int N = c.max_level();
    TvBoundFactors out;
    out.a9_lhs = 0.0;
    for (const auto& [m, k] : c.levels()) {
        double d = influence(c, m);
        out.a9_lhs += factorial(m) * m * d * d;
    }
    out.a9_rhs = series_second_moment(c) / 4.0;
    out.a9_ok = out.a9_lhs <= out.a9_rhs;

    out.splitting_factor = std::pow(m_r * r, -constants.d_star);
    out.growth_factor = std::pow(constants.M_star, N);
    out.poly_factor = std::pow(N, constants.c_star);
    out.factorial_factor = std::pow(factorial(N), 3.0 * constants.p_star);
    out.kappa_bar = kappa_bar(c);
    out.kappa_term = std::pow(out.kappa_bar, constants.p_star);
    out.delta_bar_weighted = influence_profile(c, true);
    double alpha = min_active_level_norm(c);
    out.alpha_term = std::isfinite(alpha) ? (1.0 + 1.0 / alpha) * out.kappa_bar : 0.0;
    double lead = constants.C_star * out.splitting_factor * out.growth_factor *
                  out.poly_factor * out.factorial_factor;
    out.assembled = lead * (out.kappa_term + out.delta_bar_weighted);
    out.assembled_proof_variant =
        lead * std::pow(out.kappa_bar + out.delta_bar_weighted, constants.p_star);
    return out;
}

// ---------------------------------------------------------------------------
// Kernel families. All generated kernels are normalized to i_N = 1.
//   complete: constant on every increasing m-tuple in {1..n}  (chi^2-type
//             limit; the negative control)
//   path:     constant on consecutive runs (i, ..., i+m-1)    (Gaussian limit)
//   random:   seeded sparse values
// ---------------------------------------------------------------------------
struct KernelFamily {
    std::string name;  // complete | path | random
    int m = 2;
    int n = 3;
    std::uint64_t seed = 0;
};

inline ChaosCoefficients generate_family(const KernelFamily& family) {
    if (family.m < 1) throw BadLevel("family level must be >= 1");
    if (family.n < family.m + 1) throw Error("family size must be at least m + 1");
    std::vector<std::pair<MultiIndex, double>> entries;
    if (family.name == "complete") {
        std::vector<int> universe(static_cast<std::size_t>(family.n));
        for (int i = 0; i < family.n; ++i) universe[i] = i + 1;
        for_each_increasing_tuple(universe, family.m, [&](std::span<const int> t) {
            entries.emplace_back(MultiIndex(t.begin(), t.end()), 1.0);
        });
    } else if (family.name == "path") {
        for (int i = 1; i + family.m - 1 <= family.n; ++i) {
            MultiIndex t(static_cast<std::size_t>(family.m));
            for (int k = 0; k < family.m; ++k) t[k] = i + k;
            entries.emplace_back(std::move(t), 1.0);
        }
    } else if (family.name == "random") {
        Rng rng(splitmix64(family.seed ^ 0xfa3511e5ull));
        std::vector<int> universe(static_cast<std::size_t>(family.n));
        for (int i = 0; i < family.n; ++i) universe[i] = i + 1;
        std::map<MultiIndex, double> chosen;
        std::size_t want = std::min<std::size_t>(static_cast<std::size_t>(2 * family.n), 64);
        int guard = 0;
        while (chosen.size() < want && guard++ < 10000) {
            MultiIndex t;
            while (static_cast<int>(t.size()) < family.m) {
                int idx = universe[static_cast<std::size_t>(rng.raw() % universe.size())];
                if (std::find(t.begin(), t.end(), idx) == t.end()) t.push_back(idx);
            }
            std::sort(t.begin(), t.end());
            chosen[t] = rng.normal();
        }
        for (auto& [k, v] : chosen) entries.emplace_back(k, v);
    } else {
        throw Error("unknown family '" + family.name + "'");
    }
    return normalize(single_level(make_kernel(family.m, entries)));
}

// ---------------------------------------------------------------------------
// CLT experiment: per family size, the analytic diagnostics next to the
// empirical distance to N(0,1) and the empirical fourth cumulant.
// ---------------------------------------------------------------------------
struct CltRow {
    int n = 0;
    double kappa4_level = 0.0;
    double delta_level = 0.0;
    double kolmogorov = 0.0;
    double kappa4_hat = 0.0;
    double kappa4_se = 0.0;
};

inline std::vector<CltRow> clt_experiment(const std::string& family, int m,
                                          const SourceDistribution& dist,
                                          const std::vector<int>& n_values,
                                          std::uint64_t seed, std::size_t samples,
                                          int shards = 1) {
    std::vector<CltRow> rows;
    for (int n : n_values) {
        ChaosCoefficients c = generate_family({family, m, n, seed});
        CltRow row;
        row.n = n;
        row.kappa4_level = kappa4(c, m);
        row.delta_level = influence(c, m);
        SampleBatch batch =
            sample_series(c, dist, splitmix64(seed ^ static_cast<std::uint64_t>(n)), samples,
                          shards);
        row.kolmogorov = kolmogorov_distance(batch, [](double x) { return normal_cdf(x); });
        Kappa4Estimate k4 = empirical_kappa4(batch);
        row.kappa4_hat = k4.value;
        row.kappa4_se = k4.std_error;
        rows.push_back(row);
    }
    return rows;
}

// Truncation functional: sum_{k >= N_cut} k * k! |c|_k^2.
inline double tail_uniformity(const ChaosCoefficients& c, int N_cut) {
    double total = 0.0;
    for (const auto& [m, k] : c.levels()) {
        if (m < N_cut) continue;
        double fm = factorial(m);
        total += m * fm * fm * k.stored_square_sum();
    }
    return total;
}

}  // namespace chaoslab
