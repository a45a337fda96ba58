// SPDX-License-Identifier: MIT
//
// Chaos coefficients c and the scalar diagnostics read directly off them.
//
// Storage convention: one value per strictly increasing multi-index,
// representing c(alpha) itself; sums over the full index set apply the m!
// symmetry multiplicity analytically. All types are immutable after
// construction and safe to share across threads.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chaoslab/errors.hpp"
#include "chaoslab/multi_index.hpp"

namespace chaoslab {

// ---------------------------------------------------------------------------
// SymmetricKernel: one chaos level m, sparse map MultiIndex -> value,
// implicitly extended by symmetry and zero on diagonals.
// ---------------------------------------------------------------------------
class SymmetricKernel {
  public:
    SymmetricKernel() = default;
    explicit SymmetricKernel(int level) : level_(level) {
        if (level < 1) throw BadLevel("kernel level must be >= 1");
    }

    [[nodiscard]] int level() const { return level_; }
    [[nodiscard]] int support_bound() const { return support_bound_; }
    [[nodiscard]] const std::map<MultiIndex, double>& entries() const { return entries_; }
    [[nodiscard]] bool empty() const { return entries_.empty(); }
    [[nodiscard]] std::size_t nnz() const { return entries_.size(); }

    // sum of stored squares (not yet m!-weighted)
    [[nodiscard]] double stored_square_sum() const { return stored_sq_; }

    // sum of stored squares over keys containing k
    [[nodiscard]] double row_square_sum(int k) const {
        auto it = row_sq_.find(k);
        return it == row_sq_.end() ? 0.0 : it->second;
    }

    [[nodiscard]] const std::map<int, double>& row_square_sums() const { return row_sq_; }

    // Value at an arbitrary tuple: 0 on repeats, symmetric lookup otherwise.
    [[nodiscard]] double value_at(std::span<const int> alpha) const {
        if (static_cast<int>(alpha.size()) != level_)
            throw BadLevel("query tuple length " + std::to_string(alpha.size()) +
                           " != kernel level " + std::to_string(level_));
        auto key = canonical_index(alpha);
        if (!key) return 0.0;
        return value_at_canonical(*key);
    }

    // Same, for a tuple already sorted; repeats still return 0.
    [[nodiscard]] double value_at_canonical(const MultiIndex& key) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? 0.0 : it->second;
    }

    // Fast evaluation layout: indices flattened row-major, one row per entry.
    [[nodiscard]] const std::vector<int>& flat_indices() const { return flat_idx_; }
    [[nodiscard]] const std::vector<double>& flat_values() const { return flat_val_; }

  private:
    friend SymmetricKernel make_kernel(int, const std::vector<std::pair<MultiIndex, double>>&);
    friend SymmetricKernel make_kernel_canonical(int, std::map<MultiIndex, double>);

    void finalize() {
        stored_sq_ = 0.0;
        row_sq_.clear();
        flat_idx_.clear();
        flat_val_.clear();
        support_bound_ = 0;
        flat_idx_.reserve(entries_.size() * static_cast<std::size_t>(level_));
        flat_val_.reserve(entries_.size());
        for (const auto& [key, v] : entries_) {
            stored_sq_ += v * v;
            for (int idx : key) {
                row_sq_[idx] += v * v;
                support_bound_ = std::max(support_bound_, idx);
                flat_idx_.push_back(idx);
            }
            flat_val_.push_back(v);
        }
    }

    int level_ = 0;
    std::map<MultiIndex, double> entries_;
    std::map<int, double> row_sq_;
    std::vector<int> flat_idx_;
    std::vector<double> flat_val_;
    double stored_sq_ = 0.0;
    int support_bound_ = 0;
};

// Builds a level-m kernel from (tuple, value) pairs. Tuples are sorted to
// canonical form; diagonal tuples and duplicate canonical keys are rejected.
inline SymmetricKernel make_kernel(int level,
                                   const std::vector<std::pair<MultiIndex, double>>& entries) {
    SymmetricKernel k(level);
    for (const auto& [tuple, v] : entries) {
        if (static_cast<int>(tuple.size()) != level)
            throw BadLevel("entry tuple length " + std::to_string(tuple.size()) +
                           " != level " + std::to_string(level));
        for (int idx : tuple)
            if (idx < 1) throw BadLevel("indices are 1-based positive integers");
        auto key = canonical_index(tuple);
        if (!key) throw RepeatedIndex("tuple with repeated entry (diagonal) is not storable");
        if (k.entries_.count(*key))
            throw DuplicateKey("two entries canonicalize to the same multi-index");
        k.entries_.emplace(std::move(*key), v);
    }
    k.finalize();
    return k;
}

// Internal builder for already-canonical maps (contractions, derivatives, ...).
inline SymmetricKernel make_kernel_canonical(int level, std::map<MultiIndex, double> entries) {
    SymmetricKernel k(level);
    k.entries_ = std::move(entries);
    k.finalize();
    return k;
}

inline double symmetric_value(const SymmetricKernel& k, std::span<const int> alpha) {
    return k.value_at(alpha);
}

// ---------------------------------------------------------------------------
// ChaosCoefficients: levels 1..N; absent levels are zero.
// ---------------------------------------------------------------------------
class ChaosCoefficients {
  public:
    ChaosCoefficients() = default;
    ChaosCoefficients(int max_level, std::map<int, SymmetricKernel> levels)
        : max_level_(max_level), levels_(std::move(levels)) {
        for (const auto& [m, k] : levels_) {
            if (m < 1 || m > max_level_) throw BadLevel("level outside 1..max_level");
            if (k.level() != m) throw BadLevel("kernel level disagrees with map key");
            support_bound_ = std::max(support_bound_, k.support_bound());
        }
    }

    [[nodiscard]] int max_level() const { return max_level_; }
    [[nodiscard]] int support_bound() const { return support_bound_; }
    [[nodiscard]] const std::map<int, SymmetricKernel>& levels() const { return levels_; }

    [[nodiscard]] const SymmetricKernel* level(int m) const {
        auto it = levels_.find(m);
        return it == levels_.end() ? nullptr : &it->second;
    }

    [[nodiscard]] bool empty() const {
        for (const auto& [m, k] : levels_)
            if (!k.empty()) return false;
        return true;
    }

    [[nodiscard]] std::vector<int> support_indices() const {
        std::map<int, bool> seen;
        for (const auto& [m, k] : levels_)
            for (const auto& [idx, sq] : k.row_square_sums()) seen[idx] = true;
        std::vector<int> out;
        out.reserve(seen.size());
        for (const auto& [idx, b] : seen) out.push_back(idx);
        return out;
    }

    // S_N(c, z) = sum_m m! sum_{stored alpha} c(alpha) prod z_{alpha_i}.
    // z is 1-based through z[idx-1] and must cover the support.
    [[nodiscard]] double evaluate(std::span<const double> z) const {
        if (support_bound_ > static_cast<int>(z.size()))
            throw SupportMismatch("evaluation point covers " + std::to_string(z.size()) +
                                  " coordinates, support needs " + std::to_string(support_bound_));
        double total = 0.0;
        for (const auto& [m, k] : levels_) {
            const auto& idx = k.flat_indices();
            const auto& val = k.flat_values();
            double level_sum = 0.0;
            std::size_t pos = 0;
            for (std::size_t e = 0; e < val.size(); ++e) {
                double prod = val[e];
                for (int i = 0; i < m; ++i) prod *= z[static_cast<std::size_t>(idx[pos++]) - 1];
                level_sum += prod;
            }
            total += factorial(m) * level_sum;
        }
        return total;
    }

  private:
    int max_level_ = 0;
    int support_bound_ = 0;
    std::map<int, SymmetricKernel> levels_;
};

inline ChaosCoefficients single_level(SymmetricKernel k) {
    int m = k.level();
    std::map<int, SymmetricKernel> lv;
    lv.emplace(m, std::move(k));
    return ChaosCoefficients(m, std::move(lv));
}

inline double evaluate_series(const ChaosCoefficients& c, std::span<const double> z) {
    return c.evaluate(z);
}

// |c|_m = sqrt(m! * sum of stored squares); 0 when the level is absent.
inline double level_norm(const ChaosCoefficients& c, int m) {
    if (m < 1) throw BadLevel("level must be >= 1");
    const SymmetricKernel* k = c.level(m);
    if (!k) return 0.0;
    return std::sqrt(factorial(m) * k->stored_square_sum());
}

// i_N(c) = sum_m m! |c|_m^2 = E[S_N(c,Z)^2] for unit-variance independent Z.
inline double series_second_moment(const ChaosCoefficients& c) {
    double total = 0.0;
    for (const auto& [m, k] : c.levels()) {
        double fm = factorial(m);
        total += fm * fm * k.stored_square_sum();
    }
    return total;
}

// sum_m m * m! |c|_m^2; the mean of the squared-gradient functional I_N.
inline double gradient_second_moment(const ChaosCoefficients& c) {
    double total = 0.0;
    for (const auto& [m, k] : c.levels()) {
        double fm = factorial(m);
        total += m * fm * fm * k.stored_square_sum();
    }
    return total;
}

inline ChaosCoefficients scale(const ChaosCoefficients& c, double factor) {
    std::map<int, SymmetricKernel> levels;
    for (const auto& [m, k] : c.levels()) {
        std::map<MultiIndex, double> e;
        for (const auto& [key, v] : k.entries()) e.emplace(key, v * factor);
        levels.emplace(m, make_kernel_canonical(m, std::move(e)));
    }
    return ChaosCoefficients(c.max_level(), std::move(levels));
}

inline ChaosCoefficients normalize(const ChaosCoefficients& c) {
    double i = series_second_moment(c);
    if (i <= 0.0) throw ZeroKernel("cannot normalize an identically-zero coefficient set");
    return scale(c, 1.0 / std::sqrt(i));
}

// N_q(c, M)^2 = sum_{m >= max(q,1)} M^(m-q) * m!/(m-q)! * m! * |c|_m^2.
inline double weighted_norm(const ChaosCoefficients& c, int q, double M) {
    if (q < 0) throw BadLevel("q must be >= 0");
    if (M <= 0.0) throw Error("M must be positive");
    double total = 0.0;
    for (const auto& [m, k] : c.levels()) {
        if (m < q) continue;
        double fm = factorial(m);
        double falling = fm / factorial(m - q);  // m!/(m-q)!
        total += std::pow(M, m - q) * falling * fm * fm * k.stored_square_sum();
    }
    return std::sqrt(total);
}

// delta_m(c): m = 1 -> sup_k |c(k)|; m >= 2 -> max_k sqrt((m-1)! * row mass of k).
inline double influence(const ChaosCoefficients& c, int m) {
    if (m < 1) throw BadLevel("level must be >= 1");
    const SymmetricKernel* k = c.level(m);
    if (!k) return 0.0;
    if (m == 1) {
        double best = 0.0;
        for (const auto& [key, v] : k->entries()) best = std::max(best, std::abs(v));
        return best;
    }
    double best = 0.0;
    for (const auto& [idx, sq] : k->row_square_sums()) best = std::max(best, sq);
    return std::sqrt(factorial(m - 1) * best);
}

// delta-bar_N(c): unweighted sum of delta_m, or the m!-weighted variant.
inline double influence_profile(const ChaosCoefficients& c, bool weighted = false) {
    double total = 0.0;
    for (const auto& [m, k] : c.levels()) {
        double d = influence(c, m);
        total += weighted ? factorial(m) * d : d;
    }
    return total;
}

struct Eps0Result {
    double value;        // sup_k sqrt(sum_{m>=0} M^(2m) m! sum_{|alpha|=m} c^2(k,alpha))
    double upper_bound;  // sum_{m>=0} M^(2m) m! delta_{m+1}(c), valid for M >= 1
};

inline Eps0Result eps0(const ChaosCoefficients& c, double M) {
    if (M <= 0.0) throw Error("M must be positive");
    // per-index accumulation: the level-m' row mass of k carries the weight
    // of all (m'-1)! orderings of the remaining slots; m' = 1 is the m = 0
    // term c(k)^2
    std::map<int, double> per_index;
    for (const auto& [lvl, k] : c.levels()) {
        int m = lvl - 1;
        double w = std::pow(M, 2 * m) * factorial(m) * factorial(m);
        for (const auto& [idx, sq] : k.row_square_sums()) per_index[idx] += w * sq;
    }
    double sup = 0.0;
    for (const auto& [idx, s] : per_index) sup = std::max(sup, s);

    double bound = 0.0;
    for (int m = 0; m < c.max_level(); ++m)
        bound += std::pow(M, 2 * m) * factorial(m) * influence(c, m + 1);
    return {std::sqrt(sup), bound};
}

// alpha_N(c): smallest nonzero |c|_m; +inf sentinel for the zero kernel.
inline double min_active_level_norm(const ChaosCoefficients& c) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [m, k] : c.levels()) {
        double nm = level_norm(c, m);
        if (nm > 0.0) best = std::min(best, nm);
    }
    return best;
}

// Restriction to indices <= J.
inline ChaosCoefficients truncate(const ChaosCoefficients& c, int J) {
    if (J < 1) throw Error("truncation bound must be >= 1");
    std::map<int, SymmetricKernel> levels;
    for (const auto& [m, k] : c.levels()) {
        std::map<MultiIndex, double> e;
        for (const auto& [key, v] : k.entries())
            if (key.back() <= J) e.emplace(key, v);
        levels.emplace(m, make_kernel_canonical(m, std::move(e)));
    }
    return ChaosCoefficients(c.max_level(), std::move(levels));
}

// ---------------------------------------------------------------------------
// AffineChaos: x -> constant + S(coefficients, x). Holds partial derivatives
// of S, which are again (affine) chaos series since S is multilinear.
// ---------------------------------------------------------------------------
struct AffineChaos {
    double constant = 0.0;
    ChaosCoefficients coefficients;

    [[nodiscard]] double evaluate(std::span<const double> z) const {
        return constant + coefficients.evaluate(z);
    }
};

// d/dz_j S(c, .): constant part c(j), level-m part (1+m) c(alpha, j) 1_{j not in alpha}.
inline AffineChaos derivative(const ChaosCoefficients& c, int j) {
    if (j < 1) throw BadLevel("indices are 1-based positive integers");
    AffineChaos out;
    if (const SymmetricKernel* k1 = c.level(1)) out.constant = k1->value_at_canonical({j});
    std::map<int, SymmetricKernel> levels;
    int out_max = std::max(1, c.max_level() - 1);
    for (const auto& [m, k] : c.levels()) {
        if (m < 2) continue;
        std::map<MultiIndex, double> e;
        for (const auto& [key, v] : k.entries()) {
            auto it = std::find(key.begin(), key.end(), j);
            if (it == key.end()) continue;
            MultiIndex rest;
            rest.reserve(key.size() - 1);
            for (int idx : key)
                if (idx != j) rest.push_back(idx);
            e.emplace(std::move(rest), static_cast<double>(m) * v);
        }
        levels.emplace(m - 1, make_kernel_canonical(m - 1, std::move(e)));
    }
    out.coefficients = ChaosCoefficients(out_max, std::move(levels));
    return out;
}

}  // namespace chaoslab
