// SPDX-License-Identifier: MIT
//
// Contractions of symmetric kernels, their symmetrizations, the per-level
// fourth cumulants built from them, and the inequality suite tying the
// three together. Everything here is a pure function of immutable inputs.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chaoslab/kernel.hpp"
#include "chaoslab/multi_index.hpp"

namespace chaoslab {

// ---------------------------------------------------------------------------
// BlockKernel: a contraction output on pairs of blocks, symmetric within
// each block, keyed by a pair of sorted multisets. Contractions can be
// nonzero on cross-block diagonals, e.g. (c (x)_1 c)(i, i).
// ---------------------------------------------------------------------------
class BlockKernel {
  public:
    using Key = std::pair<Multiset, Multiset>;

    BlockKernel(int left_size, int right_size) : left_(left_size), right_(right_size) {
        if (left_ < 0 || right_ < 0) throw BadLevel("block sizes must be >= 0");
    }

    [[nodiscard]] int left_size() const { return left_; }
    [[nodiscard]] int right_size() const { return right_; }
    [[nodiscard]] const std::map<Key, double>& entries() const { return entries_; }

    void add(std::span<const int> a, std::span<const int> b, double v) {
        if (static_cast<int>(a.size()) != left_ || static_cast<int>(b.size()) != right_)
            throw BadLevel("block tuple sizes disagree with the block kernel");
        entries_[{sorted_multiset(a), sorted_multiset(b)}] += v;
    }

    [[nodiscard]] double value_at(std::span<const int> a, std::span<const int> b) const {
        auto it = entries_.find({sorted_multiset(a), sorted_multiset(b)});
        return it == entries_.end() ? 0.0 : it->second;
    }

    // Frobenius norm over all ordered index tuples: each canonical key
    // carries the product of its blocks' distinct-ordering counts.
    [[nodiscard]] double frobenius_sq() const {
        double total = 0.0;
        for (const auto& [key, v] : entries_)
            total += ordering_count(key.first) * ordering_count(key.second) * v * v;
        return total;
    }

    [[nodiscard]] double frobenius() const { return std::sqrt(frobenius_sq()); }

  private:
    int left_, right_;
    std::map<Key, double> entries_;
};

// Fully symmetric kernel of a given order, keyed by sorted multiset.
class FullSymmetricKernel {
  public:
    explicit FullSymmetricKernel(int order) : order_(order) {
        if (order < 0) throw BadLevel("order must be >= 0");
    }

    [[nodiscard]] int order() const { return order_; }
    [[nodiscard]] const std::map<Multiset, double>& entries() const { return entries_; }

    void add(std::span<const int> key, double v) {
        if (static_cast<int>(key.size()) != order_)
            throw BadLevel("key size disagrees with the kernel order");
        entries_[sorted_multiset(key)] += v;
    }

    [[nodiscard]] double value_at(std::span<const int> key) const {
        auto it = entries_.find(sorted_multiset(key));
        return it == entries_.end() ? 0.0 : it->second;
    }

    [[nodiscard]] double frobenius_sq() const {
        double total = 0.0;
        for (const auto& [key, v] : entries_) total += ordering_count(key) * v * v;
        return total;
    }

    [[nodiscard]] double frobenius() const { return std::sqrt(frobenius_sq()); }

  private:
    int order_;
    std::map<Multiset, double> entries_;
};

// ---------------------------------------------------------------------------
// (f (x)_r g)(alpha, beta) = sum_{|gamma|=r} f(alpha,gamma) g(beta,gamma).
//
// Hash-join on shared r-subsets of stored keys: each unordered r-set gamma
// shared by a key of f and a key of g contributes r! (orderings of gamma)
// times the product of values, landing on the pair of remaining blocks.
// ---------------------------------------------------------------------------
inline BlockKernel contract(const SymmetricKernel& f, const SymmetricKernel& g, int r) {
    int m = f.level(), n = g.level();
    if (r < 0 || r > std::min(m, n))
        throw BadContractionOrder("contraction order " + std::to_string(r) +
                                  " outside [0, min(m,n)]");
    using SubMap = std::map<MultiIndex, std::vector<std::pair<MultiIndex, double>>>;
    auto split = [](const SymmetricKernel& k, int r) {
        SubMap out;
        for (const auto& entry : k.entries()) {
            const MultiIndex& key = entry.first;
            const double v = entry.second;
            for_each_subset(static_cast<int>(key.size()), r, [&](std::span<const int> pos) {
                MultiIndex sub(pos.size()), rest;
                rest.reserve(key.size() - pos.size());
                std::size_t pi = 0;
                for (std::size_t i = 0; i < key.size(); ++i) {
                    if (pi < pos.size() && static_cast<int>(i) == pos[pi]) {
                        sub[pi++] = key[i];
                    } else {
                        rest.push_back(key[i]);
                    }
                }
                out[std::move(sub)].emplace_back(std::move(rest), v);
            });
        }
        return out;
    };
    SubMap fs = split(f, r), gs = split(g, r);
    double rfact = factorial(r);
    BlockKernel out(m - r, n - r);
    for (const auto& [gamma, flist] : fs) {
        auto it = gs.find(gamma);
        if (it == gs.end()) continue;
        for (const auto& [fa, fv] : flist)
            for (const auto& [gb, gv] : it->second) out.add(fa, gb, rfact * fv * gv);
    }
    return out;
}

// Pointwise contraction value (f (x)_r g)(alpha, beta) at given blocks,
// without materializing the whole block kernel. alpha and beta need not be
// disjoint from each other; a repeat inside either block gives 0.
inline double contract_value(const SymmetricKernel& f, const SymmetricKernel& g, int r,
                             std::span<const int> alpha, std::span<const int> beta) {
    int m = f.level(), n = g.level();
    if (static_cast<int>(alpha.size()) != m - r || static_cast<int>(beta.size()) != n - r)
        throw BadLevel("contraction argument sizes disagree with levels");
    auto a = canonical_index(alpha);
    auto b = canonical_index(beta);
    if (!a || !b) return 0.0;
    double rfact = factorial(r);
    double total = 0.0;
    MultiIndex gamma, bkey;
    for (const auto& [key, v] : f.entries()) {
        if (!std::includes(key.begin(), key.end(), a->begin(), a->end())) continue;
        gamma.clear();
        std::set_difference(key.begin(), key.end(), a->begin(), a->end(),
                            std::back_inserter(gamma));
        if (!disjoint_sorted(gamma, *b)) continue;
        bkey = merge_sorted(*b, gamma);
        double gv = g.value_at_canonical(bkey);
        if (gv != 0.0) total += rfact * v * gv;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Symmetrization: average of a block kernel over all slot permutations,
// computed by multiset combinatorics. A canonical split (A, B) of a merged
// multiset H with multiplicities h_x receives weight
//   prod_x C(h_x, a_x) * p! q! / (p+q)!.
// ---------------------------------------------------------------------------
inline FullSymmetricKernel symmetrize(const BlockKernel& k) {
    int p = k.left_size(), q = k.right_size();
    double base = factorial(p) * factorial(q) / factorial(p + q);
    FullSymmetricKernel out(p + q);
    for (const auto& [key, v] : k.entries()) {
        const auto& [a, b] = key;
        Multiset merged = merge_sorted(a, b);
        double w = base;
        // prod_x C(h_x, a_x) over the distinct values of the merged multiset
        std::size_t i = 0;
        while (i < merged.size()) {
            int x = merged[i];
            std::size_t j = i;
            while (j < merged.size() && merged[j] == x) ++j;
            int h = static_cast<int>(j - i);
            int in_a = static_cast<int>(std::count(a.begin(), a.end(), x));
            w *= binomial(h, in_a);
            i = j;
        }
        out.add(merged, w * v);
    }
    return out;
}

// Literal (p+q)!-permutation symmetrization; test oracle for small orders.
inline FullSymmetricKernel symmetrize_literal(const BlockKernel& k) {
    int p = k.left_size(), q = k.right_size();
    if (p + q > 8) throw TooLarge("literal symmetrization limited to order <= 8");
    FullSymmetricKernel out(p + q);
    std::map<Multiset, bool> seen;
    for (const auto& [key, v] : k.entries()) {
        Multiset merged = merge_sorted(key.first, key.second);
        if (seen.count(merged)) continue;
        seen[merged] = true;
        std::vector<int> perm = merged;
        std::sort(perm.begin(), perm.end());
        double sum = 0.0;
        std::size_t count = 0;
        do {
            std::span<const int> left(perm.data(), static_cast<std::size_t>(p));
            std::span<const int> right(perm.data() + p, static_cast<std::size_t>(q));
            sum += k.value_at(left, right);
            ++count;
        } while (std::next_permutation(perm.begin(), perm.end()));
        // distinct permutations of the multiset each appear once; the
        // remaining factor restores the full (p+q)! average
        out.add(merged, sum / static_cast<double>(count));
    }
    return out;
}

// ---------------------------------------------------------------------------
// kappa_{4,m}(c): fourth cumulant of the level-m component driven by an
// i.i.d. standard normal sequence, via the contraction identity. Level 1 is
// exactly Gaussian, so kappa_{4,1} = 0.
// ---------------------------------------------------------------------------
inline double kappa4(const ChaosCoefficients& c, int m) {
    if (m < 1) throw BadLevel("level must be >= 1");
    if (m == 1) return 0.0;
    const SymmetricKernel* k = c.level(m);
    if (!k || k->empty()) return 0.0;
    double fm = factorial(m);
    double total = 0.0;
    for (int r = 1; r <= m - 1; ++r) {
        BlockKernel raw = contract(*k, *k, r);
        double raw_sq = raw.frobenius_sq();
        double sym_sq = symmetrize(raw).frobenius_sq();
        double bin = binomial(m, r);
        total += fm * fm * bin * bin * (raw_sq + binomial(2 * m - 2 * r, m - r) * sym_sq);
    }
    return total;
}

inline double kappa4(const SymmetricKernel& k) {
    return kappa4(single_level(k), k.level());
}

// kappa-bar_N(c) = sum of fourth roots of the per-level cumulants.
inline double kappa_bar(const ChaosCoefficients& c) {
    double total = 0.0;
    for (const auto& [m, k] : c.levels()) total += std::pow(kappa4(c, m), 0.25);
    return total;
}

// ---------------------------------------------------------------------------
// Inequality suite: every contraction/cumulant inequality evaluated on all
// pairs of active levels and all admissible contraction orders.
// ---------------------------------------------------------------------------
struct InequalityCase {
    std::string name;
    int m = 0, n = 0, r = 0;
    double lhs = 0.0, rhs = 0.0;
    bool vacuous = false;

    [[nodiscard]] double violation() const {
        return vacuous ? 0.0 : (lhs - rhs) / std::max(1.0, std::abs(rhs));
    }
};

struct InequalityReport {
    std::vector<InequalityCase> cases;
    double max_violation = 0.0;

    void push(InequalityCase ic) {
        max_violation = std::max(max_violation, ic.violation());
        cases.push_back(std::move(ic));
    }
};

inline InequalityReport check_contraction_inequalities(const ChaosCoefficients& c) {
    InequalityReport report;
    std::vector<int> active;
    for (const auto& [m, k] : c.levels())
        if (!k.empty()) active.push_back(m);

    std::map<int, double> kap;
    for (int m : active) kap[m] = kappa4(c, m);

    auto self_norm = [&](int m, int s) {
        return contract(*c.level(m), *c.level(m), s).frobenius();
    };

    for (int m : active) {
        for (int n : active) {
            if (m > n) continue;
            const SymmetricKernel& km = *c.level(m);
            const SymmetricKernel& kn = *c.level(n);
            for (int r = 0; r <= std::min(m, n); ++r) {
                BlockKernel raw = contract(km, kn, r);
                double raw_norm = raw.frobenius();
                double sym_norm = symmetrize(raw).frobenius();
                double fm_self = self_norm(m, m - r);
                double gn_self = self_norm(n, n - r);
                report.push({"acc8-1", m, n, r, sym_norm * sym_norm,
                             0.5 * (fm_self * fm_self + gn_self * gn_self)});
                report.push({"acc8", m, n, r, raw_norm * raw_norm, fm_self * gn_self});
                if (r > 0 && r < std::min(m, n)) {
                    double bound = std::max(
                        std::sqrt(kap[m]) / (factorial(m) * binomial(m, r)),
                        std::sqrt(kap[n]) / (factorial(n) * binomial(n, r)));
                    report.push({"acc9-sym", m, n, r, sym_norm, bound});
                    report.push({"acc9-raw", m, n, r, raw_norm, bound});
                }
            }
            if (m < n) {
                double lhs = contract(km, kn, m).frobenius();
                double rhs = level_norm(c, m) *
                             std::sqrt(std::sqrt(kap[n]) / (factorial(n) * binomial(n, n - m)));
                report.push({"acc9-1", m, n, m, lhs, rhs});
            }
        }
        if (m >= 2) {
            double nm = level_norm(c, m);
            InequalityCase ic{"acc10", m, m, m - 1, influence(c, m),
                              std::sqrt(kap[m]) / (factorial(m) * m * nm)};
            ic.vacuous = (nm == 0.0);
            report.push(ic);
        }
    }
    return report;
}

}  // namespace chaoslab
