// SPDX-License-Identifier: MIT
//
// Multi-index plumbing shared by every module: canonical (strictly
// increasing) index tuples, sorted multisets, and the factorial /
// binomial helpers the combinatorial formulas lean on.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "chaoslab/errors.hpp"

namespace chaoslab {

// Indices are positive integers starting at 1. A MultiIndex is strictly
// increasing (canonical representative of a diagonal-free tuple); a
// Multiset is merely non-decreasing and may repeat entries.
using MultiIndex = std::vector<int>;
using Multiset = std::vector<int>;

inline bool strictly_increasing(std::span<const int> a) {
    for (std::size_t i = 0; i + 1 < a.size(); ++i)
        if (a[i] >= a[i + 1]) return false;
    return !a.empty() ? a.front() >= 1 : true;
}

inline bool has_repeat(std::span<const int> a) {
    MultiIndex s(a.begin(), a.end());
    std::sort(s.begin(), s.end());
    return std::adjacent_find(s.begin(), s.end()) != s.end();
}

// Sorts a tuple into its canonical MultiIndex; nullopt if an entry repeats.
inline std::optional<MultiIndex> canonical_index(std::span<const int> a) {
    MultiIndex s(a.begin(), a.end());
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) return std::nullopt;
    return s;
}

inline Multiset sorted_multiset(std::span<const int> a) {
    Multiset s(a.begin(), a.end());
    std::sort(s.begin(), s.end());
    return s;
}

inline Multiset merge_sorted(std::span<const int> a, std::span<const int> b) {
    Multiset out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

// a and b canonical (sorted); true when they share no element.
inline bool disjoint_sorted(std::span<const int> a, std::span<const int> b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return false;
        if (a[i] < b[j]) ++i; else ++j;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Factorials and binomials. Exact in double up to 20!, log-gamma beyond;
// desk scale keeps everything in the exact range.
// ---------------------------------------------------------------------------

inline double factorial(int n) {
    static const double table[] = {
        1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0, 5040.0, 40320.0, 362880.0,
        3628800.0, 39916800.0, 479001600.0, 6227020800.0, 87178291200.0,
        1307674368000.0, 20922789888000.0, 355687428096000.0,
        6402373705728000.0, 121645100408832000.0, 2432902008176640000.0};
    if (n < 0) return 0.0;
    if (n <= 20) return table[n];
    return std::exp(std::lgamma(static_cast<double>(n) + 1.0));
}

inline double log_factorial(int n) {
    return n <= 1 ? 0.0 : std::lgamma(static_cast<double>(n) + 1.0);
}

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    if (n <= 20) return factorial(n) / (factorial(k) * factorial(n - k));
    return std::exp(log_factorial(n) - log_factorial(k) - log_factorial(n - k));
}

inline double double_factorial(int n) {
    double v = 1.0;
    for (int k = n; k > 1; k -= 2) v *= k;
    return v;
}

// Number of distinct orderings of a sorted multiset: k!/prod(h_x!).
inline double ordering_count(std::span<const int> sorted) {
    double denom = 1.0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        denom *= factorial(static_cast<int>(j - i));
        i = j;
    }
    return factorial(static_cast<int>(sorted.size())) / denom;
}

// Visits every k-subset of {0,..,n-1} as a vector of positions.
template <typename F>
void for_each_subset(int n, int k, F&& visit) {
    if (k > n || k < 0) return;
    std::vector<int> pos(k);
    for (int i = 0; i < k; ++i) pos[i] = i;
    while (true) {
        visit(std::span<const int>(pos));
        int i = k - 1;
        while (i >= 0 && pos[i] == n - k + i) --i;
        if (i < 0) break;
        ++pos[i];
        for (int j = i + 1; j < k; ++j) pos[j] = pos[j - 1] + 1;
    }
}

// Visits every strictly increasing a-tuple drawn from `universe` (sorted).
template <typename F>
void for_each_increasing_tuple(std::span<const int> universe, int size, F&& visit) {
    for_each_subset(static_cast<int>(universe.size()), size, [&](std::span<const int> pos) {
        MultiIndex t(pos.size());
        for (std::size_t i = 0; i < pos.size(); ++i) t[i] = universe[pos[i]];
        visit(std::span<const int>(t));
    });
}

}  // namespace chaoslab
