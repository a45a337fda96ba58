// SPDX-License-Identifier: MIT
//
// Quadratic-expansion calculus: product-formula coefficients for squares of
// chaos series, the derived gradient-functional coefficients, double series
// in (Z, Y = Z^2 - 1, centered chi) with their martingale L^p bounds, and
// the explicit right-hand sides of the small-ball and L^p estimates.
//
// Index convention used throughout: monomial sums over Z-slots run over
// diagonal-free tuples only (a tuple with a repeated entry is not a valid
// configuration of the underlying expansion; squared entries are carried by
// the dedicated (Z^gamma)^2 / Y slots instead).
#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "chaoslab/contraction.hpp"
#include "chaoslab/kernel.hpp"
#include "chaoslab/multi_index.hpp"

namespace chaoslab {

// ---------------------------------------------------------------------------
// Realization: one joint draw of (Z, Y, chi~). Y_k = Z_k^2 - 1 when built
// from Z alone; chi_k = chi~_k + chi_mean.
// ---------------------------------------------------------------------------
struct Realization {
    std::vector<double> z;
    std::vector<double> y;
    std::vector<double> chi_tilde;
    double chi_mean = 0.0;

    static Realization from_z(std::vector<double> z_in) {
        Realization r;
        r.y.resize(z_in.size());
        for (std::size_t i = 0; i < z_in.size(); ++i) r.y[i] = z_in[i] * z_in[i] - 1.0;
        r.z = std::move(z_in);
        r.chi_tilde.assign(r.z.size(), 0.0);
        return r;
    }

    [[nodiscard]] int size() const { return static_cast<int>(z.size()); }

    [[nodiscard]] double z_monomial(std::span<const int> alpha) const {
        double p = 1.0;
        for (int i : alpha) p *= z[static_cast<std::size_t>(i) - 1];
        return p;
    }
    [[nodiscard]] double y_monomial(std::span<const int> beta) const {
        double p = 1.0;
        for (int i : beta) p *= y[static_cast<std::size_t>(i) - 1];
        return p;
    }
};

// ---------------------------------------------------------------------------
// DoubleSeriesCoefficient: a(alpha, beta) on Gamma_m x Gamma_n, stored on
// canonical keys (strictly increasing, disjoint blocks) and extended by
// separate symmetry; zero on diagonals of the concatenated index.
// ---------------------------------------------------------------------------
class DoubleSeriesCoefficient {
  public:
    using Key = std::pair<MultiIndex, MultiIndex>;

    DoubleSeriesCoefficient(int m, int n) : m_(m), n_(n) {
        if (m < 0 || n < 0) throw BadLevel("block sizes must be >= 0");
    }

    [[nodiscard]] int left_size() const { return m_; }
    [[nodiscard]] int right_size() const { return n_; }
    [[nodiscard]] const std::map<Key, double>& values() const { return values_; }

    void set(std::span<const int> alpha, std::span<const int> beta, double v) {
        if (static_cast<int>(alpha.size()) != m_ || static_cast<int>(beta.size()) != n_)
            throw BadLevel("tuple sizes disagree with the coefficient blocks");
        auto a = canonical_index(alpha);
        auto b = canonical_index(beta);
        if (!a || !b || !disjoint_sorted(*a, *b))
            throw RepeatedIndex("coefficient must vanish on diagonals of (alpha, beta)");
        values_[{std::move(*a), std::move(*b)}] = v;
    }

    [[nodiscard]] double value_at(std::span<const int> alpha, std::span<const int> beta) const {
        auto a = canonical_index(alpha);
        auto b = canonical_index(beta);
        if (!a || !b || !disjoint_sorted(*a, *b)) return 0.0;
        auto it = values_.find({*a, *b});
        return it == values_.end() ? 0.0 : it->second;
    }

    // |a|_{m,n,J}: ordered-sum Frobenius norm, optionally truncated at J.
    [[nodiscard]] double norm(int J = 0) const {
        double w = factorial(m_) * factorial(n_);
        double total = 0.0;
        for (const auto& [key, v] : values_) {
            if (J > 0 && ((!key.first.empty() && key.first.back() > J) ||
                          (!key.second.empty() && key.second.back() > J)))
                continue;
            total += w * v * v;
        }
        return std::sqrt(total);
    }

  private:
    int m_, n_;
    std::map<Key, double> values_;
};

// Indexed family a_j with a_j(gamma) = 0 when j is a component of gamma.
class IndexedDoubleSeries {
  public:
    IndexedDoubleSeries(int m, int n) : m_(m), n_(n) {}

    [[nodiscard]] int left_size() const { return m_; }
    [[nodiscard]] int right_size() const { return n_; }
    [[nodiscard]] const std::map<int, DoubleSeriesCoefficient>& members() const { return members_; }

    DoubleSeriesCoefficient& member(int j) {
        auto it = members_.find(j);
        if (it == members_.end())
            it = members_.emplace(j, DoubleSeriesCoefficient(m_, n_)).first;
        return it->second;
    }

    [[nodiscard]] double norm(int J = 0) const {
        double total = 0.0;
        for (const auto& [j, a] : members_) {
            double nj = a.norm(J);
            total += nj * nj;
        }
        return std::sqrt(total);
    }

  private:
    int m_, n_;
    std::map<int, DoubleSeriesCoefficient> members_;
};

// ---------------------------------------------------------------------------
// Multiset split enumeration: all ways to divide a sorted tuple eta into an
// ordered pair of sub-multisets (U, V) with |U| = a, weighted by the number
// of position choices prod_x C(h_x, u_x). This replaces the literal n!
// permutation sum in the product-formula coefficients.
// ---------------------------------------------------------------------------
template <typename F>
void for_each_split(std::span<const int> sorted_eta, int a, F&& visit) {
    int n = static_cast<int>(sorted_eta.size());
    if (a < 0 || a > n) return;
    // distinct values and multiplicities
    std::vector<std::pair<int, int>> groups;
    int i = 0;
    while (i < n) {
        int j = i;
        while (j < n && sorted_eta[j] == sorted_eta[i]) ++j;
        groups.emplace_back(sorted_eta[i], j - i);
        i = j;
    }
    MultiIndex u, v;
    u.reserve(a);
    v.reserve(n - a);
    std::function<void(std::size_t, int, double)> rec = [&](std::size_t gi, int left,
                                                            double weight) {
        if (gi == groups.size()) {
            if (left == 0) visit(std::span<const int>(u), std::span<const int>(v), weight);
            return;
        }
        auto [val, h] = groups[gi];
        for (int take = 0; take <= std::min(h, left); ++take) {
            for (int t = 0; t < take; ++t) u.push_back(val);
            for (int t = 0; t < h - take; ++t) v.push_back(val);
            rec(gi + 1, left - take, weight * binomial(h, take));
            for (int t = 0; t < take; ++t) u.pop_back();
            for (int t = 0; t < h - take; ++t) v.pop_back();
        }
    };
    rec(0, a, 1.0);
}

namespace detail {

// Symmetric kernel value at the union of two blocks; 0 when the union has a
// repeat or the level is absent.
inline double kernel_value_union(const ChaosCoefficients& f, std::span<const int> part,
                                 std::span<const int> gamma_sorted) {
    int k = static_cast<int>(part.size() + gamma_sorted.size());
    if (k == 0) return 0.0;  // no constant level in a chaos series
    const SymmetricKernel* lvl = f.level(k);
    if (!lvl) return 0.0;
    Multiset key = merge_sorted(sorted_multiset(part), gamma_sorted);
    if (std::adjacent_find(key.begin(), key.end()) != key.end()) return 0.0;
    return lvl->value_at_canonical(key);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Product-formula coefficient A_{n,m}[f](eta, gamma): the weight of
// (z^gamma)^2 z^eta in the expansion of S(f, z)^2.
// ---------------------------------------------------------------------------
inline double product_coeff_A(const ChaosCoefficients& f, int n, int m,
                              std::span<const int> eta, std::span<const int> gamma) {
    if (static_cast<int>(eta.size()) != n || static_cast<int>(gamma.size()) != m)
        throw BadLevel("eta/gamma sizes disagree with (n, m)");
    auto g = canonical_index(gamma);
    if (!g) return 0.0;
    Multiset eta_sorted = sorted_multiset(eta);
    // shared components between eta and gamma force every kernel factor to 0
    if (!disjoint_sorted(eta_sorted, *g)) return 0.0;
    double total = 0.0;
    for (int a = 0; a <= n; ++a) {
        if (a + m > f.max_level() || n - a + m > f.max_level()) continue;
        double cc = binomial(a + m, m) * binomial(n - a + m, m);
        if (cc == 0.0) continue;
        double perm_weight = factorial(a) * factorial(n - a);
        double split_sum = 0.0;
        for_each_split(eta_sorted, a,
                       [&](std::span<const int> u, std::span<const int> v, double w) {
                           double fu = detail::kernel_value_union(f, u, *g);
                           if (fu == 0.0) return;
                           double fv = detail::kernel_value_union(f, v, *g);
                           if (fv == 0.0) return;
                           split_sum += w * fu * fv;
                       });
        total += cc * perm_weight * split_sum;
    }
    return factorial(m) / factorial(n) * total;
}

// Literal n!-permutation evaluation of the same coefficient (test oracle).
inline double product_coeff_A_literal(const ChaosCoefficients& f, int n, int m,
                                      std::span<const int> eta, std::span<const int> gamma) {
    if (n > 5) throw TooLarge("literal permutation oracle limited to n <= 5");
    auto g = canonical_index(gamma);
    if (!g) return 0.0;
    std::vector<int> pos(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pos[i] = i;
    double total = 0.0;
    for (int a = 0; a <= n; ++a) {
        if (a + m > f.max_level() || n - a + m > f.max_level()) continue;
        double cc = binomial(a + m, m) * binomial(n - a + m, m);
        double perm_sum = 0.0;
        std::sort(pos.begin(), pos.end());
        do {
            MultiIndex u, v;
            for (int i = 0; i < a; ++i) u.push_back(eta[pos[i]]);
            for (int i = a; i < n; ++i) v.push_back(eta[pos[i]]);
            perm_sum += detail::kernel_value_union(f, u, *g) *
                        detail::kernel_value_union(f, v, *g);
        } while (std::next_permutation(pos.begin(), pos.end()));
        total += cc * perm_sum;
    }
    return factorial(m) / factorial(n) * total;
}

// ---------------------------------------------------------------------------
// Pointwise product-formula identity: S(f,z)^2 against its expansion
//   sum_{m,n} sum_{gamma in Gamma_m} sum_{eta in Gamma_n, diagonal-free}
//     (z^gamma)^2 z^eta A_{n,m}[f](eta, gamma).
// ---------------------------------------------------------------------------
struct IdentityCheck {
    double lhs = 0.0;
    double rhs = 0.0;

    [[nodiscard]] double rel_error() const {
        return std::abs(lhs - rhs) / (1.0 + std::abs(lhs));
    }
};

inline IdentityCheck square_identity_check(const ChaosCoefficients& f,
                                           std::span<const double> z) {
    std::vector<int> support = f.support_indices();
    if (static_cast<int>(support.size()) > 10)
        throw TooLarge("identity check limited to support size <= 10");
    double s = f.evaluate(z);
    IdentityCheck out;
    out.lhs = s * s;
    int N = f.max_level();
    for (int m = 0; m <= N; ++m) {
        for_each_increasing_tuple(support, m, [&](std::span<const int> gamma) {
            double zg = 1.0;
            for (int i : gamma) zg *= z[static_cast<std::size_t>(i) - 1];
            double gamma_weight = factorial(m) * zg * zg;
            for (int n = 0; n <= 2 * (N - m); ++n) {
                for_each_increasing_tuple(support, n, [&](std::span<const int> eta) {
                    if (!disjoint_sorted(eta, gamma)) return;
                    double A = product_coeff_A(f, n, m, eta, gamma);
                    if (A == 0.0) return;
                    double ze = 1.0;
                    for (int i : eta) ze *= z[static_cast<std::size_t>(i) - 1];
                    out.rhs += gamma_weight * factorial(n) * ze * A;
                });
            }
        });
    }
    return out;
}

// ---------------------------------------------------------------------------
// B_{n,r,m}[f](eta, rho) = sum_{beta in Gamma_{m-r}} A_{n,m}[f](eta,(rho,beta)),
// evaluated through the contraction form (no beta enumeration).
// ---------------------------------------------------------------------------
inline double product_coeff_B(const ChaosCoefficients& f, int n, int r, int m,
                              std::span<const int> eta, std::span<const int> rho) {
    if (m < r) throw BadContractionOrder("B requires m >= r");
    if (static_cast<int>(eta.size()) != n || static_cast<int>(rho.size()) != r)
        throw BadLevel("eta/rho sizes disagree with (n, r)");
    auto rh = canonical_index(rho);
    if (!rh) return 0.0;
    Multiset eta_sorted = sorted_multiset(eta);
    if (!disjoint_sorted(eta_sorted, *rh)) return 0.0;
    double total = 0.0;
    for (int a = 0; a <= n; ++a) {
        const SymmetricKernel* left = f.level(a + m);
        const SymmetricKernel* right = f.level(n - a + m);
        if (!left || !right) continue;
        double cc = binomial(a + m, m) * binomial(n - a + m, m);
        double perm_weight = factorial(a) * factorial(n - a);
        double split_sum = 0.0;
        for_each_split(eta_sorted, a,
                       [&](std::span<const int> u, std::span<const int> v, double w) {
                           Multiset ub = merge_sorted(sorted_multiset(u), *rh);
                           Multiset vb = merge_sorted(sorted_multiset(v), *rh);
                           double cv = contract_value(*left, *right, m - r, ub, vb);
                           if (cv != 0.0) split_sum += w * cv;
                       });
        total += cc * perm_weight * split_sum;
    }
    return factorial(m) / factorial(n) * total;
}

// ---------------------------------------------------------------------------
// Gradient-expansion coefficients. grad_coeff_e carries the (n, r, m) weight
// of z^eta y^rho in I(c, Z) = sum_j |d_j S|^2; grad_coeff_e_tilde the same
// for the chi~-weighted functional. Both vanish on shared components.
// ---------------------------------------------------------------------------
inline double grad_coeff_e(const ChaosCoefficients& c, int n, int r, int m,
                           std::span<const int> eta, std::span<const int> rho) {
    if (m < r) throw BadContractionOrder("e requires m >= r");
    if (static_cast<int>(eta.size()) != n || static_cast<int>(rho.size()) != r)
        throw BadLevel("eta/rho sizes disagree with (n, r)");
    if (m + 1 > c.max_level()) return 0.0;
    auto rh = canonical_index(rho);
    if (!rh) return 0.0;
    Multiset eta_sorted = sorted_multiset(eta);
    if (!disjoint_sorted(eta_sorted, *rh)) return 0.0;
    double total = 0.0;
    for (int a = 0; a <= n; ++a) {
        const SymmetricKernel* left = c.level(a + m + 1);
        const SymmetricKernel* right = c.level(n - a + m + 1);
        if (!left || !right) continue;
        double cc = binomial(a + m + 1, m + 1) * binomial(n - a + m + 1, m + 1);
        double perm_weight = factorial(a) * factorial(n - a);
        double split_sum = 0.0;
        for_each_split(eta_sorted, a,
                       [&](std::span<const int> u, std::span<const int> v, double w) {
                           Multiset ub = merge_sorted(sorted_multiset(u), *rh);
                           Multiset vb = merge_sorted(sorted_multiset(v), *rh);
                           double cv = contract_value(*left, *right, m - r + 1, ub, vb);
                           if (cv != 0.0) split_sum += w * cv;
                       });
        total += cc * perm_weight * split_sum;
    }
    return (m + 1) * factorial(m + 1) / factorial(n) * total;
}

inline double grad_coeff_e_tilde(const ChaosCoefficients& c, int j, int n, int r, int m,
                                 std::span<const int> eta, std::span<const int> rho) {
    if (m < r) throw BadContractionOrder("e~ requires m >= r");
    if (static_cast<int>(eta.size()) != n || static_cast<int>(rho.size()) != r)
        throw BadLevel("eta/rho sizes disagree with (n, r)");
    if (m + 1 > c.max_level()) return 0.0;
    auto rh = canonical_index(rho);
    if (!rh) return 0.0;
    Multiset eta_sorted = sorted_multiset(eta);
    if (!disjoint_sorted(eta_sorted, *rh)) return 0.0;
    for (int i : eta_sorted)
        if (i == j) return 0.0;
    for (int i : *rh)
        if (i == j) return 0.0;
    Multiset rj = *rh;
    rj.insert(std::lower_bound(rj.begin(), rj.end(), j), j);
    double total = 0.0;
    for (int a = 0; a <= n; ++a) {
        const SymmetricKernel* left = c.level(a + m + 1);
        const SymmetricKernel* right = c.level(n - a + m + 1);
        if (!left || !right) continue;
        double cc = binomial(a + m + 1, m + 1) * binomial(n - a + m + 1, m + 1);
        double perm_weight = factorial(a) * factorial(n - a);
        double split_sum = 0.0;
        for_each_split(eta_sorted, a,
                       [&](std::span<const int> u, std::span<const int> v, double w) {
                           Multiset ub = merge_sorted(sorted_multiset(u), rj);
                           Multiset vb = merge_sorted(sorted_multiset(v), rj);
                           double cv = contract_value(*left, *right, m - r, ub, vb);
                           if (cv != 0.0) split_sum += w * cv;
                       });
        total += cc * perm_weight * split_sum;
    }
    return (m + 1) * factorial(m + 1) / factorial(n) * total;
}

// ---------------------------------------------------------------------------
// Double series at a concrete realization. Coefficients are symmetric and
// diagonal-free, so the ordered sums reduce to m! n! times the canonical sum.
// ---------------------------------------------------------------------------
inline double t_series(const DoubleSeriesCoefficient& a, const Realization& real, int J = 0) {
    double w = factorial(a.left_size()) * factorial(a.right_size());
    double total = 0.0;
    for (const auto& [key, v] : a.values()) {
        if (J > 0 && ((!key.first.empty() && key.first.back() > J) ||
                      (!key.second.empty() && key.second.back() > J)))
            continue;
        total += w * real.z_monomial(key.first) * real.y_monomial(key.second) * v;
    }
    return total;
}

inline double T_series(const IndexedDoubleSeries& bar_a, const Realization& real, int J = 0) {
    double total = 0.0;
    for (const auto& [j, aj] : bar_a.members())
        total += real.chi_tilde[static_cast<std::size_t>(j) - 1] * t_series(aj, real, J);
    return total;
}

// ---------------------------------------------------------------------------
// Gradient functionals at a realization:
//   I      = sum_j |d_j S|^2            (direct)
//   I~     = sum_j chi~_j |d_j S|^2
//   sigma  = sum_j chi_j |d_j S|^2
// plus the coefficient-expansion value of I and I~ for the pointwise
// identity tests.
// ---------------------------------------------------------------------------
struct GradientFunctionals {
    double direct = 0.0;
    double tilde = 0.0;
    double sigma = 0.0;
    double expansion = 0.0;        // e-coefficient route to I
    double expansion_tilde = 0.0;  // e~-coefficient route to I~
};

inline GradientFunctionals gradient_functionals(const ChaosCoefficients& c,
                                                const Realization& real) {
    if (c.support_bound() > real.size())
        throw SupportMismatch("realization does not cover the kernel support");
    GradientFunctionals out;
    std::vector<int> support = c.support_indices();
    for (int j : support) {
        double dj = derivative(c, j).evaluate(real.z);
        double sq = dj * dj;
        out.direct += sq;
        double ct = real.chi_tilde[static_cast<std::size_t>(j) - 1];
        out.tilde += ct * sq;
        out.sigma += (ct + real.chi_mean) * sq;
    }

    int N = c.max_level();
    for (int r = 0; r <= N - 1; ++r) {
        for (int m = r; m <= N - 1; ++m) {
            // the (Z^gamma)^2 -> Y change of variables hands each (m, r)
            // cell the C(m, r) slot-choice factor
            double slot_choices = binomial(m, r);
            for (int n = 0; n <= 2 * (N - m - 1); ++n) {
                double wz = slot_choices * factorial(n) * factorial(r);
                for_each_increasing_tuple(support, n, [&](std::span<const int> eta) {
                    double ze = real.z_monomial(eta);
                    for_each_increasing_tuple(support, r, [&](std::span<const int> rho) {
                        if (!disjoint_sorted(eta, rho)) return;
                        double yr = real.y_monomial(rho);
                        double e = grad_coeff_e(c, n, r, m, eta, rho);
                        if (e != 0.0) out.expansion += wz * ze * yr * e;
                        double te = 0.0;
                        for (int j : support) {
                            double ej = grad_coeff_e_tilde(c, j, n, r, m, eta, rho);
                            if (ej != 0.0)
                                te += ej * real.chi_tilde[static_cast<std::size_t>(j) - 1];
                        }
                        if (te != 0.0) out.expansion_tilde += wz * ze * yr * te;
                    });
                });
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Martingale L^p bounds for the double series (right-hand sides only; the
// universal Burkholder constant b_p is a caller-supplied parameter).
// ---------------------------------------------------------------------------
inline double burkholder_rhs_t(int m, int n, double coeff_norm, double b_p, double M_p) {
    return std::sqrt(factorial(m + n)) *
           std::pow(std::sqrt(2.0) * b_p * M_p, m + n) * coeff_norm;
}

inline double burkholder_rhs_T(int m, int n, double coeff_norm, double b_p, double M_p) {
    double lead = 8.0 * b_p * b_p * (std::pow(4.0, m + n) - 1.0) * factorial(m + n) / 3.0;
    return std::sqrt(lead) * std::pow(std::sqrt(2.0) * b_p * M_p, m + n) * coeff_norm;
}

// RHS of the small-ball estimate for the carre-du-champ of S_N:
//   (C_p (1+i_N)/(m_r i_N) (N!)^3 2^N N^(-5/4) (kappa-bar + delta-bar))^p
// with the unweighted delta-bar. The caller owns eta <= m_r i_N / 2.
inline double small_ball_rhs(const ChaosCoefficients& c, int N, int p, double m_r, double C_p) {
    if (N < 1 || p < 1 || m_r <= 0.0 || C_p <= 0.0)
        throw Error("small_ball_rhs needs positive inputs");
    double spread = kappa_bar(c) + influence_profile(c, false);
    if (spread == 0.0) return 0.0;
    double i = series_second_moment(c);
    double base = C_p * (1.0 + i) / (m_r * i) * std::pow(factorial(N), 3.0) *
                  std::pow(2.0, N) * std::pow(N, -1.25) * spread;
    return std::pow(base, p);
}

// RHS of the L^p estimate for I~ and the centered I:
//   C_p (1+i_N)^(1/2) (N!)^3 2^N N^(-5/4) [sum kappa^(1/4) + sum delta].
inline double nl0_rhs(const ChaosCoefficients& c, int N, int p, double C_p) {
    if (N < 1 || p < 1 || C_p <= 0.0) throw Error("nl0_rhs needs positive inputs");
    double i = series_second_moment(c);
    return C_p * std::sqrt(1.0 + i) * std::pow(factorial(N), 3.0) * std::pow(2.0, N) *
           std::pow(N, -1.25) * (kappa_bar(c) + influence_profile(c, false));
}

}  // namespace chaoslab
