// SPDX-License-Identifier: MIT
//
// Exact ground-truth computations used to validate the formula modules:
// moment factorization over independent coordinates, brute-force sign
// enumeration, and the spectral identity for level-2 quadratic forms.
// These are built and trusted first; everything else is tested against them.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "chaoslab/kernel.hpp"

namespace chaoslab {

// k-th raw moment table of one source variable; mu(0)=1, mu(1)=0, mu(2)=1
// is the standing hypothesis. mu_abs(k) = E|Z|^k feeds the bound evaluators.
struct MomentTable {
    std::string name;
    std::function<double(int)> mu;
    std::function<double(int)> mu_abs;
};

inline double gaussian_moment(int k) {
    if (k < 0) throw Error("moment order must be >= 0");
    if (k % 2 == 1) return 0.0;
    return double_factorial(k - 1);
}

inline MomentTable gaussian_table() {
    return {"gaussian", [](int k) { return gaussian_moment(k); },
            [](int k) {
                // E|G|^k = 2^(k/2) Gamma((k+1)/2) / sqrt(pi)
                return std::exp(0.5 * k * std::log(2.0) +
                                std::lgamma(0.5 * (k + 1)) - 0.5 * std::log(M_PI));
            }};
}

inline MomentTable rademacher_table() {
    return {"rademacher", [](int k) { return k % 2 == 0 ? 1.0 : 0.0; },
            [](int) { return 1.0; }};
}

// uniform on [-sqrt(3), sqrt(3)]: E U^k = 3^(k/2)/(k+1) for even k
inline MomentTable uniform_table() {
    auto abs_m = [](int k) { return std::pow(3.0, 0.5 * k) / (k + 1); };
    return {"uniform", [abs_m](int k) { return k % 2 == 0 ? abs_m(k) : 0.0; }, abs_m};
}

// Laplace with scale b = 1/sqrt(2) (unit variance): E|X|^k = k! b^k
inline MomentTable laplace_table() {
    auto abs_m = [](int k) { return factorial(k) * std::pow(2.0, -0.5 * k); };
    return {"laplace", [abs_m](int k) { return k % 2 == 0 ? abs_m(k) : 0.0; }, abs_m};
}

// ---------------------------------------------------------------------------
// E[S^p] by monomial expansion over stored entries. Each stored entry
// carries its m! symmetry factor; independence turns each monomial into a
// product of per-index moments. Exact up to floating point.
// ---------------------------------------------------------------------------
inline double exact_power_moment(const ChaosCoefficients& c, const MomentTable& moments, int p) {
    if (p < 1 || p > 4) throw Error("power must be in 1..4");
    struct Term {
        double coeff;
        const MultiIndex* key;
    };
    std::vector<Term> terms;
    for (const auto& [m, k] : c.levels()) {
        double fm = factorial(m);
        for (const auto& [key, v] : k.entries()) terms.push_back({fm * v, &key});
    }
    double s = static_cast<double>(terms.size());
    if (std::pow(s, p) > 1e7) throw TooLarge("monomial expansion exceeds the size guard");
    if (terms.empty()) return 0.0;

    std::map<int, int> expo;
    double total = 0.0;
    std::vector<int> pick(p, 0);
    // iterate multisets pick[0] <= ... <= pick[p-1] with multinomial weights
    auto process = [&]() {
        double coeff = factorial(p);
        int run = 1;
        for (int i = 1; i < p; ++i) {
            if (pick[i] == pick[i - 1]) {
                ++run;
            } else {
                coeff /= factorial(run);
                run = 1;
            }
        }
        coeff /= factorial(run);
        expo.clear();
        for (int i = 0; i < p; ++i) {
            coeff *= terms[pick[i]].coeff;
            for (int idx : *terms[pick[i]].key) ++expo[idx];
        }
        if (coeff == 0.0) return;
        double e = 1.0;
        for (const auto& [idx, cnt] : expo) {
            e *= moments.mu(cnt);
            if (e == 0.0) return;
        }
        total += coeff * e;
    };
    int n = static_cast<int>(terms.size());
    while (true) {
        process();
        int i = p - 1;
        while (i >= 0 && pick[i] == n - 1) --i;
        if (i < 0) break;
        int v = pick[i] + 1;
        for (int j = i; j < p; ++j) pick[j] = v;
    }
    return total;
}

// 2^-J sum over all sign vectors of f(S(c, sigma)); exact for Z_k = +-1.
inline double rademacher_expect(const ChaosCoefficients& c, int J,
                                const std::function<double(double)>& f) {
    if (J < 0 || J > 20) throw TooLarge("sign enumeration limited to J <= 20");
    if (c.support_bound() > J) throw SupportMismatch("kernel support exceeds J");
    std::vector<double> z(static_cast<std::size_t>(J), 1.0);
    double total = 0.0;
    std::uint64_t count = 1ull << J;
    for (std::uint64_t bits = 0; bits < count; ++bits) {
        for (int i = 0; i < J; ++i) z[i] = (bits >> i) & 1 ? -1.0 : 1.0;
        total += f(c.evaluate(z));
    }
    return total / static_cast<double>(count);
}

// Classical identity for Gaussian quadratic forms: kappa4 = 48 sum lambda^4
// over the eigenvalues of A(i,j) = c(i,j). Second independent kappa4 route.
inline double level2_eigen_kappa4(const SymmetricKernel& k) {
    if (k.level() != 2) throw BadLevel("eigenvalue route is for level-2 kernels");
    int J = k.support_bound();
    if (J > 500) throw TooLarge("eigenvalue oracle limited to support <= 500");
    if (J == 0) return 0.0;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(J, J);
    for (const auto& [key, v] : k.entries()) {
        A(key[0] - 1, key[1] - 1) = v;
        A(key[1] - 1, key[0] - 1) = v;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
    double sum4 = 0.0;
    for (double lam : es.eigenvalues()) sum4 += lam * lam * lam * lam;
    return 48.0 * sum4;
}

}  // namespace chaoslab
