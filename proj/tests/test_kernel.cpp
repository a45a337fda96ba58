// SPDX-License-Identifier: MIT
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "chaoslab/kernel.hpp"
#include "chaoslab/oracle.hpp"

using namespace chaoslab;

namespace {

ChaosCoefficients complete23() {
    double a = 1.0 / std::sqrt(12.0);
    return single_level(make_kernel(2, {{{1, 2}, a}, {{1, 3}, a}, {{2, 3}, a}}));
}

ChaosCoefficients random_kernel(std::mt19937_64& eng, int max_level, int support) {
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> ud;
    std::map<int, SymmetricKernel> levels;
    std::vector<int> universe(static_cast<std::size_t>(support));
    for (int i = 0; i < support; ++i) universe[i] = i + 1;
    for (int m = 1; m <= max_level; ++m) {
        std::vector<std::pair<MultiIndex, double>> entries;
        for_each_increasing_tuple(universe, m, [&](std::span<const int> t) {
            if (ud(eng) < 0.6) entries.emplace_back(MultiIndex(t.begin(), t.end()), nd(eng));
        });
        if (!entries.empty()) levels.emplace(m, make_kernel(m, entries));
    }
    if (levels.empty()) levels.emplace(1, make_kernel(1, {{{1}, 1.0}}));
    return ChaosCoefficients(max_level, std::move(levels));
}

// all tuples in {1..J}^m, via odometer
template <typename F>
void for_each_tuple(int J, int m, F&& visit) {
    std::vector<int> t(static_cast<std::size_t>(m), 1);
    while (true) {
        visit(std::span<const int>(t));
        int i = m - 1;
        while (i >= 0 && t[i] == J) --i;
        if (i < 0) break;
        ++t[i];
        for (int j = i + 1; j < m; ++j) t[j] = 1;
    }
}

}  // namespace

TEST_CASE("make_kernel constructs, canonicalizes, rejects") {
    SymmetricKernel k = make_kernel(2, {{{1, 2}, 0.5}});
    CHECK(k.nnz() == 1);
    CHECK(k.value_at(std::vector<int>{1, 2}) == 0.5);

    SymmetricKernel swapped = make_kernel(2, {{{2, 1}, 0.5}});
    CHECK(swapped.value_at(std::vector<int>{1, 2}) == 0.5);

    CHECK_THROWS_AS(make_kernel(2, {{{1, 1}, 0.5}}), RepeatedIndex);
    CHECK_THROWS_AS(make_kernel(2, {{{1, 2}, 0.5}, {{2, 1}, 0.1}}), DuplicateKey);
    CHECK_THROWS_AS(make_kernel(2, {{{1, 2, 3}, 0.5}}), BadLevel);
}

TEST_CASE("symmetric_value extends by symmetry, vanishes on diagonals") {
    SymmetricKernel k = make_kernel(2, {{{1, 2}, 0.7}});
    CHECK(symmetric_value(k, std::vector<int>{2, 1}) == 0.7);
    CHECK(symmetric_value(k, std::vector<int>{1, 1}) == 0.0);
    CHECK(symmetric_value(k, std::vector<int>{1, 3}) == 0.0);
    CHECK_THROWS_AS(symmetric_value(k, std::vector<int>{1}), BadLevel);
}

TEST_CASE("level_norm") {
    double s = 1.0 / std::sqrt(2.0);
    ChaosCoefficients c1 = single_level(make_kernel(1, {{{1}, s}, {{2}, s}}));
    CHECK(level_norm(c1, 1) == doctest::Approx(1.0).epsilon(1e-14));

    double a = 0.37;
    ChaosCoefficients c2 =
        single_level(make_kernel(2, {{{1, 2}, a}, {{1, 3}, a}, {{2, 3}, a}}));
    CHECK(level_norm(c2, 2) == doctest::Approx(std::sqrt(6.0 * a * a)).epsilon(1e-14));
    CHECK(level_norm(c2, 1) == 0.0);
}

TEST_CASE("level_norm squared matches explicit full-index enumeration") {
    std::mt19937_64 eng(7);
    for (int rep = 0; rep < 10; ++rep) {
        ChaosCoefficients c = random_kernel(eng, 3, 6);
        for (const auto& level_entry : c.levels()) {
            const int m = level_entry.first;
            const SymmetricKernel& k = level_entry.second;
            double brute = 0.0;
            for_each_tuple(6, m, [&](std::span<const int> t) {
                double v = k.value_at(t);
                brute += v * v;
            });
            double ln = level_norm(c, m);
            CHECK(ln * ln == doctest::Approx(brute).epsilon(1e-12));
        }
    }
}

TEST_CASE("series_second_moment and the Rademacher oracle") {
    double s = 1.0 / std::sqrt(2.0);
    ChaosCoefficients c1 = single_level(make_kernel(1, {{{1}, s}, {{2}, s}}));
    CHECK(series_second_moment(c1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(series_second_moment(complete23()) == doctest::Approx(1.0).epsilon(1e-14));

    std::mt19937_64 eng(13);
    for (int rep = 0; rep < 8; ++rep) {
        ChaosCoefficients c = random_kernel(eng, 3, 6);
        double brute = rademacher_expect(c, 6, [](double x) { return x * x; });
        CHECK(series_second_moment(c) == doctest::Approx(brute).epsilon(1e-12));
    }
}

TEST_CASE("normalize") {
    // S = 2 Z_1 Z_2, so E[S^2] = 4 and the entry scales to 1/2 (cross-checked
    // against the sign-enumeration oracle below)
    ChaosCoefficients c = single_level(make_kernel(2, {{{1, 2}, 1.0}}));
    CHECK(series_second_moment(c) ==
          doctest::Approx(rademacher_expect(c, 2, [](double s) { return s * s; }))
              .epsilon(1e-14));
    ChaosCoefficients nc = normalize(c);
    CHECK(nc.level(2)->value_at_canonical({1, 2}) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(series_second_moment(nc) == doctest::Approx(1.0).epsilon(1e-12));

    ChaosCoefficients again = normalize(nc);
    CHECK(again.level(2)->value_at_canonical({1, 2}) ==
          doctest::Approx(nc.level(2)->value_at_canonical({1, 2})).epsilon(1e-12));

    ChaosCoefficients zero(2, {});
    CHECK_THROWS_AS(normalize(zero), ZeroKernel);
}

TEST_CASE("weighted_norm") {
    std::mt19937_64 eng(21);
    for (int rep = 0; rep < 5; ++rep) {
        ChaosCoefficients c = random_kernel(eng, 3, 5);
        double n0 = weighted_norm(c, 0, 1.0);
        CHECK(n0 * n0 == doctest::Approx(series_second_moment(c)).epsilon(1e-12));
    }
    ChaosCoefficients unit = single_level(make_kernel(1, {{{1}, 1.0}}));
    for (double M : {0.5, 1.0, 7.0}) CHECK(weighted_norm(unit, 1, M) == doctest::Approx(1.0));
    CHECK(weighted_norm(unit, 2, 3.0) == 0.0);
}

TEST_CASE("influence") {
    CHECK(influence(complete23(), 2) == doctest::Approx(1.0 / std::sqrt(6.0)).epsilon(1e-14));

    ChaosCoefficients pair = single_level(make_kernel(2, {{{1, 2}, 0.42}}));
    CHECK(influence(pair, 2) == doctest::Approx(0.42).epsilon(1e-14));

    ChaosCoefficients lvl1 = single_level(make_kernel(1, {{{1}, 0.3}, {{2}, -0.9}}));
    CHECK(influence(lvl1, 1) == doctest::Approx(0.9).epsilon(1e-14));
}

TEST_CASE("influence never exceeds the level norm") {
    std::mt19937_64 eng(31);
    for (int rep = 0; rep < 20; ++rep) {
        ChaosCoefficients c = random_kernel(eng, 3, 6);
        for (const auto& [m, k] : c.levels())
            CHECK(influence(c, m) <= level_norm(c, m) * (1.0 + 1e-12));
    }
}

TEST_CASE("influence_profile") {
    ChaosCoefficients c = complete23();
    CHECK(influence_profile(c, false) == doctest::Approx(1.0 / std::sqrt(6.0)).epsilon(1e-12));
    CHECK(influence_profile(c, true) == doctest::Approx(2.0 / std::sqrt(6.0)).epsilon(1e-12));
    CHECK(influence_profile(ChaosCoefficients(3, {}), false) == 0.0);
}

TEST_CASE("eps0") {
    double a = 0.31;
    ChaosCoefficients pair = single_level(make_kernel(2, {{{1, 2}, a}}));
    for (double M : {0.7, 1.0, 2.5}) {
        Eps0Result e = eps0(pair, M);
        CHECK(e.value == doctest::Approx(M * a).epsilon(1e-13));
    }
    CHECK(eps0(ChaosCoefficients(2, {}), 1.0).value == 0.0);

    // level-1 rows enter at m = 0
    ChaosCoefficients lin = single_level(make_kernel(1, {{{1}, 0.5}, {{2}, -0.2}}));
    CHECK(eps0(lin, 3.0).value == doctest::Approx(0.5).epsilon(1e-13));

    // the influence-series majorant holds for M >= 1
    std::mt19937_64 eng(41);
    for (int rep = 0; rep < 20; ++rep) {
        ChaosCoefficients c = random_kernel(eng, 3, 6);
        for (double M : {1.0, 1.3, 4.0}) {
            Eps0Result e = eps0(c, M);
            CHECK(e.value <= e.upper_bound * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("min_active_level_norm") {
    std::map<int, SymmetricKernel> lv;
    lv.emplace(1, make_kernel(1, {{{1}, 0.5}}));
    lv.emplace(2, make_kernel(2, {{{1, 2}, 0.8 / std::sqrt(2.0)}}));
    ChaosCoefficients c(2, std::move(lv));
    CHECK(min_active_level_norm(c) == doctest::Approx(0.5).epsilon(1e-12));

    ChaosCoefficients only2 =
        single_level(make_kernel(2, {{{1, 2}, 0.8 / std::sqrt(2.0)}}));
    CHECK(min_active_level_norm(only2) == doctest::Approx(0.8).epsilon(1e-12));

    CHECK(std::isinf(min_active_level_norm(ChaosCoefficients(2, {}))));
}

TEST_CASE("truncate") {
    ChaosCoefficients c = complete23();
    ChaosCoefficients t2 = truncate(c, 2);
    CHECK(t2.level(2)->nnz() == 1);
    CHECK(t2.level(2)->value_at_canonical({1, 2}) ==
          doctest::Approx(1.0 / std::sqrt(12.0)).epsilon(1e-14));

    ChaosCoefficients same = truncate(c, 3);
    CHECK(same.level(2)->nnz() == 3);

    CHECK(series_second_moment(c) - series_second_moment(t2) >= 0.0);

    ChaosCoefficients twice = truncate(truncate(c, 2), 2);
    CHECK(twice.level(2)->nnz() == t2.level(2)->nnz());
}

TEST_CASE("derivative") {
    ChaosCoefficients lin = single_level(make_kernel(1, {{{1}, 0.4}, {{2}, -1.1}}));
    AffineChaos d1 = derivative(lin, 1);
    CHECK(d1.constant == doctest::Approx(0.4));
    CHECK(d1.coefficients.empty());

    double a = 0.9;
    ChaosCoefficients pair = single_level(make_kernel(2, {{{1, 2}, a}}));
    AffineChaos dp = derivative(pair, 1);
    CHECK(dp.constant == 0.0);
    CHECK(dp.coefficients.level(1)->value_at_canonical({2}) == doctest::Approx(2.0 * a));
}

TEST_CASE("derivative equals the multilinear partial derivative") {
    std::mt19937_64 eng(55);
    std::normal_distribution<double> nd;
    for (int rep = 0; rep < 100; ++rep) {
        ChaosCoefficients c = random_kernel(eng, 3, 5);
        std::vector<double> z(5);
        for (auto& x : z) x = nd(eng);
        int j = 1 + static_cast<int>(eng() % 5);
        double h = 0.5 + nd(eng) * nd(eng);
        std::vector<double> zh = z;
        zh[static_cast<std::size_t>(j) - 1] += h;
        double fd = (c.evaluate(zh) - c.evaluate(z)) / h;
        double an = derivative(c, j).evaluate(z);
        CHECK(fd == doctest::Approx(an).epsilon(1e-9));
    }
}

TEST_CASE("gradient_second_moment") {
    ChaosCoefficients unit = single_level(make_kernel(1, {{{1}, 1.0}}));
    CHECK(gradient_second_moment(unit) == doctest::Approx(1.0));

    double a = 0.6;
    ChaosCoefficients pair = single_level(make_kernel(2, {{{1, 2}, a}}));
    CHECK(gradient_second_moment(pair) == doctest::Approx(8.0 * a * a).epsilon(1e-13));

    std::mt19937_64 eng(77);
    for (int rep = 0; rep < 5; ++rep) {
        ChaosCoefficients c = random_kernel(eng, 3, 5);
        std::vector<int> support = c.support_indices();
        double brute = rademacher_expect(c, 5, [&](double) { return 0.0; });
        // E[sum_j (d_j S)^2] by enumeration over sign vectors
        brute = 0.0;
        for (int bits = 0; bits < 32; ++bits) {
            std::vector<double> z(5);
            for (int i = 0; i < 5; ++i) z[i] = (bits >> i) & 1 ? -1.0 : 1.0;
            double acc = 0.0;
            for (int j : support) {
                double dj = derivative(c, j).evaluate(z);
                acc += dj * dj;
            }
            brute += acc / 32.0;
        }
        CHECK(gradient_second_moment(c) == doctest::Approx(brute).epsilon(1e-11));
    }
}

TEST_CASE("evaluate_series basics and support mismatch") {
    ChaosCoefficients lin = single_level(make_kernel(1, {{{1}, 0.25}, {{2}, 0.5}}));
    std::vector<double> ones{1.0, 1.0};
    CHECK(evaluate_series(lin, ones) == doctest::Approx(0.75));

    double a = 1.5;
    ChaosCoefficients pair = single_level(make_kernel(2, {{{1, 2}, a}}));
    std::vector<double> z{2.0, 3.0};
    CHECK(evaluate_series(pair, z) == doctest::Approx(12.0 * a));

    std::vector<double> tooshort{1.0};
    CHECK_THROWS_AS(evaluate_series(pair, tooshort), SupportMismatch);
}

TEST_CASE("evaluate_series agrees with the naive all-permutations sum") {
    std::mt19937_64 eng(91);
    std::normal_distribution<double> nd;
    for (int rep = 0; rep < 10; ++rep) {
        ChaosCoefficients c = random_kernel(eng, 3, 5);
        std::vector<double> z(5);
        for (auto& x : z) x = nd(eng);
        double naive = 0.0;
        for (const auto& level_entry : c.levels()) {
            const int m = level_entry.first;
            const SymmetricKernel& k = level_entry.second;
            for_each_tuple(5, m, [&](std::span<const int> t) {
                double v = k.value_at(t);
                if (v == 0.0) return;
                double prod = v;
                for (int i : t) prod *= z[static_cast<std::size_t>(i) - 1];
                naive += prod;
            });
        }
        CHECK(c.evaluate(z) == doctest::Approx(naive).epsilon(1e-11));
    }
}
