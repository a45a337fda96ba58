// SPDX-License-Identifier: MIT
//
// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Every tolerance is pinned here; seeds are frozen so reruns are exact.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "chaoslab/expansion.hpp"
#include "chaoslab/contraction.hpp"
#include "chaoslab/distributions.hpp"
#include "chaoslab/experiments.hpp"
#include "chaoslab/kernel.hpp"
#include "chaoslab/kernel_io.hpp"
#include "chaoslab/oracle.hpp"
#include "chaoslab/sampling.hpp"
#include "chaoslab/splitting.hpp"

using namespace chaoslab;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, const char* what, bool ok, const std::string& detail = "") {
    std::printf("%s  criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", id, what,
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

ChaosCoefficients random_single_level(std::mt19937_64& eng, int m, int support,
                                      double density = 0.55) {
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> ud;
    std::vector<int> universe(static_cast<std::size_t>(support));
    for (int i = 0; i < support; ++i) universe[i] = i + 1;
    std::vector<std::pair<MultiIndex, double>> entries;
    for_each_increasing_tuple(universe, m, [&](std::span<const int> t) {
        if (ud(eng) < density) entries.emplace_back(MultiIndex(t.begin(), t.end()), nd(eng));
    });
    if (entries.empty()) {
        MultiIndex t(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) t[static_cast<std::size_t>(i)] = i + 1;
        entries.emplace_back(t, nd(eng));
    }
    return single_level(make_kernel(m, entries));
}

ChaosCoefficients random_mixed(std::mt19937_64& eng, int max_level, int support,
                               double density = 0.55) {
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> ud;
    std::map<int, SymmetricKernel> levels;
    std::vector<int> universe(static_cast<std::size_t>(support));
    for (int i = 0; i < support; ++i) universe[i] = i + 1;
    for (int m = 1; m <= max_level; ++m) {
        std::vector<std::pair<MultiIndex, double>> entries;
        for_each_increasing_tuple(universe, m, [&](std::span<const int> t) {
            if (ud(eng) < density) entries.emplace_back(MultiIndex(t.begin(), t.end()), nd(eng));
        });
        if (!entries.empty()) levels.emplace(m, make_kernel(m, entries));
    }
    if (levels.empty()) levels.emplace(1, make_kernel(1, {{{1}, 1.0}}));
    return ChaosCoefficients(max_level, std::move(levels));
}

double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max({1e-300, std::abs(a), std::abs(b)});
}

// 1. three independent kappa4 routes agree on 200 seeded random kernels
void criterion_1() {
    auto t0 = Clock::now();
    std::mt19937_64 eng(0xc0ffee01);
    MomentTable gauss = gaussian_table();
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        int m = 2 + (i % 2);
        ChaosCoefficients c = random_single_level(eng, m, 6);
        double via_contraction = kappa4(c, m);
        double via_moments = exact_power_moment(c, gauss, 4) -
                             3.0 * std::pow(exact_power_moment(c, gauss, 2), 2);
        worst = std::max(worst, rel_diff(via_contraction, via_moments));
        if (m == 2)
            worst = std::max(worst, rel_diff(via_contraction,
                                             level2_eigen_kappa4(*c.level(2))));
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::ostringstream d;
    d << "max pairwise rel diff " << worst << ", " << secs << " s";
    report(1, "cumulant triple agreement (200 kernels, 1e-9, <30 s)",
           worst <= 1e-9 && secs < 30.0, d.str());
}

// 2. level-1 cumulants vanish identically
void criterion_2() {
    std::mt19937_64 eng(0xc0ffee02);
    bool ok = true;
    for (int i = 0; i < 100; ++i) {
        ChaosCoefficients c = random_single_level(eng, 1, 8, 0.8);
        ok = ok && kappa4(c, 1) == 0.0;
    }
    report(2, "kappa_{4,1} == 0 exactly (100 random level-1 kernels)", ok);
}

// 3. series second moment equals brute-force sign enumeration
void criterion_3() {
    std::mt19937_64 eng(0xc0ffee03);
    double worst = 0.0;
    std::vector<ChaosCoefficients> fixtures;
    fixtures.push_back(generate_family({"complete", 2, 3, 0}));
    fixtures.push_back(generate_family({"path", 2, 8, 0}));
    fixtures.push_back(generate_family({"complete", 2, 5, 0}));
    for (int i = 0; i < 6; ++i) fixtures.push_back(random_mixed(eng, 3, 8, 0.4));
    for (int i = 0; i < 3; ++i) fixtures.push_back(random_mixed(eng, 2, 12, 0.15));
    for (const auto& c : fixtures) {
        int J = std::max(1, c.support_bound());
        double brute = rademacher_expect(c, J, [](double s) { return s * s; });
        worst = std::max(worst, std::abs(brute - series_second_moment(c)));
    }
    std::ostringstream d;
    d << "max abs diff " << worst << " over " << fixtures.size() << " fixtures";
    report(3, "isometry against Rademacher enumeration (<=1e-12, J<=12)", worst <= 1e-12,
           d.str());
}

// 4. the standing fixture reproduces its derived constants
void criterion_4() {
    ChaosCoefficients c = generate_family({"complete", 2, 3, 0});
    double i_n = series_second_moment(c);
    double d2 = influence(c, 2);
    double k4 = kappa4(c, 2);
    double kb = kappa_bar(c);
    bool ok = std::abs(i_n - 1.0) <= 1e-12 &&
              std::abs(d2 - 1.0 / std::sqrt(6.0)) <= 1e-12 && std::abs(k4 - 6.0) <= 1e-9 &&
              std::abs(kb - std::pow(6.0, 0.25)) <= 1e-9;
    std::ostringstream d;
    d << "i_N=" << i_n << " delta2=" << d2 << " kappa4=" << k4 << " kappa_bar=" << kb;
    report(4, "fixture arithmetic (complete level-2 on {1,2,3})", ok, d.str());
}

// 5. pointwise product-formula and gradient-expansion identities
void criterion_5() {
    auto t0 = Clock::now();
    std::mt19937_64 eng(0xc0ffee05);
    std::normal_distribution<double> nd;
    double worst_r1 = 0.0, worst_grad = 0.0;
    for (int i = 0; i < 100; ++i) {
        ChaosCoefficients c = random_mixed(eng, 1 + (i % 3), 5);
        std::vector<double> z(5);
        for (auto& x : z) x = nd(eng);
        worst_r1 = std::max(worst_r1, square_identity_check(c, z).rel_error());
        Realization real = Realization::from_z(z);
        GradientFunctionals gf = gradient_functionals(c, real);
        worst_grad = std::max(worst_grad, std::abs(gf.direct - gf.expansion) /
                                              (1.0 + std::abs(gf.direct)));
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::ostringstream d;
    d << "square identity " << worst_r1 << ", gradient identity " << worst_grad << ", "
      << secs << " s";
    report(5, "expansion identities (100 cases, <=1e-10, <60 s)",
           worst_r1 <= 1e-10 && worst_grad <= 1e-10 && secs < 60.0, d.str());
}

// 6. contraction/cumulant inequality suite over 1000 random instances
void criterion_6() {
    std::mt19937_64 eng(0xc0ffee06);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        ChaosCoefficients c = random_mixed(eng, 1 + (i % 3), 8, 0.4);
        worst = std::max(worst, check_contraction_inequalities(c).max_violation);
    }
    std::ostringstream d;
    d << "max violation " << worst;
    report(6, "inequality suite (1000 instances, slack 1e-12)", worst <= 1e-12, d.str());
}

// 7. third-order smooth bound dominates the measured distance
void criterion_7() {
    auto t0 = Clock::now();
    const auto& rad = find_distribution("rademacher");
    const auto& gauss = find_distribution("gaussian");
    std::vector<ChaosCoefficients> fixtures;
    for (int n : {3, 4, 5, 6}) fixtures.push_back(generate_family({"complete", 2, n, 0}));
    for (int n : {5, 8, 12, 20}) fixtures.push_back(generate_family({"path", 2, n, 0}));
    for (int n : {4, 6}) fixtures.push_back(generate_family({"complete", 3, n, 0}));
    for (std::uint64_t s : {11ull, 12ull, 13ull, 14ull})
        fixtures.push_back(generate_family({"random", 2, 6, s}));
    for (std::uint64_t s : {15ull, 16ull, 17ull})
        fixtures.push_back(generate_family({"random", 3, 6, s}));
    std::mt19937_64 eng(0xc0ffee07);
    for (int i = 0; i < 3; ++i) fixtures.push_back(normalize(random_mixed(eng, 2, 6, 0.5)));
    bool ok = fixtures.size() == 20;
    double worst_slack = std::numeric_limits<double>::infinity();
    std::uint64_t seed = 0x5eed0700;
    for (const auto& c : fixtures) {
        SmoothDistance sd = smooth_distance(
            c, rad, gauss, [](double x) { return std::sin(x); }, seed, seed + 1, 100000);
        seed += 2;
        double rhs = smooth_bound_rhs(c, rad, gauss, 1.0);
        ok = ok && (sd.estimate - sd.half_width <= rhs);
        worst_slack = std::min(worst_slack, rhs - (sd.estimate - sd.half_width));
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::ostringstream d;
    d << "min slack " << worst_slack << ", " << secs << " s";
    report(7, "smooth bound validity (20 fixtures, 1e5 samples/side, <120 s)",
           ok && secs < 120.0, d.str());
}

// 8. CLT experiment with the path family plus the chi^2-type negative control
void criterion_8() {
    const auto& gauss = find_distribution("gaussian");
    std::vector<int> ns{10, 20, 50, 100, 200};
    auto rows = clt_experiment("path", 2, gauss, ns, 20260810, 100000);
    bool ok = true;
    std::ostringstream d;
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        ok = ok && rows[i].kappa4_level < prev;
        prev = rows[i].kappa4_level;
        ChaosCoefficients cn = generate_family({"path", 2, ns[i], 0});
        ok = ok && rel_diff(rows[i].kappa4_level, level2_eigen_kappa4(*cn.level(2))) <= 1e-9;
    }
    double k_20 = rows[1].kolmogorov, k_200 = rows[4].kolmogorov;
    ok = ok && k_200 < k_20 && k_200 < 0.05;
    d << "K(20)=" << k_20 << " K(200)=" << k_200;

    ChaosCoefficients c100 = generate_family({"complete", 2, 100, 0});
    SampleBatch batch = sample_series(c100, gauss, 0xc0ffee08, 2000000);
    Kappa4Estimate k4 = empirical_kappa4(batch);
    ok = ok && (k4.value - 5.0 * k4.std_error > 10.0);
    d << "; control kappa4_hat=" << k4.value << " se=" << k4.std_error
      << " (analytic " << kappa4(c100, 2) << ", limit 12)";
    report(8, "CLT experiment: path family converges, complete family does not", ok, d.str());
}

// 9. splitting sampler identity and admissibility
void criterion_9() {
    const auto& gauss = find_distribution("gaussian");
    double ks = verify_split(gauss, 100000, 0x5eed0901, 0x5eed0902);
    SplitContext ctx = make_split_context(gauss);
    bool rejected = false;
    try {
        make_split_context(find_distribution("rademacher"));
    } catch (const InvalidDoeblin&) {
        rejected = true;
    }
    bool ok = ks <= 0.012 && rejected && ctx.accept_prob > 0.339 && ctx.accept_prob < 0.48;
    std::ostringstream d;
    d << "ks=" << ks << ", P(chi=1)=" << ctx.accept_prob;
    report(9, "splitting sampler (gaussian passes, rademacher rejected)", ok, d.str());
}

// 10. bump profile: seam continuity, support, normalization bracket, scaling
void criterion_10() {
    bool ok = true;
    std::ostringstream d;
    BumpProfile half = bump(0.5);
    ok = ok && std::abs(half.psi(0.5) - 1.0) <= 1e-12;
    ok = ok && half.psi(1.0) == 0.0 && half.psi(1.7) == 0.0;
    ok = ok && half.m_r > 1.41421 && half.m_r < 2.0;
    d << "m_{0.5}=" << half.m_r;
    for (int l : {1, 2}) {
        for (int p : {1, 2}) {
            double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
            for (double r : {0.1, 0.5, 1.0, 2.0}) {
                BumpProfile b = bump(r);
                ok = ok && std::abs(b.psi(r) - 1.0) <= 1e-12;
                ok = ok && b.psi(2.0 * r) == 0.0;
                double h = r * 1e-5, sup = 0.0;
                const int grid = 10000;
                for (int i = 1; i < grid; ++i) {
                    double t = r + static_cast<double>(i) / grid * r;
                    if (t - 2.0 * h <= r || t + 2.0 * h >= 2.0 * r) continue;
                    double der = l == 1 ? (b.theta(t + h) - b.theta(t - h)) / (2.0 * h)
                                        : (b.theta(t + h) - 2.0 * b.theta(t) +
                                           b.theta(t - h)) / (h * h);
                    sup = std::max(sup,
                                   b.psi(t) * std::pow(std::abs(der), p) * std::pow(r, l * p));
                }
                lo = std::min(lo, sup);
                hi = std::max(hi, sup);
            }
            ok = ok && (hi / lo <= 1.01) && hi <= 2.0e4;
        }
    }
    report(10, "bump profile continuity, support, normalization, derivative scaling", ok,
           d.str());
}

// 11. identical (seed, shards) reproduce byte-identical reports
void criterion_11() {
#ifndef CHAOSLAB_CLI_PATH
    report(11, "reproducibility (CLI path not configured)", false);
#else
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "chaoslab_acceptance";
    fs::create_directories(dir);
    fs::path kernel = dir / "k.json";
    save_kernel(generate_family({"path", 2, 12, 0}), kernel.string());

    auto run = [&](const std::string& args, const fs::path& out) {
        std::string cmd = std::string(CHAOSLAB_CLI_PATH) + " " + args + " --out " +
                          out.string() + " >/dev/null 2>&1";
        return std::system(cmd.c_str()) == 0;
    };
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };

    bool ok = true;
    std::string sim_args =
        "simulate --kernel " + kernel.string() + " --dist gaussian --seed 7 --n 20000 --shards 3";
    ok = ok && run(sim_args, dir / "sim1.json") && run(sim_args, dir / "sim2.json");
    ok = ok && slurp(dir / "sim1.json") == slurp(dir / "sim2.json") &&
         !slurp(dir / "sim1.json").empty();

    std::string exp_args =
        "experiment clt --family path --m 2 --n-list 10,20 --samples 20000 --seed 3 --format csv";
    ok = ok && run(exp_args, dir / "clt1.csv") && run(exp_args, dir / "clt2.csv");
    ok = ok && slurp(dir / "clt1.csv") == slurp(dir / "clt2.csv") &&
         !slurp(dir / "clt1.csv").empty();
    report(11, "reproducibility: identical seed/shards give byte-identical reports", ok);
    fs::remove_all(dir);
#endif
}

}  // namespace

int main() {
    std::printf("chaoslab acceptance suite (tool version %s)\n", kVersion);
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    if (failures == 0) {
        std::printf("all 11 criteria passed\n");
        return 0;
    }
    std::printf("%d criteria FAILED\n", failures);
    return 2;
}
