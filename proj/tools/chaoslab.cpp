// SPDX-License-Identifier: MIT
//
// chaoslab CLI: kernel generation, diagnostics, simulation, bound reports,
// and the verification suites, wired for reproducibility (every report
// embeds tool version, seed, shard count, and kernel hash).
//
// Exit codes: 0 success, 1 invocation/validation error, 2 suite failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "chaoslab/expansion.hpp"
#include "chaoslab/contraction.hpp"
#include "chaoslab/distributions.hpp"
#include "chaoslab/experiments.hpp"
#include "chaoslab/kernel.hpp"
#include "chaoslab/kernel_io.hpp"
#include "chaoslab/oracle.hpp"
#include "chaoslab/sampling.hpp"
#include "chaoslab/splitting.hpp"
#include "chaoslab/version.hpp"

namespace {

using namespace chaoslab;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("CHAOS_LAB_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            throw Error("CHAOS_LAB_SEED is not a valid unsigned integer");
        }
    }
    return 0;
}

ChaosCoefficients load_or_die(const std::string& path, bool warn = true) {
    if (!std::filesystem::exists(path)) throw Error("kernel file not found: " + path);
    LoadedKernel lk = load_kernel(path);
    if (warn)
        for (const auto& w : lk.warnings) std::cerr << "warning: " << w << "\n";
    return std::move(lk.coefficients);
}

void emit(const Json& doc, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << doc.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw Error("cannot write " + out_path);
        out << doc.dump(2) << "\n";
    }
}

void emit_text(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw Error("cannot write " + out_path);
        out << text;
    }
}

struct TestFunction {
    std::string name;
    std::function<double(double)> f;
    double f3_norm;
    double f4_norm;
};

TestFunction find_test_function(const std::string& name) {
    // analytic derivative sup-norms; no numerical differentiation anywhere
    if (name == "sin") return {"sin", [](double x) { return std::sin(x); }, 1.0, 1.0};
    if (name == "cos") return {"cos", [](double x) { return std::cos(x); }, 1.0, 1.0};
    if (name == "gauss") {
        double x2 = 3.0 - std::sqrt(6.0);
        double f3 = std::sqrt(x2) * std::sqrt(6.0) * std::exp(-0.5 * x2);
        return {"gauss", [](double x) { return std::exp(-0.5 * x * x); }, f3, 3.0};
    }
    throw Error("unknown test function '" + name + "' (sin|cos|gauss)");
}

// ---------------------------------------------------------------------------

int cmd_gen(const std::string& family, int m, int n, std::uint64_t seed,
            const std::string& out) {
    ChaosCoefficients c = generate_family({family, m, n, seed});
    Json meta;
    meta["family"] = family;
    meta["m"] = m;
    meta["n"] = n;
    meta["seed"] = seed;
    meta["tool_version"] = kVersion;
    save_kernel(c, out, meta);
    std::cout << "wrote " << out << " (i_N = " << series_second_moment(c) << ")\n";
    return 0;
}

int cmd_diag(const std::string& kernel_path, const std::vector<double>& m_list,
             const std::string& out) {
    ChaosCoefficients c = load_or_die(kernel_path);
    Json doc;
    doc["header"] = report_header(0, 1, kernel_hash(c));
    doc["i_N"] = series_second_moment(c);
    doc["gradient_second_moment"] = gradient_second_moment(c);
    doc["delta_bar"] = influence_profile(c, false);
    doc["delta_bar_weighted"] = influence_profile(c, true);
    doc["kappa_bar"] = kappa_bar(c);
    double alpha = min_active_level_norm(c);
    if (std::isfinite(alpha))
        doc["alpha_N"] = alpha;
    else
        doc["alpha_N"] = nullptr;
    doc["levels"] = Json::array();
    for (const auto& [m, k] : c.levels()) {
        Json lv;
        lv["m"] = m;
        lv["norm"] = level_norm(c, m);
        lv["level_variance"] = factorial(m) * level_norm(c, m) * level_norm(c, m);
        lv["delta"] = influence(c, m);
        lv["kappa4"] = kappa4(c, m);
        doc["levels"].push_back(lv);
    }
    doc["eps0"] = Json::array();
    for (double M : m_list) {
        Eps0Result e = eps0(c, M);
        Json ej;
        ej["M"] = M;
        ej["value"] = e.value;
        ej["upper_bound"] = e.upper_bound;
        doc["eps0"].push_back(ej);
    }
    emit(doc, out);
    return 0;
}

int cmd_kappa(const std::string& kernel_path, const std::string& out) {
    ChaosCoefficients c = load_or_die(kernel_path);
    Json doc;
    doc["header"] = report_header(0, 1, kernel_hash(c));
    doc["levels"] = Json::array();
    for (const auto& [m, k] : c.levels()) {
        Json lv;
        lv["m"] = m;
        lv["kappa4"] = kappa4(c, m);
        lv["kappa4_fourth_root"] = std::pow(kappa4(c, m), 0.25);
        doc["levels"].push_back(lv);
    }
    doc["kappa_bar"] = kappa_bar(c);
    emit(doc, out);
    return 0;
}

int cmd_simulate(const std::string& kernel_path, const std::string& dist_name,
                 std::uint64_t seed, std::size_t n, int shards, int bins,
                 const std::string& format, const std::string& out) {
    ChaosCoefficients c = load_or_die(kernel_path);
    const SourceDistribution& dist = find_distribution(dist_name);
    SampleBatch batch = sample_series(c, dist, seed, n, shards);
    SampleMoments mom = central_moments(batch.values);
    Kappa4Estimate k4 = empirical_kappa4(batch);
    double i_n = series_second_moment(c);
    double ks = i_n > 0.0
                    ? kolmogorov_distance(batch, [i_n](double x) { return normal_cdf(x, i_n); })
                    : 0.0;

    double lo = *std::min_element(batch.values.begin(), batch.values.end());
    double hi = *std::max_element(batch.values.begin(), batch.values.end());
    std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
    double width = (hi - lo) / bins;
    for (double x : batch.values) {
        int b = width > 0.0 ? std::min(bins - 1, static_cast<int>((x - lo) / width)) : 0;
        ++counts[static_cast<std::size_t>(b)];
    }

    if (format == "csv") {
        std::ostringstream s;
        s << "# tool_version=" << kVersion << " seed=" << seed << " shards=" << shards
          << " kernel_hash=" << kernel_hash(c) << "\n";
        s << "mean,var,kappa4_hat,kappa4_se,kolmogorov\n";
        s << format_double(mom.mean) << "," << format_double(mom.variance) << ","
          << format_double(k4.value) << "," << format_double(k4.std_error) << ","
          << format_double(ks) << "\n";
        s << "bin_lo,bin_hi,count\n";
        for (int b = 0; b < bins; ++b)
            s << format_double(lo + b * width) << "," << format_double(lo + (b + 1) * width)
              << "," << counts[static_cast<std::size_t>(b)] << "\n";
        emit_text(s.str(), out);
        return 0;
    }
    Json doc;
    doc["header"] = report_header(seed, shards, kernel_hash(c));
    doc["dist"] = dist.name;
    doc["n"] = n;
    doc["mean"] = mom.mean;
    doc["var"] = mom.variance;
    doc["kappa4_hat"] = k4.value;
    doc["kappa4_se"] = k4.std_error;
    doc["kolmogorov_to_normal_iN"] = ks;
    doc["histogram"] = Json::object();
    doc["histogram"]["lo"] = lo;
    doc["histogram"]["hi"] = hi;
    doc["histogram"]["counts"] = counts;
    emit(doc, out);
    return 0;
}

int cmd_delta(const std::string& kernel_path, const std::string& dist_a,
              const std::string& dist_b, const std::string& fname, std::uint64_t seed_a,
              std::uint64_t seed_b, std::size_t n, const std::string& out) {
    ChaosCoefficients c = load_or_die(kernel_path);
    TestFunction tf = find_test_function(fname);
    SmoothDistance sd = smooth_distance(c, find_distribution(dist_a), find_distribution(dist_b),
                                        tf.f, seed_a, seed_b, n);
    Json doc;
    doc["header"] = report_header(seed_a ^ (seed_b << 1), 1, kernel_hash(c));
    doc["f"] = tf.name;
    doc["estimate"] = sd.estimate;
    doc["half_width"] = sd.half_width;
    emit(doc, out);
    return 0;
}

BoundConstants load_constants(const std::string& path) {
    BoundConstants bc;
    if (path.empty()) return bc;
    std::ifstream in(path);
    if (!in) throw Error("cannot open constants file '" + path + "'");
    Json doc;
    in >> doc;
    if (doc.contains("C_p")) bc.C_p = doc["C_p"].get<double>();
    if (doc.contains("C_star")) bc.C_star = doc["C_star"].get<double>();
    if (doc.contains("d_star")) bc.d_star = doc["d_star"].get<double>();
    if (doc.contains("c_star")) bc.c_star = doc["c_star"].get<double>();
    if (doc.contains("M_star")) bc.M_star = doc["M_star"].get<double>();
    if (doc.contains("p_star")) bc.p_star = doc["p_star"].get<double>();
    if (doc.contains("b")) {
        for (auto it = doc["b"].begin(); it != doc["b"].end(); ++it)
            bc.b_table[std::stoi(it.key())] = it.value().get<double>();
    }
    return bc;
}

int cmd_bounds(const std::string& kernel_path, const std::string& dist_a,
               const std::string& dist_b, const std::string& fname,
               const std::string& constants_path, double m_r, double r,
               const std::string& out) {
    ChaosCoefficients c = load_or_die(kernel_path);
    const SourceDistribution& da = find_distribution(dist_a);
    const SourceDistribution& db = find_distribution(dist_b);
    TestFunction tf = find_test_function(fname);
    BoundConstants bc = load_constants(constants_path);

    Json doc;
    doc["header"] = report_header(0, 1, kernel_hash(c));
    doc["smooth_bound_rhs"] = smooth_bound_rhs(c, da, db, tf.f3_norm, bc);
    try {
        doc["smooth_bound4_rhs"] = smooth_bound4_rhs(c, da, db, tf.f4_norm, bc);
    } catch (const ThirdMomentNonzero&) {
        doc["smooth_bound4_rhs"] = nullptr;
    }
    try {
        FourthMomentBound fm = fourth_moment_bound_rhs(c, 1.0);
        doc["fourth_moment_bound"] = Json::object();
        doc["fourth_moment_bound"]["quarter_power"] = fm.quarter_power;
        if (fm.half_power)
            doc["fourth_moment_bound"]["half_power"] = *fm.half_power;
        doc["fourth_moment_bound"]["selected"] = fm.selected;
    } catch (const NotNormalized&) {
        doc["fourth_moment_bound"] = nullptr;
    }
    TvBoundFactors tv = tv_bound_factors(c, bc, m_r, r);
    Json tvj;
    tvj["splitting_factor"] = tv.splitting_factor;
    tvj["growth_factor"] = tv.growth_factor;
    tvj["poly_factor"] = tv.poly_factor;
    tvj["factorial_factor"] = tv.factorial_factor;
    tvj["kappa_bar"] = tv.kappa_bar;
    tvj["kappa_term"] = tv.kappa_term;
    tvj["delta_bar_weighted"] = tv.delta_bar_weighted;
    tvj["alpha_term"] = tv.alpha_term;
    tvj["assembled"] = tv.assembled;
    tvj["assembled_proof_variant"] = tv.assembled_proof_variant;
    tvj["hypothesis_a9"] = Json::object();
    tvj["hypothesis_a9"]["ok"] = tv.a9_ok;
    tvj["hypothesis_a9"]["lhs"] = tv.a9_lhs;
    tvj["hypothesis_a9"]["rhs"] = tv.a9_rhs;
    doc["tv_bound_factors"] = tvj;
    int N = c.max_level();
    doc["small_ball_rhs"] = small_ball_rhs(c, N, 1, m_r, bc.C_p);
    doc["nl0_rhs"] = nl0_rhs(c, N, 2, bc.C_p);
    emit(doc, out);
    return 0;
}

// random sparse kernel for the verification corpora
ChaosCoefficients random_corpus_kernel(Rng& rng, int max_level, int support, bool normalize_it) {
    std::map<int, SymmetricKernel> levels;
    std::vector<int> universe(static_cast<std::size_t>(support));
    for (int i = 0; i < support; ++i) universe[i] = i + 1;
    for (int m = 1; m <= max_level; ++m) {
        std::vector<std::pair<MultiIndex, double>> entries;
        for_each_increasing_tuple(universe, m, [&](std::span<const int> t) {
            if (rng.uniform01() < 0.55)
                entries.emplace_back(MultiIndex(t.begin(), t.end()), rng.normal());
        });
        if (!entries.empty()) levels.emplace(m, make_kernel(m, entries));
    }
    if (levels.empty())
        levels.emplace(1, make_kernel(1, {{{1}, 1.0}}));
    ChaosCoefficients c(max_level, std::move(levels));
    return normalize_it ? normalize(c) : c;
}

int cmd_verify(int cases, std::uint64_t seed, const std::string& out) {
    Rng rng(splitmix64(seed ^ 0x7e57ull));
    double worst_r1 = 0.0, worst_i2 = 0.0, worst_i1 = 0.0;
    Json case_list = Json::array();
    for (int i = 0; i < cases; ++i) {
        ChaosCoefficients c = random_corpus_kernel(rng, 1 + static_cast<int>(rng.raw() % 3), 5, false);
        std::vector<double> z(5);
        for (auto& x : z) x = rng.normal();
        IdentityCheck chk = square_identity_check(c, z);
        Realization real = Realization::from_z(z);
        for (auto& ct : real.chi_tilde) ct = rng.bernoulli(0.4) ? 0.6 : -0.4;
        real.chi_mean = 0.4;
        GradientFunctionals gf = gradient_functionals(c, real);
        double e_r1 = chk.rel_error();
        double e_i2 = std::abs(gf.direct - gf.expansion) / (1.0 + std::abs(gf.direct));
        double e_i1 = std::abs(gf.tilde - gf.expansion_tilde) / (1.0 + std::abs(gf.tilde));
        worst_r1 = std::max(worst_r1, e_r1);
        worst_i2 = std::max(worst_i2, e_i2);
        worst_i1 = std::max(worst_i1, e_i1);
        Json cj;
        cj["case"] = i;
        cj["square_identity"] = e_r1;
        cj["gradient_identity"] = e_i2;
        cj["gradient_tilde_identity"] = e_i1;
        case_list.push_back(cj);
        std::cerr << "case " << i << ": square " << e_r1 << ", gradient " << e_i2
                  << ", gradient-tilde " << e_i1 << "\n";
    }
    double worst_ineq = 0.0;
    for (int i = 0; i < cases; ++i) {
        ChaosCoefficients c = random_corpus_kernel(rng, 1 + static_cast<int>(rng.raw() % 3), 8, false);
        worst_ineq = std::max(worst_ineq, check_contraction_inequalities(c).max_violation);
    }
    bool ok = worst_r1 <= 1e-10 && worst_i2 <= 1e-10 && worst_i1 <= 1e-10 && worst_ineq <= 1e-12;
    Json doc;
    doc["header"] = report_header(seed, 1);
    doc["cases"] = cases;
    doc["square_identity_max_rel_error"] = worst_r1;
    doc["gradient_identity_max_rel_error"] = worst_i2;
    doc["gradient_tilde_identity_max_rel_error"] = worst_i1;
    doc["inequality_max_violation"] = worst_ineq;
    doc["per_case"] = case_list;
    doc["ok"] = ok;
    emit(doc, out);
    std::cerr << (ok ? "verify: all identity suites passed\n" : "verify: FAILURE\n");
    return ok ? 0 : 2;
}

int cmd_oracle_check(std::uint64_t seed) {
    Rng rng(splitmix64(seed ^ 0x0bacceull));
    bool ok = true;
    auto expect = [&](bool cond, const std::string& what) {
        std::cerr << (cond ? "ok   " : "FAIL ") << what << "\n";
        ok = ok && cond;
    };

    // fixture: the complete level-2 kernel on {1,2,3}
    ChaosCoefficients fixture = generate_family({"complete", 2, 3, 0});
    expect(std::abs(series_second_moment(fixture) - 1.0) < 1e-12, "fixture i_N = 1");
    expect(std::abs(kappa4(fixture, 2) - 6.0) < 1e-9, "fixture kappa4 = 6");
    expect(std::abs(level2_eigen_kappa4(*fixture.level(2)) - 6.0) < 1e-9,
           "fixture eigen kappa4 = 6");

    // random single-level kernels: contraction kappa4 vs Gaussian moment oracle
    MomentTable gauss = gaussian_table();
    for (int i = 0; i < 25; ++i) {
        int m = 2 + static_cast<int>(rng.raw() % 2);
        ChaosCoefficients c = random_corpus_kernel(rng, m, 6, true);
        // keep only the top level so the cumulant is per-level
        if (const SymmetricKernel* k = c.level(m); k && !k->empty()) {
            ChaosCoefficients single = single_level(*k);
            double ka = kappa4(single, m);
            double kb = exact_power_moment(single, gauss, 4) -
                        3.0 * std::pow(exact_power_moment(single, gauss, 2), 2);
            double rel = std::abs(ka - kb) / std::max(1e-12, std::abs(kb));
            if (rel > 1e-9) expect(false, "kappa4 contraction vs moment oracle");
            if (m == 2) {
                double kc = level2_eigen_kappa4(*k);
                if (std::abs(ka - kc) / std::max(1e-12, kc) > 1e-9)
                    expect(false, "kappa4 contraction vs eigenvalue oracle");
            }
        }
    }
    expect(true, "25 random kernels: kappa4 triple agreement");

    // isometry under Rademacher enumeration
    for (int i = 0; i < 10; ++i) {
        ChaosCoefficients c = random_corpus_kernel(rng, 1 + static_cast<int>(rng.raw() % 3), 6, false);
        double brute = rademacher_expect(c, 8, [](double s) { return s * s; });
        if (std::abs(brute - series_second_moment(c)) > 1e-12)
            expect(false, "Rademacher isometry");
    }
    expect(true, "10 random kernels: Rademacher isometry");
    return ok ? 0 : 2;
}

int cmd_split_check(const std::string& dist_name, double z, double r, double eps,
                    std::size_t n, std::uint64_t seed_a, std::uint64_t seed_b) {
    SourceDistribution dist = find_distribution(dist_name);
    if (r > 0.0) dist.doeblin = DoeblinTriple{z, r, eps};
    double ks = verify_split(dist, n, seed_a, seed_b);
    double threshold = 1.628 * std::sqrt(2.0 / static_cast<double>(n)) * 1.5;
    Json doc;
    doc["header"] = report_header(seed_a ^ (seed_b << 1), 1);
    doc["dist"] = dist.name;
    doc["n"] = n;
    doc["ks_statistic"] = ks;
    doc["threshold"] = threshold;
    doc["ok"] = ks <= threshold;
    emit(doc, "");
    return ks <= threshold ? 0 : 2;
}

int cmd_experiment_clt(const std::string& family, int m, const std::string& dist_name,
                       const std::vector<int>& n_list, std::size_t samples,
                       std::uint64_t seed, int shards, const std::string& format,
                       const std::string& out) {
    std::vector<CltRow> rows =
        clt_experiment(family, m, find_distribution(dist_name), n_list, seed, samples, shards);
    if (format == "csv") {
        std::ostringstream s;
        s << "# tool_version=" << kVersion << " seed=" << seed << " shards=" << shards
          << " family=" << family << " m=" << m << " dist=" << dist_name << "\n";
        s << "n,kappa4,delta,kolmogorov,kappa4_hat,kappa4_se\n";
        for (const auto& r : rows)
            s << r.n << "," << format_double(r.kappa4_level) << ","
              << format_double(r.delta_level) << "," << format_double(r.kolmogorov) << ","
              << format_double(r.kappa4_hat) << "," << format_double(r.kappa4_se) << "\n";
        emit_text(s.str(), out);
        return 0;
    }
    Json doc;
    doc["header"] = report_header(seed, shards);
    doc["family"] = family;
    doc["m"] = m;
    doc["dist"] = dist_name;
    doc["samples"] = samples;
    doc["rows"] = Json::array();
    for (const auto& r : rows) {
        Json rj;
        rj["n"] = r.n;
        rj["kappa4"] = r.kappa4_level;
        rj["delta"] = r.delta_level;
        rj["kolmogorov"] = r.kolmogorov;
        rj["kappa4_hat"] = r.kappa4_hat;
        rj["kappa4_se"] = r.kappa4_se;
        doc["rows"].push_back(rj);
    }
    emit(doc, out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chaoslab: diagnostics, bounds and simulation for discrete stochastic chaos series"};
    app.require_subcommand(1);
    std::uint64_t env_seed;
    try {
        env_seed = default_seed();
    } catch (const chaoslab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    // gen
    auto* gen = app.add_subcommand("gen", "generate a kernel family and write it to JSON");
    std::string gen_family = "path", gen_out;
    int gen_m = 2, gen_n = 10;
    std::uint64_t gen_seed = env_seed;
    gen->add_option("--family", gen_family, "complete|path|random");
    gen->add_option("--m", gen_m, "chaos level");
    gen->add_option("--n", gen_n, "size parameter");
    gen->add_option("--seed", gen_seed, "seed (random family)");
    gen->add_option("--out", gen_out, "output kernel file")->required();

    // diag
    auto* diag = app.add_subcommand("diag", "per-level diagnostics report");
    std::string diag_kernel, diag_out;
    std::vector<double> diag_M{1.0};
    diag->add_option("--kernel", diag_kernel, "kernel JSON file")->required();
    diag->add_option("--M", diag_M, "M values for eps0");
    diag->add_option("--out", diag_out, "output path (default stdout)");

    // kappa
    auto* kap = app.add_subcommand("kappa", "fourth cumulants per level");
    std::string kap_kernel, kap_out;
    kap->add_option("--kernel", kap_kernel)->required();
    kap->add_option("--out", kap_out);

    // simulate
    auto* sim = app.add_subcommand("simulate", "sample S_N(c,Z) and report statistics");
    std::string sim_kernel, sim_dist = "gaussian", sim_format = "json", sim_out;
    std::uint64_t sim_seed = env_seed;
    std::size_t sim_n = 100000;
    int sim_shards = std::max(1u, std::thread::hardware_concurrency());
    int sim_bins = 40;
    sim->add_option("--kernel", sim_kernel)->required();
    sim->add_option("--dist", sim_dist, "source law");
    sim->add_option("--seed", sim_seed);
    sim->add_option("--n", sim_n, "sample count");
    sim->add_option("--shards", sim_shards, "worker shards");
    sim->add_option("--bins", sim_bins, "histogram bins");
    sim->add_option("--report", sim_format, "json|csv");
    sim->add_option("--out", sim_out);

    // delta
    auto* del = app.add_subcommand("delta", "smooth-distance estimate between two laws");
    std::string del_kernel, del_a = "rademacher", del_b = "gaussian", del_f = "sin", del_out;
    std::uint64_t del_seed_a = env_seed, del_seed_b = env_seed + 1;
    std::size_t del_n = 100000;
    del->add_option("--kernel", del_kernel)->required();
    del->add_option("--distA", del_a);
    del->add_option("--distB", del_b);
    del->add_option("--f", del_f, "sin|cos|gauss");
    del->add_option("--seedA", del_seed_a);
    del->add_option("--seedB", del_seed_b);
    del->add_option("--n", del_n);
    del->add_option("--out", del_out);

    // bounds
    auto* bnd = app.add_subcommand("bounds", "explicit bound right-hand sides");
    std::string bnd_kernel, bnd_a = "rademacher", bnd_b = "gaussian", bnd_f = "sin";
    std::string bnd_constants, bnd_out;
    double bnd_mr = 1.787155186328055, bnd_r = 0.5;  // gaussian splitting defaults
    bnd->add_option("--kernel", bnd_kernel)->required();
    bnd->add_option("--distA", bnd_a);
    bnd->add_option("--distB", bnd_b);
    bnd->add_option("--f", bnd_f);
    bnd->add_option("--constants", bnd_constants, "JSON file of constants");
    bnd->add_option("--m-r", bnd_mr, "splitting normalization m(r)");
    bnd->add_option("--r", bnd_r, "splitting radius");
    bnd->add_option("--out", bnd_out);

    // verify
    auto* ver = app.add_subcommand("verify", "identity and inequality suites");
    int ver_cases = 100;
    std::uint64_t ver_seed = env_seed;
    std::string ver_out;
    ver->add_option("--cases", ver_cases);
    ver->add_option("--seed", ver_seed);
    ver->add_option("--out", ver_out);

    // oracle-check
    auto* orc = app.add_subcommand("oracle-check", "oracle-vs-formula equivalence suite");
    std::uint64_t orc_seed = env_seed;
    orc->add_option("--seed", orc_seed);

    // split-check
    auto* spl = app.add_subcommand("split-check", "direct vs split-sampler law identity");
    std::string spl_dist = "gaussian";
    double spl_z = 0.0, spl_r = 0.0, spl_eps = 0.0;
    std::size_t spl_n = 100000;
    std::uint64_t spl_seed_a = env_seed + 11, spl_seed_b = env_seed + 22;
    spl->add_option("--dist", spl_dist);
    spl->add_option("--z", spl_z, "override triple center");
    spl->add_option("--r", spl_r, "override triple radius (enables override)");
    spl->add_option("--eps", spl_eps, "override triple weight");
    spl->add_option("--n", spl_n);
    spl->add_option("--seedA", spl_seed_a);
    spl->add_option("--seedB", spl_seed_b);

    // experiment clt
    auto* exp = app.add_subcommand("experiment", "convergence experiments");
    exp->require_subcommand(1);
    auto* clt = exp->add_subcommand("clt", "kappa4/influence/Kolmogorov across family sizes");
    std::string clt_family = "path", clt_dist = "gaussian", clt_format = "csv", clt_out;
    int clt_m = 2, clt_shards = 1;
    std::vector<int> clt_n_list{10, 20, 50, 100, 200};
    std::size_t clt_samples = 100000;
    std::uint64_t clt_seed = env_seed;
    clt->add_option("--family", clt_family, "path|complete|random");
    clt->add_option("--m", clt_m);
    clt->add_option("--n-list", clt_n_list)->delimiter(',');
    clt->add_option("--samples", clt_samples);
    clt->add_option("--seed", clt_seed);
    clt->add_option("--shards", clt_shards);
    clt->add_option("--format", clt_format, "csv|json");
    clt->add_option("--out", clt_out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen(gen_family, gen_m, gen_n, gen_seed, gen_out);
        if (diag->parsed()) return cmd_diag(diag_kernel, diag_M, diag_out);
        if (kap->parsed()) return cmd_kappa(kap_kernel, kap_out);
        if (sim->parsed())
            return cmd_simulate(sim_kernel, sim_dist, sim_seed, sim_n, sim_shards, sim_bins,
                                sim_format, sim_out);
        if (del->parsed())
            return cmd_delta(del_kernel, del_a, del_b, del_f, del_seed_a, del_seed_b, del_n,
                             del_out);
        if (bnd->parsed())
            return cmd_bounds(bnd_kernel, bnd_a, bnd_b, bnd_f, bnd_constants, bnd_mr, bnd_r,
                              bnd_out);
        if (ver->parsed()) return cmd_verify(ver_cases, ver_seed, ver_out);
        if (orc->parsed()) return cmd_oracle_check(orc_seed);
        if (spl->parsed())
            return cmd_split_check(spl_dist, spl_z, spl_r, spl_eps, spl_n, spl_seed_a,
                                   spl_seed_b);
        if (exp->parsed())
            return cmd_experiment_clt(clt_family, clt_m, clt_dist, clt_n_list, clt_samples,
                                      clt_seed, clt_shards, clt_format, clt_out);
    } catch (const chaoslab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
