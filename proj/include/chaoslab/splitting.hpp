// SPDX-License-Identifier: MIT
//
// Doeblin splitting: smooth bump profile (theta_r, psi_r, normalization
// m_r), the mixture sampler Z = chi V + (1 - chi) U it induces, and the
// law-identity check between direct and split sampling.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "chaoslab/distributions.hpp"
#include "chaoslab/sampling.hpp"

namespace chaoslab {

namespace detail {

// Adaptive Simpson on [a, b] to the requested relative tolerance.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double fa, double fm, double fb, double whole, double tol,
                               int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double rel_tol) {
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double scale = std::max(std::abs(whole), 1e-12);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, rel_tol * scale, 48);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// BumpProfile: theta_r(t) = 1 - 1/(1 - (t/r - 1)^2) and
// psi_r(t) = 1 on |t| <= r, exp(theta_r(|t|)) on r < |t| <= 2r, 0 beyond.
// psi is continuous at the seam (theta_r(r) = 0) and vanishes with all
// derivatives at |t| = 2r. m_r = integral of psi_r(|xi|^2) d xi.
// ---------------------------------------------------------------------------
struct BumpProfile {
    double r = 0.0;
    double m_r = 0.0;

    [[nodiscard]] double theta(double t) const {
        double s = t / r - 1.0;
        double den = 1.0 - s * s;
        if (den <= 0.0) return -std::numeric_limits<double>::infinity();
        return 1.0 - 1.0 / den;
    }

    [[nodiscard]] double psi(double t) const {
        double a = std::abs(t);
        if (a <= r) return 1.0;
        if (a >= 2.0 * r) return 0.0;
        double th = theta(a);
        return std::isinf(th) ? 0.0 : std::exp(th);
    }
};

inline BumpProfile bump(double r) {
    if (r <= 0.0) throw Error("bump radius must be positive");
    BumpProfile b;
    b.r = r;
    double lo = std::sqrt(r), hi = std::sqrt(2.0 * r);
    double tail = detail::integrate([&](double xi) { return b.psi(xi * xi); }, lo, hi, 1e-9);
    b.m_r = 2.0 * (lo + tail);
    return b;
}

// ---------------------------------------------------------------------------
// Splitting sampler. With (z, r, eps) admissible for the law:
//   chi ~ Bernoulli(eps m_r)
//   V   ~ psi_r(|xi - z|^2) / m_r        (rejection against a box)
//   U   ~ (p_Z - eps psi_r(|. - z|^2)) / (1 - eps m_r)
//                                        (rejection against p_Z itself)
// and the output chi V + (1 - chi) U has the law of Z.
// ---------------------------------------------------------------------------
struct SplitContext {
    BumpProfile profile;
    DoeblinTriple triple;
    double accept_prob = 0.0;  // P(chi = 1) = eps * m_r
};

inline SplitContext make_split_context(const SourceDistribution& dist) {
    if (!dist.doeblin || !dist.density)
        throw InvalidDoeblin("law '" + dist.name + "' carries no density/splitting triple");
    SplitContext ctx;
    ctx.triple = *dist.doeblin;
    ctx.profile = bump(ctx.triple.r);
    ctx.accept_prob = ctx.triple.eps * ctx.profile.m_r;
    if (ctx.accept_prob > 1.0)
        throw InvalidDoeblin("eps * m_r exceeds 1; the mixture weights are not a probability");
    // residual measure must stay nonnegative where the bump lives
    double half = std::sqrt(2.0 * ctx.triple.r);
    const int grid = 2001;
    for (int i = 0; i < grid; ++i) {
        double xi = ctx.triple.z - half + 2.0 * half * i / (grid - 1);
        double d = xi - ctx.triple.z;
        double res = dist.density(xi) - ctx.triple.eps * ctx.profile.psi(d * d);
        if (res < -1e-12)
            throw InvalidDoeblin("negative residual density at xi = " + std::to_string(xi));
    }
    return ctx;
}

inline double split_draw(const SourceDistribution& dist, const SplitContext& ctx, Rng& rng) {
    const double z0 = ctx.triple.z, eps = ctx.triple.eps;
    double half = std::sqrt(2.0 * ctx.triple.r);
    if (rng.bernoulli(ctx.accept_prob)) {
        // V: box envelope, psi <= 1
        while (true) {
            double xi = z0 + half * (2.0 * rng.uniform01() - 1.0);
            double d = xi - z0;
            if (rng.uniform01() <= ctx.profile.psi(d * d)) return xi;
        }
    }
    // U: thin the law by the accepted bump part
    while (true) {
        double x = dist.draw(rng);
        double p = dist.density(x);
        double d = x - z0;
        if (rng.uniform01() * p >= eps * ctx.profile.psi(d * d)) return x;
    }
}

inline SampleBatch split_sampler(const SourceDistribution& dist, std::uint64_t seed,
                                 std::size_t n, int shards = 1) {
    SplitContext ctx = make_split_context(dist);
    return detail::run_sharded(seed, n, shards, [&](Rng& rng, double* out, std::size_t len) {
        for (std::size_t i = 0; i < len; ++i) out[i] = split_draw(dist, ctx, rng);
    });
}

// Two-sample Kolmogorov statistic between direct draws of the law and
// split-constructed draws; small values certify the identity of laws.
inline double verify_split(const SourceDistribution& dist, std::size_t n,
                           std::uint64_t seed_a, std::uint64_t seed_b) {
    if (n < 1) throw Error("sample count must be >= 1");
    SampleBatch direct = sample_law(dist, seed_a, n);
    SampleBatch split = split_sampler(dist, seed_b, n);
    return two_sample_ks(direct, split);
}

}  // namespace chaoslab
