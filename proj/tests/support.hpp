// Shared helpers for the test suite and the acceptance harness: a seedable
// RNG (PCRIT_SEED environment variable, default 20260819), random generators
// for rationals, bundles, quiver models and points, and independent
// closed-form oracles that the library results are checked against.  The
// oracles are deliberately written from first principles — direct pairing
// formulas and hand-integrated ODE solutions — and share no code with the
// library implementations they certify.

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "pcrit/blp2.hpp"
#include "pcrit/bundle.hpp"
#include "pcrit/quiver.hpp"
#include "pcrit/rational.hpp"
#include "pcrit/ring.hpp"

namespace testsupport {

using pcrit::Cplx;
using pcrit::GaussRational;
using pcrit::Mat;
using pcrit::Rational;

inline std::uint64_t base_seed() {
    if (const char* s = std::getenv("PCRIT_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(s, &end, 10);
        if (end && *end == '\0') return v;
    }
    return 20260819ull;
}

// Independent engine per test site: a salt keeps streams decoupled so adding
// a draw in one test cannot shift every other test's data.
inline std::mt19937_64 make_rng(std::uint64_t salt) {
    return std::mt19937_64(base_seed() ^ (salt * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull));
}

inline int rand_int(std::mt19937_64& g, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(g);
}

inline Rational rand_rational(std::mt19937_64& g, int max_abs_num, int max_den) {
    const int num = rand_int(g, -max_abs_num, max_abs_num);
    const int den = rand_int(g, 1, max_den);
    return Rational(num, den);
}

inline double rand_real(std::mt19937_64& g, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline Cplx rand_cplx(std::mt19937_64& g, double scale) {
    return Cplx(rand_real(g, -scale, scale), rand_real(g, -scale, scale));
}

inline Mat rand_mat(std::mt19937_64& g, int rows, int cols, double scale) {
    Mat m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = rand_cplx(g, scale);
    return m;
}

inline Mat rand_hermitian(std::mt19937_64& g, int n, double scale) {
    const Mat a = rand_mat(g, n, n, scale);
    return 0.5 * (a + a.adjoint()).eval();
}

// ---------------------------------------------------------------------------
// Random data on the built-in surface ring.

inline pcrit::CohomologyClass rand_ample_omega(std::mt19937_64& g, const pcrit::RingPtr& ring) {
    // u H - w D with u > w >= 1 is ample: positive against H - D, D, and itself.
    const int w = rand_int(g, 1, 4);
    const int u = w + rand_int(g, 1, 5);
    return pcrit::make_class(ring, {{"H", Rational(u)}, {"D", Rational(-w)}});
}

inline pcrit::CohomologyClass rand_degree2(std::mt19937_64& g, const pcrit::RingPtr& ring) {
    return pcrit::make_class(ring, {{"H", rand_rational(g, 5, 3)}, {"D", rand_rational(g, 5, 3)}});
}

inline pcrit::BundleTopology rand_bundle(std::mt19937_64& g, const pcrit::RingPtr& ring,
                                         int max_rank = 3) {
    const int rank = rand_int(g, 1, max_rank);
    std::vector<pcrit::CohomologyClass> ch(3, pcrit::CohomologyClass(ring));
    ch[0] = pcrit::CohomologyClass::unit(ring) * Rational(rank);
    ch[1] = rand_degree2(g, ring);
    ch[2] = pcrit::make_class(ring, {{"pt", rand_rational(g, 20, 4)}});
    return pcrit::make_bundle(ring, rank, ch);
}

// ---------------------------------------------------------------------------
// Random quiver models.

struct RandomModelOpts {
    int min_vertices = 2;
    int max_vertices = 4;
    int max_mult = 1;          // m_k <= this (the oracle needs 1)
    int max_count = 1;         // arrows per ordered pair: e in {0, .., max_count}
    int max_level_den = 4;     // denominators of p_k
    double block_scale = 1.2;  // entry magnitude of the random point
    double zero_prob = 0.25;   // chance a block starts identically zero
};

inline pcrit::QuiverModel rand_model(std::mt19937_64& g, const RandomModelOpts& o = {}) {
    const int n = rand_int(g, o.min_vertices, o.max_vertices);
    const int den = rand_int(g, 1, o.max_level_den);
    std::vector<int> c(static_cast<std::size_t>(n));
    std::vector<pcrit::QuiverVertex> verts;
    // Integer level numerators, adjusted to sum to zero against multiplicities.
    // With m_k = 1 the adjustment is exact by construction.
    for (int k = 0; k < n; ++k) c[static_cast<std::size_t>(k)] = rand_int(g, -3, 3);
    int total = 0;
    for (int k = 0; k + 1 < n; ++k) total += c[static_cast<std::size_t>(k)];
    c[static_cast<std::size_t>(n - 1)] = -total;
    for (int k = 0; k < n; ++k) {
        pcrit::QuiverVertex v;
        v.r = rand_int(g, 1, 3);
        v.m = o.max_mult == 1 ? 1 : rand_int(g, 1, o.max_mult);
        v.p = Rational(c[static_cast<std::size_t>(k)], den);
        verts.push_back(v);
    }
    if (o.max_mult != 1) {
        // General multiplicities: rebalance the last level so sum m_k p_k = 0.
        Rational s(0);
        for (int k = 0; k + 1 < n; ++k) s += Rational(verts[static_cast<std::size_t>(k)].m) *
                                              verts[static_cast<std::size_t>(k)].p;
        verts[static_cast<std::size_t>(n - 1)].p = -s / Rational(verts[static_cast<std::size_t>(n - 1)].m);
    }
    std::vector<pcrit::QuiverArrow> arrows;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const int e = rand_int(g, 0, o.max_count);
            if (e > 0) arrows.push_back({i, j, e});
        }
    return pcrit::QuiverModel::build(std::move(verts), arrows);
}

inline pcrit::ModelPoint rand_point(std::mt19937_64& g, const pcrit::QuiverModel& q,
                                    double scale = 1.2, double zero_prob = 0.25) {
    pcrit::ModelPoint b = pcrit::zero_point(q);
    for (std::size_t t = 0; t < b.blocks.size(); ++t) {
        if (rand_real(g, 0.0, 1.0) < zero_prob) continue;
        const auto& blk = q.blocks()[t];
        b.blocks[t] = rand_mat(g, q.vertex(blk.dst).m, q.vertex(blk.src).m, scale);
    }
    return b;
}

inline pcrit::LieElement rand_lie(std::mt19937_64& g, const pcrit::QuiverModel& q,
                                  double scale = 1.0) {
    pcrit::LieElement xi;
    for (int k = 0; k < q.n_vertices(); ++k)
        xi.xi.push_back(rand_hermitian(g, q.vertex(k).m, scale));
    return xi;
}

// Two vertices (r = m = 1), one arrow 0 -> 1 carrying the scalar x.
inline pcrit::QuiverModel scalar_model(const Rational& p0, const Rational& p1) {
    std::vector<pcrit::QuiverVertex> verts(2);
    verts[0] = {1, 1, p0};
    verts[1] = {1, 1, p1};
    return pcrit::QuiverModel::build(std::move(verts), {{0, 1, 1}});
}

inline pcrit::ModelPoint scalar_point(const pcrit::QuiverModel& q, const Cplx& x) {
    pcrit::ModelPoint b = pcrit::zero_point(q);
    b.blocks[0] = Mat::Constant(1, 1, x);
    return b;
}

// ---------------------------------------------------------------------------
// Independent oracles.

// Pairing of degree-2 classes x1 H + y1 D and x2 H + y2 D on the built-in
// surface: the only nonzero top products are H.H = pt and D.D = -pt.
inline Rational oracle_pair(const Rational& x1, const Rational& y1, const Rational& x2,
                            const Rational& y2) {
    return x1 * x2 - y1 * y2;
}

// Central charge of a bundle on a surface, written out by hand:
//   Z = (rk Int(omega^2) - 2 Int(ch_2)) + 2i Int(omega.ch_1).
inline GaussRational oracle_surface_charge(const Rational& rank, const Rational& omega_sq,
                                           const Rational& omega_ch1, const Rational& ch2) {
    return GaussRational(rank * omega_sq - 2 * ch2, 2 * omega_ch1);
}

// Discriminant of the built-in two-parameter example.
inline Rational oracle_discriminant(const Rational& e1, const Rational& e2) {
    return e2 + Rational(1, 128) * (1 - e2 * e2) * (5 - 11 * e2) * e1 * e1;
}

// Scalar gradient-flow solution for the p = (0,0) single-arrow model with
// x(0) = 1: u' = -2u^2 for u = |x|^2, hence
//   |x(t)|^2 = 1/(1 + 2t),  energy f(t) = u^2/4 = 1/(4 (1+2t)^2).
inline double oracle_scalar_u(double t) { return 1.0 / (1.0 + 2.0 * t); }
inline double oracle_scalar_f(double t) {
    const double d = 1.0 + 2.0 * t;
    return 1.0 / (4.0 * d * d);
}

// Same model, weight function along the one-parameter subgroup fixing the
// second vertex (xi = diag(+1, -1)): the arrow entry has weight -2, so
//   w(t) = |x|^2 e^{-4t} at x(0) = 1  ->  w(t) = e^{-4t}.
inline double oracle_scalar_w(double t) { return std::exp(-4.0 * t); }

} // namespace testsupport
