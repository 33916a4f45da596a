// Independent verdicts for multiplicity-one models, and orbit-closure tests.
//
// When every vertex has multiplicity one, subrepresentations of a point b are
// exactly the coordinate subspaces spanned by subsets S of vertices that are
// closed under the arrows supported at b (b_a != 0 and src in S forces dst in
// S): a one-dimensional vertex space is either inside the subrepresentation
// or meets it trivially.  Enumerating all proper nonzero closed subsets gives
// a brute-force stability verdict from the exact rational levels,
//     p_value(S) = sum_{k in S} p_k:
//   Unstable    some closed S has p_value > 0,
//   Semistable  all closed S have p_value <= 0,
//   Stable      strictly negative throughout,
//   Polystable  semistable and the complement of every binding S is closed
//               (so the binding subrepresentation splits off).
//
// flow_verdict maps a gradient-flow run onto the same trichotomy:
//   - residual |mu| above the scaled zero cut        -> Unstable,
//   - mu -> 0 and every initially supported block
//     still supported at the limit                    -> Polystable
//     (for multiplicity one, support preservation is exactly "the limit stays
//     in the complexified orbit": group factors act on blocks by nonzero
//     scalars g_j / g_i, so support can never be created or destroyed inside
//     the orbit, and a lost block certifies a genuine degeneration),
//   - mu -> 0 with some block lost                    -> Semistable.
// Whether a block survived is decided by magnitude where that is unambiguous;
// a block landing near the support floor is resolved by continuing the flow
// and watching whether the block contracts (a tail still dying) or holds
// steady (a genuine survivor); see flow_verdict below.
//
// orbit_closed combines both: the orbit is closed iff the flow finds a zero
// of mu without leaving the orbit.  On multiplicity-one models the subset
// oracle is authoritative; elsewhere the numerical support test decides.

#pragma once

#include <string>
#include <vector>

#include "pcrit/error.hpp"
#include "pcrit/flow.hpp"
#include "pcrit/quiver.hpp"
#include "pcrit/rational.hpp"
#include "pcrit/stability.hpp"

namespace pcrit {

struct SubsetWitness {
    std::vector<int> subset;   // vertex indices, ascending
    Rational p;                // sum of levels over the subset
    bool complement_closed = false;
};

struct OracleVerdict {
    VerdictLevel level = VerdictLevel::Stable;
    std::vector<SubsetWitness> witnesses;  // every closed S with p_value >= 0
};

inline OracleVerdict brute_force_verdict(const QuiverModel& q, const ModelPoint& b,
                                         double zero_tol = 1e-10) {
    check_point(q, b);
    const int l = q.n_vertices();
    if (l > 30) throw Error(ErrorCode::OutOfRange, "subset enumeration capped at 30 vertices");
    for (int k = 0; k < l; ++k)
        if (q.vertex(k).m != 1)
            throw Error(ErrorCode::UnsupportedMultiplicity,
                        "subset oracle requires multiplicity one at every vertex");

    // Supported arcs: src -> dst with some nonzero block.
    std::vector<std::pair<int, int>> arcs;
    for (std::size_t t = 0; t < b.blocks.size(); ++t) {
        const auto& blk = q.blocks()[t];
        if (b.blocks[t].norm() > zero_tol) arcs.emplace_back(blk.src, blk.dst);
    }
    auto closed = [&](unsigned mask) {
        for (const auto& [i, j] : arcs)
            if ((mask >> i & 1u) && !(mask >> j & 1u)) return false;
        return true;
    };

    OracleVerdict out;
    bool any_violation = false, any_tie = false, all_ties_split = true;
    const unsigned full = (1u << l) - 1u;  // l <= 30 checked above
    for (unsigned mask = 1; mask < full; ++mask) {
        if (!closed(mask)) continue;
        Rational p(0);
        for (int k = 0; k < l; ++k)
            if (mask >> k & 1u) p += q.vertex(k).p;
        if (p < 0) continue;
        SubsetWitness w;
        for (int k = 0; k < l; ++k)
            if (mask >> k & 1u) w.subset.push_back(k);
        w.p = p;
        w.complement_closed = closed(full & ~mask);
        if (p > 0) any_violation = true;
        else {
            any_tie = true;
            if (!w.complement_closed) all_ties_split = false;
        }
        out.witnesses.push_back(std::move(w));
    }
    if (any_violation) out.level = VerdictLevel::Unstable;
    else if (!any_tie) out.level = VerdictLevel::Stable;
    else if (all_ties_split) out.level = VerdictLevel::Polystable;
    else out.level = VerdictLevel::Semistable;
    return out;
}

// ---------------------------------------------------------------------------

struct FlowVerdict {
    VerdictLevel level = VerdictLevel::Semistable;  // never Stable: the flow
                                                    // cannot see strictness
    FlowResult run;
    std::vector<int> lost_blocks;  // supported at t=0, dead at the limit
};

inline FlowVerdict flow_verdict(const QuiverModel& q, const ModelPoint& b0,
                                const FlowOpts& opts = {}) {
    FlowVerdict out;
    out.run = flow(q, b0, opts);
    const auto& cls = out.run.classification;
    if (!cls.critical)
        throw Error(ErrorCode::NoConvergence,
                    "flow stopped before reaching a critical point (" + out.run.stop_reason + ")");
    if (!cls.mu_zero) {
        out.level = VerdictLevel::Unstable;
        return out;
    }
    // Initial support is exact data (same zero test as the subset oracle).
    // At the limit, magnitude alone cannot separate a small genuine survivor
    // from an algebraic tail that has not finished dying: both can sit near
    // the support floor (and a fat tail can sit above it).  Blocks in that
    // ambiguous band are therefore resolved dynamically: the flow is
    // continued past the stopping time, over a horizon long enough for the
    // slowest band tail (timescale ~ 1/|b|^2) to contract by a definite
    // factor, while a surviving block stays put -- its relative drift is
    // O(|tail|^2).  A contraction below the threshold marks the block dying;
    // t^{-1/2} over a doubled horizon gives 1/sqrt(2), and even a cascaded
    // t^{-1/4} tail falls well under 0.93.
    const double cut = support_cut(opts.support_floor, cls.grad);
    const double band_lo = 1e-3;  // below: dead by magnitude (always below cut)
    const double band_hi = 10.0 * cut;
    double maxn = 0.0;
    for (const auto& blk : out.run.limit.blocks) maxn = std::max(maxn, blk.norm());
    const double dead_floor = 1e-9 * std::max(1.0, maxn);

    double band_min = 0.0;  // smallest band norm; zero marks an empty band
    for (std::size_t t = 0; t < b0.blocks.size(); ++t) {
        if (b0.blocks[t].norm() <= 1e-10) continue;
        const double n = out.run.limit.blocks[t].norm();
        if (n > band_lo && n <= band_hi && (band_min == 0.0 || n < band_min)) band_min = n;
    }

    if (band_min == 0.0) {
        for (std::size_t t = 0; t < b0.blocks.size(); ++t) {
            const bool was = b0.blocks[t].norm() > 1e-10;
            const bool is = out.run.limit.blocks[t].norm() > cut;
            if (was && !is) out.lost_blocks.push_back(static_cast<int>(t));
        }
    } else {
        FlowOpts copts = opts;
        copts.t_max = std::max({out.run.t_final, 1.0, 0.25 / (band_min * band_min)});
        copts.grad_tol = 0.0;  // hold the full horizon even when converged
        copts.record_trajectory = false;
        const FlowResult cont = flow(q, out.run.limit, copts);
        for (std::size_t t = 0; t < b0.blocks.size(); ++t) {
            if (b0.blocks[t].norm() <= 1e-10) continue;
            const double n0 = out.run.limit.blocks[t].norm();
            const double n1 = cont.limit.blocks[t].norm();
            bool lost;
            if (n1 <= dead_floor) lost = true;          // finished dying
            else if (n0 > band_hi) lost = false;        // macroscopic survivor
            else if (n0 <= band_lo) lost = true;        // far below the floor
            else lost = (n1 <= 0.93 * n0);              // contraction verdict
            if (lost) out.lost_blocks.push_back(static_cast<int>(t));
        }
    }
    out.level = out.lost_blocks.empty() ? VerdictLevel::Polystable : VerdictLevel::Semistable;
    return out;
}

// The complexified orbit of b is closed iff the flow reaches mu = 0 without
// degenerating out of the orbit.
inline bool orbit_closed(const QuiverModel& q, const ModelPoint& b, const FlowOpts& opts = {}) {
    bool all_m1 = true;
    for (int k = 0; k < q.n_vertices(); ++k)
        if (q.vertex(k).m != 1) { all_m1 = false; break; }
    if (all_m1) {
        const OracleVerdict oracle = brute_force_verdict(q, b);
        return oracle.level == VerdictLevel::Polystable || oracle.level == VerdictLevel::Stable;
    }
    const FlowVerdict fv = flow_verdict(q, b, opts);
    return fv.level == VerdictLevel::Polystable;
}

} // namespace pcrit
