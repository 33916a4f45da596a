// Gradient flow of the moment-map energy and classification of its limits.
//
// The flow  db/dt = -i (mu_j b - b mu_i)  is integrated with classical RK4
// under an energy-acceptance rule: a step is kept only if the energy does not
// increase, otherwise the step size is halved.  (When the energy change is
// within rounding noise of zero -- unavoidable near limits with nonzero
// critical energy -- a non-increasing gradient norm accepts the step instead;
// see detail::energy_slack.)  Accepted steps let dt grow
// geometrically up to dt_max.  Because the vector field is cubic, directions
// that decay only algebraically (|b| ~ t^{-1/2}, the hallmark of a strictly
// semistable piece) admit step sizes growing like t; the acceptance rule
// discovers that automatically, so reaching t ~ 1e6 costs only a few hundred
// steps.  That release fails when other directions have already settled at
// nonzero values -- their curvature pins the stable step size -- so the flow
// periodically snaps components that provably belong to the dying set to
// exact zero instead of integrating their crawl; see
// detail::snap_dying_directions.  A settled stiff mode can also park the
// accepted step exactly on the RK4 stability edge, where its amplification
// factor is one and the gradient stops decaying altogether; a periodic probe
// at a quarter step detects and escapes that dance (see the census block in
// flow).  The same scaling argument calibrates the limit classification:
// along an algebraic tail  grad ~ |b_dying|^3  and  |mu| ~ |b_dying|^2,  so a
// residual moment map is treated as zero when |mu| <= max(tol, 4 grad^{2/3}),
// and a block counts as supported when its norm exceeds
// max(support_floor, 4 grad^{1/3}).  Genuinely nonzero limits of mu sit at
// the scale of the level gaps (order 2 pi / denominator), far above both cuts.
//
// classify_limit splits a critical point:
//   - mu == 0 (under the scaled test): the point is a minimum; the support
//     graph of the limit decomposes into connected components, reported as a
//     graded decomposition by vertex sets.
//   - mu != 0: the Hermitian matrices -i mu_k are simultaneously compatible
//     with a filtration; clustering all eigenvalues by gaps larger than the
//     tolerance yields the canonical destabilizing filtration, with slopes
//     slope = -lambda / (2 pi) strictly decreasing and per-vertex dimensions
//     summing to m_k.
//
// gauge_path integrates g' = g (i mu(b(t))), g(0) = Id alongside the flow;
// then g(t)^{-1} b(0) reproduces b(t) exactly, and the sampled residual
// max_t | g^{-1} b0 - b(t) | is reported as a consistency certificate.  Unlike
// the bare flow, whose only obligation is to land on the limit (an attractor,
// so step error along the way is forgiven), the transport has to stay accurate
// over the whole path: i mu is Hermitian, so g stretches along the complexified
// orbit, and a step taken near the RK4 stability edge deposits an O(1) fraction
// of the currently dying components into the mismatch between g^{-1} b0 g and
// b.  The energy rule alone happily rides that edge.  gauge_path therefore
// (a) caps dt at gauge_phase_cap / |mu|, bounding the rotation angle resolved
// per step, and (b) recomputes the certificate defect at every candidate step
// -- the matrices are small, so this is cheap -- and rejects steps that grow
// it by more than gauge_defect_frac of the step's own motion.  Accumulated
// defect then stays below frac times the total path length.  (Flows toward
// nonzero-energy limits never stop rotating; there the controls make very
// long horizons expensive, so choose t_max accordingly.)

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "pcrit/error.hpp"
#include "pcrit/quiver.hpp"

namespace pcrit {

struct FlowOpts {
    double dt0 = 1e-2;
    double dt_max = 5e-2;
    double dt_growth = 1.25;
    double t_max = 1e4;
    double grad_tol = 1e-9;
    double eig_cluster_tol = 1e-6;
    double support_floor = 1e-2;   // absolute floor for "this block survived"
    double prune_tol = 1e-30;      // snap blocks this far below the point scale
                                   // to exact zero (0 disables pruning)
    double gauge_phase_cap = 0.02; // gauge_path only: largest rotation angle
                                   // |mu| dt integrated per step (0 disables)
    double gauge_defect_frac = 1e-8; // gauge_path only: transport defect a step
                                     // may add, as a fraction of the step's own
                                     // motion (0 disables)
    int max_rejects = 80;          // consecutive rejections before declaring a stall
    bool record_trajectory = true;
};

struct TrajectorySample {
    double t = 0.0;
    double f = 0.0;
    double grad_norm = 0.0;
};

struct HNCluster {
    double lambda = 0.0;                 // eigenvalue of -i mu at the limit
    double slope = 0.0;                  // -lambda / (2 pi)
    std::vector<int> dims;               // dimensions per vertex, sums to the cluster size
};

struct LimitClassification {
    bool critical = false;
    bool mu_zero = false;
    double mu_norm = 0.0;
    double grad = 0.0;
    // mu == 0: connected components of the support graph (sorted vertex lists).
    std::vector<std::vector<int>> graded;
    // mu != 0: destabilizing filtration, slopes strictly decreasing.
    std::vector<HNCluster> filtration;
    std::string note;
};

struct FlowResult {
    ModelPoint limit;
    double t_final = 0.0;
    double final_energy = 0.0;
    double final_grad_norm = 0.0;
    std::size_t steps = 0;
    bool converged = false;   // grad_tol reached (false: t_max hit or stall)
    std::string stop_reason;
    std::vector<TrajectorySample> trajectory;
    LimitClassification classification;
};

namespace detail {

inline ModelPoint axpy(const ModelPoint& b, double s, const ModelPoint& v) {
    ModelPoint out = b;
    for (std::size_t t = 0; t < out.blocks.size(); ++t) out.blocks[t] += s * v.blocks[t];
    return out;
}

inline ModelPoint rk4_step(const QuiverModel& q, const ModelPoint& b, double dt) {
    const ModelPoint k1 = flow_velocity(q, b);
    const ModelPoint k2 = flow_velocity(q, axpy(b, dt / 2.0, k1));
    const ModelPoint k3 = flow_velocity(q, axpy(b, dt / 2.0, k2));
    const ModelPoint k4 = flow_velocity(q, axpy(b, dt, k3));
    ModelPoint out = b;
    for (std::size_t t = 0; t < out.blocks.size(); ++t)
        out.blocks[t] += (dt / 6.0) * (k1.blocks[t] + 2.0 * k2.blocks[t] +
                                       2.0 * k3.blocks[t] + k4.blocks[t]);
    return out;
}

} // namespace detail

// Scaled zero tests; see the header comment for the t^{-1/2} calibration.
inline double mu_zero_cut(double tol, double grad) {
    return std::max(tol, 4.0 * std::cbrt(grad * grad));
}
inline double support_cut(double floor_, double grad) {
    return std::max(floor_, 4.0 * std::cbrt(grad));
}

namespace detail {

// The energy can only witness a decrease larger than its own rounding noise.
// Near a limit with nonzero critical energy the true decrease dt * grad^2
// falls below ulp(f) long before grad reaches the stopping tolerance, and a
// plain f_new <= f_cur test degenerates into a coin flip that pins the step
// size at noise scale.  Steps whose energy change is within rounding of zero
// are therefore judged by the gradient norm instead, whose absolute
// resolution near such limits is finer by many orders of magnitude.
inline double energy_slack(double f) {
    return 64.0 * std::numeric_limits<double>::epsilon() * std::max(f, 1.0);
}

// A block whose norm sits this far below the ambient scale carries no
// double-precision information about the true trajectory.  Snapping it to
// exact zero makes its velocity identically zero (the velocity of each block
// is linear in that block), so the step size is no longer throttled by the
// stability limit of modes that are already dead.
inline void prune_dead_blocks(ModelPoint& b, double tol) {
    if (tol <= 0.0) return;
    double scale = 1.0;
    for (const auto& blk : b.blocks) scale = std::max(scale, blk.norm());
    const double cut = tol * scale;
    for (auto& blk : b.blocks) {
        const double n = blk.norm();
        if (n != 0.0 && n <= cut) blk.setZero();
    }
}

// Near a critical point the dying directions are exactly the block components
// joining distinct eigenvalue clusters of -i mu: the velocity of such a
// component is -i (lambda_dst - lambda_src) times itself plus small coupling,
// so anything straddling a genuine gap decays, while every component of the
// true limit couples equal eigenvalues.  Those cross-cluster components decay
// only algebraically (|b| ~ t^{-1/2}) whenever the gap itself is built from
// their squares, yet the already-settled components pin the stable RK4 step
// at O(1/|mu|), so integrating a tail away costs ~ t / dt steps -- millions
// for deep targets.  Once the clusters are separated by far more than their
// internal spread the assignment can no longer change (eigenvalues drift by
// at most the remaining tail mass, a fraction of the spread), so the limit is
// reached faster by zeroing the cross-cluster components outright: the
// surviving subsystem is exponentially stable around an equilibrium the tail
// shifts only by O(|tail|^2), hence the flow relaxes to the same limit it was
// crawling toward.  Zeroing also dissipates the tail's own energy content,
// (gap / 2) |tail|^2 + O(|tail|^4), so the step is energy-decreasing; the
// slack guard below rejects it in the rare case rounding disagrees.
//
// Every cross-cluster component must sit inside the criticality bound
// (grad + spread |b|) / gap -- a larger one means the clustering is not yet
// trustworthy and the snap is refused.  The projector onto a cluster is
// basis-independent, so the operation commutes with unitary changes of frame
// even through eigenvalue degeneracies.
inline bool snap_dying_directions(const QuiverModel& q, ModelPoint& b, double& f_cur,
                                  double& g_cur, double eig_cluster_tol) {
    const int l = q.n_vertices();
    const LieElement mu = moment_map(q, b);
    if (lie_norm(q, mu) <= 2.0 * mu_zero_cut(eig_cluster_tol, g_cur)) return false;

    struct Ev {
        double lambda;
        int vertex;
        int idx;
    };
    std::vector<Ev> evs;
    std::vector<Mat> U(static_cast<std::size_t>(l));
    for (int k = 0; k < l; ++k) {
        Mat herm = Cplx(0.0, -1.0) * mu.xi[static_cast<std::size_t>(k)];
        herm = 0.5 * (herm + herm.adjoint().eval());
        Eigen::SelfAdjointEigenSolver<Mat> es(herm);
        if (es.info() != Eigen::Success) return false;
        U[static_cast<std::size_t>(k)] = es.eigenvectors();
        for (int a = 0; a < es.eigenvalues().size(); ++a)
            evs.push_back({es.eigenvalues()(a), k, a});
    }
    std::sort(evs.begin(), evs.end(), [](const Ev& x, const Ev& y) { return x.lambda < y.lambda; });

    // Cluster by the same gap rule as classify_limit; bail out unless the
    // clusters are unambiguous: tight (spread well below the smallest gap)
    // and already governing the dynamics (gradient small on the gap scale).
    std::vector<std::size_t> starts;
    for (std::size_t i = 0; i < evs.size(); ++i)
        if (i == 0 || evs[i].lambda - evs[i - 1].lambda > eig_cluster_tol) starts.push_back(i);
    if (starts.size() < 2) return false;
    double spread = 0.0;
    double gap_min = std::numeric_limits<double>::infinity();
    std::vector<std::vector<int>> cid(static_cast<std::size_t>(l));
    for (int k = 0; k < l; ++k)
        cid[static_cast<std::size_t>(k)].assign(static_cast<std::size_t>(q.vertex(k).m), -1);
    for (std::size_t c = 0; c < starts.size(); ++c) {
        const std::size_t lo = starts[c];
        const std::size_t hi = (c + 1 < starts.size()) ? starts[c + 1] : evs.size();
        spread = std::max(spread, evs[hi - 1].lambda - evs[lo].lambda);
        if (c + 1 < starts.size())
            gap_min = std::min(gap_min, evs[hi].lambda - evs[hi - 1].lambda);
        for (std::size_t i = lo; i < hi; ++i)
            cid[static_cast<std::size_t>(evs[i].vertex)][static_cast<std::size_t>(evs[i].idx)] =
                static_cast<int>(c);
    }
    if (16.0 * spread > gap_min || g_cur > 0.01 * gap_min) return false;

    double maxnorm = 0.0;
    for (const auto& blk : b.blocks) maxnorm = std::max(maxnorm, blk.norm());
    const double cap = 4.0 * (g_cur + spread * maxnorm) / gap_min;

    ModelPoint cand = b;
    bool changed = false;
    for (std::size_t t = 0; t < cand.blocks.size(); ++t) {
        const auto& blk = q.blocks()[t];
        const Mat& Ui = U[static_cast<std::size_t>(blk.src)];
        const Mat& Uj = U[static_cast<std::size_t>(blk.dst)];
        Mat bt = Uj.adjoint() * cand.blocks[t] * Ui;
        bool mod = false;
        for (int p = 0; p < bt.rows(); ++p)
            for (int c = 0; c < bt.cols(); ++c) {
                if (cid[static_cast<std::size_t>(blk.dst)][static_cast<std::size_t>(p)] ==
                    cid[static_cast<std::size_t>(blk.src)][static_cast<std::size_t>(c)])
                    continue;
                const double a = std::abs(bt(p, c));
                if (a > cap) return false;  // clustering not yet trustworthy
                if (a != 0.0) {
                    bt(p, c) = 0.0;
                    mod = true;
                }
            }
        if (mod) {
            cand.blocks[t] = Uj * bt * Ui.adjoint();
            changed = true;
        }
    }
    if (!changed) return false;
    const double f_new = energy(q, cand);
    if (f_new > f_cur) return false;
    b = std::move(cand);
    f_cur = f_new;
    g_cur = grad_norm(q, b);
    return true;
}

// mu -> 0 counterpart of snap_dying_directions.  Near the zero level the
// algebraic tails are whole blocks whose endpoint sigma values (diagonal of
// -i mu) keep a persistent gap of order 1/t -- the block's own logarithmic
// shrink rate -- while a surviving block tracks an adiabatic equilibrium
// whose sigmas agree exactly (velocity zero on a nonzero block forces it),
// with tracking error only O(1/t^2).  The instantaneous rate
// sigma_dst - sigma_src therefore separates dying from surviving blocks by a
// factor growing like t.  Zeroing a dying tail alone is not always downhill:
// the tail's h-contribution lands on the surviving pieces' endpoint sigmas,
// and the resulting |b|^2-sized residual can cost more energy than the tail
// carried, depending on the vertex weights.  The follow-up rescaling of the
// surviving blocks (solved below) absorbs that residual inside the
// complexified orbit, so the committed jump lands essentially on the limit
// the tail was crawling toward.  This is only worth doing -- and only safe
// to shortcut -- when settled survivors pin the step size; a fully dying
// model releases dt ~ t on its own and is left untouched, which also keeps
// closed-form trajectory checks exact.  Scalar blocks only: a larger block
// can mix dying and surviving components, and its norm rate would blur them.
inline bool snap_dying_blocks(const QuiverModel& q, ModelPoint& b, double& f_cur,
                              double& g_cur, double t, double eig_cluster_tol) {
    if (t <= 0.0) return false;
    const LieElement mu = moment_map(q, b);
    if (lie_norm(q, mu) > 2.0 * mu_zero_cut(eig_cluster_tol, g_cur)) return false;
    const double tail_cap = 8.0 * std::cbrt(g_cur);    // tails sit at the grad^{1/3} scale
    const double live_floor = 16.0 * std::cbrt(g_cur); // settled bulk sits far above it
    const double rate_cut = -0.125 / t;                // tails shrink at ~ -1/(2t)
    std::vector<std::size_t> dying;
    bool survivor = false;
    for (std::size_t a = 0; a < b.blocks.size(); ++a) {
        const auto& blk = q.blocks()[a];
        const double n = b.blocks[a].norm();
        if (n == 0.0) continue;
        if (b.blocks[a].rows() != 1 || b.blocks[a].cols() != 1) {
            if (n >= live_floor) survivor = true;
            continue;
        }
        const double sd = (Cplx(0.0, -1.0) * mu.xi[static_cast<std::size_t>(blk.dst)])(0, 0).real();
        const double ss = (Cplx(0.0, -1.0) * mu.xi[static_cast<std::size_t>(blk.src)])(0, 0).real();
        const double rate = sd - ss;
        if (rate <= rate_cut && n <= tail_cap) dying.push_back(a);
        else if (n >= live_floor) survivor = true;
    }
    if (!survivor || dying.empty()) return false;
    ModelPoint cand = b;
    for (const std::size_t a : dying) cand.blocks[a].setZero();

    // Zeroing hands each tail's h-contribution to its endpoint vertices,
    // leaving sigma residuals of order |tail|^2 on the surviving pieces.
    // Depending on the weights, their energy can exceed what the zeroing
    // released, so the bare jump is not always downhill.  On scalar models
    // the residual is removed inside the complexified orbit by rescaling the
    // surviving blocks: one linearized balance solve leaves a residual
    // quadratically smaller, after which the energy guard passes honestly.
    std::vector<std::size_t> live;
    bool scalar_only = true;
    for (std::size_t a = 0; a < cand.blocks.size(); ++a) {
        if (cand.blocks[a].norm() == 0.0) continue;
        if (cand.blocks[a].rows() != 1 || cand.blocks[a].cols() != 1) {
            scalar_only = false;
            break;
        }
        live.push_back(a);
    }
    const int l = q.n_vertices();
    if (scalar_only && !live.empty()) {
        const LieElement mu2 = moment_map(q, cand);
        Eigen::VectorXd rhs(l);
        for (int k = 0; k < l; ++k)
            rhs(k) = -(Cplx(0.0, -1.0) * mu2.xi[static_cast<std::size_t>(k)])(0, 0).real();
        Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(l, static_cast<Eigen::Index>(live.size()));
        for (std::size_t idx = 0; idx < live.size(); ++idx) {
            const auto& blk = q.blocks()[live[idx]];
            const double x2 = cand.blocks[live[idx]].squaredNorm();
            jac(blk.dst, static_cast<Eigen::Index>(idx)) -= x2 / q.vertex(blk.dst).r;
            jac(blk.src, static_cast<Eigen::Index>(idx)) += x2 / q.vertex(blk.src).r;
        }
        const Eigen::VectorXd eps =
            Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(jac).solve(rhs);
        if (eps.size() == static_cast<Eigen::Index>(live.size()) &&
            eps.cwiseAbs().maxCoeff() <= 0.1)
            for (std::size_t idx = 0; idx < live.size(); ++idx)
                cand.blocks[live[idx]] *= (1.0 + eps(static_cast<Eigen::Index>(idx)));
    }

    const double f_new = energy(q, cand);
    if (f_new > f_cur) return false;
    b = std::move(cand);
    f_cur = f_new;
    g_cur = grad_norm(q, b);
    return true;
}

} // namespace detail

inline LimitClassification classify_limit(const QuiverModel& q, const ModelPoint& b_inf,
                                          double eig_cluster_tol, double support_floor = 1e-2) {
    LimitClassification out;
    out.grad = grad_norm(q, b_inf);
    if (out.grad > eig_cluster_tol)
        throw Error(ErrorCode::NotCritical,
                    "gradient norm " + std::to_string(out.grad) +
                    " exceeds the tolerance; not a critical point");
    out.critical = true;

    const LieElement mu = moment_map(q, b_inf);
    out.mu_norm = lie_norm(q, mu);

    if (out.mu_norm <= mu_zero_cut(eig_cluster_tol, out.grad)) {
        out.mu_zero = true;
        // Connected components of the undirected support graph.
        const int l = q.n_vertices();
        std::vector<int> comp(static_cast<std::size_t>(l), -1);
        const double cut = support_cut(support_floor, out.grad);
        std::vector<std::vector<int>> adj(static_cast<std::size_t>(l));
        for (std::size_t t = 0; t < b_inf.blocks.size(); ++t) {
            const auto& blk = q.blocks()[t];
            if (b_inf.blocks[t].norm() > cut) {
                adj[static_cast<std::size_t>(blk.src)].push_back(blk.dst);
                adj[static_cast<std::size_t>(blk.dst)].push_back(blk.src);
            }
        }
        int nc = 0;
        for (int s = 0; s < l; ++s) {
            if (comp[static_cast<std::size_t>(s)] >= 0) continue;
            std::vector<int> stack = {s};
            comp[static_cast<std::size_t>(s)] = nc;
            std::vector<int> members;
            while (!stack.empty()) {
                const int v = stack.back();
                stack.pop_back();
                members.push_back(v);
                for (int w : adj[static_cast<std::size_t>(v)])
                    if (comp[static_cast<std::size_t>(w)] < 0) {
                        comp[static_cast<std::size_t>(w)] = nc;
                        stack.push_back(w);
                    }
            }
            std::sort(members.begin(), members.end());
            out.graded.push_back(std::move(members));
            ++nc;
        }
        out.note = "moment map vanishes; graded pieces listed by vertex support";
        return out;
    }

    // Nonvanishing mu: eigen-decompose -i mu_k per vertex, pool all
    // eigenvalues, and cluster by gaps above the tolerance.
    struct Ev { double lambda; int vertex; };
    std::vector<Ev> evs;
    for (int k = 0; k < q.n_vertices(); ++k) {
        Mat herm = Cplx(0.0, -1.0) * mu.xi[static_cast<std::size_t>(k)];
        herm = 0.5 * (herm + herm.adjoint().eval());  // symmetrize away float fuzz
        Eigen::SelfAdjointEigenSolver<Mat> es(herm);
        if (es.info() != Eigen::Success)
            throw Error(ErrorCode::InternalError, "eigen-decomposition failed");
        for (int a = 0; a < es.eigenvalues().size(); ++a)
            evs.push_back({es.eigenvalues()(a), k});
    }
    std::sort(evs.begin(), evs.end(), [](const Ev& x, const Ev& y) { return x.lambda < y.lambda; });
    std::vector<std::vector<Ev>> clusters;
    for (const auto& e : evs) {
        if (clusters.empty() || e.lambda - clusters.back().back().lambda > eig_cluster_tol)
            clusters.emplace_back();
        clusters.back().push_back(e);
    }
    for (const auto& cl : clusters) {
        HNCluster hn;
        double s = 0.0;
        hn.dims.assign(static_cast<std::size_t>(q.n_vertices()), 0);
        for (const auto& e : cl) {
            s += e.lambda;
            hn.dims[static_cast<std::size_t>(e.vertex)] += 1;
        }
        hn.lambda = s / static_cast<double>(cl.size());
        hn.slope = -hn.lambda / kTwoPi;
        out.filtration.push_back(std::move(hn));
    }
    out.note = "moment map does not vanish; destabilizing filtration listed by "
               "ascending eigenvalue (descending slope)";
    return out;
}

inline FlowResult flow(const QuiverModel& q, const ModelPoint& b0, const FlowOpts& opts = {}) {
    check_point(q, b0);
    FlowResult res;
    res.limit = b0;
    double t = 0.0;
    double dt = opts.dt0;
    double f_cur = energy(q, res.limit);
    double g_cur = grad_norm(q, res.limit);
    if (opts.record_trajectory) res.trajectory.push_back({t, f_cur, g_cur});

    int rejects = 0;
    double g_census = g_cur;  // gradient at the previous census
    int probe_hold = 0;       // censuses to skip probing after a failed probe
    while (g_cur > opts.grad_tol && t < opts.t_max) {
        dt = std::min(dt, opts.t_max - t);
        ModelPoint cand = detail::rk4_step(q, res.limit, dt);
        const double f_new = energy(q, cand);
        double g_new = -1.0;
        bool accept = (f_new <= f_cur);
        if (!accept && f_new <= f_cur + detail::energy_slack(f_cur)) {
            g_new = grad_norm(q, cand);
            accept = (g_new <= g_cur);
        }
        if (accept) {
            detail::prune_dead_blocks(cand, opts.prune_tol);
            res.limit = std::move(cand);
            t += dt;
            f_cur = f_new;
            g_cur = (g_new >= 0.0) ? g_new : grad_norm(q, res.limit);
            ++res.steps;
            rejects = 0;
            if (opts.record_trajectory) res.trajectory.push_back({t, f_cur, g_cur});
            dt = std::min(dt * opts.dt_growth, opts.dt_max);
            if ((res.steps & 63u) == 0) {
                if (detail::snap_dying_directions(q, res.limit, f_cur, g_cur,
                                                  opts.eig_cluster_tol) ||
                    detail::snap_dying_blocks(q, res.limit, f_cur, g_cur, t,
                                              opts.eig_cluster_tol)) {
                    // The snap is an instantaneous in-orbit jump: fold it into
                    // the sample just recorded at this t instead of appending
                    // a duplicate instant.
                    if (opts.record_trajectory) res.trajectory.back() = {t, f_cur, g_cur};
                } else if (probe_hold > 0) {
                    --probe_hold;
                } else if (g_cur > opts.grad_tol && g_cur > 0.7 * g_census) {
                    // The gradient has stalled over a whole census window.
                    // Either the trajectory rides a genuine algebraic tail
                    // (slow physics; smaller steps change nothing), or the
                    // acceptance rule has parked dt on the RK4 stability
                    // edge, where the stiffest settled mode is amplified by
                    // a factor of one and simply stops decaying -- an
                    // integrator artifact.  A short burst at a quarter step
                    // tells them apart: the edge mode collapses, a tail does
                    // not care.  Commit the burst only on a decisive drop.
                    const ModelPoint save_b = res.limit;
                    const double save_f = f_cur, save_g = g_cur, save_t = t;
                    const double dtp = 0.25 * dt;
                    int taken = 0;
                    for (; taken < 8 && t + dtp <= opts.t_max; ++taken) {
                        res.limit = detail::rk4_step(q, res.limit, dtp);
                        t += dtp;
                    }
                    f_cur = energy(q, res.limit);
                    g_cur = grad_norm(q, res.limit);
                    if (g_cur <= 0.3 * save_g &&
                        f_cur <= save_f + detail::energy_slack(save_f)) {
                        detail::prune_dead_blocks(res.limit, opts.prune_tol);
                        res.steps += static_cast<std::size_t>(taken);
                        dt = dtp;
                        if (opts.record_trajectory)
                            res.trajectory.push_back({t, f_cur, g_cur});
                    } else {
                        res.limit = save_b;
                        f_cur = save_f;
                        g_cur = save_g;
                        t = save_t;
                        probe_hold = 4;
                    }
                }
                g_census = g_cur;
            }
        } else {
            dt *= 0.5;
            if (++rejects > opts.max_rejects || dt < 1e-14) {
                res.stop_reason = "stall: step size collapsed without energy decrease";
                break;
            }
        }
    }

    res.t_final = t;
    res.final_energy = f_cur;
    res.final_grad_norm = g_cur;
    res.converged = (g_cur <= opts.grad_tol);
    if (res.converged) res.stop_reason = "gradient tolerance reached";
    else if (res.stop_reason.empty()) res.stop_reason = "t_max reached";

    if (g_cur <= opts.eig_cluster_tol)
        res.classification = classify_limit(q, res.limit, opts.eig_cluster_tol, opts.support_floor);
    else
        res.classification.note = "endpoint is not critical; no classification";
    return res;
}

// ---------------------------------------------------------------------------
// Gauge path: the complexified-group trajectory realizing the flow.

struct GaugePath {
    std::vector<Mat> g;        // g(t_final), one matrix per vertex
    double residual = 0.0;     // max sampled |g^{-1} b0 - b(t)|
    double t_final = 0.0;
    bool converged = false;
};

inline GaugePath gauge_path(const QuiverModel& q, const ModelPoint& b0, const FlowOpts& opts = {}) {
    check_point(q, b0);
    ModelPoint b = b0;
    std::vector<Mat> g;
    for (int k = 0; k < q.n_vertices(); ++k)
        g.push_back(Mat::Identity(q.vertex(k).m, q.vertex(k).m));

    const Cplx iu(0.0, 1.0);
    // Joint RK4 on (b, g): db = -i(mu b - b mu) dt, dg = g (i mu) dt.
    auto joint_velocity = [&](const ModelPoint& bb, const std::vector<Mat>& gg,
                              ModelPoint& vb, std::vector<Mat>& vg) {
        const LieElement mu = moment_map(q, bb);
        vb = infinitesimal_action(q, mu, bb);
        for (auto& m : vb.blocks) m *= Cplx(0.0, -1.0);
        vg.clear();
        vg.reserve(gg.size());
        for (int k = 0; k < q.n_vertices(); ++k)
            vg.push_back(gg[static_cast<std::size_t>(k)] * (iu * mu.xi[static_cast<std::size_t>(k)]));
    };

    GaugePath path;
    double t = 0.0;
    double dt = opts.dt0;
    double f_cur = energy(q, b);
    double g_cur = grad_norm(q, b);
    int rejects = 0;

    // Certificate defect max over blocks of | (g^{-1} . b0) - bb |.
    auto defect = [&](const std::vector<Mat>& gg, const ModelPoint& bb) {
        std::vector<Mat> g_inv;
        g_inv.reserve(gg.size());
        for (const auto& m : gg) g_inv.push_back(m.inverse());
        // (g^{-1} . b0)_{a:i->j} = g_j^{-1} b0 g_i; apply_group with the
        // roles of (g, g^{-1}) swapped does exactly that.
        const ModelPoint back = apply_group(q, g_inv, gg, b0);
        double r = 0.0;
        for (std::size_t tt = 0; tt < back.blocks.size(); ++tt)
            r = std::max(r, (back.blocks[tt] - bb.blocks[tt]).norm());
        return r;
    };
    double r_cur = 0.0;  // defect is exactly zero at t = 0 where g = Id

    while (g_cur > opts.grad_tol && t < opts.t_max) {
        dt = std::min(dt, opts.t_max - t);
        // |mu_k| <= sqrt(2 f) for every vertex (weights are >= 1), so this
        // bounds the rotation angle integrated into g over the step.
        double dt_eff = dt;
        if (opts.gauge_phase_cap > 0.0 && f_cur > 0.0)
            dt_eff = std::min(dt_eff, opts.gauge_phase_cap / std::sqrt(2.0 * f_cur));
        ModelPoint k1b, k2b, k3b, k4b;
        std::vector<Mat> k1g, k2g, k3g, k4g;
        joint_velocity(b, g, k1b, k1g);
        auto advance = [&](const ModelPoint& vb, const std::vector<Mat>& vg, double s,
                           ModelPoint& ob, std::vector<Mat>& og) {
            ob = detail::axpy(b, s, vb);
            og = g;
            for (std::size_t k = 0; k < og.size(); ++k) og[k] += s * vg[k];
        };
        ModelPoint b2, b3, b4;
        std::vector<Mat> g2, g3, g4;
        advance(k1b, k1g, dt_eff / 2.0, b2, g2);
        joint_velocity(b2, g2, k2b, k2g);
        advance(k2b, k2g, dt_eff / 2.0, b3, g3);
        joint_velocity(b3, g3, k3b, k3g);
        advance(k3b, k3g, dt_eff, b4, g4);
        joint_velocity(b4, g4, k4b, k4g);

        ModelPoint cand = b;
        std::vector<Mat> gcand = g;
        for (std::size_t tt = 0; tt < cand.blocks.size(); ++tt)
            cand.blocks[tt] += (dt_eff / 6.0) * (k1b.blocks[tt] + 2.0 * k2b.blocks[tt] +
                                                 2.0 * k3b.blocks[tt] + k4b.blocks[tt]);
        for (std::size_t k = 0; k < gcand.size(); ++k)
            gcand[k] += (dt_eff / 6.0) * (k1g[k] + 2.0 * k2g[k] + 2.0 * k3g[k] + k4g[k]);

        const double f_new = energy(q, cand);
        double g_new = -1.0;
        bool accept = (f_new <= f_cur);
        if (!accept && f_new <= f_cur + detail::energy_slack(f_cur)) {
            g_new = grad_norm(q, cand);
            accept = (g_new <= g_cur);
        }
        double r_new = r_cur;
        if (accept) {
            r_new = defect(gcand, cand);
            if (opts.gauge_defect_frac > 0.0) {
                double motion = 0.0;
                for (std::size_t tt = 0; tt < cand.blocks.size(); ++tt)
                    motion = std::max(motion, (cand.blocks[tt] - b.blocks[tt]).norm());
                for (std::size_t k = 0; k < gcand.size(); ++k)
                    motion = std::max(motion, (gcand[k] - g[k]).norm());
                // Rounding floor: forming g^{-1} b0 g passes through magnitudes
                // of order |g|^2 once the transport has stretched, so jumps at
                // that noise scale must not count as defect growth.
                double scale = 1.0;
                for (const auto& blk : b.blocks) scale = std::max(scale, blk.norm());
                for (const auto& m : g) scale = std::max(scale, m.squaredNorm());
                const double allowed = opts.gauge_defect_frac * motion +
                                       64.0 * std::numeric_limits<double>::epsilon() * scale;
                accept = (r_new <= r_cur + allowed);
            }
        }
        if (accept) {
            detail::prune_dead_blocks(cand, opts.prune_tol);
            b = std::move(cand);
            g = std::move(gcand);
            t += dt_eff;
            f_cur = f_new;
            g_cur = (g_new >= 0.0) ? g_new : grad_norm(q, b);
            r_cur = r_new;
            path.residual = std::max(path.residual, r_cur);
            rejects = 0;
            dt = std::min(dt * opts.dt_growth, opts.dt_max);
        } else {
            dt = 0.5 * dt_eff;
            if (++rejects > opts.max_rejects || dt < 1e-14) break;
        }
    }

    path.g = std::move(g);
    path.t_final = t;
    path.converged = (g_cur <= opts.grad_tol);
    return path;
}

} // namespace pcrit
