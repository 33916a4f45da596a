// Finite-dimensional moment-map model on a weighted quiver.
//
// Vertices carry a weight r_k > 0, a multiplicity m_k >= 1 (the vertex space
// is C^{m_k}), and a rational level p_k; the angle theta_k = -2 pi p_k / r_k.
// A point b assigns to each arrow a : i -> j a complex m_j x m_i block.  The
// compact gauge group is prod U(m_k) acting by b |-> u_j b u_i^*, with Lie
// algebra pairing  <xi, eta> = sum_k r_k Re tr(xi_k eta_k^*)  and point
// pairing  <b, c> = sum_blocks tr(b c^*).
//
// The moment map (valued in skew-Hermitian tuples) is
//
//   mu(b)_k = -(i / (2 r_k)) H_k + i theta_k Id,
//   H_k     = sum_{arrows into k} b b^*  -  sum_{arrows out of k} b^* b,
//
// so a loop contributes the commutator [b, b^*].  The level constraint
// sum_k m_k p_k = 0 makes the weighted trace of mu vanish identically, which
// is the finite-dimensional face of the p_value normalization: for a
// subrepresentation supported on S the slope-like invariant is
// p_value(S) = sum_{k in S} m'_k p_k.
//
// energy(b) = (1/2) |mu(b)|^2 and the downward gradient flow is
// db/dt = -i (mu_j b - b mu_i); see flow.hpp.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "pcrit/error.hpp"
#include "pcrit/rational.hpp"

namespace pcrit {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

struct QuiverVertex {
    int r = 1;      // positive integer weight
    int m = 1;      // multiplicity of the vertex space
    Rational p{0};  // rational level
    double theta = 0.0;
};

struct QuiverArrow {
    int src = 0;
    int dst = 0;
    int count = 1;
};

struct BlockId {
    int src = 0;
    int dst = 0;
    int idx = 0;  // which of the parallel arrows src -> dst
};

class QuiverModel {
public:
    static QuiverModel build(std::vector<QuiverVertex> vertices,
                             const std::vector<QuiverArrow>& arrows) {
        if (vertices.empty()) throw InputError("model needs at least one vertex");
        QuiverModel q;
        const int l = static_cast<int>(vertices.size());
        Rational level(0);
        for (auto& v : vertices) {
            if (v.r <= 0 || v.m <= 0)
                throw InputError("vertex weights and multiplicities must be positive");
            v.theta = -kTwoPi * to_double(v.p) / v.r;
            level += Rational(v.m) * v.p;
            q.total_rank_ += v.r * v.m;
        }
        if (level != 0)
            throw Error(ErrorCode::LevelImbalance,
                        "levels must satisfy sum_k m_k p_k = 0, got " + rational_to_string(level));
        q.verts_ = std::move(vertices);
        q.e_.assign(static_cast<std::size_t>(l), std::vector<int>(static_cast<std::size_t>(l), 0));
        for (const auto& a : arrows) {
            if (a.src < 0 || a.src >= l || a.dst < 0 || a.dst >= l)
                throw InputError("arrow endpoint out of range");
            if (a.count < 0) throw InputError("arrow count must be non-negative");
            q.e_[static_cast<std::size_t>(a.src)][static_cast<std::size_t>(a.dst)] += a.count;
        }
        for (int i = 0; i < l; ++i)
            for (int j = 0; j < l; ++j)
                for (int a = 0; a < q.e_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; ++a)
                    q.blocks_.push_back({i, j, a});
        return q;
    }

    int n_vertices() const { return static_cast<int>(verts_.size()); }
    const QuiverVertex& vertex(int k) const { return verts_.at(static_cast<std::size_t>(k)); }
    int arrow_count(int i, int j) const {
        return e_.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(j));
    }
    const std::vector<BlockId>& blocks() const { return blocks_; }
    int total_rank() const { return total_rank_; }

private:
    std::vector<QuiverVertex> verts_;
    std::vector<std::vector<int>> e_;
    std::vector<BlockId> blocks_;
    int total_rank_ = 0;
};

// A point of the representation space: one matrix per block, in blocks() order.
struct ModelPoint {
    std::vector<Mat> blocks;
};

// An element of the (complexified) gauge Lie algebra: one m_k x m_k matrix
// per vertex.  Skew-Hermitian for the compact group, Hermitian for the
// one-parameter subgroups of the complexification.
struct LieElement {
    std::vector<Mat> xi;
};

inline ModelPoint zero_point(const QuiverModel& q) {
    ModelPoint b;
    b.blocks.reserve(q.blocks().size());
    for (const auto& blk : q.blocks())
        b.blocks.push_back(Mat::Zero(q.vertex(blk.dst).m, q.vertex(blk.src).m));
    return b;
}

inline void check_point(const QuiverModel& q, const ModelPoint& b) {
    if (b.blocks.size() != q.blocks().size())
        throw Error(ErrorCode::ShapeMismatch,
                    "expected " + std::to_string(q.blocks().size()) + " blocks, got " +
                    std::to_string(b.blocks.size()));
    for (std::size_t t = 0; t < b.blocks.size(); ++t) {
        const auto& blk = q.blocks()[t];
        if (b.blocks[t].rows() != q.vertex(blk.dst).m || b.blocks[t].cols() != q.vertex(blk.src).m)
            throw Error(ErrorCode::ShapeMismatch,
                        "block " + std::to_string(t) + " must be " +
                        std::to_string(q.vertex(blk.dst).m) + "x" +
                        std::to_string(q.vertex(blk.src).m));
    }
}

inline void check_lie(const QuiverModel& q, const LieElement& xi) {
    if (xi.xi.size() != static_cast<std::size_t>(q.n_vertices()))
        throw Error(ErrorCode::ShapeMismatch, "one Lie-algebra matrix per vertex required");
    for (int k = 0; k < q.n_vertices(); ++k) {
        const auto& m = xi.xi[static_cast<std::size_t>(k)];
        if (m.rows() != q.vertex(k).m || m.cols() != q.vertex(k).m)
            throw Error(ErrorCode::ShapeMismatch,
                        "vertex " + std::to_string(k) + " matrix must be " +
                        std::to_string(q.vertex(k).m) + "x" + std::to_string(q.vertex(k).m));
    }
}

// (xi . b)_{a : i -> j} = xi_j b - b xi_i.
inline ModelPoint infinitesimal_action(const QuiverModel& q, const LieElement& xi,
                                       const ModelPoint& b) {
    check_lie(q, xi);
    check_point(q, b);
    ModelPoint out;
    out.blocks.reserve(b.blocks.size());
    for (std::size_t t = 0; t < b.blocks.size(); ++t) {
        const auto& blk = q.blocks()[t];
        out.blocks.push_back(xi.xi[static_cast<std::size_t>(blk.dst)] * b.blocks[t] -
                             b.blocks[t] * xi.xi[static_cast<std::size_t>(blk.src)]);
    }
    return out;
}

// (g . b)_{a : i -> j} = g_j b g_i^{-1}; the caller supplies the per-vertex
// inverses to keep the hot paths allocation-predictable.
inline ModelPoint apply_group(const QuiverModel& q, const std::vector<Mat>& g,
                              const std::vector<Mat>& g_inv, const ModelPoint& b) {
    check_point(q, b);
    ModelPoint out;
    out.blocks.reserve(b.blocks.size());
    for (std::size_t t = 0; t < b.blocks.size(); ++t) {
        const auto& blk = q.blocks()[t];
        out.blocks.push_back(g[static_cast<std::size_t>(blk.dst)] * b.blocks[t] *
                             g_inv[static_cast<std::size_t>(blk.src)]);
    }
    return out;
}

inline ModelPoint apply_unitary(const QuiverModel& q, const std::vector<Mat>& u,
                                const ModelPoint& b) {
    std::vector<Mat> u_inv;
    u_inv.reserve(u.size());
    for (const auto& m : u) u_inv.push_back(m.adjoint());
    return apply_group(q, u, u_inv, b);
}

inline LieElement moment_map(const QuiverModel& q, const ModelPoint& b) {
    check_point(q, b);
    const Cplx iu(0.0, 1.0);
    LieElement mu;
    mu.xi.reserve(static_cast<std::size_t>(q.n_vertices()));
    std::vector<Mat> h;
    h.reserve(static_cast<std::size_t>(q.n_vertices()));
    for (int k = 0; k < q.n_vertices(); ++k)
        h.push_back(Mat::Zero(q.vertex(k).m, q.vertex(k).m));
    for (std::size_t t = 0; t < b.blocks.size(); ++t) {
        const auto& blk = q.blocks()[t];
        h[static_cast<std::size_t>(blk.dst)] += b.blocks[t] * b.blocks[t].adjoint();
        h[static_cast<std::size_t>(blk.src)] -= b.blocks[t].adjoint() * b.blocks[t];
    }
    for (int k = 0; k < q.n_vertices(); ++k) {
        const auto& v = q.vertex(k);
        mu.xi.push_back((-iu / (2.0 * v.r)) * h[static_cast<std::size_t>(k)] +
                        iu * v.theta * Mat::Identity(v.m, v.m));
    }
    return mu;
}

// ---------------------------------------------------------------------------
// Pairings and norms.

inline double lie_ip(const QuiverModel& q, const LieElement& xi, const LieElement& eta) {
    double s = 0.0;
    for (int k = 0; k < q.n_vertices(); ++k)
        s += q.vertex(k).r *
             (xi.xi[static_cast<std::size_t>(k)].cwiseProduct(
                  eta.xi[static_cast<std::size_t>(k)].conjugate()))
                 .sum()
                 .real();
    return s;
}

inline double lie_norm(const QuiverModel& q, const LieElement& xi) {
    return std::sqrt(std::max(0.0, lie_ip(q, xi, xi)));
}

inline Cplx point_ip(const ModelPoint& b, const ModelPoint& c) {
    Cplx s(0.0, 0.0);
    for (std::size_t t = 0; t < b.blocks.size(); ++t)
        s += (b.blocks[t].cwiseProduct(c.blocks[t].conjugate())).sum();
    return s;
}

inline double point_norm(const ModelPoint& b) {
    double s = 0.0;
    for (const auto& m : b.blocks) s += m.squaredNorm();
    return std::sqrt(s);
}

inline double energy(const QuiverModel& q, const ModelPoint& b) {
    const LieElement mu = moment_map(q, b);
    return 0.5 * lie_ip(q, mu, mu);
}

// Downward gradient of the energy at b is i (mu . b); the flow velocity is
// its negative, -i (mu_j b - b mu_i).
inline ModelPoint flow_velocity(const QuiverModel& q, const ModelPoint& b) {
    const LieElement mu = moment_map(q, b);
    ModelPoint v = infinitesimal_action(q, mu, b);
    const Cplx miu(0.0, -1.0);
    for (auto& m : v.blocks) m *= miu;
    return v;
}

inline double grad_norm(const QuiverModel& q, const ModelPoint& b) {
    return point_norm(flow_velocity(q, b));
}

inline Cplx weighted_trace(const QuiverModel& q, const LieElement& xi) {
    Cplx s(0.0, 0.0);
    for (int k = 0; k < q.n_vertices(); ++k)
        s += static_cast<double>(q.vertex(k).r) * xi.xi[static_cast<std::size_t>(k)].trace();
    return s;
}

} // namespace pcrit
