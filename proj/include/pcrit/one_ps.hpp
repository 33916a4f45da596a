// One-parameter subgroups: orbits, limits, and weight functions.
//
// A Hermitian tuple xi generates the 1-PS t |-> exp(t xi) of the complexified
// gauge group.  Orbits are computed spectrally: with xi_k = V_k L_k V_k^* the
// block a : i -> j transforms as
//     (e^{t xi} b)_a = V_j e^{t L_j} (V_j^* b_a V_i) e^{-t L_i} V_i^*,
// so the (beta, alpha) component of V_j^* b V_i carries weight
// lambda_{j,beta} - lambda_{i,alpha}.  The t -> infinity limit exists iff
// every positive-weight component vanishes (within tolerance); the limit is
// the zero-weight part conjugated back.
//
// The weight function  w(t) = < mu(e^{t xi} b), i xi >  is non-increasing for
// every Hermitian xi (w' = -|xi . b_t|^2) and converges to 2 pi R p_value(F)
// when xi is the subspace generator of a coordinate subrepresentation F:
//     xi_F = -rank(F^perp) Pi_F + rank(F) Pi_{F^perp},
// rank weighted by the vertex weights r_k, R the total rank.  That limit
// identity is the bridge between the flow picture and the p_value sign test.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "pcrit/error.hpp"
#include "pcrit/quiver.hpp"
#include "pcrit/rational.hpp"

namespace pcrit {

inline void check_hermitian(const QuiverModel& q, const LieElement& xi, double tol = 1e-10) {
    check_lie(q, xi);
    for (int k = 0; k < q.n_vertices(); ++k) {
        const auto& m = xi.xi[static_cast<std::size_t>(k)];
        if ((m - m.adjoint()).norm() > tol)
            throw InputError("one-parameter generator must be Hermitian at every vertex");
    }
}

namespace detail {

struct Spectral {
    std::vector<Eigen::VectorXd> lambda;
    std::vector<Mat> v;
};

inline Spectral spectral(const QuiverModel& q, const LieElement& xi) {
    Spectral s;
    for (int k = 0; k < q.n_vertices(); ++k) {
        Eigen::SelfAdjointEigenSolver<Mat> es(xi.xi[static_cast<std::size_t>(k)]);
        if (es.info() != Eigen::Success)
            throw Error(ErrorCode::InternalError, "eigen-decomposition failed");
        s.lambda.push_back(es.eigenvalues());
        s.v.push_back(es.eigenvectors());
    }
    return s;
}

} // namespace detail

inline ModelPoint one_ps_orbit(const QuiverModel& q, const LieElement& xi, const ModelPoint& b,
                               double t) {
    check_hermitian(q, xi);
    check_point(q, b);
    const auto s = detail::spectral(q, xi);
    ModelPoint out;
    out.blocks.reserve(b.blocks.size());
    for (std::size_t bl = 0; bl < b.blocks.size(); ++bl) {
        const auto& blk = q.blocks()[bl];
        const auto& vi = s.v[static_cast<std::size_t>(blk.src)];
        const auto& vj = s.v[static_cast<std::size_t>(blk.dst)];
        Mat core = vj.adjoint() * b.blocks[bl] * vi;
        for (int rr = 0; rr < core.rows(); ++rr)
            for (int cc = 0; cc < core.cols(); ++cc) {
                const double w = s.lambda[static_cast<std::size_t>(blk.dst)](rr) -
                                 s.lambda[static_cast<std::size_t>(blk.src)](cc);
                core(rr, cc) *= std::exp(t * w);
            }
        out.blocks.push_back(vj * core * vi.adjoint());
    }
    return out;
}

struct DivergentComponent {
    int block = 0;  // index into q.blocks()
    int row = 0;
    int col = 0;
    double weight = 0.0;
    double magnitude = 0.0;
};

struct OnePsLimit {
    bool exists = false;
    ModelPoint limit;
    std::vector<DivergentComponent> divergent;
};

// The same tolerance bounds both "this weight is positive" and "this
// component is effectively zero".
inline OnePsLimit one_ps_limit(const QuiverModel& q, const LieElement& xi, const ModelPoint& b,
                               double tol = 1e-10) {
    check_hermitian(q, xi);
    check_point(q, b);
    const auto s = detail::spectral(q, xi);
    OnePsLimit out;
    out.exists = true;
    out.limit.blocks.reserve(b.blocks.size());
    for (std::size_t bl = 0; bl < b.blocks.size(); ++bl) {
        const auto& blk = q.blocks()[bl];
        const auto& vi = s.v[static_cast<std::size_t>(blk.src)];
        const auto& vj = s.v[static_cast<std::size_t>(blk.dst)];
        Mat core = vj.adjoint() * b.blocks[bl] * vi;
        for (int rr = 0; rr < core.rows(); ++rr)
            for (int cc = 0; cc < core.cols(); ++cc) {
                const double w = s.lambda[static_cast<std::size_t>(blk.dst)](rr) -
                                 s.lambda[static_cast<std::size_t>(blk.src)](cc);
                if (w > tol) {
                    if (std::abs(core(rr, cc)) > tol) {
                        out.exists = false;
                        out.divergent.push_back({static_cast<int>(bl), rr, cc, w,
                                                 std::abs(core(rr, cc))});
                    }
                    core(rr, cc) = 0.0;
                } else if (w < -tol) {
                    core(rr, cc) = 0.0;  // decays to zero in the limit
                }
                // |w| <= tol: zero-weight component, survives unchanged.
            }
        out.limit.blocks.push_back(vj * core * vi.adjoint());
    }
    return out;
}

inline double weight_function(const QuiverModel& q, const LieElement& xi, const ModelPoint& b,
                              double t) {
    const ModelPoint bt = one_ps_orbit(q, xi, b, t);
    const LieElement mu = moment_map(q, bt);
    // < mu, i xi > with mu skew-Hermitian and xi Hermitian:
    // sum_k r_k Re tr( mu_k (i xi_k)^* ) = sum_k r_k Re tr( mu_k (-i) xi_k ).
    double s = 0.0;
    const Cplx mi(0.0, -1.0);
    for (int k = 0; k < q.n_vertices(); ++k)
        s += q.vertex(k).r *
             (mu.xi[static_cast<std::size_t>(k)] * (mi * xi.xi[static_cast<std::size_t>(k)]))
                 .trace()
                 .real();
    return s;
}

// Subspace generator of the coordinate subrepresentation spanned by the first
// s_k basis vectors at each vertex:
//   xi_F = -rank(F^perp) Pi_F + rank(F) Pi_{F^perp},
// with ranks weighted by the r_k.  Its weighted trace is zero by construction.
struct SubspaceGenerator {
    LieElement xi;
    int rank_f = 0;     // weighted rank of F
    int rank_perp = 0;  // weighted rank of the complement
    Rational p;         // p_value of F: sum_k s_k p_k
};

inline SubspaceGenerator subspace_generator(const QuiverModel& q, const std::vector<int>& s_dims) {
    if (s_dims.size() != static_cast<std::size_t>(q.n_vertices()))
        throw Error(ErrorCode::ShapeMismatch, "one dimension per vertex required");
    SubspaceGenerator out;
    Rational p(0);
    for (int k = 0; k < q.n_vertices(); ++k) {
        const int s = s_dims[static_cast<std::size_t>(k)];
        if (s < 0 || s > q.vertex(k).m)
            throw Error(ErrorCode::OutOfRange, "subspace dimension outside [0, m_k]");
        out.rank_f += q.vertex(k).r * s;
        out.rank_perp += q.vertex(k).r * (q.vertex(k).m - s);
        // Each unit slot at vertex k carries level p_k (which is why the
        // balance constraint reads sum_k m_k p_k = 0), so a coordinate
        // subspace of dimension s contributes s * p_k.
        p += Rational(s) * q.vertex(k).p;
    }
    if (out.rank_f == 0 || out.rank_perp == 0)
        throw Error(ErrorCode::OutOfRange, "subspace must be proper and nonzero");
    out.p = p;
    for (int k = 0; k < q.n_vertices(); ++k) {
        const int m = q.vertex(k).m;
        const int s = s_dims[static_cast<std::size_t>(k)];
        Mat x = Mat::Zero(m, m);
        for (int a = 0; a < m; ++a)
            x(a, a) = (a < s) ? Cplx(-out.rank_perp, 0.0) : Cplx(out.rank_f, 0.0);
        out.xi.xi.push_back(x);
    }
    return out;
}

// Exact limit of the weight function for a subspace generator:
// w(infinity) = 2 pi R p_value(F), with R the total weighted rank.
inline double weight_limit_prediction(const QuiverModel& q, const Rational& p_of_f) {
    return kTwoPi * q.total_rank() * to_double(p_of_f);
}

} // namespace pcrit
