// Topological data of holomorphic vector bundles.
//
// A bundle enters the calculus only through its rank and Chern character
// components ch_0, ..., ch_n (ch_k of bidegree (k,k)); that is all the
// stability invariants depend on.  Line bundles are generated from a first
// Chern class via ch_k = c1^k / k!, direct sums add componentwise, and the
// formal difference E - F supports quotient-style comparisons.
//
// is_ample_surface implements the Nakai-Moishezon criterion on a surface
// against a finite list of curve-cone generators: c1^2 > 0 and c1.C > 0 for
// every generator C.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pcrit/error.hpp"
#include "pcrit/ring.hpp"

namespace pcrit {

struct BundleTopology {
    int rank = 0;
    std::vector<CohomologyClass> ch; // ch[k] has total degree 2k; size dim()+1

    const RingPtr& ring() const {
        if (ch.empty()) throw Error(ErrorCode::InternalError, "bundle has no classes attached");
        return ch.front().ring();
    }
};

inline BundleTopology make_bundle(const RingPtr& ring, int rank,
                                  std::vector<CohomologyClass> ch) {
    const int n = ring->dim();
    if (static_cast<int>(ch.size()) != n + 1)
        throw Error(ErrorCode::DegreeMismatch,
                    "bundle needs exactly dim+1 = " + std::to_string(n + 1) +
                    " Chern character components");
    for (int k = 0; k <= n; ++k) {
        if (ch[static_cast<std::size_t>(k)].ring().get() != ring.get())
            throw Error(ErrorCode::RingMismatch, "bundle classes belong to different rings");
        if (!ch[static_cast<std::size_t>(k)].is_homogeneous_of(2 * k))
            throw Error(ErrorCode::WrongDegree,
                        "ch_" + std::to_string(k) + " must be homogeneous of degree " +
                        std::to_string(2 * k));
    }
    CohomologyClass rank_class(ring);
    rank_class.set(ring->unit_index(), Rational(rank));
    if (ch[0] != rank_class)
        throw Error(ErrorCode::WrongDegree, "ch_0 must equal rank * 1");
    return BundleTopology{rank, std::move(ch)};
}

inline BundleTopology line_bundle(const RingPtr& ring, const CohomologyClass& c1) {
    if (c1.ring().get() != ring.get())
        throw Error(ErrorCode::RingMismatch, "first Chern class belongs to a different ring");
    if (!c1.is_homogeneous_of(2))
        throw Error(ErrorCode::WrongDegree, "first Chern class must be homogeneous of degree 2");
    const int n = ring->dim();
    std::vector<CohomologyClass> ch;
    ch.reserve(static_cast<std::size_t>(n) + 1);
    CohomologyClass pow = CohomologyClass::unit(ring);
    Rational kfac(1);
    for (int k = 0; k <= n; ++k) {
        if (k > 0) { pow = pow * c1; kfac *= k; }
        ch.push_back(pow * (Rational(1) / kfac));
    }
    return BundleTopology{1, std::move(ch)};
}

inline BundleTopology direct_sum(const BundleTopology& a, const BundleTopology& b) {
    if (a.ring().get() != b.ring().get())
        throw Error(ErrorCode::RingMismatch, "summands live on different rings");
    BundleTopology r;
    r.rank = a.rank + b.rank;
    r.ch.reserve(a.ch.size());
    for (std::size_t k = 0; k < a.ch.size(); ++k) r.ch.push_back(a.ch[k] + b.ch[k]);
    return r;
}

// Formal difference of Chern characters (e.g. a quotient E/F).  Rank may be
// zero or negative; callers decide whether that is meaningful.
inline BundleTopology difference(const BundleTopology& a, const BundleTopology& b) {
    if (a.ring().get() != b.ring().get())
        throw Error(ErrorCode::RingMismatch, "operands live on different rings");
    BundleTopology r;
    r.rank = a.rank - b.rank;
    r.ch.reserve(a.ch.size());
    for (std::size_t k = 0; k < a.ch.size(); ++k) r.ch.push_back(a.ch[k] - b.ch[k]);
    return r;
}

inline const CohomologyClass& chern_component(const BundleTopology& e, int k) {
    if (k < 0 || k >= static_cast<int>(e.ch.size()))
        throw Error(ErrorCode::OutOfRange, "no ch_" + std::to_string(k) + " component");
    return e.ch[static_cast<std::size_t>(k)];
}

// Finitely generated cone of effective curve classes on a surface.
struct CurveCone {
    std::vector<CohomologyClass> generators; // each homogeneous of degree 2
};

inline CurveCone make_curve_cone(const RingPtr& ring, std::vector<CohomologyClass> gens) {
    if (gens.empty()) throw InputError("curve cone needs at least one generator");
    for (const auto& g : gens) {
        if (g.ring().get() != ring.get())
            throw Error(ErrorCode::RingMismatch, "cone generator belongs to a different ring");
        if (!g.is_homogeneous_of(2))
            throw Error(ErrorCode::WrongDegree, "cone generators must be homogeneous of degree 2");
    }
    return CurveCone{std::move(gens)};
}

// Nakai-Moishezon on a surface: strict positivity of c1^2 and of c1 against
// every curve-cone generator.
inline bool is_ample_surface(const RingPtr& ring, const CohomologyClass& c1,
                             const CurveCone& cone) {
    if (ring->dim() != 2)
        throw Error(ErrorCode::WrongDegree, "ampleness test is implemented for surfaces only");
    if (c1.ring().get() != ring.get())
        throw Error(ErrorCode::RingMismatch, "class belongs to a different ring");
    if (!c1.is_homogeneous_of(2))
        throw Error(ErrorCode::WrongDegree, "ampleness test needs a degree-2 class");
    if ((c1 * c1).integrate() <= 0) return false;
    for (const auto& g : cone.generators)
        if ((c1 * g).integrate() <= 0) return false;
    return true;
}

} // namespace pcrit
