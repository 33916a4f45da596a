// Finite-dimensional intersection rings and their class algebra.
//
// An IntersectionRing models the even-degree part of H^*(X, Q) for a compact
// complex n-fold by a finite basis with (p,q) bidegrees, a structure-constant
// table for the cup product, and a distinguished fundamental class generating
// the top degree.  Construction validates the table:
//   - labels unique, exactly one degree-(0,0) unit, exactly one (n,n) class
//     which must be the declared fundamental class;
//   - products are homogeneous of additive degree, truncated above 2n;
//   - graded commutativity holds (even-degree classes simply commute);
//   - associativity holds on all basis triples.
//
// RingClass<K> is a sparse class with coefficients in an exact field K
// (Rational for topology, ExtScalar for equation coefficients).  Classes are
// tied to their ring instance; mixing rings is an error, not a silent zero.

#pragma once

#include <algorithm>
#include <iterator>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "pcrit/error.hpp"
#include "pcrit/rational.hpp"

namespace pcrit {

struct BasisElement {
    std::string label;
    int p = 0;
    int q = 0;
    int degree() const { return p + q; }
};

// Plain mirror of the on-disk ring description; see json_io.hpp for the format.
struct RingSpec {
    struct ProductEntry {
        std::string a;
        std::string b;
        std::vector<std::pair<std::string, Rational>> result;
    };
    int dim = 0;
    std::vector<BasisElement> basis;
    std::vector<ProductEntry> products;
    std::string fundamental;
};

class IntersectionRing {
public:
    using SparseVec = std::vector<std::pair<int, Rational>>; // (basis index, coeff)

    static std::shared_ptr<const IntersectionRing> from_spec(const RingSpec& spec) {
        auto ring = std::shared_ptr<IntersectionRing>(new IntersectionRing());
        ring->build(spec);
        return ring;
    }

    // H^*(Bl_p P^2): basis {1, H, D, pt} with H^2 = pt, H.D = 0, D^2 = -pt,
    // where H is the pullback of the line class and D the exceptional curve.
    static std::shared_ptr<const IntersectionRing> blowup_p2() {
        RingSpec spec;
        spec.dim = 2;
        spec.basis = {{"1", 0, 0}, {"H", 1, 1}, {"D", 1, 1}, {"pt", 2, 2}};
        spec.products = {
            {"H", "H", {{"pt", Rational(1)}}},
            {"H", "D", {}},
            {"D", "D", {{"pt", Rational(-1)}}},
        };
        spec.fundamental = "pt";
        return from_spec(spec);
    }

    int dim() const { return n_; }
    int size() const { return static_cast<int>(basis_.size()); }
    const BasisElement& basis(int i) const { return basis_.at(static_cast<std::size_t>(i)); }
    int unit_index() const { return unit_; }
    int fundamental_index() const { return fundamental_; }

    int index_of(const std::string& label) const {
        auto it = index_.find(label);
        if (it == index_.end())
            throw Error(ErrorCode::UnknownLabel, "no basis class named '" + label + "'");
        return it->second;
    }

    const SparseVec& product(int i, int j) const {
        return table_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }

private:
    IntersectionRing() = default;

    void build(const RingSpec& spec) {
        if (spec.dim < 1) throw InputError("ring dimension must be >= 1");
        n_ = spec.dim;
        if (spec.basis.empty()) throw InputError("ring basis must be nonempty");

        for (const auto& b : spec.basis) {
            if (b.label.empty()) throw InputError("basis labels must be nonempty");
            if (b.p < 0 || b.q < 0 || b.degree() > 2 * n_)
                throw InputError("basis class '" + b.label + "' has bidegree outside [0, (n,n)]");
            if (index_.count(b.label))
                throw Error(ErrorCode::DuplicateLabel, "basis label '" + b.label + "' repeats");
            index_[b.label] = static_cast<int>(basis_.size());
            basis_.push_back(b);
        }

        for (int i = 0; i < size(); ++i) {
            if (basis_[static_cast<std::size_t>(i)].p == 0 && basis_[static_cast<std::size_t>(i)].q == 0) {
                if (unit_ >= 0) throw InputError("more than one degree-(0,0) basis class");
                unit_ = i;
            }
            if (basis_[static_cast<std::size_t>(i)].p == n_ && basis_[static_cast<std::size_t>(i)].q == n_) {
                if (fundamental_ >= 0)
                    throw Error(ErrorCode::MissingFundamental,
                                "more than one degree-(n,n) basis class");
                fundamental_ = i;
            }
        }
        if (unit_ < 0) throw InputError("no degree-(0,0) unit class in basis");
        if (fundamental_ < 0)
            throw Error(ErrorCode::MissingFundamental, "no degree-(n,n) basis class");
        if (spec.fundamental.empty() || !index_.count(spec.fundamental) ||
            index_.at(spec.fundamental) != fundamental_)
            throw Error(ErrorCode::MissingFundamental,
                        "declared fundamental class must be the unique degree-(n,n) basis class");

        const std::size_t m = static_cast<std::size_t>(size());
        table_.assign(m, std::vector<SparseVec>(m));
        std::vector<std::vector<bool>> given(m, std::vector<bool>(m, false));

        auto set_product = [&](int i, int j, const SparseVec& v) {
            const int di = basis_[static_cast<std::size_t>(i)].degree();
            const int dj = basis_[static_cast<std::size_t>(j)].degree();
            if (di + dj > 2 * n_) {
                if (!v.empty())
                    throw InputError("product '" + basis_[static_cast<std::size_t>(i)].label + "'*'" +
                                     basis_[static_cast<std::size_t>(j)].label +
                                     "' exceeds top degree but has a nonzero result");
            } else {
                for (const auto& [k, c] : v) {
                    if (c == 0) continue;
                    if (basis_[static_cast<std::size_t>(k)].degree() != di + dj)
                        throw InputError("product '" + basis_[static_cast<std::size_t>(i)].label + "'*'" +
                                         basis_[static_cast<std::size_t>(j)].label +
                                         "' is not homogeneous of degree " + std::to_string(di + dj));
                }
            }
            table_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
            given[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
        };

        for (const auto& e : spec.products) {
            const int i = index_of(e.a);
            const int j = index_of(e.b);
            SparseVec v;
            for (const auto& [label, coeff] : e.result) {
                if (coeff == 0) continue;
                v.emplace_back(index_of(label), coeff);
            }
            std::sort(v.begin(), v.end());
            if (given[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) {
                if (v != table_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
                    throw InputError("conflicting product entries for '" + e.a + "'*'" + e.b + "'");
                continue;
            }
            set_product(i, j, v);
            // Graded commutativity: in even total degree the sign is +1;
            // odd-degree generators would anticommute.
            if (i != j) {
                const int di = basis_[static_cast<std::size_t>(i)].degree();
                const int dj = basis_[static_cast<std::size_t>(j)].degree();
                SparseVec w = v;
                if ((di % 2) && (dj % 2))
                    for (auto& [k, c] : w) { (void)k; c = -c; }
                if (given[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]) {
                    if (w != table_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)])
                        throw InputError("products for '" + e.a + "'*'" + e.b +
                                         "' violate graded commutativity");
                } else {
                    set_product(j, i, w);
                }
            }
        }

        // Unit rows/columns are synthesized; explicit entries must agree.
        for (int i = 0; i < size(); ++i) {
            SparseVec v = {{i, Rational(1)}};
            for (auto [a, b] : {std::pair{unit_, i}, std::pair{i, unit_}}) {
                auto& slot = table_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
                if (given[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]) {
                    if (slot != v) throw InputError("unit class must act as the identity");
                } else {
                    slot = v;
                }
            }
        }

        // Associativity on every basis triple.  Products are small, so the
        // cubic sweep is cheap and catches sign errors in hand-written specs.
        for (int i = 0; i < size(); ++i)
            for (int j = 0; j < size(); ++j)
                for (int k = 0; k < size(); ++k) {
                    std::map<int, Rational> lhs, rhs;
                    for (const auto& [t, c] : product(i, j))
                        for (const auto& [u, d] : product(t, k)) lhs[u] += c * d;
                    for (const auto& [t, c] : product(j, k))
                        for (const auto& [u, d] : product(i, t)) rhs[u] += c * d;
                    auto prune = [](std::map<int, Rational>& mp) {
                        for (auto it = mp.begin(); it != mp.end();)
                            it = (it->second == 0) ? mp.erase(it) : std::next(it);
                    };
                    prune(lhs);
                    prune(rhs);
                    if (lhs != rhs)
                        throw Error(ErrorCode::NonAssociative,
                                    "associativity fails on (" + basis_[static_cast<std::size_t>(i)].label +
                                    ", " + basis_[static_cast<std::size_t>(j)].label + ", " +
                                    basis_[static_cast<std::size_t>(k)].label + ")");
                }
    }

    int n_ = 0;
    std::vector<BasisElement> basis_;
    std::map<std::string, int> index_;
    std::vector<std::vector<SparseVec>> table_;
    int unit_ = -1;
    int fundamental_ = -1;
};

using RingPtr = std::shared_ptr<const IntersectionRing>;

// ---------------------------------------------------------------------------

template <class K>
class RingClass {
public:
    RingClass() = default;
    explicit RingClass(RingPtr ring) : ring_(std::move(ring)) {}

    static RingClass unit(const RingPtr& ring) {
        RingClass c(ring);
        c.set(ring->unit_index(), K(Rational(1)));
        return c;
    }

    const RingPtr& ring() const { return ring_; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::map<int, K>& terms() const { return coeffs_; }

    K coeff(int i) const {
        auto it = coeffs_.find(i);
        return it == coeffs_.end() ? K(Rational(0)) : it->second;
    }
    K coeff(const std::string& label) const { return coeff(require_ring()->index_of(label)); }

    void set(int i, const K& v) {
        if (i < 0 || i >= require_ring()->size())
            throw Error(ErrorCode::OutOfRange, "basis index out of range");
        if (scalar_is_zero(v)) coeffs_.erase(i);
        else coeffs_[i] = v;
    }
    void add_term(int i, const K& v) { set(i, coeff(i) + v); }

    RingClass operator+(const RingClass& o) const {
        check_same_ring(o);
        RingClass r(*this);
        for (const auto& [i, v] : o.coeffs_) r.add_term(i, v);
        return r;
    }
    RingClass operator-() const {
        RingClass r(*this);
        for (auto& [i, v] : r.coeffs_) { (void)i; v = -v; }
        return r;
    }
    RingClass operator-(const RingClass& o) const { return *this + (-o); }

    RingClass operator*(const K& s) const {
        RingClass r(require_ring());
        for (const auto& [i, v] : coeffs_) r.add_term(i, v * s);
        return r;
    }

    RingClass operator*(const RingClass& o) const {
        check_same_ring(o);
        RingClass r(require_ring());
        for (const auto& [i, v] : coeffs_)
            for (const auto& [j, w] : o.coeffs_) {
                const K vw = v * w;
                if (scalar_is_zero(vw)) continue;
                for (const auto& [k, c] : ring_->product(i, j))
                    r.add_term(k, vw * K(c));
            }
        return r;
    }

    RingClass power(int k) const {
        if (k < 0) throw Error(ErrorCode::OutOfRange, "negative power of a class");
        RingClass r = unit(require_ring());
        for (int i = 0; i < k; ++i) r = r * (*this);
        return r;
    }

    // Pairing against the fundamental class.  Defined only for classes whose
    // support is contained in the top degree (plus zero).
    K integrate() const {
        const auto& ring = require_ring();
        K total(Rational(0));
        for (const auto& [i, v] : coeffs_) {
            if (i != ring->fundamental_index())
                throw Error(ErrorCode::WrongDegree,
                            "integrating a class with terms below the top degree ('" +
                            ring->basis(i).label + "')");
            total = total + v;
        }
        return total;
    }

    bool is_homogeneous_of(int total_degree) const {
        const auto& ring = require_ring();
        for (const auto& [i, v] : coeffs_) {
            (void)v;
            if (ring->basis(i).degree() != total_degree) return false;
        }
        return true;
    }

    RingClass degree_component(int total_degree) const {
        const auto& ring = require_ring();
        RingClass r(ring);
        for (const auto& [i, v] : coeffs_)
            if (ring->basis(i).degree() == total_degree) r.set(i, v);
        return r;
    }

    bool operator==(const RingClass& o) const {
        if (ring_.get() != o.ring_.get()) return false;
        return coeffs_ == o.coeffs_;
    }
    bool operator!=(const RingClass& o) const { return !(*this == o); }

private:
    const RingPtr& require_ring() const {
        if (!ring_) throw Error(ErrorCode::InternalError, "class has no ring attached");
        return ring_;
    }
    void check_same_ring(const RingClass& o) const {
        if (require_ring().get() != o.require_ring().get())
            throw Error(ErrorCode::RingMismatch, "classes belong to different rings");
    }

    RingPtr ring_;
    std::map<int, K> coeffs_;
};

using CohomologyClass = RingClass<Rational>;
using ExtClass = RingClass<ExtScalar>;

inline CohomologyClass make_class(const RingPtr& ring,
                                  const std::vector<std::pair<std::string, Rational>>& terms) {
    CohomologyClass c(ring);
    for (const auto& [label, coeff] : terms) c.add_term(ring->index_of(label), coeff);
    return c;
}

// Promote a rational class into the extension-coefficient algebra.
inline ExtClass ext_class(const CohomologyClass& c) {
    ExtClass r(c.ring());
    for (const auto& [i, v] : c.terms()) r.set(i, ExtScalar(v));
    return r;
}

// Demote when every coefficient is rational; throws otherwise.
inline CohomologyClass rational_class(const ExtClass& c) {
    CohomologyClass r(c.ring());
    for (const auto& [i, v] : c.terms()) r.set(i, v.rational_value());
    return r;
}

} // namespace pcrit
