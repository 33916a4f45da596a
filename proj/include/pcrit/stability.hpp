// Local stability verdicts and stability cones.
//
// Given equation coefficients zeta normalized so that p_value(zeta, E) = 0,
// stability of E is tested against a finite family of admissible subbundles:
//
//   semistable    p_value(zeta, F) <= 0 for every F in the family;
//   stable        the inequality is strict for every F;
//   polystable    semistable, and every F with p_value = 0 splits off — which
//                 the caller asserts through the complement_invariant flag.
//
// When a tie occurs and the flag is absent the verdict conservatively stays
// Semistable and the report says which subbundle was undecidable.  A caller
// asserting the bundle is simple gets a consistency warning if a tie with an
// invariant complement shows up (a simple bundle cannot split), but the
// verdict itself is still computed from the inequalities.
//
// stability_cone linearizes the verdict over an affine family
// zeta = zeta_0 + sum_j t_j delta_j: row i is  a_{ij} t_j <= c_i with
// a_{ij} = p_value(delta_j, F_i) and c_i = -p_value(zeta_0, F_i), so the
// closed cone is exactly the semistable locus and its interior the stable one.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pcrit/bundle.hpp"
#include "pcrit/equation.hpp"
#include "pcrit/error.hpp"

namespace pcrit {

struct AdmissibleSub {
    std::string name;
    BundleTopology f;
    // True when the quotient E/F is known to carry an invariant complement
    // (i.e. F splits off holomorphically); absent when unknown.
    std::optional<bool> complement_invariant;
};

struct AdmissibleFamily {
    BundleTopology total;
    std::vector<AdmissibleSub> subs;
};

inline AdmissibleFamily make_family(BundleTopology total, std::vector<AdmissibleSub> subs) {
    std::map<std::string, int> seen;
    for (const auto& s : subs) {
        if (s.name.empty()) throw InputError("admissible subbundles need names");
        if (seen.count(s.name)) throw InputError("duplicate subbundle name '" + s.name + "'");
        seen[s.name] = 1;
        if (s.f.ring().get() != total.ring().get())
            throw Error(ErrorCode::RingMismatch, "subbundle '" + s.name + "' lives on a different ring");
    }
    return AdmissibleFamily{std::move(total), std::move(subs)};
}

enum class VerdictLevel { Unstable, Semistable, Polystable, Stable };

inline const char* verdict_name(VerdictLevel v) {
    switch (v) {
        case VerdictLevel::Unstable: return "Unstable";
        case VerdictLevel::Semistable: return "Semistable";
        case VerdictLevel::Polystable: return "Polystable";
        case VerdictLevel::Stable: return "Stable";
    }
    return "?";
}

struct Witness {
    std::string name;   // subbundle name
    ExtScalar p;        // its p_value
    std::string note;   // "violating", "binding", or a warning
};

struct Verdict {
    VerdictLevel level = VerdictLevel::Stable;
    std::vector<Witness> witnesses;           // every F with p_value >= 0
    std::map<std::string, ExtScalar> values;  // p_value of every F
    std::vector<std::string> warnings;
};

// `simple` is an assertion about End(E); it never changes the inequalities,
// only adds a consistency warning when it contradicts a splitting tie.
inline Verdict classify(const EquationParams& params, const AdmissibleFamily& family,
                        bool simple = false) {
    const ExtScalar p_total = p_value(params, family.total);
    if (!p_total.is_zero())
        throw Error(ErrorCode::Unnormalized,
                    "p_value of the total bundle is " + ext_to_string(p_total) +
                    ", expected 0; renormalize zeta_0");

    Verdict v;
    bool any_violation = false;
    bool any_tie = false;
    bool all_ties_split = true;
    for (const auto& s : family.subs) {
        const ExtScalar p = p_value(params, s.f);
        v.values.emplace(s.name, p);
        const int sg = p.sign();
        if (sg > 0) {
            any_violation = true;
            v.witnesses.push_back({s.name, p, "violating"});
        } else if (sg == 0) {
            any_tie = true;
            if (s.complement_invariant.has_value() && *s.complement_invariant) {
                v.witnesses.push_back({s.name, p, "binding"});
                if (simple)
                    v.warnings.push_back(
                        "subbundle '" + s.name +
                        "' binds with an invariant complement, contradicting simplicity");
            } else {
                all_ties_split = false;
                v.witnesses.push_back({s.name, p, "binding"});
                if (!s.complement_invariant.has_value())
                    v.warnings.push_back("subbundle '" + s.name +
                                         "' binds but complement_invariant is unknown; "
                                         "verdict limited to Semistable");
            }
        }
    }

    if (any_violation) v.level = VerdictLevel::Unstable;
    else if (!any_tie) v.level = VerdictLevel::Stable;
    else if (all_ties_split) v.level = VerdictLevel::Polystable;
    else v.level = VerdictLevel::Semistable;
    return v;
}

// ---------------------------------------------------------------------------
// Stability cones.

struct PolyhedralCone {
    std::vector<std::string> directions;       // names of the delta_j
    std::vector<std::string> rows;             // names of the F_i
    std::vector<std::vector<Rational>> a;      // a[i][j] = p_value(delta_j, F_i)
    std::vector<Rational> c;                   // c[i] = -p_value(zeta_0, F_i)
};

// Every p_value entering the cone must be rational: the cone is reported with
// exact rational data, so irrationally normalized coefficient families (raw
// deformed-equation zetas) should be rescaled by |Z| before calling this.
inline PolyhedralCone stability_cone(const EquationParams& base,
                                     const std::vector<EquationParams>& directions,
                                     const std::vector<std::string>& direction_names,
                                     const AdmissibleFamily& family) {
    if (directions.size() != direction_names.size())
        throw Error(ErrorCode::DimensionMismatch, "one name per direction required");
    auto rational_or_reject = [](const ExtScalar& x, const std::string& what) {
        if (!x.is_rational())
            throw InputError(what + " is irrational; rescale the coefficient family "
                             "(e.g. by |Z|) so cone data is rational");
        return x.rational_value();
    };

    // The base point and every direction must leave the total bundle at zero,
    // otherwise the affine family is not normalized anywhere.
    if (!p_value(base, family.total).is_zero())
        throw Error(ErrorCode::NormalizationBroken, "base point has p_value(E) != 0");
    for (std::size_t j = 0; j < directions.size(); ++j)
        if (!p_value(directions[j], family.total).is_zero())
            throw Error(ErrorCode::NormalizationBroken,
                        "direction '" + direction_names[j] + "' has p_value(E) != 0");

    PolyhedralCone cone;
    cone.directions = direction_names;
    for (const auto& s : family.subs) {
        cone.rows.push_back(s.name);
        std::vector<Rational> row;
        row.reserve(directions.size());
        for (std::size_t j = 0; j < directions.size(); ++j)
            row.push_back(rational_or_reject(p_value(directions[j], s.f),
                                             "p_value of '" + s.name + "' along '" +
                                             direction_names[j] + "'"));
        cone.a.push_back(std::move(row));
        cone.c.push_back(rational_or_reject(-p_value(base, s.f),
                                            "p_value of '" + s.name + "' at the base point"));
    }
    return cone;
}

enum class ConeRegion { Interior, Boundary, Exterior };

struct ConeMembership {
    ConeRegion region = ConeRegion::Interior;
    std::vector<std::string> binding;    // rows with equality
    std::vector<std::string> violating;  // rows with a[i].t > c[i]
};

inline ConeMembership cone_membership(const PolyhedralCone& cone, const std::vector<Rational>& t) {
    if (t.size() != cone.directions.size())
        throw Error(ErrorCode::DimensionMismatch,
                    "expected " + std::to_string(cone.directions.size()) + " coordinates, got " +
                    std::to_string(t.size()));
    ConeMembership m;
    for (std::size_t i = 0; i < cone.rows.size(); ++i) {
        Rational lhs(0);
        for (std::size_t j = 0; j < t.size(); ++j) lhs += cone.a[i][j] * t[j];
        if (lhs > cone.c[i]) m.violating.push_back(cone.rows[i]);
        else if (lhs == cone.c[i]) m.binding.push_back(cone.rows[i]);
    }
    if (!m.violating.empty()) m.region = ConeRegion::Exterior;
    else if (!m.binding.empty()) m.region = ConeRegion::Boundary;
    else m.region = ConeRegion::Interior;
    return m;
}

// ---------------------------------------------------------------------------
// Numerical solvability test for the J-equation of a line bundle on a surface:
// solvable iff for every curve-cone generator C,
//     (omega.C) / (ch_1(L).C)  <  2 c_J,
// all pairings strictly positive on the relevant data.

struct SongCriterion {
    bool solvable = false;
    Rational threshold;                 // 2 c_J
    std::vector<Rational> ratios;       // one per cone generator, cone order
};

inline SongCriterion song_j_solvable(const RingPtr& ring, const CohomologyClass& omega,
                                     const BundleTopology& line, const CurveCone& cone) {
    if (ring->dim() != 2)
        throw Error(ErrorCode::WrongDegree, "criterion is implemented for surfaces only");
    if (line.rank != 1) throw InputError("criterion applies to line bundles (rank 1)");
    const JEquation j = j_equation_params(ring, omega, line);

    SongCriterion out;
    out.threshold = 2 * j.constant;
    out.solvable = true;
    for (const auto& g : cone.generators) {
        const Rational den = (chern_component(line, 1) * g).integrate();
        if (den == 0)
            throw Error(ErrorCode::ZeroDenominator,
                        "ch_1(L) pairs to zero with a curve-cone generator");
        out.ratios.push_back((omega * g).integrate() / den);
        if (!(out.ratios.back() < out.threshold)) out.solvable = false;
    }
    return out;
}

} // namespace pcrit
