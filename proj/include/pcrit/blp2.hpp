// Built-in example: a rank-2 split bundle on the blowup of P^2 at a point.
//
// The surface carries the ring {1, H, D, pt} from IntersectionRing::blowup_p2.
// The example bundle is E = L1 + L2 with
//     ch_1(L1) = 13H - 11D, ch_2(L1) = 24 pt,
//     ch_1(L2) =  6H -  2D, ch_2(L2) = 16 pt,
// polarized by omega = 2H - D and deformed along alpha = H - 2D:
//     omega_eps = omega + eps2 * alpha = (2 + eps2) H - (1 + 2 eps2) D.
//
// Against the two-parameter rescaled family the whole classification is
// controlled by one rational discriminant
//     A(eps1, eps2) = eps2 + (1/128)(1 - eps2^2)(5 - 11 eps2) eps1^2,
// which is a positive multiple of p_value(zeta_eps, L1):
//     p_value(zeta_eps, L1) = (24/5) A.
// Three bundles are classified: E0 = L1 + L2 (the split bundle), and the two
// nonsplit extensions E1 (L1 inside), E2 (L2 inside).  The equation is
// solvable on E0 iff A = 0, on E1 iff A < 0, on E2 iff A > 0 — i.e. exactly
// when the verdict is Stable or Polystable.
//
// The parameters must stay in the validity box: 0 <= eps1 <= 1 and
// omega_eps ample, which for this surface means -1/2 < eps2 < 1.

#pragma once

#include <string>
#include <vector>

#include "pcrit/bundle.hpp"
#include "pcrit/equation.hpp"
#include "pcrit/error.hpp"
#include "pcrit/ring.hpp"
#include "pcrit/stability.hpp"

namespace pcrit {

inline CohomologyClass blp2_omega(const RingPtr& ring) {
    return make_class(ring, {{"H", Rational(2)}, {"D", Rational(-1)}});
}

inline CohomologyClass blp2_alpha(const RingPtr& ring) {
    return make_class(ring, {{"H", Rational(1)}, {"D", Rational(-2)}});
}

inline CohomologyClass blp2_omega_eps(const RingPtr& ring, const Rational& eps2) {
    return blp2_omega(ring) + blp2_alpha(ring) * eps2;
}

inline BundleTopology blp2_L1(const RingPtr& ring) {
    std::vector<CohomologyClass> ch(3, CohomologyClass(ring));
    ch[0] = CohomologyClass::unit(ring);
    ch[1] = make_class(ring, {{"H", Rational(13)}, {"D", Rational(-11)}});
    ch[2] = make_class(ring, {{"pt", Rational(24)}});
    return make_bundle(ring, 1, ch);
}

inline BundleTopology blp2_L2(const RingPtr& ring) {
    std::vector<CohomologyClass> ch(3, CohomologyClass(ring));
    ch[0] = CohomologyClass::unit(ring);
    ch[1] = make_class(ring, {{"H", Rational(6)}, {"D", Rational(-2)}});
    ch[2] = make_class(ring, {{"pt", Rational(16)}});
    return make_bundle(ring, 1, ch);
}

inline BundleTopology blp2_E(const RingPtr& ring) {
    return direct_sum(blp2_L1(ring), blp2_L2(ring));
}

// Effective curve classes generating the cone: the strict transform of a line
// through the blown-up point, H - D, and the exceptional curve D.
inline CurveCone blp2_curve_cone(const RingPtr& ring) {
    return make_curve_cone(ring, {make_class(ring, {{"H", Rational(1)}, {"D", Rational(-1)}}),
                                  make_class(ring, {{"D", Rational(1)}})});
}

struct Blp2Report {
    Rational eps1, eps2;
    Rational a;                 // the discriminant A(eps1, eps2)
    Rational p_l1;              // p_value(zeta_eps, L1) = (24/5) A
    Rational c_j, c_hym, c_ratio;
    Verdict split, ext1, ext2;  // E0 = L1 + L2, E1 (L1 sub), E2 (L2 sub)
    bool split_solvable = false, ext1_solvable = false, ext2_solvable = false;
    SongCriterion song_l1, song_l2;
};

inline bool blp2_solvable(const Verdict& v) {
    return v.level == VerdictLevel::Stable || v.level == VerdictLevel::Polystable;
}

inline Blp2Report blp2_classify(const Rational& eps1, const Rational& eps2) {
    if (eps1 < 0 || eps1 > 1)
        throw Error(ErrorCode::OutOfValidityBox, "eps1 must lie in [0, 1]");
    // Ampleness of omega_eps = (2+eps2)H - (1+2eps2)D against the curve cone:
    // omega_eps.(H-D) = 1 - eps2 > 0 and omega_eps.D = 1 + 2 eps2 > 0.
    if (!(eps2 > Rational(-1, 2) && eps2 < 1))
        throw Error(ErrorCode::OutOfValidityBox,
                    "omega_eps stays ample only for -1/2 < eps2 < 1");

    const auto ring = IntersectionRing::blowup_p2();
    const auto l1 = blp2_L1(ring);
    const auto l2 = blp2_L2(ring);
    const auto e = blp2_E(ring);

    Blp2Report r;
    r.eps1 = eps1;
    r.eps2 = eps2;

    const SurfaceRescaled fam =
        dhym_surface_rescaled(ring, blp2_omega(ring), blp2_alpha(ring), eps1, eps2, e);
    r.c_j = fam.c_j;
    r.c_hym = fam.c_hym;
    r.c_ratio = fam.c_ratio;
    r.p_l1 = p_value_rational(fam.params, l1);
    r.a = Rational(5, 24) * r.p_l1;

    // Closed form of the discriminant; a disagreement means the builder broke.
    const Rational closed =
        eps2 + Rational(1, 128) * (1 - eps2 * eps2) * (5 - 11 * eps2) * eps1 * eps1;
    if (r.a != closed)
        throw Error(ErrorCode::InternalError, "discriminant disagrees with its closed form");

    const auto family_of = [&](std::vector<AdmissibleSub> subs) {
        return make_family(e, std::move(subs));
    };
    r.split = classify(fam.params,
                       family_of({{"L1", l1, true}, {"L2", l2, true}}),
                       /*simple=*/false);
    r.ext1 = classify(fam.params, family_of({{"L1", l1, false}}), /*simple=*/true);
    r.ext2 = classify(fam.params, family_of({{"L2", l2, false}}), /*simple=*/true);
    r.split_solvable = blp2_solvable(r.split);
    r.ext1_solvable = blp2_solvable(r.ext1);
    r.ext2_solvable = blp2_solvable(r.ext2);

    // Independent sign rules; again purely an internal consistency check.
    const int sa = sign(r.a);
    if (r.split_solvable != (sa == 0) || r.ext1_solvable != (sa < 0) ||
        r.ext2_solvable != (sa > 0))
        throw Error(ErrorCode::InternalError, "verdicts disagree with the sign of A");

    const auto cone = blp2_curve_cone(ring);
    const auto omega_eps = blp2_omega_eps(ring, eps2);
    r.song_l1 = song_j_solvable(ring, omega_eps, l1, cone);
    r.song_l2 = song_j_solvable(ring, omega_eps, l2, cone);
    return r;
}

} // namespace pcrit
