#include <catch2/catch_amalgamated.hpp>

#include "pcrit/blp2.hpp"
#include "pcrit/stability.hpp"
#include "support.hpp"

using namespace pcrit;

namespace {

const RingPtr& ring() {
    static const RingPtr r = IntersectionRing::blowup_p2();
    return r;
}

// The rescaled family at given parameters, normalized against E.
EquationParams zeta_at(const Rational& e1, const Rational& e2) {
    return dhym_surface_rescaled(ring(), blp2_omega(ring()), blp2_alpha(ring()), e1, e2,
                                 blp2_E(ring()))
        .params;
}

} // namespace

TEST_CASE("classifier demands a normalized total bundle", "[stability]") {
    // The family below is normalized against E, so declaring L1 as the total
    // bundle leaves p_value(total) = 12/25 != 0 and must be rejected.
    const auto tilted = zeta_at(Rational(0), Rational(1, 10));
    CHECK_THROWS_AS(classify(tilted, make_family(blp2_L1(ring()), {}), false), Error);
    CHECK_NOTHROW(classify(tilted, make_family(blp2_E(ring()), {}), false));
}

TEST_CASE("verdicts follow the sign pattern of the invariants", "[stability]") {
    const auto e = blp2_E(ring());
    const auto l1 = blp2_L1(ring());
    const auto l2 = blp2_L2(ring());

    SECTION("strictly negative everywhere: stable") {
        // At eps2 < 0 the invariant of L1 is negative; a family with only L1.
        const auto v = classify(zeta_at(Rational(0), Rational(-1, 100)),
                                make_family(e, {{"L1", l1, std::nullopt}}));
        CHECK(v.level == VerdictLevel::Stable);
        CHECK(v.witnesses.empty());
        CHECK(v.values.at("L1") < ExtScalar(0));
    }
    SECTION("a positive invariant wins regardless of other entries") {
        const auto v = classify(zeta_at(Rational(0), Rational(-1, 100)),
                                make_family(e, {{"L1", l1, true}, {"L2", l2, true}}));
        CHECK(v.level == VerdictLevel::Unstable);
        REQUIRE(v.witnesses.size() == 1);
        CHECK(v.witnesses[0].name == "L2");
        CHECK(v.witnesses[0].note == "violating");
    }
    SECTION("ties with invariant complements: polystable") {
        const auto v = classify(zeta_at(Rational(0), Rational(0)),
                                make_family(e, {{"L1", l1, true}, {"L2", l2, true}}));
        CHECK(v.level == VerdictLevel::Polystable);
        CHECK(v.witnesses.size() == 2);
        CHECK(v.warnings.empty());
    }
    SECTION("a tie without a split complement stays semistable") {
        const auto v = classify(zeta_at(Rational(0), Rational(0)),
                                make_family(e, {{"L1", l1, false}}));
        CHECK(v.level == VerdictLevel::Semistable);
        CHECK(v.warnings.empty()); // complement status known, just not split
    }
    SECTION("a tie with unknown complement warns") {
        const auto v = classify(zeta_at(Rational(0), Rational(0)),
                                make_family(e, {{"L1", l1, std::nullopt}}));
        CHECK(v.level == VerdictLevel::Semistable);
        REQUIRE(v.warnings.size() == 1);
        CHECK(v.warnings[0].find("L1") != std::string::npos);
    }
    SECTION("simplicity contradicting a splitting tie warns") {
        const auto v = classify(zeta_at(Rational(0), Rational(0)),
                                make_family(e, {{"L1", l1, true}, {"L2", l2, true}}),
                                /*simple=*/true);
        CHECK(v.level == VerdictLevel::Polystable);
        CHECK(v.warnings.size() == 2);
    }
}

TEST_CASE("growing the family can only lower the verdict", "[stability][property]") {
    auto g = testsupport::make_rng(501);
    const auto e = blp2_E(ring());
    for (int i = 0; i < 60; ++i) {
        const Rational e1(testsupport::rand_int(g, 0, 8), 8);
        const Rational e2(testsupport::rand_int(g, -3, 7), 8);
        const auto params = zeta_at(e1, e2);
        std::vector<AdmissibleSub> subs = {{"L1", blp2_L1(ring()), true}};
        const auto small = classify(params, make_family(e, subs));
        subs.push_back({"L2", blp2_L2(ring()), true});
        const auto big = classify(params, make_family(e, subs));
        CHECK(static_cast<int>(big.level) <= static_cast<int>(small.level));
    }
}

TEST_CASE("family construction rejects duplicates and mixed rings", "[stability]") {
    const auto e = blp2_E(ring());
    CHECK_THROWS_AS(make_family(e, {{"L1", blp2_L1(ring()), std::nullopt},
                                    {"L1", blp2_L2(ring()), std::nullopt}}),
                    InputError);
    CHECK_THROWS_AS(make_family(e, {{"", blp2_L1(ring()), std::nullopt}}), InputError);
    const auto other = IntersectionRing::blowup_p2();
    CHECK_THROWS_AS(make_family(e, {{"F", blp2_L1(other), std::nullopt}}), Error);
}

TEST_CASE("stability cone reports exact inequalities", "[stability]") {
    // Base: the origin of the rescaled family (p(L1) = 0 there).  Directions:
    // the derivative of the family in eps2 is irrational-free, so use the
    // difference of two rational members as an exact direction.
    const auto base = zeta_at(Rational(0), Rational(0));
    const auto tilt = zeta_at(Rational(0), Rational(1, 10));
    EquationParams dir;
    dir.zeta.assign(3, ExtClass(ring()));
    for (std::size_t k = 0; k < 3; ++k) dir.zeta[k] = tilt.zeta[k] - base.zeta[k];
    dir.normalization = "finite difference of the rescaled family in eps2";

    const auto family = make_family(
        blp2_E(ring()), {{"L1", blp2_L1(ring()), true}, {"L2", blp2_L2(ring()), true}});
    const auto cone = stability_cone(base, {dir}, {"d2"}, family);

    REQUIRE(cone.rows.size() == 2);
    REQUIRE(cone.a.size() == 2);
    // Row L1: p(base + t d) <= 0 becomes a t <= c with a = p(d, L1) = 12/25 / (1/10)
    // scaled by the difference step... the entries are p-values of the direction.
    CHECK(cone.a[0][0] == Rational(12, 25));
    CHECK(cone.c[0] == Rational(0));
    CHECK(cone.a[1][0] == Rational(-12, 25));
    CHECK(cone.c[1] == Rational(0));

    SECTION("membership classifies interior, boundary, exterior") {
        CHECK(cone_membership(cone, {Rational(0)}).region == ConeRegion::Boundary);
        const auto outside = cone_membership(cone, {Rational(1)});
        CHECK(outside.region == ConeRegion::Exterior);
        REQUIRE(outside.violating.size() == 1);
        CHECK(outside.violating[0] == "L1");
        const auto other_side = cone_membership(cone, {Rational(-1)});
        CHECK(other_side.region == ConeRegion::Exterior);
        CHECK(other_side.violating[0] == "L2");
    }
    SECTION("membership needs the right number of coordinates") {
        CHECK_THROWS_AS(cone_membership(cone, {}), Error);
        CHECK_THROWS_AS(cone_membership(cone, {Rational(0), Rational(0)}), Error);
    }
    SECTION("interior requires a row that can be strictly satisfied") {
        // A one-sided family: only L1.  t < 0 puts us strictly inside.
        const auto half = stability_cone(base, {dir}, {"d2"},
                                         make_family(blp2_E(ring()), {{"L1", blp2_L1(ring()), true}}));
        CHECK(cone_membership(half, {Rational(-1)}).region == ConeRegion::Interior);
    }
}

TEST_CASE("cone construction rejects unnormalized data and irrational entries", "[stability]") {
    const auto family = make_family(blp2_E(ring()), {{"L1", blp2_L1(ring()), true}});
    const auto base = zeta_at(Rational(0), Rational(0));

    SECTION("unnormalized direction") {
        EquationParams bad;
        bad.zeta.assign(3, ExtClass(ring()));
        bad.zeta[2] = ext_class(CohomologyClass::unit(ring())); // p(E) = 2 ch_2 != 0
        CHECK_THROWS_AS(stability_cone(base, {bad}, {"bad"}, family), Error);
    }
    SECTION("irrational base data") {
        const auto dhym = dhym_params(ring(), blp2_omega(ring()), blp2_E(ring()));
        CHECK_THROWS_AS(stability_cone(dhym, {}, {}, family), InputError);
    }
    SECTION("name count mismatch") {
        CHECK_THROWS_AS(stability_cone(base, {}, {"extra"}, family), Error);
    }
}

TEST_CASE("solvability criterion for line bundles on the surface", "[stability]") {
    const auto cone = blp2_curve_cone(ring());
    const auto omega = blp2_omega(ring());

    const auto s1 = song_j_solvable(ring(), omega, blp2_L1(ring()), cone);
    CHECK(s1.solvable);
    CHECK(s1.threshold == Rational(5, 8));
    REQUIRE(s1.ratios.size() == 2);
    CHECK(s1.ratios[0] == Rational(1, 2));
    CHECK(s1.ratios[1] == Rational(1, 11));

    const auto s2 = song_j_solvable(ring(), omega, blp2_L2(ring()), cone);
    CHECK(s2.solvable);
    CHECK(s2.ratios == std::vector<Rational>{Rational(1, 4), Rational(1, 2)});

    SECTION("threshold follows the deformed polarization") {
        // For L1 under omega_eps the threshold 2 c_J = (15 - 9 eps2)/24.
        for (const Rational& e : {Rational(0), Rational(1, 4), Rational(-1, 4), Rational(1, 2)}) {
            const auto s = song_j_solvable(ring(), blp2_omega_eps(ring(), e), blp2_L1(ring()), cone);
            CHECK(s.threshold == (Rational(15) - 9 * e) / Rational(24));
        }
    }
    SECTION("rank and degeneracy guards") {
        CHECK_THROWS_AS(song_j_solvable(ring(), omega, blp2_E(ring()), cone), InputError);
        // O(H) pairs to zero with the exceptional-curve generator.
        const auto l = line_bundle(ring(), make_class(ring(), {{"H", Rational(1)}}));
        CHECK_THROWS_AS(song_j_solvable(ring(), omega, l, cone), Error);
    }
}
