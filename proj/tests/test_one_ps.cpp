#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "pcrit/one_ps.hpp"
#include "pcrit/quiver.hpp"
#include "support.hpp"

using namespace pcrit;
using testsupport::make_rng;
using testsupport::oracle_scalar_w;
using testsupport::rand_int;
using testsupport::rand_lie;
using testsupport::rand_model;
using testsupport::rand_point;
using testsupport::rand_real;
using testsupport::RandomModelOpts;
using testsupport::scalar_model;
using testsupport::scalar_point;

namespace {

RandomModelOpts matrix_opts() {
    RandomModelOpts o;
    o.max_mult = 3;
    o.max_count = 2;
    return o;
}

LieElement diag_generator(double a0, double a1) {
    LieElement xi;
    xi.xi.push_back(Mat::Constant(1, 1, Cplx(a0, 0.0)));
    xi.xi.push_back(Mat::Constant(1, 1, Cplx(a1, 0.0)));
    return xi;
}

// A proper nonzero coordinate subspace: per-vertex dimensions in [0, m_k],
// not all zero and not all full.
std::vector<int> rand_proper_dims(std::mt19937_64& g, const QuiverModel& q) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<int> dims;
        int total = 0, full = 0;
        for (int k = 0; k < q.n_vertices(); ++k) {
            const int s = rand_int(g, 0, q.vertex(k).m);
            dims.push_back(s);
            total += s;
            full += q.vertex(k).m;
        }
        if (total > 0 && total < full) return dims;
    }
    // Deterministic fallback: first slot of the first vertex.
    std::vector<int> dims(static_cast<std::size_t>(q.n_vertices()), 0);
    dims[0] = 1;
    return dims;
}

} // namespace

TEST_CASE("orbit computed spectrally agrees with matrix exponentials", "[one_ps]") {
    auto rng = make_rng(801);
    for (int trial = 0; trial < 100; ++trial) {
        const auto q = rand_model(rng, matrix_opts());
        const auto b = rand_point(rng, q);
        const auto xi = rand_lie(rng, q);
        const double t = rand_real(rng, -2.0, 2.0);

        const auto orbit = one_ps_orbit(q, xi, b, t);
        for (std::size_t bl = 0; bl < b.blocks.size(); ++bl) {
            const auto& blk = q.blocks()[bl];
            const Mat ej = (t * xi.xi[static_cast<std::size_t>(blk.dst)]).exp();
            const Mat ei = (-t * xi.xi[static_cast<std::size_t>(blk.src)]).exp();
            const Mat want = ej * b.blocks[bl] * ei;
            REQUIRE((orbit.blocks[bl] - want).norm() <= 1e-10 * (1.0 + want.norm()));
        }
    }
}

TEST_CASE("limit existence is decided by positive-weight components", "[one_ps]") {
    const auto q = scalar_model(Rational(0), Rational(0));
    const auto b = scalar_point(q, Cplx(1.0, 0.0));

    SECTION("negative weight decays: the arrow dies in the limit") {
        const auto lim = one_ps_limit(q, diag_generator(1.0, -1.0), b);
        CHECK(lim.exists);
        CHECK(lim.divergent.empty());
        CHECK(lim.limit.blocks[0].norm() <= 1e-14);
    }

    SECTION("positive weight diverges and is certified componentwise") {
        const auto lim = one_ps_limit(q, diag_generator(-1.0, 1.0), b);
        CHECK_FALSE(lim.exists);
        REQUIRE(lim.divergent.size() == 1);
        CHECK(lim.divergent[0].block == 0);
        CHECK(lim.divergent[0].row == 0);
        CHECK(lim.divergent[0].col == 0);
        CHECK(lim.divergent[0].weight == Catch::Approx(2.0));
        CHECK(lim.divergent[0].magnitude == Catch::Approx(1.0));
    }

    SECTION("zero weight survives unchanged") {
        const auto lim = one_ps_limit(q, diag_generator(1.0, 1.0), b);
        CHECK(lim.exists);
        CHECK((lim.limit.blocks[0] - b.blocks[0]).norm() <= 1e-14);
    }
}

TEST_CASE("orbit norm decreases and converges whenever the limit exists", "[one_ps]") {
    auto rng = make_rng(802);
    int existing = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto q = rand_model(rng, matrix_opts());
        const auto b = rand_point(rng, q);
        const auto gen = subspace_generator(q, rand_proper_dims(rng, q));
        const auto lim = one_ps_limit(q, gen.xi, b);
        if (!lim.exists) continue;
        ++existing;

        double prev = point_norm(one_ps_orbit(q, gen.xi, b, 0.0));
        for (int i = 1; i <= 10; ++i) {
            const double cur = point_norm(one_ps_orbit(q, gen.xi, b, 0.5 * i));
            REQUIRE(cur <= prev + 1e-9);
            prev = cur;
        }
        // At large t the orbit has settled onto the zero-weight part.
        ModelPoint far = one_ps_orbit(q, gen.xi, b, 10.0);
        for (std::size_t bl = 0; bl < far.blocks.size(); ++bl)
            far.blocks[bl] -= lim.limit.blocks[bl];
        REQUIRE(point_norm(far) <= 1e-8 * (1.0 + point_norm(b)));
    }
    CHECK(existing >= 10);  // the convergent branch must actually be exercised
}

TEST_CASE("squared orbit norm obeys the endpoint interpolation bound", "[one_ps]") {
    // For every Hermitian generator, |e^{t xi} b|^2 <= |b|^2 + |e^{xi} b|^2
    // on 0 <= t <= 1: each weight component interpolates monotonically
    // between its endpoint magnitudes.
    auto rng = make_rng(803);
    for (int trial = 0; trial < 100; ++trial) {
        const auto q = rand_model(rng, matrix_opts());
        const auto b = rand_point(rng, q);
        const auto xi = rand_lie(rng, q);

        const double n0 = point_norm(b);
        const double n1 = point_norm(one_ps_orbit(q, xi, b, 1.0));
        const double bound = n0 * n0 + n1 * n1;
        for (int i = 0; i <= 20; ++i) {
            const double t = i / 20.0;
            const double nt = point_norm(one_ps_orbit(q, xi, b, t));
            REQUIRE(nt * nt <= bound * (1.0 + 1e-12) + 1e-12);
        }
    }
}

TEST_CASE("weight function decreases onto the predicted limit", "[one_ps]") {
    auto rng = make_rng(804);
    int existing = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto q = rand_model(rng, matrix_opts());
        const auto b = rand_point(rng, q);
        const auto gen = subspace_generator(q, rand_proper_dims(rng, q));

        double prev = weight_function(q, gen.xi, b, 0.0);
        for (int i = 1; i <= 8; ++i) {
            const double cur = weight_function(q, gen.xi, b, 0.5 * i);
            REQUIRE(cur <= prev + 1e-9 * (1.0 + std::abs(prev)));
            prev = cur;
        }

        if (one_ps_limit(q, gen.xi, b).exists) {
            ++existing;
            const double want = weight_limit_prediction(q, gen.p);
            const double got = weight_function(q, gen.xi, b, 10.0);
            REQUIRE(std::abs(got - want) <= 1e-6 * std::max(1.0, std::abs(want)));
        }
    }
    CHECK(existing >= 10);
}

TEST_CASE("scalar weight function matches the closed form", "[one_ps]") {
    SECTION("zero levels: w(t) = e^{-4t}") {
        const auto q = scalar_model(Rational(0), Rational(0));
        const auto b = scalar_point(q, Cplx(1.0, 0.0));
        // Subspace spanned by the second vertex slot: closed under the arrow,
        // generator diag(+1, -1).
        const auto gen = subspace_generator(q, {0, 1});
        CHECK(gen.rank_f == 1);
        CHECK(gen.rank_perp == 1);
        CHECK(gen.p == Rational(0));
        CHECK((gen.xi.xi[0] - Mat::Constant(1, 1, Cplx(1.0, 0.0))).norm() <= 1e-15);
        CHECK((gen.xi.xi[1] - Mat::Constant(1, 1, Cplx(-1.0, 0.0))).norm() <= 1e-15);
        for (int i = 0; i <= 10; ++i) {
            const double t = 0.3 * i;
            CHECK(weight_function(q, gen.xi, b, t) ==
                  Catch::Approx(oracle_scalar_w(t)).margin(1e-10));
        }
        CHECK(weight_limit_prediction(q, gen.p) == 0.0);
    }

    SECTION("split levels at the critical point: w is the constant 4 pi") {
        const auto q = scalar_model(Rational(-1), Rational(1));
        const auto gen = subspace_generator(q, {0, 1});
        CHECK(gen.p == Rational(1));
        const double want = 2.0 * kTwoPi;  // 2 pi R p with R = 2, p = 1
        CHECK(weight_limit_prediction(q, gen.p) == Catch::Approx(want).margin(1e-12));
        for (int i = 0; i <= 4; ++i)
            CHECK(weight_function(q, gen.xi, zero_point(q), 1.5 * i) ==
                  Catch::Approx(want).margin(1e-10));
    }
}

TEST_CASE("generator construction validates its inputs", "[one_ps]") {
    const auto q = scalar_model(Rational(-1), Rational(1));

    SECTION("the generator is Hermitian with vanishing weighted trace") {
        const auto gen = subspace_generator(q, {1, 0});
        CHECK_NOTHROW(check_hermitian(q, gen.xi));
        CHECK(gen.p == Rational(-1));
        Cplx tr(0.0, 0.0);
        for (int k = 0; k < q.n_vertices(); ++k)
            tr += static_cast<double>(q.vertex(k).r) * gen.xi.xi[static_cast<std::size_t>(k)].trace();
        CHECK(std::abs(tr) <= 1e-12);
    }

    SECTION("non-Hermitian generators are rejected") {
        LieElement xi;
        xi.xi.push_back(Mat::Constant(1, 1, Cplx(0.0, 1.0)));
        xi.xi.push_back(Mat::Constant(1, 1, Cplx(0.0, -1.0)));
        CHECK_THROWS_AS(check_hermitian(q, xi), InputError);
        CHECK_THROWS_AS(one_ps_orbit(q, xi, zero_point(q), 1.0), InputError);
    }

    SECTION("subspace dimensions are validated") {
        try {
            subspace_generator(q, {1});
            FAIL("expected per-vertex dimension count to be enforced");
        } catch (const Error& err) {
            CHECK(err.code() == ErrorCode::ShapeMismatch);
        }
        try {
            subspace_generator(q, {2, 0});
            FAIL("expected out-of-range dimension to be rejected");
        } catch (const Error& err) {
            CHECK(err.code() == ErrorCode::OutOfRange);
        }
        CHECK_THROWS_AS(subspace_generator(q, {0, 0}), Error);  // empty
        CHECK_THROWS_AS(subspace_generator(q, {1, 1}), Error);  // everything
    }
}
