// Polynomial curvature equations and their topological invariant.
//
// An equation on an n-fold is a coefficient vector zeta = (zeta_0, ..., zeta_n)
// with zeta_k a class of bidegree (n-k, n-k); the associated invariant of a
// bundle F is
//
//     p_value(zeta, F) = sum_k  k! * Integral( zeta_k . ch_k(F) ).
//
// Any bundle carrying a solution of the corresponding curvature equation has
// p_value zero, which is why every builder below normalizes its zeta so that
// p_value(zeta, E) == 0 holds exactly for the input bundle E.  Coefficients
// live in the quadratic extension Q(1/|Z|) so the normalization is exact even
// for the central-charge families.
//
// Builders:
//   hym_params                  Hermite-Einstein: zeta_1 = omega^{n-1},
//                               zeta_0 = -(omega^{n-1}.ch_1(E))/(rank * omega^n) * omega^n.
//   monge_ampere_params         zeta_n = 1, zeta_0 = -(n!/rank) * ch_n(E).
//   j_equation_params           zeta_n = c * 1, zeta_{n-1} = -omega, with the
//                               constant c fixed by the normalization.
//   dhym_params                 deformed Hermite-Yang-Mills from the charge
//                               Z = n! * Integral( i^n e^{-i omega} ch(E) )_top.
//   central_charge_params       general polynomial central charge
//                               Z(E) = sum rho_i Integral( omega^i U ch(E) ).
//   dhym_surface_rescaled       two-parameter surface family interpolating
//                               the J-equation (eps1 = 0) and the deformed
//                               equation, over a shifted Kaehler class.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pcrit/bundle.hpp"
#include "pcrit/error.hpp"
#include "pcrit/rational.hpp"
#include "pcrit/ring.hpp"

namespace pcrit {

struct EquationParams {
    std::vector<ExtClass> zeta;  // zeta[k] homogeneous of total degree 2(n-k)
    std::string normalization;   // human-readable note on how zeta_0 was fixed
    bool degenerate = false;     // true when every zeta_k vanished (warning)

    const RingPtr& ring() const {
        if (zeta.empty()) throw Error(ErrorCode::InternalError, "equation has no coefficients");
        return zeta.front().ring();
    }
};

inline void check_params(const EquationParams& params) {
    const auto& ring = params.ring();
    const int n = ring->dim();
    if (static_cast<int>(params.zeta.size()) != n + 1)
        throw Error(ErrorCode::DegreeMismatch,
                    "equation needs dim+1 coefficient classes, got " +
                    std::to_string(params.zeta.size()));
    for (int k = 0; k <= n; ++k) {
        const auto& z = params.zeta[static_cast<std::size_t>(k)];
        if (z.ring().get() != ring.get())
            throw Error(ErrorCode::RingMismatch, "equation coefficients mix rings");
        if (!z.is_homogeneous_of(2 * (n - k)))
            throw Error(ErrorCode::WrongDegree,
                        "zeta_" + std::to_string(k) + " must be homogeneous of degree " +
                        std::to_string(2 * (n - k)));
    }
}

inline ExtScalar p_value(const EquationParams& params, const BundleTopology& f) {
    check_params(params);
    const auto& ring = params.ring();
    if (f.ring().get() != ring.get())
        throw Error(ErrorCode::RingMismatch, "bundle lives on a different ring");
    const int n = ring->dim();
    if (static_cast<int>(f.ch.size()) != n + 1)
        throw Error(ErrorCode::DegreeMismatch, "bundle has the wrong number of components");
    ExtScalar total(Rational(0));
    Int kfac = 1;
    for (int k = 0; k <= n; ++k) {
        if (k > 0) kfac *= k;
        const ExtClass prod = params.zeta[static_cast<std::size_t>(k)] *
                              ext_class(f.ch[static_cast<std::size_t>(k)]);
        total += ExtScalar(Rational(kfac)) * prod.integrate();
    }
    return total;
}

// Convenience for the all-rational families (cones, closed-form checks).
inline Rational p_value_rational(const EquationParams& params, const BundleTopology& f) {
    return p_value(params, f).rational_value();
}

// ---------------------------------------------------------------------------
// Builders.

inline EquationParams hym_params(const RingPtr& ring, const CohomologyClass& omega,
                                 const BundleTopology& e) {
    if (!omega.is_homogeneous_of(2))
        throw Error(ErrorCode::WrongDegree, "Kaehler class must be homogeneous of degree 2");
    const int n = ring->dim();
    const Rational vol = omega.power(n).integrate();
    if (vol == 0 || e.rank == 0)
        throw Error(ErrorCode::DegenerateVolume,
                    "Hermite-Einstein normalization needs omega^n and rank nonzero");
    const Rational slope_num = (omega.power(n - 1) * chern_component(e, 1)).integrate();
    const Rational c = slope_num / (Rational(e.rank) * vol);

    EquationParams p;
    p.zeta.assign(static_cast<std::size_t>(n) + 1, ExtClass(ring));
    p.zeta[1] = ext_class(omega.power(n - 1));
    p.zeta[0] = ext_class(omega.power(n) * (-c));
    p.normalization =
        "zeta_0 = -(omega^{n-1}.ch_1(E)) / (rank(E) * omega^n) * omega^n";
    return p;
}

// zeta_n = 1 and zeta_0 = -(n!/rank) * ch_n(E); dividing by the rank is what
// makes p_value(zeta, E) vanish for bundles of any rank.
inline EquationParams monge_ampere_params(const RingPtr& ring, const BundleTopology& e) {
    const int n = ring->dim();
    if (e.rank == 0)
        throw Error(ErrorCode::DegenerateVolume, "normalization needs a nonzero rank");
    EquationParams p;
    p.zeta.assign(static_cast<std::size_t>(n) + 1, ExtClass(ring));
    p.zeta[static_cast<std::size_t>(n)] = ext_class(CohomologyClass::unit(ring));
    p.zeta[0] = ext_class(chern_component(e, n) * (-Rational(factorial(n)) / e.rank));
    p.normalization = "zeta_0 = -(n!/rank(E)) * ch_n(E)";
    return p;
}

struct JEquation {
    EquationParams params;
    Rational constant; // the J-constant c = (omega.ch_{n-1}) / (n * ch_n)
};

inline JEquation j_equation_params(const RingPtr& ring, const CohomologyClass& omega,
                                   const BundleTopology& e) {
    if (!omega.is_homogeneous_of(2))
        throw Error(ErrorCode::WrongDegree, "Kaehler class must be homogeneous of degree 2");
    const int n = ring->dim();
    const Rational top = chern_component(e, n).integrate();
    const Rational mixed = (omega * chern_component(e, n - 1)).integrate();
    if (top <= 0 || mixed <= 0)
        throw Error(ErrorCode::PositivityViolated,
                    "J-equation needs Integral(ch_n) > 0 and Integral(omega.ch_{n-1}) > 0");
    const Rational c = mixed / (Rational(n) * top);

    JEquation j;
    j.constant = c;
    j.params.zeta.assign(static_cast<std::size_t>(n) + 1, ExtClass(ring));
    j.params.zeta[static_cast<std::size_t>(n)] = ext_class(CohomologyClass::unit(ring) * c);
    j.params.zeta[static_cast<std::size_t>(n - 1)] = ext_class(-omega);
    j.params.normalization =
        "zeta_n = c * 1 with c = (omega.ch_{n-1}(E)) / (n * ch_n(E))";
    return j;
}

// Z(E) = n! * Integral( i^n e^{-i omega} ch(E) )_{(n,n)}
//      = sum_k (n!/k!) i^{n-k} Integral( omega^k . ch_{n-k}(E) ).
inline GaussRational dhym_central_charge(const RingPtr& ring, const CohomologyClass& omega,
                                         const BundleTopology& e) {
    if (!omega.is_homogeneous_of(2))
        throw Error(ErrorCode::WrongDegree, "Kaehler class must be homogeneous of degree 2");
    const int n = ring->dim();
    GaussRational z;
    for (int k = 0; k <= n; ++k) {
        const Rational coeff = Rational(factorial(n)) / Rational(factorial(k));
        const Rational pairing = (omega.power(k) * chern_component(e, n - k)).integrate();
        z = z + GaussRational(coeff * pairing).times_i_pow(n - k);
    }
    return z;
}

// Coefficients zeta_k = C(n,k) * Im(conj(Z) i^k) / |Z| * omega^{n-k}.  The
// 1/|Z| factor is irrational in general; it is carried exactly as the
// generator of Q(1/|Z|) with (1/|Z|)^2 = 1/(Z.conj(Z)).
inline EquationParams dhym_params(const RingPtr& ring, const CohomologyClass& omega,
                                  const BundleTopology& e) {
    const int n = ring->dim();
    const GaussRational z = dhym_central_charge(ring, omega, e);
    if (z.is_zero())
        throw Error(ErrorCode::VanishingCharge, "central charge Z(E) vanishes");
    const Rational tau2 = Rational(1) / z.norm2();

    EquationParams p;
    p.zeta.assign(static_cast<std::size_t>(n) + 1, ExtClass(ring));
    for (int k = 0; k <= n; ++k) {
        // Im(conj(Z) i^k) cycles through {-Im Z, Re Z, Im Z, -Re Z}.
        Rational s;
        switch (((k % 4) + 4) % 4) {
            case 0: s = -z.im; break;
            case 1: s = z.re; break;
            case 2: s = z.im; break;
            default: s = -z.re; break;
        }
        const ExtScalar coeff = ExtScalar::with_root(Rational(0), Rational(binomial(n, k)) * s, tau2);
        p.zeta[static_cast<std::size_t>(k)] = ext_class(omega.power(n - k)) * coeff;
    }
    p.normalization = "zeta_k = C(n,k) * Im(conj(Z) i^k)/|Z| * omega^{n-k}";
    return p;
}

// General polynomial central charge: rho is a Gaussian-rational coefficient
// vector, U_j an auxiliary class of degree 2j with U_0 = 1.
struct CentralCharge {
    std::vector<GaussRational> rho; // size n+1
    CohomologyClass omega;
    std::vector<CohomologyClass> u; // size n+1, U_0 the unit
};

struct CentralChargeParams {
    EquationParams params;
    GaussRational z;
};

inline CentralChargeParams central_charge_params(const RingPtr& ring, const CentralCharge& cc,
                                                 const BundleTopology& e) {
    const int n = ring->dim();
    if (static_cast<int>(cc.rho.size()) != n + 1 || static_cast<int>(cc.u.size()) != n + 1)
        throw Error(ErrorCode::DegreeMismatch, "central charge needs dim+1 rho and U entries");
    if (!cc.omega.is_homogeneous_of(2))
        throw Error(ErrorCode::WrongDegree, "Kaehler class must be homogeneous of degree 2");
    if (cc.u[0] != CohomologyClass::unit(ring))
        throw Error(ErrorCode::WrongDegree, "U_0 must be the unit class");
    for (int j = 0; j <= n; ++j)
        if (!cc.u[static_cast<std::size_t>(j)].is_homogeneous_of(2 * j))
            throw Error(ErrorCode::WrongDegree,
                        "U_" + std::to_string(j) + " must be homogeneous of degree " +
                        std::to_string(2 * j));

    // I_i = sum_j Integral( omega^i . U_j . ch_{n-i-j}(E) ).
    std::vector<Rational> pairing(static_cast<std::size_t>(n) + 1, Rational(0));
    for (int i = 0; i <= n; ++i) {
        const CohomologyClass wi = cc.omega.power(i);
        for (int j = 0; j + i <= n; ++j)
            pairing[static_cast<std::size_t>(i)] +=
                (wi * cc.u[static_cast<std::size_t>(j)] * chern_component(e, n - i - j)).integrate();
    }
    GaussRational z;
    for (int i = 0; i <= n; ++i)
        z = z + cc.rho[static_cast<std::size_t>(i)] * pairing[static_cast<std::size_t>(i)];
    if (z.is_zero())
        throw Error(ErrorCode::VanishingCharge, "central charge Z(E) vanishes");
    const Rational tau2 = Rational(1) / z.norm2();

    // w_l = sum_i Im(conj(rho_i) rho_l) I_i; then
    // zeta_k = (1/(k! |Z|)) sum_l w_l omega^l . U_{n-k-l}.
    CentralChargeParams out;
    out.z = z;
    out.params.zeta.assign(static_cast<std::size_t>(n) + 1, ExtClass(ring));
    std::vector<Rational> w(static_cast<std::size_t>(n) + 1, Rational(0));
    for (int l = 0; l <= n; ++l)
        for (int i = 0; i <= n; ++i) {
            const GaussRational prod = cc.rho[static_cast<std::size_t>(i)].conj() *
                                       cc.rho[static_cast<std::size_t>(l)];
            w[static_cast<std::size_t>(l)] += prod.im * pairing[static_cast<std::size_t>(i)];
        }
    bool all_zero = true;
    for (int k = 0; k <= n; ++k) {
        CohomologyClass acc(ring);
        for (int l = 0; l + k <= n; ++l)
            acc = acc + cc.omega.power(l) * cc.u[static_cast<std::size_t>(n - k - l)] *
                            w[static_cast<std::size_t>(l)];
        const ExtScalar scale =
            ExtScalar::with_root(Rational(0), Rational(1) / Rational(factorial(k)), tau2);
        out.params.zeta[static_cast<std::size_t>(k)] = ext_class(acc) * scale;
        if (!out.params.zeta[static_cast<std::size_t>(k)].is_zero()) all_zero = false;
    }
    out.params.degenerate = all_zero;
    out.params.normalization =
        "zeta_k = 1/(k! |Z|) sum_l Im(conj(rho_i) rho_l) (omega^i.U_j.ch(E)) omega^l.U_{n-k-l}";
    if (all_zero)
        out.params.normalization += " [degenerate: all coefficients vanish]";
    return out;
}

// Two-parameter rescaled family on a surface over omega_eps = omega + eps2 * alpha:
//   zeta_2 = cJ * 1,  zeta_1 = -(1 - C eps1^2) omega_eps,  zeta_0 = -C eps1^2 cHYM omega_eps^2
// with cJ = (omega_eps.ch_1)/(2 ch_2), cHYM = (omega_eps.ch_1)/(omega_eps^2 rank),
// C = (omega_eps^2 rank)/(2 ch_2).  At eps1 = 0 this is the J-equation scaled
// by cJ; the identity cJ = C * cHYM makes p_value(zeta, E) = 0 for all eps1.
struct SurfaceRescaled {
    EquationParams params;
    CohomologyClass omega_eps;
    Rational c_j;
    Rational c_hym;
    Rational c_ratio; // C above
};

inline SurfaceRescaled dhym_surface_rescaled(const RingPtr& ring, const CohomologyClass& omega,
                                             const CohomologyClass& alpha, const Rational& eps1,
                                             const Rational& eps2, const BundleTopology& e) {
    if (ring->dim() != 2)
        throw Error(ErrorCode::WrongDegree, "rescaled family is defined on surfaces only");
    if (!omega.is_homogeneous_of(2) || !alpha.is_homogeneous_of(2))
        throw Error(ErrorCode::WrongDegree, "omega and alpha must be homogeneous of degree 2");

    SurfaceRescaled out;
    out.omega_eps = omega + alpha * eps2;
    const Rational vol = (out.omega_eps * out.omega_eps).integrate();
    const Rational top = chern_component(e, 2).integrate();
    const Rational mixed = (out.omega_eps * chern_component(e, 1)).integrate();
    if (vol <= 0 || top <= 0 || mixed <= 0)
        throw Error(ErrorCode::PositivityViolated,
                    "rescaled family needs omega_eps^2, ch_2(E) and omega_eps.ch_1(E) positive");

    out.c_j = mixed / (2 * top);
    out.c_hym = mixed / (vol * e.rank);
    out.c_ratio = (vol * e.rank) / (2 * top);

    const Rational e1sq = eps1 * eps1;
    out.params.zeta.assign(3, ExtClass(ring));
    out.params.zeta[2] = ext_class(CohomologyClass::unit(ring) * out.c_j);
    out.params.zeta[1] = ext_class(out.omega_eps * -(Rational(1) - out.c_ratio * e1sq));
    out.params.zeta[0] =
        ext_class((out.omega_eps * out.omega_eps) * -(out.c_ratio * e1sq * out.c_hym));
    out.params.normalization =
        "zeta = (c_J, -(1 - C eps1^2) omega_eps, -C eps1^2 c_HYM omega_eps^2), c_J = C c_HYM";
    return out;
}

} // namespace pcrit
