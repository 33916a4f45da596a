// pcrit — command-line driver for the stability toolkit.
//
// Subcommands:
//   ring-check    validate an intersection ring spec
//   p-value       evaluate the stability invariant of a bundle
//   classify      stability verdict against an admissible family
//   cone          linearized stability cone over coefficient directions
//   song          numerical solvability test for the J-equation of a line bundle
//   example-blp2  built-in two-parameter example on the blowup of P^2
//   flow          moment-map gradient flow on a quiver model
//   one-ps        one-parameter-subgroup orbits, limits and weight functions
//   oracle        brute-force verdict for multiplicity-one models
//
// Global: --output text|json.  Exit codes: 0 success, 1 computation error
// (with the error code named on stderr / in the JSON), 2 malformed input.
// Built-in names on the "blp2" ring: bundles L1, L2, E; classes omega, alpha;
// the curve cone; coefficient builders hym, ma, j, dhym, rescaled, charge.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pcrit/blp2.hpp"
#include "pcrit/bundle.hpp"
#include "pcrit/equation.hpp"
#include "pcrit/error.hpp"
#include "pcrit/flow.hpp"
#include "pcrit/json_io.hpp"
#include "pcrit/one_ps.hpp"
#include "pcrit/oracle.hpp"
#include "pcrit/quiver.hpp"
#include "pcrit/rational.hpp"
#include "pcrit/ring.hpp"
#include "pcrit/stability.hpp"

namespace {

using namespace pcrit;

struct Ctx {
    std::string output = "text";
    bool json() const { return output == "json"; }
};

void emit(const Ctx& ctx, const json& j, const std::string& text) {
    if (ctx.json()) std::cout << canonical_dump(j);
    else std::cout << text;
}

bool is_blp2_name(const std::string& s) { return s == "blp2"; }

RingPtr resolve_ring(const std::string& s) {
    if (is_blp2_name(s)) return IntersectionRing::blowup_p2();
    return IntersectionRing::from_spec(ring_spec_from_json(load_json_file(s)));
}

struct RingHandle {
    RingPtr ring;
    bool builtin = false;  // true iff the blp2 built-ins are available
};

RingHandle resolve_ring_handle(const std::string& s) {
    return {resolve_ring(s), is_blp2_name(s)};
}

BundleTopology resolve_bundle(const RingHandle& rh, const std::string& s) {
    if (rh.builtin) {
        if (s == "L1") return blp2_L1(rh.ring);
        if (s == "L2") return blp2_L2(rh.ring);
        if (s == "E") return blp2_E(rh.ring);
    }
    return bundle_from_json(rh.ring, load_json_file(s));
}

BundleTopology resolve_bundle_json(const RingHandle& rh, const json& v, const std::string& what) {
    if (v.is_string()) return resolve_bundle(rh, v.get<std::string>());
    if (v.is_object()) return bundle_from_json(rh.ring, v);
    throw InputError(what + " must be a bundle object or a name/path string");
}

CohomologyClass resolve_class(const RingHandle& rh, const std::string& s) {
    if (rh.builtin) {
        if (s == "omega") return blp2_omega(rh.ring);
        if (s == "alpha") return blp2_alpha(rh.ring);
    }
    return class_from_json(rh.ring, load_json_file(s), "class");
}

CurveCone resolve_cone(const RingHandle& rh, const std::string& s) {
    if (rh.builtin && s == "blp2") return blp2_curve_cone(rh.ring);
    return cone_from_json(rh.ring, load_json_file(s));
}

struct ZetaInputs {
    std::string omega = "omega";
    std::string alpha = "alpha";
    std::string total = "E";
    std::string charge_file;
    Rational eps1{0};
    Rational eps2{0};
};

EquationParams resolve_zeta(const RingHandle& rh, const std::string& s, const ZetaInputs& in,
                            const std::optional<BundleTopology>& total_override = {}) {
    const bool builder = (s == "hym" || s == "ma" || s == "j" || s == "dhym" ||
                          s == "rescaled" || s == "charge");
    if (!builder) return equation_from_json(rh.ring, load_json_file(s));

    const BundleTopology total =
        total_override ? *total_override : resolve_bundle(rh, in.total);
    if (s == "ma") return monge_ampere_params(rh.ring, total);
    const CohomologyClass omega = resolve_class(rh, in.omega);
    if (s == "hym") return hym_params(rh.ring, omega, total);
    if (s == "j") return j_equation_params(rh.ring, omega, total).params;
    if (s == "dhym") return dhym_params(rh.ring, omega, total);
    if (s == "rescaled") {
        const CohomologyClass alpha = resolve_class(rh, in.alpha);
        return dhym_surface_rescaled(rh.ring, omega, alpha, in.eps1, in.eps2, total).params;
    }
    // s == "charge": rho/omega/U from a file.
    if (in.charge_file.empty())
        throw InputError("builder 'charge' needs --charge FILE with {\"rho\", \"omega\", \"u\"}");
    const json j = load_json_file(in.charge_file);
    if (!j.is_object() || !j.contains("rho") || !j.at("rho").is_array() || !j.contains("omega") ||
        !j.contains("u") || !j.at("u").is_array())
        throw InputError("charge file must be {\"rho\": [complex], \"omega\": class, \"u\": [class]}");
    CentralCharge cc;
    for (const auto& r : j.at("rho")) cc.rho.push_back(gauss_from_json(r, "rho"));
    cc.omega = class_from_json(rh.ring, j.at("omega"), "omega");
    for (const auto& u : j.at("u")) cc.u.push_back(class_from_json(rh.ring, u, "u"));
    return central_charge_params(rh.ring, cc, total).params;
}

AdmissibleFamily resolve_family(const RingHandle& rh, const std::string& path) {
    const json j = load_json_file(path);
    if (!j.is_object() || !j.contains("total") || !j.contains("subs") || !j.at("subs").is_array())
        throw InputError("family must be {\"total\": bundle, \"subs\": [{\"name\",\"F\",...}]}");
    BundleTopology total = resolve_bundle_json(rh, j.at("total"), "total");
    std::vector<AdmissibleSub> subs;
    for (const auto& s : j.at("subs")) {
        if (!s.is_object() || !s.contains("name") || !s.at("name").is_string() || !s.contains("F"))
            throw InputError("subs entries must be {\"name\": str, \"F\": bundle, "
                             "\"complement_invariant\"?: bool}");
        AdmissibleSub sub;
        sub.name = s.at("name").get<std::string>();
        sub.f = resolve_bundle_json(rh, s.at("F"), "F of '" + sub.name + "'");
        if (s.contains("complement_invariant")) {
            if (!s.at("complement_invariant").is_boolean())
                throw InputError("complement_invariant must be a boolean");
            sub.complement_invariant = s.at("complement_invariant").get<bool>();
        }
        subs.push_back(std::move(sub));
    }
    return make_family(std::move(total), std::move(subs));
}

std::vector<Rational> parse_rational_list(const std::string& s) {
    std::vector<Rational> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty() && item.front() == ' ') item.erase(0, item.find_first_not_of(' '));
        out.push_back(parse_rational(item));
    }
    return out;
}

std::string verdict_text(const Verdict& v) {
    std::string t = "verdict: " + std::string(verdict_name(v.level)) + "\n";
    t += "values:\n";
    for (const auto& [name, p] : v.values) t += "  " + name + " = " + ext_to_string(p) + "\n";
    if (!v.witnesses.empty()) {
        t += "witnesses:\n";
        for (const auto& w : v.witnesses)
            t += "  " + w.name + " " + w.note + " (p = " + ext_to_string(w.p) + ")\n";
    }
    for (const auto& w : v.warnings) t += "warning: " + w + "\n";
    return t;
}

// ---------------------------------------------------------------------------

int cmd_ring_check(const Ctx& ctx, const std::string& ring_arg) {
    const RingPtr ring = resolve_ring(ring_arg);
    std::string text = "ring ok: dim " + std::to_string(ring->dim()) + ", " +
                       std::to_string(ring->size()) + " basis classes, fundamental '" +
                       ring->basis(ring->fundamental_index()).label + "'\n";
    for (int i = 0; i < ring->size(); ++i)
        text += "  " + ring->basis(i).label + "  (" + std::to_string(ring->basis(i).p) + "," +
                std::to_string(ring->basis(i).q) + ")\n";
    json j = ring_spec_to_json(ring);
    j["ok"] = true;
    emit(ctx, j, text);
    return 0;
}

int cmd_p_value(const Ctx& ctx, const std::string& ring_arg, const std::string& zeta_arg,
                const std::string& bundle_arg, const ZetaInputs& in) {
    const RingHandle rh = resolve_ring_handle(ring_arg);
    const EquationParams params = resolve_zeta(rh, zeta_arg, in);
    const BundleTopology f = resolve_bundle(rh, bundle_arg);
    const ExtScalar p = p_value(params, f);
    json j{{"p_value", ext_to_json(p)}};
    if (params.degenerate) j["warning"] = "equation coefficients all vanish";
    std::string text = ext_to_string(p) + "\n";
    if (params.degenerate) text += "warning: equation coefficients all vanish\n";
    emit(ctx, j, text);
    return 0;
}

int cmd_classify(const Ctx& ctx, const std::string& ring_arg, const std::string& zeta_arg,
                 const std::string& family_arg, bool simple, const ZetaInputs& in) {
    const RingHandle rh = resolve_ring_handle(ring_arg);
    const AdmissibleFamily family = resolve_family(rh, family_arg);
    // Builders must normalize against the family's total bundle, so it
    // overrides any --total here.
    const EquationParams params = resolve_zeta(rh, zeta_arg, in, family.total);
    const Verdict v = classify(params, family, simple);
    emit(ctx, verdict_to_json(v), verdict_text(v));
    return 0;
}

int cmd_cone(const Ctx& ctx, const std::string& ring_arg, const std::string& base_arg,
             const std::vector<std::string>& dir_args, const std::string& family_arg,
             const std::string& at_arg, const ZetaInputs& in) {
    const RingHandle rh = resolve_ring_handle(ring_arg);
    const AdmissibleFamily family = resolve_family(rh, family_arg);
    const EquationParams base = resolve_zeta(rh, base_arg, in, family.total);
    std::vector<EquationParams> dirs;
    std::vector<std::string> names;
    for (const auto& d : dir_args) {
        dirs.push_back(resolve_zeta(rh, d, in, family.total));
        names.push_back(d);
    }
    const PolyhedralCone cone = stability_cone(base, dirs, names, family);
    json j = cone_export_to_json(cone);
    std::string text = "stability cone: rows A t <= c\n";
    for (std::size_t i = 0; i < cone.rows.size(); ++i) {
        text += "  " + cone.rows[i] + ": ";
        for (std::size_t k = 0; k < cone.a[i].size(); ++k)
            text += (k ? ", " : "") + rational_to_string(cone.a[i][k]);
        text += "  <=  " + rational_to_string(cone.c[i]) + "\n";
    }
    if (!at_arg.empty()) {
        const std::vector<Rational> t = parse_rational_list(at_arg);
        const ConeMembership m = cone_membership(cone, t);
        const char* region = m.region == ConeRegion::Interior ? "Interior"
                             : m.region == ConeRegion::Boundary ? "Boundary"
                                                                : "Exterior";
        json jm{{"region", region}, {"binding", m.binding}, {"violating", m.violating}};
        j["membership"] = jm;
        text += std::string("membership: ") + region + "\n";
        for (const auto& r : m.binding) text += "  binding: " + r + "\n";
        for (const auto& r : m.violating) text += "  violating: " + r + "\n";
    }
    emit(ctx, j, text);
    return 0;
}

int cmd_song(const Ctx& ctx, const std::string& ring_arg, const std::string& omega_arg,
             const std::string& bundle_arg, const std::string& cone_arg) {
    const RingHandle rh = resolve_ring_handle(ring_arg);
    const CohomologyClass omega = resolve_class(rh, omega_arg);
    const BundleTopology line = resolve_bundle(rh, bundle_arg);
    const CurveCone cone = resolve_cone(rh, cone_arg);
    const SongCriterion s = song_j_solvable(rh.ring, omega, line, cone);
    json ratios = json::array();
    for (const auto& r : s.ratios) ratios.push_back(rational_to_string(r));
    json j{{"solvable", s.solvable},
           {"threshold", rational_to_string(s.threshold)},
           {"ratios", ratios}};
    std::string text = "threshold 2c_J = " + rational_to_string(s.threshold) + "\n";
    for (std::size_t i = 0; i < s.ratios.size(); ++i)
        text += "generator " + std::to_string(i) + ": ratio = " + rational_to_string(s.ratios[i]) +
                (s.ratios[i] < s.threshold ? "  (< threshold)" : "  (NOT < threshold)") + "\n";
    text += std::string("solvable: ") + (s.solvable ? "yes" : "no") + "\n";
    emit(ctx, j, text);
    return 0;
}

int cmd_example_blp2(const Ctx& ctx, const std::string& eps1_s, const std::string& eps2_s) {
    const Blp2Report r = blp2_classify(parse_rational(eps1_s), parse_rational(eps2_s));

    json j{{"eps1", rational_to_string(r.eps1)},
           {"eps2", rational_to_string(r.eps2)},
           {"A", rational_to_string(r.a)},
           {"p_L1", rational_to_string(r.p_l1)},
           {"c_J", rational_to_string(r.c_j)},
           {"c_HYM", rational_to_string(r.c_hym)},
           {"C", rational_to_string(r.c_ratio)},
           {"E0", {{"solvable", r.split_solvable}, {"report", verdict_to_json(r.split)}}},
           {"E1", {{"solvable", r.ext1_solvable}, {"report", verdict_to_json(r.ext1)}}},
           {"E2", {{"solvable", r.ext2_solvable}, {"report", verdict_to_json(r.ext2)}}}};
    json song = json::object();
    for (const auto& [name, s] : {std::pair{"L1", &r.song_l1}, std::pair{"L2", &r.song_l2}}) {
        json ratios = json::array();
        for (const auto& q : s->ratios) ratios.push_back(rational_to_string(q));
        song[name] = {{"solvable", s->solvable},
                      {"threshold", rational_to_string(s->threshold)},
                      {"ratios", ratios}};
    }
    j["song"] = song;

    std::string text;
    text += "A = " + rational_to_string(r.a) + "   (p_value(L1) = " + rational_to_string(r.p_l1) +
            " = 24/5 A)\n";
    text += "c_J = " + rational_to_string(r.c_j) + ", c_HYM = " + rational_to_string(r.c_hym) +
            ", C = " + rational_to_string(r.c_ratio) + "\n";
    auto line = [&](const char* name, bool solvable, const Verdict& v) {
        text += std::string(name) + ": " + verdict_name(v.level) + " -> " +
                (solvable ? "solvable" : "not solvable") + "\n";
        for (const auto& w : v.warnings) text += "  warning: " + w + "\n";
    };
    line("E0 = L1 + L2 (split)", r.split_solvable, r.split);
    line("E1 (extension, L1 sub)", r.ext1_solvable, r.ext1);
    line("E2 (extension, L2 sub)", r.ext2_solvable, r.ext2);
    auto song_line = [&](const char* name, const SongCriterion& s) {
        text += std::string("song ") + name + ": ratios {";
        for (std::size_t i = 0; i < s.ratios.size(); ++i)
            text += (i ? ", " : "") + rational_to_string(s.ratios[i]);
        text += "} vs 2c_J = " + rational_to_string(s.threshold) +
                (s.solvable ? "  -> solvable" : "  -> not solvable") + "\n";
    };
    song_line("L1", r.song_l1);
    song_line("L2", r.song_l2);
    emit(ctx, j, text);
    return 0;
}

int cmd_flow(const Ctx& ctx, const std::string& model_arg, const FlowOpts& opts,
             const std::string& trace_csv, bool with_trajectory) {
    const LoadedModel lm = model_from_json(load_json_file(model_arg));
    FlowOpts o = opts;
    o.record_trajectory = with_trajectory || !trace_csv.empty();
    const FlowResult r = flow(lm.model, lm.point, o);
    if (!trace_csv.empty()) save_text_file(trace_csv, trajectory_to_csv(r.trajectory));

    json j = flow_result_to_json(lm.model, r, with_trajectory && ctx.json());
    std::string text;
    text += std::string("converged: ") + (r.converged ? "yes" : "no") + " (" + r.stop_reason + ")\n";
    text += "t_final = " + format_double(r.t_final) + ", steps = " + std::to_string(r.steps) + "\n";
    text += "final energy = " + format_double(r.final_energy) +
            ", final grad norm = " + format_double(r.final_grad_norm) + "\n";
    const auto& c = r.classification;
    if (c.critical) {
        if (c.mu_zero) {
            text += "limit: moment map vanishes (|mu| = " + format_double(c.mu_norm) + ")\n";
            text += "graded pieces by vertex support:\n";
            for (const auto& comp : c.graded) {
                text += "  {";
                for (std::size_t i = 0; i < comp.size(); ++i)
                    text += (i ? ", " : "") + std::to_string(comp[i]);
                text += "}\n";
            }
        } else {
            text += "limit: moment map does not vanish (|mu| = " + format_double(c.mu_norm) + ")\n";
            text += "destabilizing filtration (slope, dims per vertex):\n";
            for (const auto& hn : c.filtration) {
                text += "  slope " + format_double(hn.slope) + "  dims [";
                for (std::size_t i = 0; i < hn.dims.size(); ++i)
                    text += (i ? ", " : "") + std::to_string(hn.dims[i]);
                text += "]\n";
            }
        }
    } else {
        text += "limit: " + c.note + "\n";
    }

    if (!r.converged) {
        json err{{"error",
                  {{"code", "NoConvergence"},
                   {"message", "flow stopped at t = " + format_double(r.t_final) + " (" +
                                   r.stop_reason + ")"}}}};
        err["result"] = j;
        emit(ctx, err, text);
        std::cerr << "error: NoConvergence: flow stopped before the gradient tolerance ("
                  << r.stop_reason << ")\n";
        return 1;
    }
    emit(ctx, j, text);
    return 0;
}

int cmd_one_ps(const Ctx& ctx, const std::string& model_arg, const std::string& xi_arg,
               const std::string& subspace_arg, std::optional<double> t_arg, bool limit_flag,
               const std::string& weights_arg, double tol) {
    const LoadedModel lm = model_from_json(load_json_file(model_arg));
    LieElement xi;
    std::optional<Rational> subspace_p;
    if (!subspace_arg.empty()) {
        std::vector<int> dims;
        for (const auto& q : parse_rational_list(subspace_arg)) {
            const Int num = boost::multiprecision::numerator(q);
            if (boost::multiprecision::denominator(q) != 1)
                throw InputError("--subspace takes integer dimensions");
            dims.push_back(num.convert_to<int>());
        }
        const SubspaceGenerator gen = subspace_generator(lm.model, dims);
        xi = gen.xi;
        subspace_p = gen.p;
    } else if (!xi_arg.empty()) {
        xi = lie_from_json(lm.model, load_json_file(xi_arg));
        check_hermitian(lm.model, xi);
    } else {
        throw InputError("one-ps needs --xi FILE or --subspace dims");
    }

    json j = json::object();
    std::string text;
    if (subspace_p) {
        j["subspace_p_value"] = rational_to_string(*subspace_p);
        j["weight_limit_prediction"] = weight_limit_prediction(lm.model, *subspace_p);
        text += "subspace p_value = " + rational_to_string(*subspace_p) +
                ", predicted weight limit 2 pi R p = " +
                format_double(weight_limit_prediction(lm.model, *subspace_p)) + "\n";
    }
    if (t_arg) {
        const ModelPoint bt = one_ps_orbit(lm.model, xi, lm.point, *t_arg);
        j["orbit_t"] = *t_arg;
        j["orbit"] = model_to_json(lm.model, bt).at("point");
        text += "orbit at t = " + format_double(*t_arg) + ":\n" +
                canonical_dump(model_to_json(lm.model, bt).at("point"));
    }
    if (limit_flag) {
        const OnePsLimit lim = one_ps_limit(lm.model, xi, lm.point, tol);
        j["limit_exists"] = lim.exists;
        if (lim.exists) {
            j["limit"] = model_to_json(lm.model, lim.limit).at("point");
            const LieElement mu = moment_map(lm.model, lim.limit);
            double w_inf = 0.0;
            const Cplx mi(0.0, -1.0);
            for (int k = 0; k < lm.model.n_vertices(); ++k)
                w_inf += lm.model.vertex(k).r *
                         (mu.xi[static_cast<std::size_t>(k)] * (mi * xi.xi[static_cast<std::size_t>(k)]))
                             .trace()
                             .real();
            j["weight_at_limit"] = w_inf;
            text += "limit exists\nweight at limit = " + format_double(w_inf) + "\n";
        } else {
            json div = json::array();
            for (const auto& d : lim.divergent)
                div.push_back(json{{"block", d.block},
                                   {"row", d.row},
                                   {"col", d.col},
                                   {"weight", d.weight},
                                   {"magnitude", d.magnitude}});
            j["divergent"] = div;
            text += "limit does not exist; divergent components:\n";
            for (const auto& d : lim.divergent)
                text += "  block " + std::to_string(d.block) + " (" + std::to_string(d.row) + "," +
                        std::to_string(d.col) + ") weight " + format_double(d.weight) + "\n";
        }
    }
    if (!weights_arg.empty()) {
        json ws = json::array();
        text += "weight function:\n";
        for (const auto& q : parse_rational_list(weights_arg)) {
            const double tv = to_double(q);
            const double w = weight_function(lm.model, xi, lm.point, tv);
            ws.push_back(json::array({tv, w}));
            text += "  w(" + format_double(tv) + ") = " + format_double(w) + "\n";
        }
        j["weights"] = ws;
    }
    emit(ctx, j, text);
    return 0;
}

int cmd_oracle(const Ctx& ctx, const std::string& model_arg, bool flow_check,
               const FlowOpts& opts) {
    const LoadedModel lm = model_from_json(load_json_file(model_arg));
    const OracleVerdict v = brute_force_verdict(lm.model, lm.point);
    json wit = json::array();
    std::string text = std::string("verdict: ") + verdict_name(v.level) + "\n";
    for (const auto& w : v.witnesses) {
        wit.push_back(json{{"subset", w.subset},
                           {"p", rational_to_string(w.p)},
                           {"complement_closed", w.complement_closed}});
        text += "  subset {";
        for (std::size_t i = 0; i < w.subset.size(); ++i)
            text += (i ? ", " : "") + std::to_string(w.subset[i]);
        text += "} p = " + rational_to_string(w.p) +
                (w.p == 0 ? (w.complement_closed ? " (binding, splits)" : " (binding)") : "") + "\n";
    }
    json j{{"verdict", verdict_name(v.level)}, {"witnesses", wit}};
    if (flow_check) {
        const FlowVerdict fv = flow_verdict(lm.model, lm.point, opts);
        const bool agree =
            (v.level == VerdictLevel::Stable ? VerdictLevel::Polystable : v.level) == fv.level;
        j["flow_verdict"] = verdict_name(fv.level);
        j["agrees"] = agree;
        text += std::string("flow verdict: ") + verdict_name(fv.level) +
                (agree ? " (agrees)" : " (DISAGREES)") + "\n";
    }
    emit(ctx, j, text);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"stability invariants and moment-map flows"};
    app.require_subcommand(1);
    app.fallthrough();

    Ctx ctx;
    app.add_option("--output", ctx.output, "output format: text or json")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();

    std::string ring_arg = "blp2";
    std::string zeta_arg, bundle_arg, family_arg, omega_arg = "omega", cone_arg = "blp2";
    std::string base_arg, at_arg;
    std::vector<std::string> dir_args;
    ZetaInputs zin;
    std::string eps1_s = "0", eps2_s = "0";
    bool simple = false;

    auto* ring_check = app.add_subcommand("ring-check", "validate an intersection ring");
    ring_check->add_option("--ring", ring_arg, "ring name or spec file")->capture_default_str();

    auto add_zeta_inputs = [&](CLI::App* cmd) {
        cmd->add_option("--omega", zin.omega, "Kaehler class (name or file)")->capture_default_str();
        cmd->add_option("--alpha", zin.alpha, "deformation direction (name or file)")
            ->capture_default_str();
        cmd->add_option("--eps1", eps1_s, "first deformation parameter (rational)")
            ->capture_default_str();
        cmd->add_option("--eps2", eps2_s, "second deformation parameter (rational)")
            ->capture_default_str();
        cmd->add_option("--charge", zin.charge_file, "central charge file for builder 'charge'");
    };

    auto* p_value_cmd = app.add_subcommand("p-value", "evaluate the stability invariant");
    p_value_cmd->add_option("--ring", ring_arg, "ring name or spec file")->capture_default_str();
    p_value_cmd->add_option("--zeta", zeta_arg, "builder name or equation file")->required();
    p_value_cmd->add_option("--bundle", bundle_arg, "bundle name or file")->required();
    p_value_cmd->add_option("--total", zin.total, "bundle the builder normalizes against")
        ->capture_default_str();
    add_zeta_inputs(p_value_cmd);

    auto* classify_cmd = app.add_subcommand("classify", "stability verdict for a family");
    classify_cmd->add_option("--ring", ring_arg, "ring name or spec file")->capture_default_str();
    classify_cmd->add_option("--zeta", zeta_arg, "builder name or equation file")->required();
    classify_cmd->add_option("--family", family_arg, "admissible family file")->required();
    classify_cmd->add_flag("--simple", simple, "assert the total bundle is simple");
    add_zeta_inputs(classify_cmd);

    auto* cone_cmd = app.add_subcommand("cone", "linearized stability cone");
    cone_cmd->add_option("--ring", ring_arg, "ring name or spec file")->capture_default_str();
    cone_cmd->add_option("--base", base_arg, "base coefficients (builder or file)")->required();
    cone_cmd->add_option("--direction", dir_args, "direction (builder or file); repeatable")
        ->required();
    cone_cmd->add_option("--family", family_arg, "admissible family file")->required();
    cone_cmd->add_option("--at", at_arg, "membership point: comma-separated rationals");
    add_zeta_inputs(cone_cmd);

    auto* song_cmd = app.add_subcommand("song", "J-equation solvability for a line bundle");
    song_cmd->add_option("--ring", ring_arg, "ring name or spec file")->capture_default_str();
    song_cmd->add_option("--omega", omega_arg, "Kaehler class (name or file)")->capture_default_str();
    song_cmd->add_option("--bundle", bundle_arg, "line bundle name or file")->required();
    song_cmd->add_option("--cone", cone_arg, "curve cone (\"blp2\" or file)")->capture_default_str();

    auto* example_cmd = app.add_subcommand("example-blp2", "built-in two-parameter example");
    example_cmd->add_option("--eps1", eps1_s, "rational in [0,1]")->capture_default_str();
    example_cmd->add_option("--eps2", eps2_s, "rational in (-1/2, 1)")->capture_default_str();

    FlowOpts fopts;
    std::string model_arg, trace_csv;
    bool with_trajectory = false;
    auto* flow_cmd = app.add_subcommand("flow", "moment-map gradient flow");
    flow_cmd->add_option("--model", model_arg, "model file")->required();
    flow_cmd->add_option("--dt0", fopts.dt0, "initial step")->capture_default_str();
    flow_cmd->add_option("--dt-max", fopts.dt_max, "step-size cap")->capture_default_str();
    flow_cmd->add_option("--tmax", fopts.t_max, "time horizon")->capture_default_str();
    flow_cmd->add_option("--grad-tol", fopts.grad_tol, "gradient stopping tolerance")
        ->capture_default_str();
    flow_cmd->add_option("--cluster-tol", fopts.eig_cluster_tol, "eigenvalue clustering tolerance")
        ->capture_default_str();
    flow_cmd->add_option("--support-floor", fopts.support_floor, "block support threshold")
        ->capture_default_str();
    flow_cmd->add_option("--trace-csv", trace_csv, "write the trajectory as CSV (t,f,grad_norm)");
    flow_cmd->add_flag("--trajectory", with_trajectory, "include the trajectory in JSON output");

    std::string xi_arg, subspace_arg, weights_arg;
    double t_val = 0.0;
    bool limit_flag = false;
    double ops_tol = 1e-10;
    auto* ops_cmd = app.add_subcommand("one-ps", "one-parameter subgroup analysis");
    ops_cmd->add_option("--model", model_arg, "model file")->required();
    ops_cmd->add_option("--xi", xi_arg, "Hermitian generator file {\"xi\": [...]}");
    ops_cmd->add_option("--subspace", subspace_arg,
                        "comma-separated subspace dimensions per vertex (builds xi_F)");
    auto* t_opt = ops_cmd->add_option("--t", t_val, "evaluate the orbit at this time");
    ops_cmd->add_flag("--limit", limit_flag, "compute the t -> infinity limit");
    ops_cmd->add_option("--weights", weights_arg, "comma-separated times to sample w(t)");
    ops_cmd->add_option("--tol", ops_tol, "weight/zero tolerance")->capture_default_str();

    bool flow_check = false;
    auto* oracle_cmd = app.add_subcommand("oracle", "brute-force verdict (multiplicity one)");
    oracle_cmd->add_option("--model", model_arg, "model file")->required();
    oracle_cmd->add_flag("--flow-check", flow_check, "also run the flow and compare");
    oracle_cmd->add_option("--tmax", fopts.t_max, "flow time horizon")->capture_default_str();
    oracle_cmd->add_option("--dt-max", fopts.dt_max, "flow step-size cap")->capture_default_str();
    oracle_cmd->add_option("--cluster-tol", fopts.eig_cluster_tol, "classification tolerance")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    }

    try {
        zin.eps1 = parse_rational(eps1_s);
        zin.eps2 = parse_rational(eps2_s);
        if (ring_check->parsed()) return cmd_ring_check(ctx, ring_arg);
        if (p_value_cmd->parsed()) return cmd_p_value(ctx, ring_arg, zeta_arg, bundle_arg, zin);
        if (classify_cmd->parsed())
            return cmd_classify(ctx, ring_arg, zeta_arg, family_arg, simple, zin);
        if (cone_cmd->parsed())
            return cmd_cone(ctx, ring_arg, base_arg, dir_args, family_arg, at_arg, zin);
        if (song_cmd->parsed()) return cmd_song(ctx, ring_arg, omega_arg, bundle_arg, cone_arg);
        if (example_cmd->parsed()) return cmd_example_blp2(ctx, eps1_s, eps2_s);
        if (flow_cmd->parsed()) return cmd_flow(ctx, model_arg, fopts, trace_csv, with_trajectory);
        if (ops_cmd->parsed())
            return cmd_one_ps(ctx, model_arg, xi_arg, subspace_arg,
                              t_opt->count() ? std::optional<double>(t_val) : std::nullopt,
                              limit_flag, weights_arg, ops_tol);
        if (oracle_cmd->parsed()) return cmd_oracle(ctx, model_arg, flow_check, fopts);
        std::cerr << "input error: no subcommand\n";
        return 2;
    } catch (const pcrit::InputError& e) {
        if (ctx.json())
            std::cout << canonical_dump(json{{"error", {{"code", "InputError"},
                                                        {"message", e.what()}}}});
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const pcrit::Error& e) {
        if (ctx.json())
            std::cout << canonical_dump(json{
                {"error", {{"code", error_code_name(e.code())}, {"message", e.message()}}}});
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        if (ctx.json())
            std::cout << canonical_dump(json{{"error", {{"code", "InternalError"},
                                                        {"message", e.what()}}}});
        std::cerr << "error: InternalError: " << e.what() << "\n";
        return 1;
    }
}
