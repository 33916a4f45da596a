// JSON (de)serialization for every on-disk format, plus CSV trajectories.
//
// Conventions shared by all formats:
//   - rationals are strings "num/den" in lowest terms ("num" when den == 1);
//   - complex rationals are {"re": "...", "im": "..."};
//   - values in the quadratic extension Q(sqrt(tau2)) serialize as the string
//     form when rational and as {"rat", "ext", "tau2"} otherwise;
//   - nlohmann::json's default object (std::map) keeps keys sorted, so
//     dump(2) is canonical and load/save round-trips are byte-identical;
//   - floating-point numbers print with 12 significant digits.
//
// Formats:
//   ring      {"dim", "basis": [{"label","p","q"}], "products":
//              [{"a","b","result": {label: rat}}], "fundamental"}
//   class     {label: rat}
//   bundle    {"rank", "ch": {"0": rat, "1": {label: rat}, ...}}
//              ("0" is the scalar ch_0 = rank; higher keys are classes)
//   cone      [class, class, ...]
//   equation  {"zeta": {"0": class-like, ...}, "normalization": note}
//   family    {"total": bundle-or-name, "subs": [{"name","F",
//              "complement_invariant"?}]}
//   model     {"vertices": [{"r","m","p"}], "arrows": [{"src","dst","count"}],
//              "point": {"i-j-a": [[[re,im], ...], ...]}}  (0-based indices)
//   lie       {"xi": [[[re,im], ...] per vertex]}

#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pcrit/bundle.hpp"
#include "pcrit/equation.hpp"
#include "pcrit/error.hpp"
#include "pcrit/flow.hpp"
#include "pcrit/quiver.hpp"
#include "pcrit/rational.hpp"
#include "pcrit/ring.hpp"
#include "pcrit/stability.hpp"

namespace pcrit {

using json = nlohmann::json;

// 12 significant digits for every floating-point value we print.
inline std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

inline json parse_json(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw InputError("malformed JSON");
    return j;
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_json(buf.str());
}

inline void save_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << text;
}

inline std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Scalars.

inline Rational rational_from_json(const json& j, const std::string& what) {
    if (j.is_number_integer()) return Rational(static_cast<long long>(j.get<long long>()));
    if (j.is_string()) return parse_rational(j.get<std::string>());
    throw InputError(what + " must be a rational string (\"num/den\") or integer");
}

inline json rational_to_json(const Rational& q) { return rational_to_string(q); }

inline GaussRational gauss_from_json(const json& j, const std::string& what) {
    if (!j.is_object() || !j.contains("re") || !j.contains("im"))
        throw InputError(what + " must be {\"re\": rat, \"im\": rat}");
    return {rational_from_json(j.at("re"), what + ".re"),
            rational_from_json(j.at("im"), what + ".im")};
}

inline json gauss_to_json(const GaussRational& z) {
    return json{{"re", rational_to_string(z.re)}, {"im", rational_to_string(z.im)}};
}

inline json ext_to_json(const ExtScalar& x) {
    if (x.is_rational()) return rational_to_string(x.rational_part());
    return json{{"rat", rational_to_string(x.rational_part())},
                {"ext", rational_to_string(x.root_part())},
                {"tau2", rational_to_string(x.tau2())}};
}

inline ExtScalar ext_from_json(const json& j, const std::string& what) {
    if (j.is_string() || j.is_number_integer())
        return ExtScalar(rational_from_json(j, what));
    if (j.is_object() && j.contains("rat") && j.contains("ext") && j.contains("tau2"))
        return ExtScalar::with_root(rational_from_json(j.at("rat"), what + ".rat"),
                                    rational_from_json(j.at("ext"), what + ".ext"),
                                    rational_from_json(j.at("tau2"), what + ".tau2"));
    throw InputError(what + " must be a rational or {\"rat\",\"ext\",\"tau2\"}");
}

// ---------------------------------------------------------------------------
// Ring.

inline RingSpec ring_spec_from_json(const json& j) {
    if (!j.is_object()) throw InputError("ring spec must be an object");
    RingSpec spec;
    if (!j.contains("dim") || !j.at("dim").is_number_integer())
        throw InputError("ring spec needs an integer \"dim\"");
    spec.dim = j.at("dim").get<int>();
    if (!j.contains("basis") || !j.at("basis").is_array())
        throw InputError("ring spec needs a \"basis\" array");
    for (const auto& b : j.at("basis")) {
        if (!b.is_object() || !b.contains("label") || !b.contains("p") || !b.contains("q") ||
            !b.at("label").is_string() || !b.at("p").is_number_integer() ||
            !b.at("q").is_number_integer())
            throw InputError("basis entries must be {\"label\": str, \"p\": int, \"q\": int}");
        spec.basis.push_back({b.at("label").get<std::string>(), b.at("p").get<int>(),
                              b.at("q").get<int>()});
    }
    if (j.contains("products")) {
        if (!j.at("products").is_array()) throw InputError("\"products\" must be an array");
        for (const auto& p : j.at("products")) {
            if (!p.is_object() || !p.contains("a") || !p.contains("b") || !p.contains("result") ||
                !p.at("a").is_string() || !p.at("b").is_string() || !p.at("result").is_object())
                throw InputError("product entries must be {\"a\", \"b\", \"result\": {label: rat}}");
            RingSpec::ProductEntry e;
            e.a = p.at("a").get<std::string>();
            e.b = p.at("b").get<std::string>();
            for (const auto& [label, coeff] : p.at("result").items())
                e.result.emplace_back(label, rational_from_json(coeff, "product coefficient"));
            spec.products.push_back(std::move(e));
        }
    }
    if (!j.contains("fundamental") || !j.at("fundamental").is_string())
        throw InputError("ring spec needs a \"fundamental\" label");
    spec.fundamental = j.at("fundamental").get<std::string>();
    return spec;
}

inline json ring_spec_to_json(const RingPtr& ring) {
    json basis = json::array();
    for (int i = 0; i < ring->size(); ++i)
        basis.push_back(json{{"label", ring->basis(i).label},
                             {"p", ring->basis(i).p},
                             {"q", ring->basis(i).q}});
    json products = json::array();
    for (int i = 0; i < ring->size(); ++i)
        for (int j2 = i; j2 < ring->size(); ++j2) {
            if (i == ring->unit_index() || j2 == ring->unit_index()) continue;
            json result = json::object();
            for (const auto& [k, c] : ring->product(i, j2))
                result[ring->basis(k).label] = rational_to_string(c);
            products.push_back(json{{"a", ring->basis(i).label},
                                    {"b", ring->basis(j2).label},
                                    {"result", result}});
        }
    return json{{"dim", ring->dim()},
                {"basis", basis},
                {"products", products},
                {"fundamental", ring->basis(ring->fundamental_index()).label}};
}

// ---------------------------------------------------------------------------
// Classes and bundles.

inline CohomologyClass class_from_json(const RingPtr& ring, const json& j,
                                       const std::string& what) {
    if (!j.is_object()) throw InputError(what + " must be an object {label: rat}");
    CohomologyClass c(ring);
    for (const auto& [label, coeff] : j.items())
        c.add_term(ring->index_of(label), rational_from_json(coeff, what + "." + label));
    return c;
}

inline json class_to_json(const CohomologyClass& c) {
    json j = json::object();
    for (const auto& [i, v] : c.terms()) j[c.ring()->basis(i).label] = rational_to_string(v);
    return j;
}

inline json ext_class_to_json(const ExtClass& c) {
    json j = json::object();
    for (const auto& [i, v] : c.terms()) j[c.ring()->basis(i).label] = ext_to_json(v);
    return j;
}

inline ExtClass ext_class_from_json(const RingPtr& ring, const json& j, const std::string& what) {
    if (!j.is_object()) throw InputError(what + " must be an object {label: value}");
    ExtClass c(ring);
    for (const auto& [label, coeff] : j.items())
        c.add_term(ring->index_of(label), ext_from_json(coeff, what + "." + label));
    return c;
}

inline BundleTopology bundle_from_json(const RingPtr& ring, const json& j) {
    if (!j.is_object() || !j.contains("rank") || !j.at("rank").is_number_integer() ||
        !j.contains("ch") || !j.at("ch").is_object())
        throw InputError("bundle must be {\"rank\": int, \"ch\": {\"0\": rat, ...}}");
    const int rank = j.at("rank").get<int>();
    const int n = ring->dim();
    std::vector<CohomologyClass> ch(static_cast<std::size_t>(n) + 1, CohomologyClass(ring));
    bool ch0_given = false;
    for (const auto& [key, val] : j.at("ch").items()) {
        int k = -1;
        try { k = std::stoi(key); } catch (...) { throw InputError("bad ch key '" + key + "'"); }
        if (k < 0 || k > n) throw InputError("ch key '" + key + "' outside 0..dim");
        if (k == 0) {
            // ch_0 is the scalar rank written as a rational.
            ch0_given = true;
            CohomologyClass c(ring);
            c.set(ring->unit_index(), rational_from_json(val, "ch.0"));
            ch[0] = c;
        } else {
            ch[static_cast<std::size_t>(k)] = class_from_json(ring, val, "ch." + key);
        }
    }
    if (!ch0_given) {
        CohomologyClass c(ring);
        c.set(ring->unit_index(), Rational(rank));
        ch[0] = c;
    }
    return make_bundle(ring, rank, ch);
}

inline json bundle_to_json(const BundleTopology& e) {
    json ch = json::object();
    ch["0"] = rational_to_string(e.ch[0].coeff(e.ring()->unit_index()));
    for (std::size_t k = 1; k < e.ch.size(); ++k)
        ch[std::to_string(k)] = class_to_json(e.ch[k]);
    return json{{"rank", e.rank}, {"ch", ch}};
}

inline CurveCone cone_from_json(const RingPtr& ring, const json& j) {
    if (!j.is_array()) throw InputError("curve cone must be an array of classes");
    std::vector<CohomologyClass> gens;
    for (const auto& g : j) gens.push_back(class_from_json(ring, g, "cone generator"));
    return make_curve_cone(ring, std::move(gens));
}

inline json cone_to_json(const CurveCone& cone) {
    json j = json::array();
    for (const auto& g : cone.generators) j.push_back(class_to_json(g));
    return j;
}

// ---------------------------------------------------------------------------
// Equations.

inline json equation_to_json(const EquationParams& p) {
    json zeta = json::object();
    for (std::size_t k = 0; k < p.zeta.size(); ++k)
        zeta[std::to_string(k)] = ext_class_to_json(p.zeta[k]);
    json j{{"zeta", zeta}, {"normalization", p.normalization}};
    if (p.degenerate) j["degenerate"] = true;
    return j;
}

inline EquationParams equation_from_json(const RingPtr& ring, const json& j) {
    if (!j.is_object() || !j.contains("zeta") || !j.at("zeta").is_object())
        throw InputError("equation must be {\"zeta\": {\"0\": class, ...}, \"normalization\": str}");
    const int n = ring->dim();
    EquationParams p;
    p.zeta.assign(static_cast<std::size_t>(n) + 1, ExtClass(ring));
    for (const auto& [key, val] : j.at("zeta").items()) {
        int k = -1;
        try { k = std::stoi(key); } catch (...) { throw InputError("bad zeta key '" + key + "'"); }
        if (k < 0 || k > n) throw InputError("zeta key '" + key + "' outside 0..dim");
        p.zeta[static_cast<std::size_t>(k)] = ext_class_from_json(ring, val, "zeta." + key);
    }
    if (j.contains("normalization")) {
        if (!j.at("normalization").is_string()) throw InputError("\"normalization\" must be a string");
        p.normalization = j.at("normalization").get<std::string>();
    }
    if (j.contains("degenerate")) p.degenerate = j.at("degenerate").get<bool>();
    check_params(p);
    return p;
}

// ---------------------------------------------------------------------------
// Verdicts and cones.

inline json verdict_to_json(const Verdict& v) {
    json values = json::object();
    for (const auto& [name, p] : v.values) values[name] = ext_to_json(p);
    json witnesses = json::array();
    for (const auto& w : v.witnesses)
        witnesses.push_back(json{{"name", w.name}, {"p", ext_to_json(w.p)}, {"note", w.note}});
    json j{{"verdict", verdict_name(v.level)}, {"values", values}, {"witnesses", witnesses}};
    if (!v.warnings.empty()) j["warnings"] = v.warnings;
    return j;
}

inline json cone_export_to_json(const PolyhedralCone& cone) {
    json a = json::array();
    for (const auto& row : cone.a) {
        json r = json::array();
        for (const auto& x : row) r.push_back(rational_to_string(x));
        a.push_back(r);
    }
    json c = json::array();
    for (const auto& x : cone.c) c.push_back(rational_to_string(x));
    return json{{"A", a},
                {"c", c},
                {"directions", cone.directions},
                {"rows", cone.rows}};
}

// ---------------------------------------------------------------------------
// Quiver models.

inline Mat matrix_from_json(const json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) throw InputError(what + " must be a nonempty array of rows");
    const std::size_t rows = j.size();
    std::size_t cols = 0;
    for (const auto& row : j) {
        if (!row.is_array()) throw InputError(what + " rows must be arrays");
        if (cols == 0) cols = row.size();
        if (row.size() != cols || cols == 0)
            throw InputError(what + " rows must be nonempty and of equal length");
    }
    Mat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            const auto& cell = j[r][c];
            if (cell.is_number()) {
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    Cplx(cell.get<double>(), 0.0);
            } else if (cell.is_array() && cell.size() == 2 && cell[0].is_number() &&
                       cell[1].is_number()) {
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    Cplx(cell[0].get<double>(), cell[1].get<double>());
            } else {
                throw InputError(what + " entries must be numbers or [re, im] pairs");
            }
        }
    return m;
}

inline json matrix_to_json(const Mat& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
        rows.push_back(row);
    }
    return rows;
}

struct LoadedModel {
    QuiverModel model;
    ModelPoint point;
};

inline LoadedModel model_from_json(const json& j) {
    if (!j.is_object() || !j.contains("vertices") || !j.at("vertices").is_array())
        throw InputError("model must be {\"vertices\": [...], \"arrows\": [...], \"point\": {...}}");
    std::vector<QuiverVertex> verts;
    for (const auto& v : j.at("vertices")) {
        if (!v.is_object() || !v.contains("r") || !v.contains("m") || !v.contains("p") ||
            !v.at("r").is_number_integer() || !v.at("m").is_number_integer())
            throw InputError("vertices must be {\"r\": int, \"m\": int, \"p\": rat}");
        QuiverVertex qv;
        qv.r = v.at("r").get<int>();
        qv.m = v.at("m").get<int>();
        qv.p = rational_from_json(v.at("p"), "vertex level");
        verts.push_back(qv);
    }
    std::vector<QuiverArrow> arrows;
    if (j.contains("arrows")) {
        if (!j.at("arrows").is_array()) throw InputError("\"arrows\" must be an array");
        for (const auto& a : j.at("arrows")) {
            if (!a.is_object() || !a.contains("src") || !a.contains("dst") ||
                !a.at("src").is_number_integer() || !a.at("dst").is_number_integer())
                throw InputError("arrows must be {\"src\": int, \"dst\": int, \"count\"?: int}");
            QuiverArrow arrow;
            arrow.src = a.at("src").get<int>();
            arrow.dst = a.at("dst").get<int>();
            arrow.count = a.contains("count") ? a.at("count").get<int>() : 1;
            arrows.push_back(arrow);
        }
    }
    LoadedModel out{QuiverModel::build(std::move(verts), arrows), {}};
    out.point = zero_point(out.model);
    if (j.contains("point")) {
        if (!j.at("point").is_object())
            throw InputError("\"point\" must map \"src-dst-idx\" keys to matrices");
        for (const auto& [key, val] : j.at("point").items()) {
            int src = -1, dst = -1, idx = -1;
            char trailing = 0;
            if (std::sscanf(key.c_str(), "%d-%d-%d%c", &src, &dst, &idx, &trailing) != 3)
                throw InputError("bad block key '" + key + "' (expected \"src-dst-idx\")");
            bool found = false;
            for (std::size_t t = 0; t < out.model.blocks().size(); ++t) {
                const auto& blk = out.model.blocks()[t];
                if (blk.src == src && blk.dst == dst && blk.idx == idx) {
                    const Mat m = matrix_from_json(val, "block " + key);
                    if (m.rows() != out.model.vertex(dst).m || m.cols() != out.model.vertex(src).m)
                        throw Error(ErrorCode::ShapeMismatch,
                                    "block " + key + " must be " +
                                    std::to_string(out.model.vertex(dst).m) + "x" +
                                    std::to_string(out.model.vertex(src).m));
                    out.point.blocks[t] = m;
                    found = true;
                    break;
                }
            }
            if (!found) throw InputError("block key '" + key + "' matches no arrow");
        }
    }
    return out;
}

inline json model_to_json(const QuiverModel& q, const ModelPoint& b) {
    json verts = json::array();
    for (int k = 0; k < q.n_vertices(); ++k)
        verts.push_back(json{{"r", q.vertex(k).r},
                             {"m", q.vertex(k).m},
                             {"p", rational_to_string(q.vertex(k).p)}});
    json arrows = json::array();
    for (int i = 0; i < q.n_vertices(); ++i)
        for (int j2 = 0; j2 < q.n_vertices(); ++j2)
            if (q.arrow_count(i, j2) > 0)
                arrows.push_back(json{{"src", i}, {"dst", j2}, {"count", q.arrow_count(i, j2)}});
    json point = json::object();
    for (std::size_t t = 0; t < b.blocks.size(); ++t) {
        const auto& blk = q.blocks()[t];
        point[std::to_string(blk.src) + "-" + std::to_string(blk.dst) + "-" +
              std::to_string(blk.idx)] = matrix_to_json(b.blocks[t]);
    }
    return json{{"vertices", verts}, {"arrows", arrows}, {"point", point}};
}

inline LieElement lie_from_json(const QuiverModel& q, const json& j) {
    if (!j.is_object() || !j.contains("xi") || !j.at("xi").is_array())
        throw InputError("generator must be {\"xi\": [matrix per vertex]}");
    LieElement xi;
    for (const auto& m : j.at("xi")) xi.xi.push_back(matrix_from_json(m, "xi"));
    check_lie(q, xi);
    return xi;
}

// ---------------------------------------------------------------------------
// Flow reports.

inline json trajectory_to_json(const std::vector<TrajectorySample>& tr) {
    json j = json::array();
    for (const auto& s : tr)
        j.push_back(json::array({s.t, s.f, s.grad_norm}));
    return j;
}

inline std::string trajectory_to_csv(const std::vector<TrajectorySample>& tr) {
    std::string out = "t,f,grad_norm\n";
    for (const auto& s : tr)
        out += format_double(s.t) + "," + format_double(s.f) + "," +
               format_double(s.grad_norm) + "\n";
    return out;
}

inline json classification_to_json(const LimitClassification& c) {
    json j{{"critical", c.critical},
           {"mu_zero", c.mu_zero},
           {"mu_norm", c.mu_norm},
           {"note", c.note}};
    if (c.mu_zero) {
        json graded = json::array();
        for (const auto& comp : c.graded) graded.push_back(comp);
        j["graded"] = graded;
    } else if (c.critical) {
        json filt = json::array();
        for (const auto& hn : c.filtration)
            filt.push_back(json{{"lambda", hn.lambda}, {"slope", hn.slope}, {"dims", hn.dims}});
        j["filtration"] = filt;
    }
    return j;
}

inline json flow_result_to_json(const QuiverModel& q, const FlowResult& r,
                                bool include_trajectory) {
    json j{{"t_final", r.t_final},
           {"final_energy", r.final_energy},
           {"final_grad_norm", r.final_grad_norm},
           {"steps", r.steps},
           {"converged", r.converged},
           {"stop_reason", r.stop_reason},
           {"limit", model_to_json(q, r.limit).at("point")},
           {"classification", classification_to_json(r.classification)}};
    if (include_trajectory) j["trajectory"] = trajectory_to_json(r.trajectory);
    return j;
}

} // namespace pcrit
