#include "nexact/session.hpp"

#include <algorithm>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "nexact/algebra.hpp"
#include "nexact/errors.hpp"
#include "nexact/homology.hpp"
#include "nexact/io.hpp"
#include "nexact/structures.hpp"

namespace nexact {

namespace {

using ordered_json = nlohmann::ordered_json;

struct Ctx {
    const Algebra* a = nullptr;
    int n = 1;
    int dimBound = 1;
    int multBound = 2;
    size_t subsetCap = 1u << 20;
    StructureLimits lim;
    SessionConfig echo;
};

/* Both renderings are assembled side by side from the same computed values,
 * so the text and the structured report agree on every number by
 * construction. */
struct Rep {
    std::string text;
    ordered_json j;

    void line(const std::string& s) {
        text += s;
        text += '\n';
    }
};

std::string dims_text(const std::vector<int>& d) {
    std::string s = "(";
    for (size_t i = 0; i < d.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(d[i]);
    }
    return s + ")";
}

ordered_json mat_json(const Mat& m) {
    ordered_json rows = ordered_json::array();
    if (m.rows == 0 || m.cols == 0) return rows;
    for (int r = 0; r < m.rows; ++r) {
        ordered_json row = ordered_json::array();
        for (int c = 0; c < m.cols; ++c) row.push_back(m.at(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

// " 1:[[1]] 2:[] 3:[]" keyed by vertex label.
std::string mor_text(const ModMorphism& f) {
    const Algebra& a = *f.source.alg;
    std::string s;
    for (int v = 0; v < a.vertex_count(); ++v) {
        if (v) s += " ";
        s += a.quiver.vertices[v] + ":" + mat_text(f.mats[v]);
    }
    return s;
}

ordered_json mor_json(const ModMorphism& f) {
    const Algebra& a = *f.source.alg;
    ordered_json by;
    for (int v = 0; v < a.vertex_count(); ++v) by[a.quiver.vertices[v]] = mat_json(f.mats[v]);
    return by;
}

/* Display names for the members of one report: S_v for the simples, P_v for
 * modules isomorphic to an indecomposable projective, X1, X2, ... in carrier
 * order for the rest.  Lookup is by fingerprint, which is sound here because
 * every name user draws its forms from the same enumerated carrier. */
struct Namer {
    std::vector<std::string> fps;
    std::vector<std::string> names;

    std::string of(const CanonicalForm& cf) const {
        for (size_t i = 0; i < fps.size(); ++i)
            if (fps[i] == cf.fingerprint) return names[i];
        return "M" + dims_text(cf.dims);
    }
};

bool is_simple_dims(const std::vector<int>& d, int& v) {
    int ones = 0;
    for (size_t i = 0; i < d.size(); ++i) {
        if (d[i] == 1) {
            ++ones;
            v = static_cast<int>(i);
        } else if (d[i] != 0) {
            return false;
        }
    }
    return ones == 1;
}

Namer make_namer(const std::vector<CanonicalForm>& carrier, const Ctx& c) {
    const Algebra& a = *c.a;
    Namer nm;
    int anon = 0;
    for (const CanonicalForm& cf : carrier) {
        nm.fps.push_back(cf.fingerprint);
        int v = -1;
        if (is_simple_dims(cf.dims, v)) {
            nm.names.push_back("S_" + a.quiver.vertices[v]);
            continue;
        }
        std::string name;
        for (int w = 0; w < a.vertex_count(); ++w) {
            if (cf.dims != a.projective(w).dims) continue;
            IsoResult iso = is_isomorphic(cf.rep, a.projective(w), c.lim.isoCap, c.lim.seed);
            if (iso.verdict == Tri::Yes) {
                name = "P_" + a.quiver.vertices[w];
                break;
            }
        }
        if (name.empty()) name = "X" + std::to_string(++anon);
        nm.names.push_back(std::move(name));
    }
    return nm;
}

// "P_1 (+) P_2^3" from the top of a projective module; "0" when zero.
std::string projective_sum_name(const Module& m) {
    if (m.is_zero()) return "0";
    const Algebra& a = *m.alg;
    Module t = top_of(m).first;
    std::string s;
    for (int v = 0; v < a.vertex_count(); ++v) {
        if (t.dims[v] == 0) continue;
        if (!s.empty()) s += " (+) ";
        s += "P_" + a.quiver.vertices[v];
        if (t.dims[v] > 1) s += "^" + std::to_string(t.dims[v]);
    }
    return s;
}

/* Complexes print top degree to degree 0, matching the arrows.  The terms of
 * every complex rendered here are projective, so they are named by their
 * projective decompositions. */
void render_complex(Rep& r, const std::string& pad, const Complex& cx, ordered_json& out) {
    std::vector<std::string> names;
    for (int i = cx.top_degree(); i >= 0; --i) names.push_back(projective_sum_name(cx.terms[i]));

    std::string arrowLine = "0 -> ";
    for (const std::string& nm : names) arrowLine += nm + " -> ";
    arrowLine += "0";
    r.line(pad + arrowLine);

    out["terms_top_to_zero"] = names;
    ordered_json diffs = ordered_json::array();
    for (int i = cx.top_degree(); i >= 1; --i) {
        const ModMorphism& d = cx.diff(i);
        r.line(pad + "  d_" + std::to_string(i) + " (" + projective_sum_name(d.source) + " -> " +
               projective_sum_name(d.target) + "): " + mor_text(d));
        ordered_json dj;
        dj["i"] = i;
        dj["mats"] = mor_json(d);
        diffs.push_back(std::move(dj));
    }
    out["diffs"] = std::move(diffs);
}

std::string scope_exact_enumeration(int dimBound) {
    return "exact: every indecomposable of total dimension <= " + std::to_string(dimBound) +
           " is listed";
}

Rep make_header(const Ctx& c, const std::string& command) {
    const Algebra& a = *c.a;
    Rep r;
    r.j["command"] = command;

    ordered_json cfg;
    cfg["algebra_path"] = c.echo.algebraPath;
    cfg["modules_path"] = c.echo.modulesPath;
    cfg["structure_path"] = c.echo.structurePath;
    cfg["p"] = a.p;
    cfg["n"] = c.n;
    cfg["dim_bound"] = c.dimBound;
    cfg["mult_bound"] = c.multBound;
    cfg["iso_cap"] = c.lim.isoCap;
    cfg["lattice_cap"] = c.lim.latticeCap;
    cfg["class_cap"] = c.lim.classCap;
    cfg["subset_cap"] = c.subsetCap;
    cfg["seed"] = c.lim.seed;
    cfg["format"] = c.echo.format;
    r.j["config"] = std::move(cfg);

    ordered_json aj;
    aj["vertices"] = a.quiver.vertices;
    ordered_json arrows = ordered_json::array();
    for (const Arrow& ar : a.quiver.arrows)
        arrows.push_back(ar.name + ": " + a.quiver.vertices[ar.src] + " -> " +
                         a.quiver.vertices[ar.tgt]);
    aj["arrows"] = std::move(arrows);
    aj["dimension"] = a.dim();
    r.j["algebra"] = std::move(aj);

    r.line("command: " + command);
    std::string inputs = "inputs: algebra " +
                         (c.echo.algebraPath.empty() ? "<inline>" : c.echo.algebraPath);
    if (!c.echo.modulesPath.empty()) inputs += ", modules " + c.echo.modulesPath;
    if (!c.echo.structurePath.empty()) inputs += ", structure " + c.echo.structurePath;
    r.line(inputs);
    std::string vline;
    for (const auto& v : a.quiver.vertices) vline += (vline.empty() ? "" : " ") + v;
    r.line("algebra: p = " + std::to_string(a.p) + ", vertices [" + vline + "], " +
           std::to_string(a.arrow_count()) + " arrows, dimension " + std::to_string(a.dim()));
    r.line("n = " + std::to_string(c.n));
    r.line("bounds: total dimension <= " + std::to_string(c.dimBound) +
           "; extension summands per side <= " + std::to_string(c.multBound));
    r.line("caps: iso scan " + std::to_string(c.lim.isoCap) + ", lattice " +
           std::to_string(c.lim.latticeCap) + ", ext classes " + std::to_string(c.lim.classCap) +
           ", subsets " + std::to_string(c.subsetCap) + ", seed " + std::to_string(c.lim.seed));
    r.line("");
    return r;
}

std::string exn_name(int n) { return "ex_" + std::to_string(n); }
std::string maxn_name(int n) { return "max_" + std::to_string(n); }

/* Member listing shared by exn and maxn: dimension vector, projective
 * dimension witness (the minimal resolution, with matrices), and the table
 * of Ext dimensions into the indecomposable projectives. */
void render_member(Rep& r, const Ctx& c, const std::string& name, const Module& m,
                   ordered_json& out) {
    const Algebra& a = *c.a;
    out["name"] = name;
    out["dims"] = m.dims;

    r.line("member " + name + "  dims " + dims_text(m.dims));
    Resolution res = minimal_resolution(m, c.n + 1);
    internal_check(res.terminated, "a class member failed to resolve within n+1 steps");
    out["pdim"] = res.length();
    r.line("  pdim = " + std::to_string(res.length()) +
           "; witness: minimal resolution (augmented over " + name + ")");
    ordered_json cj;
    render_complex(r, "    ", res.cx, cj);
    r.line("    aug (" + projective_sum_name(res.aug.source) + " -> " + name +
           "): " + mor_text(res.aug));
    cj["aug"] = mor_json(res.aug);
    out["resolution"] = std::move(cj);

    std::string head = "  Ext into projectives (rows i = 0.." + std::to_string(c.n + 1) +
                       "; columns";
    for (int v = 0; v < a.vertex_count(); ++v) head += " P_" + a.quiver.vertices[v];
    r.line(head + "):");
    std::vector<std::vector<int>> table;  // [i][v]
    for (int i = 0; i <= c.n + 1; ++i) table.emplace_back(a.vertex_count(), 0);
    for (int v = 0; v < a.vertex_count(); ++v) {
        std::vector<int> col = ext_dims(res, a.projective(v), c.n + 1);
        for (int i = 0; i <= c.n + 1; ++i) table[i][v] = col[i];
    }
    for (int i = 0; i <= c.n + 1; ++i) {
        std::string row = "    i=" + std::to_string(i) + ":";
        for (int v = 0; v < a.vertex_count(); ++v) row += " " + std::to_string(table[i][v]);
        r.line(row);
    }
    out["ext_into_projectives"] = table;
}

void render_excluded(Rep& r, const Ctx& c, const Enumeration& en, const StructureSet& ex,
                     const Namer& nm) {
    std::vector<std::pair<const CanonicalForm*, std::string>> excluded;
    for (const CanonicalForm& cf : en.indecs) {
        bool inEx = false;
        for (const CanonicalForm& m : ex.indecs)
            if (m.fingerprint == cf.fingerprint) inEx = true;
        if (!inEx) excluded.emplace_back(&cf, exn_rejection(cf.rep, c.n));
    }
    ordered_json ja = ordered_json::array();
    if (excluded.empty()) {
        r.line("excluded from " + exn_name(c.n) + ": none; every enumerated indecomposable is "
               "a member");
    } else {
        r.line("excluded from " + exn_name(c.n) + " (" + std::to_string(excluded.size()) +
               " of the " + std::to_string(en.indecs.size()) + " enumerated):");
        for (const auto& [cf, why] : excluded) {
            r.line("  " + nm.of(*cf) + "  dims " + dims_text(cf->dims) + ": " + why);
            ordered_json e;
            e["name"] = nm.of(*cf);
            e["dims"] = cf->dims;
            e["reason"] = why;
            ja.push_back(std::move(e));
        }
    }
    r.j["excluded"] = std::move(ja);
}

std::string member_list_text(const StructureSet& s, const Namer& nm) {
    std::string t = "{";
    for (size_t i = 0; i < s.indecs.size(); ++i) {
        if (i) t += ", ";
        t += nm.of(s.indecs[i]);
    }
    return t + "}";
}

Enumeration enumerate_or_refuse(const Ctx& c, bool refuseIncomplete) {
    Enumeration en = enumerate_indecomposables(*c.a, c.dimBound, c.lim);
    if (!en.complete && refuseIncomplete)
        throw CapError(
            "the indecomposable enumeration hit a cap, so the carrier may be incomplete; "
            "raise the caps or lower the dimension bound instead of trusting a partial "
            "answer");
    return en;
}

// --- commands -----------------------------------------------------------------

Rep cmd_exn(const Ctx& c) {
    Rep r = make_header(c, "exn");
    Enumeration en = enumerate_or_refuse(c, false);
    StructureSet ex = compute_exn(en, c.n);
    Namer nm = make_namer(en.indecs, c);

    ordered_json carrier;
    carrier["size"] = en.indecs.size();
    carrier["scope"] = en.complete
                           ? scope_exact_enumeration(c.dimBound)
                           : "incomplete: an enumeration cap was reached; members may be missing";
    r.j["carrier"] = std::move(carrier);
    r.line("carrier: " + std::to_string(en.indecs.size()) + " indecomposables (" +
           std::string(en.complete ? scope_exact_enumeration(c.dimBound)
                                   : "incomplete: an enumeration cap was reached; members may "
                                     "be missing") +
           ")");
    r.line("");

    ordered_json members = ordered_json::array();
    if (ex.indecs.empty()) {
        r.line(exn_name(c.n) + " is zero; only the split structure exists");
    } else {
        r.line(exn_name(c.n) + " members: " + std::to_string(ex.indecs.size()) +
               " indecomposable(s)");
        r.line("");
        for (const CanonicalForm& cf : ex.indecs) {
            ordered_json mj;
            render_member(r, c, nm.of(cf), cf.rep, mj);
            r.line("");
            members.push_back(std::move(mj));
        }
    }
    r.j["members"] = std::move(members);
    r.j["members_scope"] = "exact within the carrier";

    render_excluded(r, c, en, ex, nm);
    return r;
}

Rep cmd_maxn(const Ctx& c) {
    Rep r = make_header(c, "maxn");
    Enumeration en = enumerate_or_refuse(c, true);
    StructureSet ex = compute_exn(en, c.n);
    Namer nm = make_namer(en.indecs, c);

    r.j["carrier"] = {{"size", en.indecs.size()}, {"scope", scope_exact_enumeration(c.dimBound)}};
    r.line("carrier: " + std::to_string(en.indecs.size()) + " indecomposables (" +
           scope_exact_enumeration(c.dimBound) + ")");

    MaxTrace trace;
    StructureSet mx = max_n(*c.a, c.n, c.dimBound, c.lim, &trace);

    r.line(exn_name(c.n) + ": " + std::to_string(ex.indecs.size()) + " indecomposable(s)");
    r.line("");
    std::vector<std::string> method = {
        "pullback test: a member survives when every submodule and the matching quotient "
        "stay in the class; images of morphisms from projectives are exactly the "
        "submodules, and every submodule is the image of its own projective cover, so "
        "quantifying over the submodule lattice is exact",
        "pushout test: the pullback test applied to the transposed class over the "
        "opposite algebra",
        "membership is decided summand by summand: every iterate stays extension closed, "
        "hence closed under direct sums and summands, so testing indecomposables suffices"};
    r.j["method"] = method;
    r.line("method:");
    for (const std::string& m : method) r.line("  " + m);
    r.line("");
    ordered_json tj = ordered_json::array();
    if (trace.steps.empty()) {
        r.line("iteration trace: " + exn_name(c.n) +
               " is already stable under the pullback and pushout steps; no members removed");
    } else {
        r.line("iteration trace:");
        for (size_t i = 0; i < trace.steps.size(); ++i) {
            const auto& st = trace.steps[i];
            std::string lineText = "  step " + std::to_string(i + 1) + " (" +
                                   (st.op == "pb" ? "pullback" : "pushout") + "): removed";
            ordered_json sj;
            sj["op"] = st.op;
            ordered_json rm = ordered_json::array();
            for (size_t k = 0; k < st.removed.size(); ++k) {
                lineText += std::string(k ? "," : "") + " " + nm.of(st.removed[k]) + " dims " +
                            dims_text(st.removed[k].dims);
                ordered_json e;
                e["name"] = nm.of(st.removed[k]);
                e["dims"] = st.removed[k].dims;
                rm.push_back(std::move(e));
            }
            sj["removed"] = std::move(rm);
            tj.push_back(std::move(sj));
            r.line(lineText);
        }
    }
    r.j["trace"] = std::move(tj);
    r.line("");

    ordered_json members = ordered_json::array();
    if (mx.indecs.empty()) {
        r.line(maxn_name(c.n) + " is empty; only the split structure exists");
    } else {
        r.line(maxn_name(c.n) + " members: " + std::to_string(mx.indecs.size()) +
               " indecomposable(s), pullback and pushout stable, extension closed");
        r.line("");
        r.line("conflations (each member resolved to an explicit complex of projectives):");
        for (const CanonicalForm& cf : mx.indecs) {
            ordered_json mj;
            mj["name"] = nm.of(cf);
            mj["dims"] = cf.dims;
            r.line("  " + nm.of(cf) + "  dims " + dims_text(cf.dims) + ":");
            Complex cx = res_of_module(cf.rep, c.n);
            ordered_json cj;
            render_complex(r, "    ", cx, cj);
            mj["conflation"] = std::move(cj);
            members.push_back(std::move(mj));
        }
    }
    r.j["members"] = std::move(members);
    r.j["members_scope"] = "exact within the carrier; stability checked over full submodule "
                           "lattices";
    r.line("");

    std::string quasi = same_members(mx, ex)
                            ? "note: " + exn_name(c.n) + " equals " + maxn_name(c.n) +
                                  ", so the full class is itself stable (quasi " +
                                  std::to_string(c.n) + "-abelian)"
                            : "note: " + std::to_string(ex.indecs.size() - mx.indecs.size()) +
                                  " member(s) of " + exn_name(c.n) +
                                  " fail stability, so the full class is not an exact structure";
    r.line(quasi);
    r.j["exn_equals_maxn"] = same_members(mx, ex);
    r.line("");

    render_excluded(r, c, en, ex, nm);
    return r;
}

Rep cmd_structures(const Ctx& c) {
    Rep r = make_header(c, "structures");
    Enumeration en = enumerate_or_refuse(c, true);
    Namer nm = make_namer(en.indecs, c);

    r.j["carrier"] = {{"size", en.indecs.size()}, {"scope", scope_exact_enumeration(c.dimBound)}};
    r.line("carrier: " + std::to_string(en.indecs.size()) + " indecomposables (" +
           scope_exact_enumeration(c.dimBound) + ")");
    r.line("");

    StructureEnumeration se =
        enumerate_structures(*c.a, c.n, c.dimBound, c.subsetCap, c.multBound, c.lim);

    r.line("structures: " + std::to_string(se.structures.size()) +
           " (every subset of " + maxn_name(c.n) +
           " passing the axiom audit; extension closure checked with <= " +
           std::to_string(c.multBound) + " summands per side)");
    ordered_json sj = ordered_json::array();
    for (size_t i = 0; i < se.structures.size(); ++i) {
        const StructureSet& st = se.structures[i];
        std::string label = member_list_text(st, nm);
        r.line("  structure " + std::to_string(i) + ": " + label +
               (st.indecs.empty() ? " (the split structure)" : "") +
               (same_members(st, se.max) ? " (maximal)" : ""));
        ordered_json e;
        e["index"] = i;
        ordered_json mem = ordered_json::array();
        for (const CanonicalForm& cf : st.indecs) {
            ordered_json m;
            m["name"] = nm.of(cf);
            m["dims"] = cf.dims;
            mem.push_back(std::move(m));
        }
        e["members"] = std::move(mem);
        e["split"] = st.indecs.empty();
        e["maximal"] = same_members(st, se.max);
        sj.push_back(std::move(e));
    }
    r.j["structures"] = std::move(sj);
    r.j["structures_scope"] = "exact within the carrier; closure verdicts up to the summand "
                              "bound";
    r.line("");

    // Strict inclusions that no third structure refines: the Hasse diagram.
    auto subset = [](const StructureSet& x, const StructureSet& y) {
        for (const CanonicalForm& cf : x.indecs) {
            bool found = false;
            for (const CanonicalForm& o : y.indecs)
                if (cf.fingerprint == o.fingerprint) found = true;
            if (!found) return false;
        }
        return x.indecs.size() < y.indecs.size();
    };
    ordered_json hj = ordered_json::array();
    std::vector<std::string> hasseLines;
    for (size_t i = 0; i < se.structures.size(); ++i) {
        for (size_t j = 0; j < se.structures.size(); ++j) {
            if (!subset(se.structures[i], se.structures[j])) continue;
            bool covered = true;
            for (size_t k = 0; k < se.structures.size(); ++k)
                if (k != i && k != j && subset(se.structures[i], se.structures[k]) &&
                    subset(se.structures[k], se.structures[j]))
                    covered = false;
            if (!covered) continue;
            hasseLines.push_back(member_list_text(se.structures[i], nm) + " < " +
                                 member_list_text(se.structures[j], nm));
            hj.push_back({{"lower", i}, {"upper", j}});
        }
    }
    if (hasseLines.empty()) {
        r.line("inclusion: no strict inclusions (a single structure)");
    } else {
        r.line("inclusion (cover relations):");
        for (const std::string& h : hasseLines) r.line("  " + h);
    }
    r.j["hasse_covers"] = std::move(hj);
    return r;
}

void render_axiom(Rep& r, const std::string& label, const AxiomVerdict& v, ordered_json& out) {
    std::string verdict = v.kind == VerdictKind::Pass ? "pass"
                          : v.kind == VerdictKind::PassUpToBound
                              ? "pass up to bound " + std::to_string(v.bound)
                              : "FAIL";
    out["axiom"] = label;
    out["verdict"] = v.kind == VerdictKind::Fail ? "fail"
                     : v.kind == VerdictKind::Pass ? "pass"
                                                   : "pass_up_to_bound";
    if (v.kind == VerdictKind::PassUpToBound) out["bound"] = v.bound;
    out["note"] = v.note;
    out["scope"] = v.kind == VerdictKind::PassUpToBound
                       ? "up to bound: verified for extensions with <= " +
                             std::to_string(v.bound) + " summands per side"
                       : "exact within the bounds";
    r.line("  " + label + ": " + verdict + (v.note.empty() ? "" : " -- " + v.note));

    ordered_json cxs = ordered_json::array();
    for (size_t i = 0; i < v.modules.size(); ++i) {
        std::string name = "counterexample_" + std::to_string(i + 1);
        std::string fileText = module_file_text(name, v.modules[i]);
        r.line("    " + name + "  dims " + dims_text(v.modules[i].dims) +
               " (replayable module block):");
        std::istringstream in(fileText);
        std::string ln;
        while (std::getline(in, ln)) r.line("      " + ln);
        ordered_json e;
        e["name"] = name;
        e["dims"] = v.modules[i].dims;
        e["module_file"] = fileText;
        cxs.push_back(std::move(e));
    }
    out["counterexample_modules"] = std::move(cxs);
    ordered_json ms = ordered_json::array();
    for (size_t i = 0; i < v.morphisms.size(); ++i) {
        r.line("    counterexample morphism " + std::to_string(i + 1) + " (" +
               dims_text(v.morphisms[i].source.dims) + " -> " +
               dims_text(v.morphisms[i].target.dims) + "): " + mor_text(v.morphisms[i]));
        ordered_json e;
        e["source_dims"] = v.morphisms[i].source.dims;
        e["target_dims"] = v.morphisms[i].target.dims;
        e["mats"] = mor_json(v.morphisms[i]);
        ms.push_back(std::move(e));
    }
    out["counterexample_morphisms"] = std::move(ms);
}

Rep cmd_check(const Ctx& c, const std::string& modulesText, const std::string& structureText) {
    Rep r = make_header(c, "check");
    std::vector<NamedModule> bundle = parse_module_file(modulesText, *c.a);

    std::vector<NamedModule> picked;
    if (structureText.empty()) {
        picked = bundle;
    } else {
        for (const std::string& want : parse_structure_file(structureText)) {
            bool found = false;
            for (const NamedModule& nmod : bundle) {
                if (nmod.name == want) {
                    picked.push_back(nmod);
                    found = true;
                    break;
                }
            }
            if (!found)
                throw InputError("structure file names module '" + want +
                                 "' but the bundle does not define it");
        }
    }

    // Gate first, with the culprit's name in the message.
    for (const NamedModule& nmod : picked) {
        if (nmod.mod.is_zero()) continue;
        std::string why = exn_rejection(nmod.mod, c.n);
        if (!why.empty())
            throw InputError("module " + nmod.name + " fails the " + exn_name(c.n) +
                             " gate: " + why);
    }

    std::vector<Module> mods;
    for (const NamedModule& nmod : picked)
        if (!nmod.mod.is_zero()) mods.push_back(nmod.mod);
    StructureSet cand = structure_set_from_modules(*c.a, c.n, c.dimBound, mods, c.lim);
    Namer nm = make_namer(cand.indecs, c);

    r.line("candidate: " + member_list_text(cand, nm) + " (" +
           std::to_string(cand.indecs.size()) + " indecomposable member(s) after merging "
           "duplicates)");
    ordered_json mj = ordered_json::array();
    for (const CanonicalForm& cf : cand.indecs) {
        ordered_json e;
        e["name"] = nm.of(cf);
        e["dims"] = cf.dims;
        mj.push_back(std::move(e));
    }
    r.j["candidate"] = std::move(mj);
    r.line("gate: every member passes the " + exn_name(c.n) + " test");
    r.line("");

    AxiomReport rep = check_structure(cand, c.multBound, c.lim);
    r.line("axioms:");
    ordered_json aj = ordered_json::array();
    const std::pair<const char*, const AxiomVerdict*> rows[] = {
        {"Ex0", &rep.ex0},   {"Ex1", &rep.ex1},   {"Ex1^op", &rep.ex1op},
        {"Ex2", &rep.ex2},   {"Ex2^op", &rep.ex2op},
    };
    for (const auto& [label, v] : rows) {
        ordered_json e;
        render_axiom(r, label, *v, e);
        aj.push_back(std::move(e));
    }
    r.j["axioms"] = std::move(aj);
    r.line("");

    bool pass = rep.all_pass();
    r.j["all_pass"] = pass;
    r.line(pass ? "verdict: the candidate is an exact structure within the bounds"
                : "verdict: FAIL -- the candidate is not an exact structure; see the axiom "
                  "counterexamples");
    return r;
}

Rep cmd_tr(const Ctx& c, const std::string& modulesText) {
    Rep r = make_header(c, "tr");
    std::vector<NamedModule> bundle = parse_module_file(modulesText, *c.a);
    if (bundle.empty()) throw InputError("the tr command needs at least one module");

    ordered_json mods = ordered_json::array();
    for (const NamedModule& nmod : bundle) {
        const Module& m = nmod.mod;
        const Algebra& side = *m.alg;
        const Algebra& other = opposite_algebra(side);
        ordered_json e;
        e["name"] = nmod.name;
        e["dims"] = m.dims;
        e["side"] = side.is_opposite_side() ? "A^op" : "A";
        r.line("module " + nmod.name + "  dims " + dims_text(m.dims) + " over " +
               (side.is_opposite_side() ? "A^op" : "A"));

        if (!m.is_zero()) {
            std::string why = exn_rejection(m, c.n);
            if (!why.empty())
                throw InputError("module " + nmod.name + " fails the " + exn_name(c.n) +
                                 " gate: " + why);
        }
        r.line("  gate: passes the " + exn_name(c.n) + " test");

        Module tr = m.is_zero() ? zero_module(other) : transpose(m, c.n);
        std::string trName = "Tr_" + nmod.name;
        r.line("  " + trName + "  dims " + dims_text(tr.dims) + " over " +
               (tr.alg->is_opposite_side() ? "A^op" : "A") +
               (tr.is_zero() ? " (the zero module transposes to zero)" : ""));
        std::string fileText = module_file_text(trName, tr);
        {
            std::istringstream in(fileText);
            std::string ln;
            while (std::getline(in, ln)) r.line("    " + ln);
        }
        ordered_json tj;
        tj["name"] = trName;
        tj["dims"] = tr.dims;
        tj["side"] = tr.alg->is_opposite_side() ? "A^op" : "A";
        tj["module_file"] = fileText;
        e["transpose"] = std::move(tj);

        // dim Tr(M)(v) must equal dim Ext^{n+1}(M, P_v); a mismatch would be
        // a broken theorem, not bad input.
        r.line("  cross-check (dim of the transpose vs dim Ext^" + std::to_string(c.n + 1) +
               " into the projective at each vertex):");
        ordered_json xs = ordered_json::array();
        for (int v = 0; v < side.vertex_count(); ++v) {
            int extd = m.is_zero() ? 0 : ext_dim(m, side.projective(v), c.n + 1);
            internal_check(tr.dims[v] == extd,
                           "transpose dimensions disagree with the Ext table");
            r.line("    vertex " + side.quiver.vertices[v] + ": transpose " +
                   std::to_string(tr.dims[v]) + ", Ext " + std::to_string(extd));
            ordered_json x;
            x["vertex"] = side.quiver.vertices[v];
            x["tr_dim"] = tr.dims[v];
            x["ext_dim"] = extd;
            xs.push_back(std::move(x));
        }
        e["cross_check"] = std::move(xs);
        e["cross_check_scope"] = "exact";

        Module back = tr.is_zero() ? zero_module(side) : transpose(tr, c.n);
        bool iso;
        if (back.is_zero() || m.is_zero()) {
            iso = back.is_zero() && m.is_zero();
        } else {
            IsoResult ir = is_isomorphic(back, m, c.lim.isoCap, c.lim.seed);
            if (ir.verdict == Tri::Undecided)
                throw CapError("double-transpose comparison is undecided under the iso cap");
            iso = ir.verdict == Tri::Yes;
        }
        internal_check(iso, "the double transpose is not isomorphic to the original");
        r.line("  double transpose: Tr(Tr(" + nmod.name + ")) is isomorphic to " + nmod.name);
        e["double_transpose_isomorphic"] = iso;
        r.line("");
        mods.push_back(std::move(e));
    }
    r.j["modules"] = std::move(mods);
    return r;
}

Rep cmd_resolve(const Ctx& c, const std::string& modulesText) {
    Rep r = make_header(c, "resolve");
    std::vector<NamedModule> bundle = parse_module_file(modulesText, *c.a);
    if (bundle.empty()) throw InputError("the resolve command needs at least one module");

    int bound = c.n + 1;
    r.line("resolving each module to length <= " + std::to_string(bound) + " (= n + 1)");
    r.line("");
    ordered_json mods = ordered_json::array();
    for (const NamedModule& nmod : bundle) {
        const Module& m = nmod.mod;
        ordered_json e;
        e["name"] = nmod.name;
        e["dims"] = m.dims;
        r.line("module " + nmod.name + "  dims " + dims_text(m.dims));
        Resolution res = minimal_resolution(m, bound);
        e["length"] = res.length();
        e["terminated"] = res.terminated;
        if (res.terminated) {
            r.line("  terminated: yes; pdim = " + std::to_string(res.length()));
            e["pdim"] = res.length();
            e["pdim_scope"] = "exact";
        } else {
            r.line("  terminated: no within the bound; pdim >= " + std::to_string(bound + 1));
            e["pdim_lower_bound"] = bound + 1;
            e["pdim_scope"] = "lower bound: the resolution was cut off at the length bound";
        }
        ordered_json cj;
        render_complex(r, "  ", res.cx, cj);
        r.line("  aug (" + projective_sum_name(res.aug.source) + " -> " + nmod.name +
               "): " + mor_text(res.aug));
        cj["aug"] = mor_json(res.aug);
        e["resolution"] = std::move(cj);
        r.line("");
        mods.push_back(std::move(e));
    }
    r.j["modules"] = std::move(mods);
    return r;
}

}  // namespace

std::string run_command(const std::string& command, const SessionConfig& cfg,
                        const std::string& algebraText, const std::string& modulesText,
                        const std::string& structureText) {
    if (cfg.format != "text" && cfg.format != "structured")
        throw InputError("format must be text or structured, got '" + cfg.format + "'");
    if (cfg.isoCap == 0 || cfg.latticeCap == 0 || cfg.classCap == 0 || cfg.subsetCap == 0)
        throw InputError("caps must be positive");
    if (cfg.multBound < 1) throw InputError("mult bound must be at least 1");
    if (cfg.n < 0) throw InputError("n must be a positive integer");
    if (cfg.dimBound < 0) throw InputError("dim bound must be at least 1");

    AlgebraFile af = parse_algebra_file(algebraText);

    Ctx c;
    c.a = af.alg.get();
    c.n = cfg.n == 0 ? af.n : cfg.n;
    c.dimBound = cfg.dimBound == 0 ? 2 * c.a->dim() : cfg.dimBound;
    c.multBound = cfg.multBound;
    c.subsetCap = static_cast<size_t>(cfg.subsetCap);
    c.lim.isoCap = static_cast<size_t>(cfg.isoCap);
    c.lim.latticeCap = static_cast<size_t>(cfg.latticeCap);
    c.lim.classCap = static_cast<size_t>(cfg.classCap);
    c.lim.seed = cfg.seed;
    c.echo = cfg;
    if (c.n < 1) throw InputError("n must be a positive integer");
    if (c.dimBound < 1) throw InputError("dim bound must be at least 1");

    Rep r;
    if (command == "exn") {
        r = cmd_exn(c);
    } else if (command == "maxn") {
        r = cmd_maxn(c);
    } else if (command == "structures") {
        r = cmd_structures(c);
    } else if (command == "check") {
        if (modulesText.empty()) throw InputError("the check command needs a module file");
        r = cmd_check(c, modulesText, structureText);
    } else if (command == "tr") {
        if (modulesText.empty()) throw InputError("the tr command needs a module file");
        r = cmd_tr(c, modulesText);
    } else if (command == "resolve") {
        if (modulesText.empty()) throw InputError("the resolve command needs a module file");
        r = cmd_resolve(c, modulesText);
    } else {
        throw InputError("unknown command '" + command +
                         "': expected exn, maxn, structures, check, tr, or resolve");
    }

    if (cfg.format == "structured") return r.j.dump(2) + "\n";
    return r.text;
}

}  // namespace nexact
