#include "nexact/algebra.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "nexact/errors.hpp"

namespace nexact {

namespace {

// Guards on raw enumeration before any reduction happens.
constexpr size_t kPathCountCap = 20000;
constexpr size_t kProductRowCap = 400000;

int src_of_seq(const Quiver& q, const std::vector<int>& arrows) {
    return q.arrows[arrows.front()].src;
}

int tgt_of_seq(const Quiver& q, const std::vector<int>& arrows) {
    return q.arrows[arrows.back()].tgt;
}

struct PathGen {
    // Generation order: all trivial paths (one per vertex, id == vertex), then
    // length 1, length 2, ...  Arrow sequences are in application order.
    std::vector<std::vector<int>> seq;
    std::vector<int> src, tgt, len;
    std::vector<int> firstOfLen;  // firstOfLen[l] = id of first path of length l
    std::map<std::vector<int>, int> index;  // nonempty sequences only

    int count() const { return static_cast<int>(seq.size()); }
    int lookup(const std::vector<int>& s) const {
        auto it = index.find(s);
        return it == index.end() ? -1 : it->second;
    }
};

PathGen generate_paths(const Quiver& q, int max_len) {
    PathGen g;
    g.firstOfLen.push_back(0);
    for (int v = 0; v < static_cast<int>(q.vertices.size()); ++v) {
        g.seq.push_back({});
        g.src.push_back(v);
        g.tgt.push_back(v);
        g.len.push_back(0);
    }
    for (int l = 1; l <= max_len; ++l) {
        g.firstOfLen.push_back(g.count());
        int lo = g.firstOfLen[l - 1], hi = g.firstOfLen[l];
        for (int id = lo; id < hi; ++id) {
            for (int a = 0; a < static_cast<int>(q.arrows.size()); ++a) {
                if (q.arrows[a].src != g.tgt[id]) continue;
                std::vector<int> s = g.seq[id];
                s.push_back(a);
                g.index.emplace(s, g.count());
                g.seq.push_back(std::move(s));
                g.src.push_back(g.src[id]);
                g.tgt.push_back(q.arrows[a].tgt);
                g.len.push_back(l);
                if (g.seq.size() > kPathCountCap)
                    throw CapError("path enumeration exceeded the internal path-count bound; "
                                   "lower the path length cap or simplify the quiver");
            }
        }
        if (g.count() == g.firstOfLen.back() && l < max_len) {
            // No paths of this length at all; none will appear later either.
            while (static_cast<int>(g.firstOfLen.size()) <= max_len)
                g.firstOfLen.push_back(g.count());
            break;
        }
    }
    g.firstOfLen.push_back(g.count());
    while (static_cast<int>(g.firstOfLen.size()) < max_len + 2)
        g.firstOfLen.push_back(g.count());
    return g;
}

/* Row space with pivot = highest nonzero column.  Rows are kept in echelon
 * form (each pivot column owned by exactly one row), which makes reduce() a
 * unique normal form even without inter-reducing old rows. */
struct RowReducer {
    int ncols;
    uint32_t p;
    std::vector<std::vector<uint32_t>> rows;
    std::vector<int> rowOfCol;

    RowReducer(int n, uint32_t prime) : ncols(n), p(prime), rowOfCol(n, -1) {}

    void reduce(std::vector<uint32_t>& v) const {
        for (int c = ncols - 1; c >= 0; --c) {
            if (v[c] == 0 || rowOfCol[c] < 0) continue;
            const auto& row = rows[rowOfCol[c]];
            uint32_t f = v[c];
            for (int j = c; j >= 0; --j)
                if (row[j]) v[j] = fp_sub(p, v[j], fp_mul(p, f, row[j]));
        }
    }

    // Returns true when v was independent (and is now part of the span).
    bool insert(std::vector<uint32_t> v) {
        reduce(v);
        int c = ncols - 1;
        while (c >= 0 && v[c] == 0) --c;
        if (c < 0) return false;
        uint32_t inv = fp_inv(p, v[c]);
        for (int j = 0; j <= c; ++j)
            if (v[j]) v[j] = fp_mul(p, v[j], inv);
        rowOfCol[c] = static_cast<int>(rows.size());
        rows.push_back(std::move(v));
        return true;
    }
};

struct Phase {
    PathGen paths;
    RowReducer ideal{0, 2};
    std::vector<int> selected;  // path ids, generation order
    int stopLen = -1;
    int completeLen = 0;
};

int relation_spread(const std::vector<Relation>& rels) {
    int spread = 0;
    for (const auto& r : rels) {
        int lo = 1 << 30, hi = 0;
        for (const auto& t : r.terms) {
            lo = std::min(lo, static_cast<int>(t.arrows.size()));
            hi = std::max(hi, static_cast<int>(t.arrows.size()));
        }
        if (!r.terms.empty()) spread = std::max(spread, hi - lo);
    }
    return spread;
}

/* Generates every path of length <= window, spans the relation ideal by all
 * products (left factor) * term * (right factor) whose terms all fit in the
 * window, and greedily selects basis paths by (length, generation order).
 * The ideal is only complete on lengths <= window - spread, so selection and
 * the stop search are confined to that range. */
Phase run_phase(const Quiver& q, const std::vector<Relation>& rels, uint32_t p, int window,
                int spread) {
    Phase ph;
    ph.paths = generate_paths(q, window);
    ph.completeLen = window - spread;
    const PathGen& g = ph.paths;
    ph.ideal = RowReducer(g.count(), p);

    size_t products = 0;
    for (const auto& rel : rels) {
        int u = src_of_seq(q, rel.terms.front().arrows);
        int w = tgt_of_seq(q, rel.terms.front().arrows);
        int maxT = 0;
        for (const auto& t : rel.terms) maxT = std::max(maxT, static_cast<int>(t.arrows.size()));
        for (int qi = 0; qi < g.count(); ++qi) {
            if (g.tgt[qi] != u) continue;
            for (int pi = 0; pi < g.count(); ++pi) {
                if (g.src[pi] != w) continue;
                if (g.len[qi] + g.len[pi] + maxT > window) continue;
                if (++products > kProductRowCap)
                    throw CapError("relation-ideal enumeration exceeded the internal bound; "
                                   "lower the path length cap or simplify the presentation");
                std::vector<uint32_t> row(g.count(), 0);
                for (const auto& t : rel.terms) {
                    std::vector<int> s = g.seq[qi];
                    s.insert(s.end(), t.arrows.begin(), t.arrows.end());
                    s.insert(s.end(), g.seq[pi].begin(), g.seq[pi].end());
                    int id = g.lookup(s);
                    internal_check(id >= 0, "ideal product path missing from the window");
                    row[id] = fp_add(p, row[id], t.coeff);
                }
                ph.ideal.insert(std::move(row));
            }
        }
    }

    RowReducer sel(g.count(), p);
    for (int l = 0; l <= ph.completeLen; ++l) {
        int lo = ph.paths.firstOfLen[l], hi = ph.paths.firstOfLen[l + 1];
        int fresh = 0;
        for (int id = lo; id < hi; ++id) {
            std::vector<uint32_t> v(g.count(), 0);
            v[id] = 1;
            ph.ideal.reduce(v);
            if (!sel.insert(std::move(v))) continue;
            ++fresh;
            if (ph.stopLen < 0) ph.selected.push_back(id);
        }
        if (fresh == 0 && ph.stopLen < 0) ph.stopLen = l;
        internal_check(fresh == 0 || ph.stopLen < 0,
                       "a path length past the stop length contributed basis elements");
    }
    return ph;
}

void validate_presentation(const Quiver& q, const std::vector<Relation>& rels, uint32_t p,
                           int path_cap, int default_n) {
    if (!is_prime(p)) throw InputError("the coefficient modulus must be prime");
    if (p >= (1u << 31)) throw InputError("the coefficient modulus is too large");
    if (q.vertices.empty()) throw InputError("the quiver needs at least one vertex");
    if (path_cap < 2) throw InputError("the path length cap must be at least 2");
    if (default_n < 1) throw InputError("n must be at least 1");

    std::set<std::string> seen;
    for (const auto& v : q.vertices) {
        if (v.empty()) throw InputError("vertex labels must be nonempty");
        if (!seen.insert(v).second) throw InputError("duplicate vertex label: " + v);
    }
    seen.clear();
    for (const auto& a : q.arrows) {
        if (a.name.empty()) throw InputError("arrow names must be nonempty");
        if (!seen.insert(a.name).second) throw InputError("duplicate arrow name: " + a.name);
        if (a.src < 0 || a.src >= static_cast<int>(q.vertices.size()) || a.tgt < 0 ||
            a.tgt >= static_cast<int>(q.vertices.size()))
            throw InputError("arrow " + a.name + " has an endpoint outside the vertex set");
    }
    for (const auto& rel : rels) {
        if (rel.terms.empty()) throw InputError("a relation needs at least one term");
        int u = -1, w = -1;
        for (const auto& t : rel.terms) {
            if (t.arrows.size() < 2)
                throw InputError("relation paths must have length at least 2");
            for (size_t k = 0; k < t.arrows.size(); ++k) {
                int a = t.arrows[k];
                if (a < 0 || a >= static_cast<int>(q.arrows.size()))
                    throw InputError("relation refers to an unknown arrow");
                if (k > 0 && q.arrows[t.arrows[k - 1]].tgt != q.arrows[a].src)
                    throw InputError("relation path does not compose");
            }
            int ts = src_of_seq(q, t.arrows), tt = tgt_of_seq(q, t.arrows);
            if (u < 0) {
                u = ts;
                w = tt;
            } else if (ts != u || tt != w) {
                throw InputError("relation terms must share source and target");
            }
            if (static_cast<int>(t.arrows.size()) > path_cap)
                throw InputError("a relation path exceeds the path length cap");
        }
    }
}

std::vector<Relation> normalize_relations(const std::vector<Relation>& rels, uint32_t p) {
    std::vector<Relation> out;
    for (const auto& rel : rels) {
        Relation r;
        for (auto t : rel.terms) {
            t.coeff %= p;
            if (t.coeff) r.terms.push_back(std::move(t));
        }
        if (!r.terms.empty()) out.push_back(std::move(r));
    }
    return out;
}

// The quotient by an admissible ideal has a nilpotent arrow ideal; a radical
// that stabilizes at a nonzero dimension exposes a non-admissible presentation
// that still happened to have a finite path basis.
void check_radical_nilpotent(const Algebra& a) {
    int d = a.dim();
    std::vector<int> gens;
    for (int i = 0; i < d; ++i)
        if (a.basis[i].length() >= 1) gens.push_back(i);
    Mat span(d, static_cast<int>(gens.size()), a.p);
    for (int k = 0; k < static_cast<int>(gens.size()); ++k) span.at(gens[k], k) = 1;
    span = column_space_basis(span);
    while (span.cols > 0) {
        Mat next(d, static_cast<int>(gens.size()) * span.cols, a.p);
        int col = 0;
        for (int gi : gens) {
            std::vector<uint32_t> gv(d, 0);
            gv[gi] = 1;
            for (int c = 0; c < span.cols; ++c, ++col) {
                std::vector<uint32_t> sv(d, 0);
                for (int r = 0; r < d; ++r) sv[r] = span.at(r, c);
                auto prod = a.multiply_vec(gv, sv);
                for (int r = 0; r < d; ++r) next.at(r, col) = prod[r];
            }
        }
        next = column_space_basis(next);
        if (next.cols >= span.cols)
            throw InputError("relations do not define an admissible ideal "
                             "(the arrow ideal is not nilpotent)");
        span = std::move(next);
    }
}

void check_table(const Algebra& a) {
    int d = a.dim();
    std::vector<std::vector<uint32_t>> unit(d, std::vector<uint32_t>(d, 0));
    for (int i = 0; i < d; ++i) unit[i][i] = 1;

    std::vector<uint32_t> one(d, 0);
    for (int v = 0; v < a.vertex_count(); ++v) {
        internal_check(a.basis[v].length() == 0 && a.basis[v].src == v,
                       "trivial paths are not the leading basis elements");
        one[v] = 1;
    }
    for (int i = 0; i < d; ++i) {
        internal_check(a.multiply_vec(one, unit[i]) == unit[i], "left identity failed");
        internal_check(a.multiply_vec(unit[i], one) == unit[i], "right identity failed");
    }

    long long triples = static_cast<long long>(d) * d * d;
    long long budget = std::min<long long>(triples, 200000);
    long long step = std::max<long long>(1, triples / budget);
    for (long long t = 0; t < triples; t += step) {
        int i = static_cast<int>(t / (static_cast<long long>(d) * d));
        int j = static_cast<int>((t / d) % d);
        int k = static_cast<int>(t % d);
        auto ij = a.multiply_vec(unit[i], unit[j]);
        auto jk = a.multiply_vec(unit[j], unit[k]);
        internal_check(a.multiply_vec(ij, unit[k]) == a.multiply_vec(unit[i], jk),
                       "multiplication table is not associative");
    }

    for (const auto& rel : a.relations) {
        std::vector<uint32_t> acc(d, 0);
        for (const auto& term : rel.terms) {
            auto red = a.reduce_path(term.arrows);
            for (int i = 0; i < d; ++i)
                acc[i] = fp_add(a.p, acc[i], fp_mul(a.p, term.coeff, red[i]));
        }
        internal_check(std::all_of(acc.begin(), acc.end(), [](uint32_t x) { return x == 0; }),
                       "a defining relation does not vanish in the quotient");
    }
}

}  // namespace

// Stateless access point for the members only the build may touch.
struct AlgebraBuilder {
    static void build_projectives(Algebra& a);
    static std::unique_ptr<Algebra> build_core(const Quiver& q,
                                               const std::vector<Relation>& rels, uint32_t p,
                                               int path_cap, int default_n, bool op_side);
    static void check_opposite_pair(const Algebra& a, const Algebra& op);
};

void AlgebraBuilder::build_projectives(Algebra& a) {
    int nv = a.vertex_count();
    a.projBasis.assign(nv, std::vector<std::vector<int>>(nv));
    for (int i = 0; i < a.dim(); ++i) a.projBasis[a.basis[i].src][a.basis[i].tgt].push_back(i);

    a.projectives.clear();
    for (int v = 0; v < nv; ++v) {
        Module m;
        m.alg = &a;
        m.dims.resize(nv);
        for (int w = 0; w < nv; ++w) m.dims[w] = static_cast<int>(a.projBasis[v][w].size());
        for (const auto& arrow : a.quiver.arrows) {
            int ai = static_cast<int>(&arrow - a.quiver.arrows.data());
            Mat mat(m.dims[arrow.tgt], m.dims[arrow.src], a.p);
            const auto& cols = a.projBasis[v][arrow.src];
            const auto& rows = a.projBasis[v][arrow.tgt];
            for (size_t c = 0; c < cols.size(); ++c) {
                for (const auto& [bid, coeff] : a.multTable[a.arrowBasisId_[ai]][cols[c]]) {
                    auto it = std::find(rows.begin(), rows.end(), bid);
                    internal_check(it != rows.end(),
                                   "projective arrow action left its target grade");
                    mat.at(static_cast<int>(it - rows.begin()), static_cast<int>(c)) = coeff;
                }
            }
            m.maps.push_back(std::move(mat));
        }
        a.projectives.push_back(std::move(m));
    }
}

/* Builds one side (no opposite linkage).  Phase 1 probes with the configured
 * cap; once the stop length is known the window is regrown so that every
 * product of two basis paths still lands where the ideal is complete. */
std::unique_ptr<Algebra> AlgebraBuilder::build_core(const Quiver& q,
                                                    const std::vector<Relation>& rels, uint32_t p,
                                                    int path_cap, int default_n, bool op_side) {
    auto alg = std::make_unique<Algebra>();
    alg->p = p;
    alg->quiver = q;
    alg->relations = rels;
    alg->default_n = default_n;
    alg->opSide_ = op_side;

    int spread = relation_spread(rels);
    Phase ph = run_phase(q, rels, p, path_cap + spread, spread);
    if (ph.stopLen < 0)
        throw CapError("not finite-dimensional under cap: every path length up to " +
                       std::to_string(ph.completeLen) +
                       " contributes basis elements; raise the path length cap if the "
                       "algebra is finite-dimensional");
    int need = std::max(2 * (ph.stopLen - 1), 2);
    if (need > ph.completeLen) {
        Phase ph2 = run_phase(q, rels, p, need + spread, spread);
        internal_check(ph2.stopLen >= 0 && ph2.stopLen <= ph.stopLen,
                       "regrown window lost the stop length");
        ph = std::move(ph2);
    }

    const PathGen& g = ph.paths;
    for (int id : ph.selected) {
        BasisPath b;
        b.arrows = g.seq[id];
        b.src = g.src[id];
        b.tgt = g.tgt[id];
        alg->basis.push_back(std::move(b));
    }
    int d = alg->dim();

    alg->trivialBasisId_.assign(q.vertices.size(), -1);
    alg->arrowBasisId_.assign(q.arrows.size(), -1);
    for (int i = 0; i < d; ++i) {
        const auto& b = alg->basis[i];
        if (b.length() == 0) alg->trivialBasisId_[b.src] = i;
        if (b.length() == 1) alg->arrowBasisId_[b.arrows[0]] = i;
    }
    for (int v = 0; v < alg->vertex_count(); ++v)
        internal_check(alg->trivialBasisId_[v] >= 0, "a trivial path fell out of the basis");
    for (size_t a = 0; a < q.arrows.size(); ++a)
        internal_check(alg->arrowBasisId_[a] >= 0, "an arrow fell out of the basis");

    // Residues of the basis paths, for expressing products in coordinates.
    Mat basisResidues(g.count(), d, p);
    for (int k = 0; k < d; ++k) {
        std::vector<uint32_t> v(g.count(), 0);
        v[ph.selected[k]] = 1;
        ph.ideal.reduce(v);
        for (int r = 0; r < g.count(); ++r) basisResidues.at(r, k) = v[r];
    }

    alg->multTable.assign(d, std::vector<SparseVec>(d));
    for (int i = 0; i < d; ++i) {
        std::vector<int> targets;
        std::vector<std::vector<uint32_t>> cols;
        for (int j = 0; j < d; ++j) {
            if (alg->basis[i].src != alg->basis[j].tgt) continue;
            std::vector<int> s = alg->basis[j].arrows;
            s.insert(s.end(), alg->basis[i].arrows.begin(), alg->basis[i].arrows.end());
            int id = s.empty() ? alg->basis[j].src /* == trivial path id */ : g.lookup(s);
            internal_check(id >= 0, "basis product fell outside the path window");
            std::vector<uint32_t> v(g.count(), 0);
            v[id] = 1;
            ph.ideal.reduce(v);
            targets.push_back(j);
            cols.push_back(std::move(v));
        }
        if (targets.empty()) continue;
        Mat target(g.count(), static_cast<int>(targets.size()), p);
        for (size_t c = 0; c < cols.size(); ++c)
            for (int r = 0; r < g.count(); ++r) target.at(r, static_cast<int>(c)) = cols[c][r];
        auto sol = solve_linear(basisResidues, target);
        internal_check(sol.has_value(), "basis product residue not in the basis span");
        for (size_t c = 0; c < targets.size(); ++c) {
            SparseVec sv;
            for (int k = 0; k < d; ++k)
                if (uint32_t coeff = sol->at(k, static_cast<int>(c)))
                    sv.emplace_back(k, coeff);
            alg->multTable[i][targets[c]] = std::move(sv);
        }
    }

    check_table(*alg);
    check_radical_nilpotent(*alg);
    build_projectives(*alg);
    return alg;
}

namespace {

Quiver reversed_quiver(const Quiver& q) {
    Quiver r = q;
    for (auto& a : r.arrows) std::swap(a.src, a.tgt);
    return r;
}

std::vector<Relation> reversed_relations(const std::vector<Relation>& rels) {
    std::vector<Relation> out = rels;
    for (auto& rel : out)
        for (auto& t : rel.terms) std::reverse(t.arrows.begin(), t.arrows.end());
    return out;
}

}  // namespace

// The path-reversal map must be a linear bijection intertwining the two
// multiplications contravariantly; this pins down the opposite construction.
void AlgebraBuilder::check_opposite_pair(const Algebra& a, const Algebra& op) {
    internal_check(a.dim() == op.dim(), "opposite algebra has a different dimension");
    int d = a.dim();
    Mat rev(d, d, a.p);
    std::vector<std::vector<uint32_t>> revCol(d);
    for (int i = 0; i < d; ++i) {
        std::vector<uint32_t> v;
        if (a.basis[i].length() == 0) {
            v.assign(d, 0);
            v[op.trivialBasisId_[a.basis[i].src]] = 1;
        } else {
            std::vector<int> s = a.basis[i].arrows;
            std::reverse(s.begin(), s.end());
            v = op.reduce_path(s);
        }
        for (int r = 0; r < d; ++r) rev.at(r, i) = v[r];
        revCol[i] = std::move(v);
    }
    internal_check(is_invertible(rev), "path reversal is not a bijection onto the opposite");

    long long pairs = static_cast<long long>(d) * d;
    long long step = std::max<long long>(1, pairs / 20000);
    for (long long t = 0; t < pairs; t += step) {
        int i = static_cast<int>(t / d), j = static_cast<int>(t % d);
        std::vector<uint32_t> lhs(d, 0);
        for (const auto& [k, c] : a.multTable[i][j])
            for (int r = 0; r < d; ++r)
                lhs[r] = fp_add(a.p, lhs[r], fp_mul(a.p, c, revCol[k][r]));
        auto rhs = op.multiply_vec(revCol[j], revCol[i]);
        internal_check(lhs == rhs, "path reversal does not reverse products");
    }
}

int Quiver::vertex_index(const std::string& label) const {
    for (size_t i = 0; i < vertices.size(); ++i)
        if (vertices[i] == label) return static_cast<int>(i);
    return -1;
}

int Quiver::arrow_index(const std::string& name) const {
    for (size_t i = 0; i < arrows.size(); ++i)
        if (arrows[i].name == name) return static_cast<int>(i);
    return -1;
}

std::string BasisPath::display(const Quiver& q) const {
    if (arrows.empty()) return "e_" + q.vertices[src];
    std::string out;
    for (auto it = arrows.rbegin(); it != arrows.rend(); ++it) {
        if (!out.empty()) out += "*";
        out += q.arrows[*it].name;
    }
    return out;
}

std::vector<uint32_t> Algebra::reduce_path(const std::vector<int>& arrows_applied_first) const {
    internal_check(!arrows_applied_first.empty(), "cannot reduce an empty path");
    int first = arrows_applied_first.front();
    if (first < 0 || first >= arrow_count())
        throw InputError("path refers to an unknown arrow");
    std::vector<uint32_t> acc(dim(), 0);
    acc[trivialBasisId_[quiver.arrows[first].src]] = 1;
    int at = quiver.arrows[first].src;
    for (int a : arrows_applied_first) {
        if (a < 0 || a >= arrow_count()) throw InputError("path refers to an unknown arrow");
        if (quiver.arrows[a].src != at) throw InputError("path arrows do not compose");
        at = quiver.arrows[a].tgt;
        std::vector<uint32_t> unit(dim(), 0);
        unit[arrowBasisId_[a]] = 1;
        acc = multiply_vec(unit, acc);
    }
    return acc;
}

SparseVec Algebra::multiply(int bi, int bj) const {
    internal_check(bi >= 0 && bi < dim() && bj >= 0 && bj < dim(), "basis index out of range");
    return multTable[bi][bj];
}

std::vector<uint32_t> Algebra::multiply_vec(const std::vector<uint32_t>& x,
                                            const std::vector<uint32_t>& y) const {
    internal_check(static_cast<int>(x.size()) == dim() && static_cast<int>(y.size()) == dim(),
                   "coordinate vector has the wrong length");
    std::vector<uint32_t> out(dim(), 0);
    for (int i = 0; i < dim(); ++i) {
        if (!x[i]) continue;
        for (int j = 0; j < dim(); ++j) {
            if (!y[j]) continue;
            uint32_t f = fp_mul(p, x[i], y[j]);
            for (const auto& [k, c] : multTable[i][j]) out[k] = fp_add(p, out[k], fp_mul(p, f, c));
        }
    }
    return out;
}

const Module& Algebra::projective(int v) const {
    internal_check(v >= 0 && v < vertex_count(), "vertex index out of range");
    return projectives[v];
}

std::unique_ptr<Algebra> build_algebra(const Quiver& q, const std::vector<Relation>& rels,
                                       uint32_t p, int path_cap, int default_n) {
    validate_presentation(q, rels, p, path_cap, default_n);
    auto normal = normalize_relations(rels, p);
    auto alg = AlgebraBuilder::build_core(q, normal, p, path_cap, default_n, false);
    auto op = AlgebraBuilder::build_core(reversed_quiver(q), reversed_relations(normal), p,
                                         path_cap, default_n, true);
    AlgebraBuilder::check_opposite_pair(*alg, *op);
    op->opposite = alg.get();
    alg->opposite = op.get();
    alg->oppositeOwned_ = std::move(op);
    return alg;
}

const Algebra& opposite_algebra(const Algebra& a) {
    internal_check(a.opposite != nullptr, "algebra has no opposite attached");
    return *a.opposite;
}

}  // namespace nexact
