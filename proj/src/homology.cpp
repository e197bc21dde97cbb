#include "nexact/homology.hpp"

#include <algorithm>
#include <string>

#include "nexact/algebra.hpp"
#include "nexact/errors.hpp"

namespace nexact {

namespace {

const Algebra& alg_of(const Module& m) {
    internal_check(m.alg != nullptr, "module without an algebra");
    return *m.alg;
}

uint32_t m_p(const Module& m) { return alg_of(m).p; }

int total_rank(const ModMorphism& f) {
    int r = 0;
    for (const Mat& m : f.mats) r += mat_rank(m);
    return r;
}

bool commutes(const ModMorphism& f) {
    const Algebra& a = alg_of(f.source);
    for (int ai = 0; ai < a.arrow_count(); ++ai) {
        const Arrow& ar = a.quiver.arrows[ai];
        if (mat_mul(f.target.maps[ai], f.mats[ar.src]) !=
            mat_mul(f.mats[ar.tgt], f.source.maps[ai]))
            return false;
    }
    return true;
}

// Column vector x in m at vertex v pushed forward along a basis path.
Mat path_act(const Module& m, const BasisPath& bp, Mat x) {
    for (int ai : bp.arrows) x = mat_mul(m.maps[ai], x);
    return x;
}

// The morphism P_v -> m sending the trivial path to the column x; every basis
// path of P_v goes to its action on x.
ModMorphism hom_from_point(const Algebra& a, int v, const Mat& x, const Module& m) {
    ModMorphism f;
    f.source = a.projective(v);
    f.target = m;
    for (int w = 0; w < a.vertex_count(); ++w) {
        const auto& ids = a.projBasis[v][w];
        Mat mw(m.dims[w], static_cast<int>(ids.size()), a.p);
        for (size_t j = 0; j < ids.size(); ++j) {
            Mat col = path_act(m, a.basis[ids[j]], x);
            for (int i = 0; i < mw.rows; ++i) mw.at(i, static_cast<int>(j)) = col.at(i, 0);
        }
        f.mats.push_back(std::move(mw));
    }
    return f;
}

// Right multiplication by the arrow ai: P_{tgt(ai)} -> P_{src(ai)}.
ModMorphism right_mult_by_arrow(const Algebra& a, int ai) {
    const Arrow& ar = a.quiver.arrows[ai];
    std::vector<uint32_t> res = a.reduce_path({ai});
    int aid = -1;
    for (size_t k = 0; k < res.size(); ++k)
        if (res[k]) {
            internal_check(aid == -1 && res[k] == 1, "arrow residue is not a single basis path");
            aid = static_cast<int>(k);
        }
    internal_check(aid >= 0, "arrow reduces to zero");

    ModMorphism f;
    f.source = a.projective(ar.tgt);
    f.target = a.projective(ar.src);
    for (int u = 0; u < a.vertex_count(); ++u) {
        const auto& fromTgt = a.projBasis[ar.tgt][u];
        const auto& fromSrc = a.projBasis[ar.src][u];
        std::vector<int> pos(static_cast<size_t>(a.dim()), -1);
        for (size_t r = 0; r < fromSrc.size(); ++r) pos[fromSrc[r]] = static_cast<int>(r);
        Mat mu(static_cast<int>(fromSrc.size()), static_cast<int>(fromTgt.size()), a.p);
        for (size_t j = 0; j < fromTgt.size(); ++j)
            for (const auto& [id, c] : a.multiply(fromTgt[j], aid)) {
                internal_check(pos[id] >= 0, "arrow product leaves the projective block");
                mu.at(pos[id], static_cast<int>(j)) = c;
            }
        f.mats.push_back(std::move(mu));
    }
    return f;
}

ModMorphism blockdiag(const ModMorphism& f, const ModMorphism& g) {
    return stack_horizontal(compose(incl_left(f.target, g.target), f),
                            compose(incl_right(f.target, g.target), g));
}

// f_i with t_i . f_i = g_i . d_i degree by degree above a seeded f_0.
std::vector<ModMorphism> lift_chain_above(const Complex& x, const Complex& y,
                                          ModMorphism f0) {
    std::vector<ModMorphism> f;
    f.push_back(std::move(f0));
    for (int i = 1; i <= x.top_degree(); ++i) {
        auto fi = lift_through(y.diff(i), compose(f.back(), x.diff(i)));
        if (!fi)
            throw InputError("chain lift does not exist: the target complex is not exact "
                             "where the lift needs it");
        f.push_back(std::move(*fi));
    }
    return f;
}

// s_i with id - g = d s + s d for a self chain map g inducing the identity
// on the value of the complex.
std::vector<ModMorphism> null_homotopy(const Complex& c, const std::vector<ModMorphism>& u,
                                       const std::vector<ModMorphism>& v) {
    int top = c.top_degree();
    std::vector<ModMorphism> h;
    for (int i = 0; i <= top; ++i)
        h.push_back(mor_sub(identity_morphism(c.terms[i]), compose(v[i], u[i])));

    std::vector<ModMorphism> s;
    for (int i = 0; i < top; ++i) {
        ModMorphism r = i == 0 ? h[0] : mor_sub(h[i], compose(s.back(), c.diff(i)));
        auto si = lift_through(c.diff(i + 1), r);
        internal_check(si.has_value(), "chain homotopy system has no solution");
        s.push_back(std::move(*si));
    }
    ModMorphism rem = mor_sub(h[top], compose(s.back(), c.diff(top)));
    internal_check(rem.is_zero(), "chain homotopy fails at the top degree");
    return s;
}

}  // namespace

// --- radicals and covers --------------------------------------------------------

SubspaceFamily radical_family(const Module& m) {
    const Algebra& a = alg_of(m);
    SubspaceFamily rad;
    for (int v = 0; v < a.vertex_count(); ++v) {
        Mat all(m.dims[v], 0, a.p);
        for (int ai = 0; ai < a.arrow_count(); ++ai)
            if (a.quiver.arrows[ai].tgt == v) all = hstack(all, m.maps[ai]);
        rad.basis.push_back(column_echelon(all));
    }
    return rad;
}

std::pair<Module, ModMorphism> top_of(const Module& m) {
    return quotient_of(m, radical_family(m));
}

std::pair<Module, ModMorphism> projective_cover(const Module& m) {
    const Algebra& a = alg_of(m);
    uint32_t p = a.p;
    SubspaceFamily rad = radical_family(m);

    ModMorphism eps = zero_morphism(zero_module(a), m);
    for (int v = 0; v < a.vertex_count(); ++v) {
        int d = m.dims[v];
        const Mat& b = rad.basis[v];
        if (d == 0 || b.cols == d) continue;
        // unit vectors completing the radical to all of m_v, one P_v each
        Mat ext = column_space_basis(hstack(b, Mat::identity(d, p)));
        for (int c = b.cols; c < ext.cols; ++c)
            eps = stack_horizontal(eps, hom_from_point(a, v, take_columns(ext, {c}), m));
    }
    for (int v = 0; v < a.vertex_count(); ++v)
        internal_check(mat_rank(eps.mats[v]) == m.dims[v], "projective cover is not surjective");
    internal_check(commutes(eps), "projective cover is not a module morphism");
    return {eps.source, eps};
}

Resolution minimal_resolution(const Module& m, int bound) {
    if (bound < 1) throw InputError("resolution bound must be at least 1");
    Resolution r;
    r.minimal = true;

    auto [p0, eps] = projective_cover(m);
    r.cx.terms.push_back(std::move(p0));
    r.aug = std::move(eps);

    auto k = ker_coker_image(r.aug);
    Module ker = k.ker;
    ModMorphism incl = k.i;
    r.terminated = ker.is_zero();
    for (int i = 1; !r.terminated && i <= bound; ++i) {
        auto [pi, ei] = projective_cover(ker);
        r.cx.diffs.push_back(compose(incl, ei));
        r.cx.terms.push_back(std::move(pi));
        auto ki = ker_coker_image(ei);
        ker = ki.ker;
        incl = ki.i;
        r.terminated = ker.is_zero();
    }
    return r;
}

Pdim pdim(const Module& m, int bound) {
    Resolution r = minimal_resolution(m, bound);
    if (r.terminated) return {true, r.length()};
    return {false, bound + 1};
}

std::vector<int> ext_dims(const Resolution& r, const Module& x, int imax) {
    if (imax < 0) throw InputError("extension degree must be nonnegative");
    int len = r.length();
    if (!r.terminated && len < imax + 1)
        throw InputError("resolution is not long enough for the requested degree");
    uint32_t p = m_p(x);

    std::vector<std::vector<ModMorphism>> h(static_cast<size_t>(imax) + 2);
    for (int k = 0; k <= imax + 1 && k <= len; ++k) h[k] = hom_basis(r.cx.terms[k], x);

    // delta[k]: precomposition with d_{k+1} in Hom coordinates
    std::vector<Mat> delta;
    for (int k = 0; k <= imax; ++k) {
        Mat dk(static_cast<int>(h[k + 1].size()), static_cast<int>(h[k].size()), p);
        if (k + 1 <= len)
            for (size_t j = 0; j < h[k].size(); ++j) {
                auto col = morphism_coordinates(h[k + 1], compose(h[k][j], r.cx.diff(k + 1)));
                for (size_t i = 0; i < col.size(); ++i)
                    dk.at(static_cast<int>(i), static_cast<int>(j)) = col[i];
            }
        delta.push_back(std::move(dk));
    }

    std::vector<int> out;
    for (int i = 0; i <= imax; ++i) {
        int cycles = static_cast<int>(h[i].size()) - mat_rank(delta[i]);
        int boundaries = i > 0 ? mat_rank(delta[i - 1]) : 0;
        out.push_back(cycles - boundaries);
    }
    return out;
}

std::vector<int> ext_dims(const Module& m, const Module& x, int imax) {
    if (imax < 0) throw InputError("extension degree must be nonnegative");
    return ext_dims(minimal_resolution(m, imax + 1), x, imax);
}

int ext_dim(const Module& m, const Module& x, int i) { return ext_dims(m, x, i)[i]; }

// --- complexes of projectives ----------------------------------------------------

void validate_complex(const Complex& x) {
    if (x.terms.empty()) throw InputError("complex has no terms");
    const Algebra* a = x.terms[0].alg;
    for (const Module& t : x.terms)
        if (t.alg != a) throw InputError("complex mixes modules over different algebras");
    if (x.diffs.size() + 1 != x.terms.size())
        throw InputError("complex needs exactly one differential between adjacent terms");
    for (size_t i = 0; i < x.diffs.size(); ++i) {
        if (!modules_equal(x.diffs[i].source, x.terms[i + 1]) ||
            !modules_equal(x.diffs[i].target, x.terms[i]))
            throw InputError("differential at degree " + std::to_string(i + 1) +
                             " does not join the adjacent terms");
        validate_morphism(x.diffs[i]);
    }
    for (size_t i = 0; i + 1 < x.diffs.size(); ++i)
        if (!compose(x.diffs[i], x.diffs[i + 1]).is_zero())
            throw InputError("differentials at degrees " + std::to_string(i + 2) + " and " +
                             std::to_string(i + 1) + " do not compose to zero");
}

Complex zero_complex(const Algebra& a, int top_degree) {
    if (top_degree < 0) throw InputError("complex has no terms");
    Complex c;
    Module z = zero_module(a);
    for (int i = 0; i <= top_degree; ++i) c.terms.push_back(z);
    for (int i = 0; i < top_degree; ++i) c.diffs.push_back(zero_morphism(z, z));
    return c;
}

Complex complex_direct_sum(const Complex& x, const Complex& y) {
    if (x.top_degree() != y.top_degree())
        throw InputError("complexes of different lengths cannot be summed");
    Complex out;
    for (size_t i = 0; i < x.terms.size(); ++i)
        out.terms.push_back(direct_sum(x.terms[i], y.terms[i]));
    for (size_t i = 0; i < x.diffs.size(); ++i)
        out.diffs.push_back(blockdiag(x.diffs[i], y.diffs[i]));
    return out;
}

bool is_left_n_exact(const Complex& x, int n) {
    validate_complex(x);
    if (x.top_degree() != n + 1)
        throw InputError("complex must have terms in degrees 0 through n+1");
    for (int k = 1; k <= n; ++k) {
        int nullity = x.diff(k).source.total() - total_rank(x.diff(k));
        if (nullity != total_rank(x.diff(k + 1))) return false;
    }
    return x.diff(n + 1).source.total() == total_rank(x.diff(n + 1));
}

bool is_n_exact(const Complex& x, int n) {
    if (!is_left_n_exact(x, n)) return false;
    Module f = ker_coker_image(x.diff(1)).cok;
    if (f.is_zero()) return true;
    const Algebra& a = alg_of(f);
    Resolution r = minimal_resolution(f, n + 1);
    for (int v = 0; v < a.vertex_count(); ++v) {
        auto e = ext_dims(r, a.projective(v), n);
        for (int i = 0; i <= n; ++i)
            if (e[i]) return false;
    }
    return true;
}

bool is_exn_member(const Module& f, int n) {
    if (f.is_zero()) return true;
    const Algebra& a = alg_of(f);
    Resolution r = minimal_resolution(f, n + 1);
    if (!r.terminated || r.length() != n + 1) return false;
    for (int v = 0; v < a.vertex_count(); ++v) {
        auto e = ext_dims(r, a.projective(v), n);
        for (int i = 0; i <= n; ++i)
            if (e[i]) return false;
    }
    return true;
}

Module fun_of_complex(const Complex& x) {
    validate_complex(x);
    if (x.top_degree() < 1) throw InputError("complex must have at least two terms");
    if (!is_n_exact(x, x.top_degree() - 1))
        throw InputError("complex is not an n-exact sequence");
    return ker_coker_image(x.diff(1)).cok;
}

ModMorphism fun_of_chain_map(const Complex& x, const Complex& y,
                             const std::vector<ModMorphism>& f) {
    if (f.size() != x.terms.size() || x.top_degree() != y.top_degree())
        throw InputError("chain map needs one component per degree of equal-length complexes");
    for (size_t i = 0; i < f.size(); ++i)
        if (!modules_equal(f[i].source, x.terms[i]) || !modules_equal(f[i].target, y.terms[i]))
            throw InputError("chain map component at degree " + std::to_string(i) +
                             " does not join the complexes");
    for (int i = 1; i <= x.top_degree(); ++i)
        if (!morphisms_equal(compose(y.diff(i), f[i]), compose(f[i - 1], x.diff(i))))
            throw InputError("chain map square at degree " + std::to_string(i) +
                             " does not commute");
    auto kx = ker_coker_image(x.diff(1));
    auto ky = ker_coker_image(y.diff(1));
    return factor_through_surjection(kx.p, compose(ky.p, f[0]));
}

Complex res_of_module(const Module& f, int n) {
    const Algebra& a = alg_of(f);
    if (f.is_zero()) return zero_complex(a, n + 1);
    if (!is_exn_member(f, n))
        throw InputError("module is not the value of an n-exact sequence: its projective "
                         "dimension must be exactly n+1 and Hom and Ext into every projective "
                         "must vanish through degree n");
    return minimal_resolution(f, n + 1).cx;
}

Complex op_complex(const Complex& x) {
    validate_complex(x);
    const Algebra& a = alg_of(x.terms[0]);
    const Algebra& ao = opposite_algebra(a);
    int top = x.top_degree();

    for (int i = 0; i <= top; ++i)
        if (projective_cover(x.terms[i]).first.total() != x.terms[i].total())
            throw InputError("complex term in degree " + std::to_string(i) +
                             " is not projective");

    std::vector<ModMorphism> rho;
    for (int ai = 0; ai < a.arrow_count(); ++ai) rho.push_back(right_mult_by_arrow(a, ai));

    // hom bases into each projective; these are the dual coordinates
    std::vector<std::vector<std::vector<ModMorphism>>> h(static_cast<size_t>(top) + 1);
    for (int i = 0; i <= top; ++i)
        for (int v = 0; v < a.vertex_count(); ++v)
            h[i].push_back(hom_basis(x.terms[i], a.projective(v)));

    std::vector<Module> dual(static_cast<size_t>(top) + 1);
    for (int i = 0; i <= top; ++i) {
        Module d;
        d.alg = &ao;
        for (int v = 0; v < a.vertex_count(); ++v)
            d.dims.push_back(static_cast<int>(h[i][v].size()));
        for (int ai = 0; ai < ao.arrow_count(); ++ai) {
            int v = a.quiver.arrows[ai].tgt;  // source vertex of the reversed arrow
            int w = a.quiver.arrows[ai].src;
            Mat mu(d.dims[w], d.dims[v], a.p);
            for (int j = 0; j < d.dims[v]; ++j) {
                auto col = morphism_coordinates(h[i][w], compose(rho[ai], h[i][v][j]));
                for (size_t r = 0; r < col.size(); ++r)
                    mu.at(static_cast<int>(r), j) = col[r];
            }
            d.maps.push_back(std::move(mu));
        }
        dual[i] = std::move(d);
    }

    Complex out;
    for (int k = 0; k <= top; ++k) out.terms.push_back(dual[top - k]);
    for (int k = 1; k <= top; ++k) {
        const ModMorphism& d = x.diff(top - k + 1);
        ModMorphism g;
        g.source = dual[top - k];
        g.target = dual[top - k + 1];
        for (int v = 0; v < a.vertex_count(); ++v) {
            Mat mu(static_cast<int>(h[top - k + 1][v].size()),
                   static_cast<int>(h[top - k][v].size()), a.p);
            for (size_t j = 0; j < h[top - k][v].size(); ++j) {
                auto col = morphism_coordinates(h[top - k + 1][v], compose(h[top - k][v][j], d));
                for (size_t r = 0; r < col.size(); ++r)
                    mu.at(static_cast<int>(r), static_cast<int>(j)) = col[r];
            }
            g.mats.push_back(std::move(mu));
        }
        out.diffs.push_back(std::move(g));
    }
    for (size_t i = 0; i + 1 < out.diffs.size(); ++i)
        internal_check(compose(out.diffs[i], out.diffs[i + 1]).is_zero(),
                       "dualized differentials do not compose to zero");
    return out;
}

Complex complete_n_kernel(const Complex& partial, int n) {
    validate_complex(partial);
    int m = partial.top_degree();
    if (m < 1) throw InputError("partial complex needs at least one differential");
    if (m > n + 1)
        throw InputError("partial complex is already longer than degrees 0 through n+1");
    for (int k = 1; k < m; ++k) {
        int nullity = partial.diff(k).source.total() - total_rank(partial.diff(k));
        if (nullity != total_rank(partial.diff(k + 1)))
            throw InputError("differential at degree " + std::to_string(k + 1) +
                             " is not a weak kernel of the one below it");
    }
    Module f = ker_coker_image(partial.diff(1)).cok;
    if (!pdim(f, n + 1).exact)
        throw InputError("no completion exists: the cokernel of the bottom differential has "
                         "projective dimension at least n+2");
    if (m == n + 1) return partial;

    Complex out = partial;
    auto k = ker_coker_image(out.diff(m));
    Module ker = k.ker;
    ModMorphism incl = k.i;
    for (int i = m + 1; i <= n + 1; ++i) {
        auto [pi, ei] = projective_cover(ker);
        out.diffs.push_back(compose(incl, ei));
        out.terms.push_back(std::move(pi));
        auto ki = ker_coker_image(ei);
        ker = ki.ker;
        incl = ki.i;
    }
    internal_check(is_left_n_exact(out, n), "kernel completion is not left exact");
    return out;
}

Module transpose(const Module& f, int n) {
    const Algebra& a = alg_of(f);
    if (f.is_zero()) return zero_module(opposite_algebra(a));
    Complex c = res_of_module(f, n);
    Module t = fun_of_complex(op_complex(c));

    Resolution r = minimal_resolution(f, n + 2);
    for (int v = 0; v < a.vertex_count(); ++v)
        internal_check(t.dims[v] == ext_dims(r, a.projective(v), n + 1)[n + 1],
                       "transpose dimensions disagree with the top extension dimensions");
    return t;
}

ModMorphism transpose(const ModMorphism& phi, int n) {
    validate_morphism(phi);
    const Module& f = phi.source;
    const Module& g = phi.target;
    if (f.is_zero() || g.is_zero())
        return zero_morphism(transpose(g, n), transpose(f, n));
    if (!is_exn_member(f, n) || !is_exn_member(g, n))
        throw InputError("transpose of a morphism needs both ends to be values of n-exact "
                         "sequences");

    const Algebra& a = alg_of(f);
    Resolution rf = minimal_resolution(f, n + 1);
    Resolution rg = minimal_resolution(g, n + 1);

    auto f0 = lift_through(rg.aug, compose(phi, rf.aug));
    internal_check(f0.has_value(), "morphism does not lift to the projective covers");
    auto chain = lift_chain_above(rf.cx, rg.cx, std::move(*f0));

    Complex opf = op_complex(rf.cx);
    Complex opg = op_complex(rg.cx);

    // precomposition with the chain dualizes it, degree by degree
    std::vector<ModMorphism> dualChain;
    int top = n + 1;
    for (int i = 0; i <= top; ++i) {
        int k = top - i;
        ModMorphism gi;
        gi.source = opg.terms[i];
        gi.target = opf.terms[i];
        for (int v = 0; v < a.vertex_count(); ++v) {
            auto hg = hom_basis(rg.cx.terms[k], a.projective(v));
            auto hf = hom_basis(rf.cx.terms[k], a.projective(v));
            Mat mu(static_cast<int>(hf.size()), static_cast<int>(hg.size()), a.p);
            for (size_t j = 0; j < hg.size(); ++j) {
                auto col = morphism_coordinates(hf, compose(hg[j], chain[k]));
                for (size_t r = 0; r < col.size(); ++r)
                    mu.at(static_cast<int>(r), static_cast<int>(j)) = col[r];
            }
            gi.mats.push_back(std::move(mu));
        }
        dualChain.push_back(std::move(gi));
    }
    return fun_of_chain_map(opg, opf, dualChain);
}

// --- lifting ----------------------------------------------------------------------

std::optional<ModMorphism> lift_through(const ModMorphism& t, const ModMorphism& g) {
    if (!modules_equal(t.target, g.target))
        throw InputError("lift needs maps into a common target");
    auto hSrc = hom_basis(g.source, t.source);
    auto hTgt = hom_basis(g.source, t.target);
    uint32_t p = m_p(g.source);

    Mat sys(static_cast<int>(hTgt.size()), static_cast<int>(hSrc.size()), p);
    for (size_t j = 0; j < hSrc.size(); ++j) {
        auto col = morphism_coordinates(hTgt, compose(t, hSrc[j]));
        for (size_t r = 0; r < col.size(); ++r)
            sys.at(static_cast<int>(r), static_cast<int>(j)) = col[r];
    }
    auto b = morphism_coordinates(hTgt, g);
    Mat rhs(static_cast<int>(b.size()), 1, p);
    for (size_t r = 0; r < b.size(); ++r) rhs.at(static_cast<int>(r), 0) = b[r];

    auto sol = solve_linear(sys, rhs);
    if (!sol) return std::nullopt;
    std::vector<uint32_t> coords;
    for (int r = 0; r < sol->rows; ++r) coords.push_back(sol->at(r, 0));
    return morphism_from_coordinates(hSrc, coords, g.source, t.source);
}

std::vector<ModMorphism> lift_chain_map(const Complex& x, const Complex& y,
                                        const ModMorphism& phi) {
    validate_complex(x);
    validate_complex(y);
    if (x.top_degree() != y.top_degree() || x.top_degree() < 1)
        throw InputError("chain lift needs equal-length complexes with a bottom differential");
    auto kx = ker_coker_image(x.diff(1));
    auto ky = ker_coker_image(y.diff(1));
    if (!modules_equal(phi.source, kx.cok) || !modules_equal(phi.target, ky.cok))
        throw InputError("value map endpoints do not match the complexes' values");
    auto f0 = lift_through(ky.p, compose(phi, kx.p));
    internal_check(f0.has_value(), "value map does not lift to the bottom terms");
    return lift_chain_above(x, y, std::move(*f0));
}

HomotopyEquivalence homotopy_equivalence(const Complex& x, const Complex& y,
                                         const ModMorphism& phi, const ModMorphism& phiInv) {
    if (!morphisms_equal(compose(phiInv, phi), identity_morphism(phi.source)) ||
        !morphisms_equal(compose(phi, phiInv), identity_morphism(phi.target)))
        throw InputError("value maps are not mutually inverse");
    if (!is_n_exact(x, x.top_degree() - 1) || !is_n_exact(y, y.top_degree() - 1))
        throw InputError("homotopy equivalence needs n-exact complexes");

    HomotopyEquivalence out;
    out.fwd = lift_chain_map(x, y, phi);
    out.bwd = lift_chain_map(y, x, phiInv);
    out.sx = null_homotopy(x, out.fwd, out.bwd);
    out.sy = null_homotopy(y, out.bwd, out.fwd);
    return out;
}

}  // namespace nexact
