#include "nexact/modcat.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

#include "nexact/algebra.hpp"
#include "nexact/errors.hpp"

namespace nexact {

namespace {

const Algebra& alg_of(const Module& m) {
    internal_check(m.alg != nullptr, "module has no algebra attached");
    return *m.alg;
}

uint32_t m_p(const Module& m) { return alg_of(m).p; }

void require_same_side(const Module& x, const Module& y) {
    if (x.alg != y.alg) throw InputError("modules live over different algebras");
}

// Composite of the arrow matrices along a path, in application order.
Mat path_action(const Module& m, const std::vector<int>& arrows) {
    const Algebra& a = alg_of(m);
    internal_check(!arrows.empty(), "empty path has no single action matrix");
    Mat acc = m.maps[arrows[0]];
    for (size_t k = 1; k < arrows.size(); ++k) acc = mat_mul(m.maps[arrows[k]], acc);
    return acc;
}

bool morphism_commutes(const ModMorphism& f) {
    if (f.source.alg == nullptr || f.source.alg != f.target.alg) return false;
    const Algebra& a = alg_of(f.source);
    if (static_cast<int>(f.mats.size()) != a.vertex_count()) return false;
    for (int v = 0; v < a.vertex_count(); ++v)
        if (f.mats[v].rows != f.target.dims[v] || f.mats[v].cols != f.source.dims[v])
            return false;
    for (int ai = 0; ai < a.arrow_count(); ++ai) {
        const Arrow& ar = a.quiver.arrows[ai];
        if (!(mat_mul(f.mats[ar.tgt], f.source.maps[ai]) ==
              mat_mul(f.target.maps[ai], f.mats[ar.src])))
            return false;
    }
    return true;
}

ModMorphism make_morphism(Module src, Module tgt, std::vector<Mat> mats) {
    ModMorphism f;
    f.source = std::move(src);
    f.target = std::move(tgt);
    f.mats = std::move(mats);
    internal_check(morphism_commutes(f), "constructed morphism is not natural");
    return f;
}

/* Splits the ambient spaces along an independent column family: ext holds the
 * family's columns extended to a full basis, proj/sec give the complement
 * coordinates and their section. */
struct ComplementSplit {
    std::vector<Mat> proj;  // (d_v - r_v) x d_v
    std::vector<Mat> sec;   // d_v x (d_v - r_v)
};

ComplementSplit complement_split(const Module& m, const std::vector<Mat>& family) {
    const Algebra& a = alg_of(m);
    ComplementSplit out;
    for (int v = 0; v < a.vertex_count(); ++v) {
        int d = m.dims[v], r = family[v].cols;
        Mat ext = column_space_basis(hstack(family[v], Mat::identity(d, m_p(m))));
        internal_check(ext.cols == d, "family columns are not independent");
        Mat inv = mat_inverse(ext);
        Mat proj(d - r, d, m_p(m));
        for (int i = r; i < d; ++i)
            for (int j = 0; j < d; ++j) proj.at(i - r, j) = inv.at(i, j);
        Mat sec(d, d - r, m_p(m));
        for (int i = 0; i < d; ++i)
            for (int j = r; j < d; ++j) sec.at(i, j - r) = ext.at(i, j);
        out.proj.push_back(std::move(proj));
        out.sec.push_back(std::move(sec));
    }
    return out;
}

std::vector<uint32_t> flatten(const ModMorphism& f) {
    std::vector<uint32_t> out;
    for (const auto& mat : f.mats)
        for (int i = 0; i < mat.rows; ++i)
            for (int j = 0; j < mat.cols; ++j) out.push_back(mat.at(i, j));
    return out;
}

}  // namespace

int Module::total() const {
    int t = 0;
    for (int d : dims) t += d;
    return t;
}

bool ModMorphism::is_zero() const {
    for (const auto& m : mats)
        if (!m.is_zero()) return false;
    return true;
}

int SubspaceFamily::total() const {
    int t = 0;
    for (const auto& b : basis) t += b.cols;
    return t;
}

std::string SubspaceFamily::key() const {
    std::ostringstream os;
    for (const auto& b : basis) {
        os << b.rows << "x" << b.cols << ":";
        for (int i = 0; i < b.rows; ++i)
            for (int j = 0; j < b.cols; ++j) os << b.at(i, j) << ",";
        os << ";";
    }
    return os.str();
}

// --- construction helpers ----------------------------------------------------

Module zero_module(const Algebra& a) {
    Module m;
    m.alg = &a;
    m.dims.assign(a.vertex_count(), 0);
    for (int i = 0; i < a.arrow_count(); ++i) m.maps.emplace_back(0, 0, a.p);
    return m;
}

Module simple_module(const Algebra& a, int v) {
    internal_check(v >= 0 && v < a.vertex_count(), "vertex index out of range");
    Module m;
    m.alg = &a;
    m.dims.assign(a.vertex_count(), 0);
    m.dims[v] = 1;
    for (const auto& ar : a.quiver.arrows) m.maps.emplace_back(m.dims[ar.tgt], m.dims[ar.src], a.p);
    return m;
}

Module direct_sum(const Module& x, const Module& y) {
    require_same_side(x, y);
    const Algebra& a = alg_of(x);
    Module m;
    m.alg = x.alg;
    for (int v = 0; v < a.vertex_count(); ++v) m.dims.push_back(x.dims[v] + y.dims[v]);
    for (int ai = 0; ai < a.arrow_count(); ++ai) {
        const Arrow& ar = a.quiver.arrows[ai];
        Mat blk(m.dims[ar.tgt], m.dims[ar.src], a.p);
        const Mat& xa = x.maps[ai];
        const Mat& ya = y.maps[ai];
        for (int i = 0; i < xa.rows; ++i)
            for (int j = 0; j < xa.cols; ++j) blk.at(i, j) = xa.at(i, j);
        for (int i = 0; i < ya.rows; ++i)
            for (int j = 0; j < ya.cols; ++j) blk.at(xa.rows + i, xa.cols + j) = ya.at(i, j);
        m.maps.push_back(std::move(blk));
    }
    return m;
}

Module direct_sum(const std::vector<Module>& parts, const Algebra& a) {
    Module m = zero_module(a);
    for (const auto& part : parts) m = direct_sum(m, part);
    return m;
}

Module free_module(const Algebra& a, int copies) {
    Module m = zero_module(a);
    for (int k = 0; k < copies; ++k)
        for (int v = 0; v < a.vertex_count(); ++v) m = direct_sum(m, a.projective(v));
    return m;
}

ModMorphism identity_morphism(const Module& m) {
    const Algebra& a = alg_of(m);
    std::vector<Mat> mats;
    for (int v = 0; v < a.vertex_count(); ++v) mats.push_back(Mat::identity(m.dims[v], a.p));
    return make_morphism(m, m, std::move(mats));
}

ModMorphism zero_morphism(const Module& src, const Module& tgt) {
    require_same_side(src, tgt);
    const Algebra& a = alg_of(src);
    std::vector<Mat> mats;
    for (int v = 0; v < a.vertex_count(); ++v) mats.emplace_back(tgt.dims[v], src.dims[v], a.p);
    return make_morphism(src, tgt, std::move(mats));
}

ModMorphism compose(const ModMorphism& later, const ModMorphism& first) {
    if (!modules_equal(later.source, first.target))
        throw InputError("morphisms do not compose");
    std::vector<Mat> mats;
    for (size_t v = 0; v < later.mats.size(); ++v)
        mats.push_back(mat_mul(later.mats[v], first.mats[v]));
    return make_morphism(first.source, later.target, std::move(mats));
}

ModMorphism mor_add(const ModMorphism& f, const ModMorphism& g) {
    internal_check(modules_equal(f.source, g.source) && modules_equal(f.target, g.target),
                   "morphism sum shape mismatch");
    std::vector<Mat> mats;
    for (size_t v = 0; v < f.mats.size(); ++v) mats.push_back(mat_add(f.mats[v], g.mats[v]));
    return make_morphism(f.source, f.target, std::move(mats));
}

ModMorphism mor_scale(uint32_t c, const ModMorphism& f) {
    std::vector<Mat> mats;
    for (const auto& m : f.mats) mats.push_back(mat_scale(c, m));
    return make_morphism(f.source, f.target, std::move(mats));
}

ModMorphism mor_sub(const ModMorphism& f, const ModMorphism& g) {
    return mor_add(f, mor_scale(m_p(f.source) - 1, g));
}

ModMorphism incl_left(const Module& x, const Module& y) {
    Module sum = direct_sum(x, y);
    const Algebra& a = alg_of(x);
    std::vector<Mat> mats;
    for (int v = 0; v < a.vertex_count(); ++v) {
        Mat m(sum.dims[v], x.dims[v], a.p);
        for (int i = 0; i < x.dims[v]; ++i) m.at(i, i) = 1;
        mats.push_back(std::move(m));
    }
    return make_morphism(x, sum, std::move(mats));
}

ModMorphism incl_right(const Module& x, const Module& y) {
    Module sum = direct_sum(x, y);
    const Algebra& a = alg_of(x);
    std::vector<Mat> mats;
    for (int v = 0; v < a.vertex_count(); ++v) {
        Mat m(sum.dims[v], y.dims[v], a.p);
        for (int i = 0; i < y.dims[v]; ++i) m.at(x.dims[v] + i, i) = 1;
        mats.push_back(std::move(m));
    }
    return make_morphism(y, sum, std::move(mats));
}

ModMorphism proj_left(const Module& x, const Module& y) {
    Module sum = direct_sum(x, y);
    const Algebra& a = alg_of(x);
    std::vector<Mat> mats;
    for (int v = 0; v < a.vertex_count(); ++v) {
        Mat m(x.dims[v], sum.dims[v], a.p);
        for (int i = 0; i < x.dims[v]; ++i) m.at(i, i) = 1;
        mats.push_back(std::move(m));
    }
    return make_morphism(sum, x, std::move(mats));
}

ModMorphism proj_right(const Module& x, const Module& y) {
    Module sum = direct_sum(x, y);
    const Algebra& a = alg_of(x);
    std::vector<Mat> mats;
    for (int v = 0; v < a.vertex_count(); ++v) {
        Mat m(y.dims[v], sum.dims[v], a.p);
        for (int i = 0; i < y.dims[v]; ++i) m.at(i, x.dims[v] + i) = 1;
        mats.push_back(std::move(m));
    }
    return make_morphism(sum, y, std::move(mats));
}

ModMorphism stack_vertical(const ModMorphism& f, const ModMorphism& g) {
    internal_check(modules_equal(f.source, g.source), "vertical stack needs a common source");
    std::vector<Mat> mats;
    for (size_t v = 0; v < f.mats.size(); ++v) mats.push_back(vstack(f.mats[v], g.mats[v]));
    return make_morphism(f.source, direct_sum(f.target, g.target), std::move(mats));
}

ModMorphism stack_horizontal(const ModMorphism& f, const ModMorphism& g) {
    internal_check(modules_equal(f.target, g.target), "horizontal stack needs a common target");
    std::vector<Mat> mats;
    for (size_t v = 0; v < f.mats.size(); ++v) mats.push_back(hstack(f.mats[v], g.mats[v]));
    return make_morphism(direct_sum(f.source, g.source), f.target, std::move(mats));
}

void validate_module(const Module& m) {
    if (m.alg == nullptr) throw InputError("module has no algebra attached");
    const Algebra& a = *m.alg;
    if (static_cast<int>(m.dims.size()) != a.vertex_count())
        throw InputError("module dimension vector does not match the vertex count");
    for (int d : m.dims)
        if (d < 0) throw InputError("module dimensions must be nonnegative");
    if (static_cast<int>(m.maps.size()) != a.arrow_count())
        throw InputError("module needs one matrix per arrow");
    for (int ai = 0; ai < a.arrow_count(); ++ai) {
        const Arrow& ar = a.quiver.arrows[ai];
        const Mat& mat = m.maps[ai];
        if (mat.rows != m.dims[ar.tgt] || mat.cols != m.dims[ar.src])
            throw InputError("matrix for arrow " + ar.name + " has the wrong shape");
        if (mat.p != a.p) throw InputError("matrix for arrow " + ar.name + " has the wrong modulus");
    }
    for (const auto& rel : a.relations) {
        int u = a.quiver.arrows[rel.terms.front().arrows.front()].src;
        int w = a.quiver.arrows[rel.terms.front().arrows.back()].tgt;
        Mat acc(m.dims[w], m.dims[u], a.p);
        for (const auto& t : rel.terms)
            acc = mat_add(acc, mat_scale(t.coeff, path_action(m, t.arrows)));
        if (!acc.is_zero()) throw InputError("a defining relation does not act by zero");
    }
}

void validate_morphism(const ModMorphism& f) {
    validate_module(f.source);
    validate_module(f.target);
    if (f.source.alg != f.target.alg)
        throw InputError("morphism endpoints live over different algebras");
    if (!morphism_commutes(f)) throw InputError("morphism squares do not commute");
}

bool modules_equal(const Module& x, const Module& y) {
    if (x.alg != y.alg || x.dims != y.dims) return false;
    for (size_t i = 0; i < x.maps.size(); ++i)
        if (!(x.maps[i] == y.maps[i])) return false;
    return true;
}

bool morphisms_equal(const ModMorphism& f, const ModMorphism& g) {
    if (!modules_equal(f.source, g.source) || !modules_equal(f.target, g.target)) return false;
    for (size_t v = 0; v < f.mats.size(); ++v)
        if (!(f.mats[v] == g.mats[v])) return false;
    return true;
}

ModMorphism factor_through_injection(const ModMorphism& j, const ModMorphism& g) {
    internal_check(modules_equal(j.target, g.target), "factorization targets differ");
    std::vector<Mat> mats;
    for (size_t v = 0; v < j.mats.size(); ++v) {
        auto sol = solve_linear(j.mats[v], g.mats[v]);
        internal_check(sol.has_value(), "morphism does not factor through the injection");
        mats.push_back(std::move(*sol));
    }
    return make_morphism(g.source, j.source, std::move(mats));
}

ModMorphism factor_through_surjection(const ModMorphism& q, const ModMorphism& g) {
    internal_check(modules_equal(q.source, g.source), "factorization sources differ");
    std::vector<Mat> mats;
    for (size_t v = 0; v < q.mats.size(); ++v) {
        auto sol = solve_linear(mat_transpose(q.mats[v]), mat_transpose(g.mats[v]));
        internal_check(sol.has_value(), "morphism does not factor through the surjection");
        mats.push_back(mat_transpose(*sol));
    }
    return make_morphism(q.target, g.target, std::move(mats));
}

std::vector<uint32_t> morphism_coordinates(const std::vector<ModMorphism>& basis,
                                           const ModMorphism& f) {
    uint32_t p = m_p(f.source);
    auto fv = flatten(f);
    if (basis.empty()) {
        internal_check(std::all_of(fv.begin(), fv.end(), [](uint32_t x) { return x == 0; }),
                       "nonzero morphism in a zero Hom space");
        return {};
    }
    Mat b(static_cast<int>(fv.size()), static_cast<int>(basis.size()), p);
    for (size_t k = 0; k < basis.size(); ++k) {
        auto bv = flatten(basis[k]);
        internal_check(bv.size() == fv.size(), "hom basis shape mismatch");
        for (size_t r = 0; r < bv.size(); ++r) b.at(static_cast<int>(r), static_cast<int>(k)) = bv[r];
    }
    Mat t(static_cast<int>(fv.size()), 1, p);
    for (size_t r = 0; r < fv.size(); ++r) t.at(static_cast<int>(r), 0) = fv[r];
    auto sol = solve_linear(b, t);
    internal_check(sol.has_value(), "morphism is not in the span of the hom basis");
    std::vector<uint32_t> out(basis.size());
    for (size_t k = 0; k < basis.size(); ++k) out[k] = sol->at(static_cast<int>(k), 0);
    return out;
}

ModMorphism morphism_from_coordinates(const std::vector<ModMorphism>& basis,
                                      const std::vector<uint32_t>& coords, const Module& src,
                                      const Module& tgt) {
    internal_check(basis.size() == coords.size(), "coordinate count does not match the basis");
    ModMorphism f = zero_morphism(src, tgt);
    for (size_t k = 0; k < basis.size(); ++k)
        if (coords[k]) f = mor_add(f, mor_scale(coords[k], basis[k]));
    return f;
}

// --- the morphism calculus ----------------------------------------------------

std::vector<ModMorphism> hom_basis(const Module& m, const Module& n) {
    require_same_side(m, n);
    const Algebra& a = alg_of(m);
    uint32_t p = a.p;

    std::vector<int> offset(a.vertex_count() + 1, 0);
    for (int v = 0; v < a.vertex_count(); ++v)
        offset[v + 1] = offset[v] + n.dims[v] * m.dims[v];
    int unknowns = offset.back();
    auto idx = [&](int v, int i, int j) { return offset[v] + i * m.dims[v] + j; };

    int constraints = 0;
    for (int ai = 0; ai < a.arrow_count(); ++ai) {
        const Arrow& ar = a.quiver.arrows[ai];
        constraints += n.dims[ar.tgt] * m.dims[ar.src];
    }

    Mat sys(constraints, unknowns, p);
    int row = 0;
    for (int ai = 0; ai < a.arrow_count(); ++ai) {
        const Arrow& ar = a.quiver.arrows[ai];
        int u = ar.src, w = ar.tgt;
        for (int i = 0; i < n.dims[w]; ++i) {
            for (int j = 0; j < m.dims[u]; ++j, ++row) {
                // (n_a . F_u - F_w . m_a)[i, j] == 0
                for (int k = 0; k < n.dims[u]; ++k)
                    if (uint32_t c = n.maps[ai].at(i, k))
                        sys.at(row, idx(u, k, j)) = fp_add(p, sys.at(row, idx(u, k, j)), c);
                for (int k = 0; k < m.dims[w]; ++k)
                    if (uint32_t c = m.maps[ai].at(k, j))
                        sys.at(row, idx(w, i, k)) =
                            fp_sub(p, sys.at(row, idx(w, i, k)), c);
            }
        }
    }

    Mat ker = kernel_basis(sys);
    std::vector<ModMorphism> out;
    for (int c = 0; c < ker.cols; ++c) {
        std::vector<Mat> mats;
        for (int v = 0; v < a.vertex_count(); ++v) {
            Mat f(n.dims[v], m.dims[v], p);
            for (int i = 0; i < n.dims[v]; ++i)
                for (int j = 0; j < m.dims[v]; ++j) f.at(i, j) = ker.at(idx(v, i, j), c);
            mats.push_back(std::move(f));
        }
        out.push_back(make_morphism(m, n, std::move(mats)));
    }
    return out;
}

int hom_dim(const Module& m, const Module& n) {
    return static_cast<int>(hom_basis(m, n).size());
}

namespace {

std::pair<Module, ModMorphism> submodule_from_columns(const Module& m,
                                                      const std::vector<Mat>& cols) {
    const Algebra& a = alg_of(m);
    Module sub;
    sub.alg = m.alg;
    for (const auto& c : cols) sub.dims.push_back(c.cols);
    for (int ai = 0; ai < a.arrow_count(); ++ai) {
        const Arrow& ar = a.quiver.arrows[ai];
        auto sol = solve_linear(cols[ar.tgt], mat_mul(m.maps[ai], cols[ar.src]));
        internal_check(sol.has_value(), "column family is not stable under the arrows");
        sub.maps.push_back(std::move(*sol));
    }
    ModMorphism incl = make_morphism(sub, m, cols);
    return {std::move(sub), std::move(incl)};
}

std::pair<Module, ModMorphism> quotient_from_columns(const Module& m,
                                                     const std::vector<Mat>& cols) {
    const Algebra& a = alg_of(m);
    ComplementSplit split = complement_split(m, cols);
    Module quot;
    quot.alg = m.alg;
    for (int v = 0; v < a.vertex_count(); ++v) quot.dims.push_back(split.proj[v].rows);
    for (int ai = 0; ai < a.arrow_count(); ++ai) {
        const Arrow& ar = a.quiver.arrows[ai];
        Mat qa = mat_mul(split.proj[ar.tgt], mat_mul(m.maps[ai], split.sec[ar.src]));
        internal_check(mat_mul(qa, split.proj[ar.src]) ==
                           mat_mul(split.proj[ar.tgt], m.maps[ai]),
                       "column family is not stable under the arrows");
        quot.maps.push_back(std::move(qa));
    }
    ModMorphism proj = make_morphism(m, quot, split.proj);
    return {std::move(quot), std::move(proj)};
}

}  // namespace

KerCokerImage ker_coker_image(const ModMorphism& f) {
    const Algebra& a = alg_of(f.source);
    KerCokerImage out;

    std::vector<Mat> kerCols, imCols;
    for (int v = 0; v < a.vertex_count(); ++v) {
        kerCols.push_back(kernel_basis(f.mats[v]));
        imCols.push_back(column_space_basis(f.mats[v]));
    }
    auto [ker, keri] = submodule_from_columns(f.source, kerCols);
    out.ker = std::move(ker);
    out.i = std::move(keri);

    auto [im, imj] = submodule_from_columns(f.target, imCols);
    out.im = std::move(im);
    out.j = std::move(imj);
    out.q = factor_through_injection(out.j, f);

    auto [cok, cokp] = quotient_from_columns(f.target, imCols);
    out.cok = std::move(cok);
    out.p = std::move(cokp);

    internal_check(morphisms_equal(compose(out.j, out.q), f), "image factorization broke");
    internal_check(compose(f, out.i).is_zero(), "kernel inclusion is not killed");
    internal_check(compose(out.p, f).is_zero(), "cokernel projection is not killed");
    for (int v = 0; v < a.vertex_count(); ++v) {
        internal_check(out.ker.dims[v] + out.im.dims[v] == f.source.dims[v],
                       "rank and nullity do not add up");
        internal_check(mat_rank(out.q.mats[v]) == out.im.dims[v],
                       "image corestriction is not surjective");
    }
    return out;
}

RightSnake rsnake(const ModMorphism& alpha, const ModMorphism& beta) {
    if (!modules_equal(alpha.target, beta.source))
        throw InputError("the two morphisms do not compose");
    ModMorphism gamma = compose(beta, alpha);
    KerCokerImage kA = ker_coker_image(alpha);
    KerCokerImage kB = ker_coker_image(beta);
    KerCokerImage kG = ker_coker_image(gamma);

    RightSnake out;
    out.mid = kG.cok;
    out.right = kB.cok;
    // mid ->> right induced by the identity on the common ambient module.
    out.midToRight = factor_through_surjection(kG.p, kB.p);

    KerCokerImage kMR = ker_coker_image(out.midToRight);
    out.left = kMR.ker;
    out.leftIncl = kMR.i;

    // Cok(alpha) -> Cok(beta.alpha) induced by beta, then factored to the
    // quotient by the image of Ker(beta).
    ModMorphism betaBar = factor_through_surjection(kA.p, compose(kG.p, beta));
    ModMorphism kerBetaInCokA = compose(kA.p, kB.i);
    SubspaceFamily fam = image_family(kerBetaInCokA);
    auto [quot, proj] = quotient_of(kA.cok, fam);
    out.quotOfCokAlpha = quot;
    ModMorphism intoMid = factor_through_surjection(proj, betaBar);
    out.iso = factor_through_injection(out.leftIncl, intoMid);

    for (size_t v = 0; v < out.iso.mats.size(); ++v)
        internal_check(is_invertible(out.iso.mats[v]),
                       "induced comparison map is not an isomorphism");
    for (size_t v = 0; v < out.midToRight.mats.size(); ++v)
        internal_check(mat_rank(out.midToRight.mats[v]) == out.right.dims[v],
                       "induced projection is not surjective");
    return out;
}

// --- submodules and quotients --------------------------------------------------

SubspaceFamily image_family(const ModMorphism& f) {
    SubspaceFamily s;
    for (const auto& m : f.mats) s.basis.push_back(column_echelon(m));
    return s;
}

SubspaceFamily zero_family(const Module& m) {
    SubspaceFamily s;
    for (size_t v = 0; v < m.dims.size(); ++v) s.basis.emplace_back(m.dims[v], 0, m_p(m));
    return s;
}

SubspaceFamily full_family(const Module& m) {
    SubspaceFamily s;
    for (size_t v = 0; v < m.dims.size(); ++v) s.basis.push_back(Mat::identity(m.dims[v], m_p(m)));
    return s;
}

SubspaceFamily cyclic_closure(const Module& m, int v, const std::vector<uint32_t>& vec) {
    const Algebra& a = alg_of(m);
    internal_check(v >= 0 && v < a.vertex_count(), "vertex index out of range");
    internal_check(static_cast<int>(vec.size()) == m.dims[v], "generator has the wrong length");

    std::vector<Mat> span;
    for (int w = 0; w < a.vertex_count(); ++w) span.emplace_back(m.dims[w], 0, a.p);
    Mat gen(m.dims[v], 1, a.p);
    for (int i = 0; i < m.dims[v]; ++i) gen.at(i, 0) = vec[i];
    span[v] = column_echelon(gen);

    bool changed = true;
    while (changed) {
        changed = false;
        for (int ai = 0; ai < a.arrow_count(); ++ai) {
            const Arrow& ar = a.quiver.arrows[ai];
            if (span[ar.src].cols == 0) continue;
            Mat joined = column_echelon(hstack(span[ar.tgt], mat_mul(m.maps[ai], span[ar.src])));
            if (joined.cols != span[ar.tgt].cols) {
                span[ar.tgt] = std::move(joined);
                changed = true;
            }
        }
    }
    SubspaceFamily s;
    s.basis = std::move(span);
    return s;
}

SubspaceFamily family_join(const Module& m, const SubspaceFamily& s, const SubspaceFamily& t) {
    SubspaceFamily out;
    for (size_t v = 0; v < m.dims.size(); ++v)
        out.basis.push_back(column_echelon(hstack(s.basis[v], t.basis[v])));
    return out;
}

std::pair<Module, ModMorphism> submodule_of(const Module& m, const SubspaceFamily& s) {
    return submodule_from_columns(m, s.basis);
}

std::pair<Module, ModMorphism> quotient_of(const Module& m, const SubspaceFamily& s) {
    return quotient_from_columns(m, s.basis);
}

std::vector<SubspaceFamily> submodules(const Module& m, size_t lattice_cap) {
    const Algebra& a = alg_of(m);
    uint32_t p = a.p;

    std::map<std::string, SubspaceFamily> found;
    auto add = [&](SubspaceFamily s) {
        std::string k = s.key();
        if (found.count(k)) return false;
        if (found.size() >= lattice_cap)
            throw CapError("submodule lattice exceeded the configured cap");
        found.emplace(std::move(k), std::move(s));
        return true;
    };
    add(zero_family(m));

    for (int v = 0; v < a.vertex_count(); ++v) {
        int d = m.dims[v];
        if (d == 0) continue;
        uint64_t count = 1;
        for (int i = 0; i < d; ++i) {
            count *= p;
            if (count > (1u << 22))
                throw CapError("submodule lattice exceeded the configured cap "
                               "(too many cyclic generators)");
        }
        for (uint64_t code = 1; code < count; ++code) {
            std::vector<uint32_t> vec(d);
            uint64_t c = code;
            for (int i = 0; i < d; ++i) {
                vec[i] = static_cast<uint32_t>(c % p);
                c /= p;
            }
            add(cyclic_closure(m, v, vec));
        }
    }

    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<const SubspaceFamily*> list;
        for (const auto& [k, s] : found) list.push_back(&s);
        for (size_t i = 0; i < list.size() && !grew; ++i)
            for (size_t j = i + 1; j < list.size(); ++j)
                if (add(family_join(m, *list[i], *list[j]))) {
                    grew = true;
                    break;
                }
    }

    std::vector<SubspaceFamily> out;
    for (auto& [k, s] : found) out.push_back(std::move(s));
    std::sort(out.begin(), out.end(), [](const SubspaceFamily& x, const SubspaceFamily& y) {
        if (x.total() != y.total()) return x.total() < y.total();
        return x.key() < y.key();
    });
    return out;
}

// --- isomorphy, decomposition, extensions ---------------------------------------

std::string fingerprint(const Module& m) {
    const Algebra& a = alg_of(m);
    std::ostringstream os;
    os << "d=[";
    for (int d : m.dims) os << d << ",";
    os << "];r=[";
    std::vector<std::pair<int, int>> ranks;
    for (const auto& b : a.basis)
        if (b.length() >= 1) ranks.emplace_back(b.length(), mat_rank(path_action(m, b.arrows)));
    std::sort(ranks.begin(), ranks.end());
    for (const auto& [l, r] : ranks) os << l << ":" << r << ",";
    os << "];h=[";
    for (int v = 0; v < a.vertex_count(); ++v) {
        Module s = simple_module(a, v);
        os << hom_dim(a.projective(v), m) << "," << hom_dim(m, a.projective(v)) << ","
           << hom_dim(s, m) << "," << hom_dim(m, s) << ";";
    }
    os << "];e=" << hom_dim(m, m);
    return os.str();
}

CanonicalForm canonical_form(const Module& m) {
    CanonicalForm c;
    c.rep = m;
    c.dims = m.dims;
    c.total = m.total();
    c.fingerprint = fingerprint(m);
    return c;
}

bool canonical_less(const CanonicalForm& x, const CanonicalForm& y) {
    if (x.total != y.total) return x.total < y.total;
    if (x.dims != y.dims) return x.dims < y.dims;
    return x.fingerprint < y.fingerprint;
}

namespace {

bool all_vertexwise_invertible(const ModMorphism& f) {
    for (const auto& m : f.mats)
        if (m.rows != m.cols || !is_invertible(m)) return false;
    return true;
}

// p^k, capped so callers can compare against enumeration budgets.
uint64_t pow_capped(uint32_t p, size_t k, uint64_t cap) {
    uint64_t x = 1;
    for (size_t i = 0; i < k; ++i) {
        x *= p;
        if (x > cap) return cap + 1;
    }
    return x;
}

}  // namespace

IsoResult is_isomorphic(const Module& m, const Module& n, size_t scan_cap, uint64_t seed) {
    require_same_side(m, n);
    IsoResult out;
    if (m.dims != n.dims) {
        out.verdict = Tri::No;
        out.note = "dimension vectors differ";
        return out;
    }
    if (m.total() == 0) {
        out.verdict = Tri::Yes;
        out.witness = zero_morphism(m, n);
        return out;
    }
    if (fingerprint(m) != fingerprint(n)) {
        out.verdict = Tri::No;
        out.note = "isomorphism invariants differ";
        return out;
    }

    auto basis = hom_basis(m, n);
    if (basis.empty()) {
        out.verdict = Tri::No;
        out.note = "no nonzero homomorphisms";
        return out;
    }
    uint32_t p = m_p(m);
    uint64_t space = pow_capped(p, basis.size(), scan_cap);
    if (space <= scan_cap) {
        std::vector<uint32_t> digits(basis.size(), 0);
        for (uint64_t code = 1; code < space; ++code) {
            size_t k = 0;
            while (true) {
                digits[k] = (digits[k] + 1) % p;
                if (digits[k]) break;
                ++k;
            }
            ModMorphism f = morphism_from_coordinates(basis, digits, m, n);
            if (all_vertexwise_invertible(f)) {
                out.verdict = Tri::Yes;
                out.witness = std::move(f);
                return out;
            }
        }
        out.verdict = Tri::No;
        out.note = "exhaustive scan of the Hom space found no isomorphism";
        return out;
    }

    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::uniform_int_distribution<uint32_t> dist(0, p - 1);
    for (int t = 0; t < 5000; ++t) {
        std::vector<uint32_t> digits(basis.size());
        bool any = false;
        for (auto& d : digits) {
            d = dist(rng);
            any = any || d;
        }
        if (!any) continue;
        ModMorphism f = morphism_from_coordinates(basis, digits, m, n);
        if (all_vertexwise_invertible(f)) {
            out.verdict = Tri::Yes;
            out.witness = std::move(f);
            return out;
        }
    }
    out.verdict = Tri::Undecided;
    out.note = "Hom space exceeds the scan cap and randomized search found no isomorphism";
    return out;
}

namespace {

void decompose_into(const Module& m, size_t scan_cap, uint64_t seed, DecomposeResult& out);

// Splits off ker/im of a stabilized endomorphism when both are proper.
bool try_fitting_split(const Module& m, const ModMorphism& f, size_t scan_cap, uint64_t seed,
                       DecomposeResult& out) {
    ModMorphism g = f;
    for (int step = 0; step < 64; ++step) {
        ModMorphism g2 = compose(g, g);
        bool stable = true;
        for (size_t v = 0; v < g.mats.size(); ++v)
            if (mat_rank(g2.mats[v]) != mat_rank(g.mats[v])) stable = false;
        g = std::move(g2);
        if (stable) break;
    }
    KerCokerImage k = ker_coker_image(g);
    if (k.ker.total() == 0 || k.im.total() == 0) return false;
    internal_check(k.ker.total() + k.im.total() == m.total(),
                   "stabilized endomorphism does not split the module");
    decompose_into(k.ker, scan_cap, seed, out);
    decompose_into(k.im, scan_cap, seed, out);
    return true;
}

void decompose_into(const Module& m, size_t scan_cap, uint64_t seed, DecomposeResult& out) {
    if (m.total() == 0) return;
    auto end = hom_basis(m, m);
    uint32_t p = m_p(m);
    ModMorphism id = identity_morphism(m);

    uint64_t space = pow_capped(p, end.size(), scan_cap);
    if (space <= scan_cap) {
        std::vector<uint32_t> digits(end.size(), 0);
        for (uint64_t code = 1; code < space; ++code) {
            size_t k = 0;
            while (true) {
                digits[k] = (digits[k] + 1) % p;
                if (digits[k]) break;
                ++k;
            }
            ModMorphism f = morphism_from_coordinates(end, digits, m, m);
            if (!morphisms_equal(compose(f, f), f)) continue;
            if (f.is_zero() || morphisms_equal(f, id)) continue;
            KerCokerImage s = ker_coker_image(f);
            internal_check(s.ker.total() > 0 && s.im.total() > 0 &&
                               s.ker.total() + s.im.total() == m.total(),
                           "idempotent does not split the module");
            decompose_into(s.ker, scan_cap, seed, out);
            decompose_into(s.im, scan_cap, seed, out);
            return;
        }
        out.parts.push_back(m);  // certified: no nontrivial idempotent exists
        return;
    }

    for (const auto& f : end)
        if (try_fitting_split(m, f, scan_cap, seed, out)) return;
    std::mt19937_64 rng(seed ^ 0x517cc1b727220a95ull);
    std::uniform_int_distribution<uint32_t> dist(0, p - 1);
    for (int t = 0; t < 64; ++t) {
        std::vector<uint32_t> digits(end.size());
        for (auto& d : digits) d = dist(rng);
        ModMorphism f = morphism_from_coordinates(end, digits, m, m);
        if (try_fitting_split(m, f, scan_cap, seed, out)) return;
    }
    out.parts.push_back(m);
    out.certified = false;  // endomorphism ring too large to scan, no split found
}

}  // namespace

DecomposeResult decompose(const Module& m, size_t scan_cap, uint64_t seed) {
    DecomposeResult out;
    decompose_into(m, scan_cap, seed, out);
    std::vector<CanonicalForm> forms;
    for (const auto& part : out.parts) forms.push_back(canonical_form(part));
    std::vector<size_t> order(forms.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t i, size_t j) { return canonical_less(forms[i], forms[j]); });
    std::vector<Module> sorted;
    for (size_t i : order) sorted.push_back(std::move(out.parts[i]));
    out.parts = std::move(sorted);
    return out;
}

std::vector<ExtClass> extension_middle_terms(const Module& z, const Module& x, size_t class_cap) {
    require_same_side(z, x);
    const Algebra& a = alg_of(z);
    uint32_t p = a.p;

    // Surjection onto z from one projective per (vertex, basis vector of z_v).
    std::vector<Module> covers;
    std::vector<std::pair<int, int>> slots;
    for (int v = 0; v < a.vertex_count(); ++v)
        for (int k = 0; k < z.dims[v]; ++k) {
            covers.push_back(a.projective(v));
            slots.emplace_back(v, k);
        }
    Module p0 = direct_sum(covers, a);

    ModMorphism pi = zero_morphism(p0, z);
    {
        std::vector<int> colOffset(a.vertex_count(), 0);
        for (size_t s = 0; s < covers.size(); ++s) {
            auto [v, k] = slots[s];
            // The summand P_v maps by sending each basis path to its action on
            // the chosen basis vector of z_v.
            for (int w = 0; w < a.vertex_count(); ++w) {
                const auto& paths = a.projBasis[v][w];
                for (size_t c = 0; c < paths.size(); ++c) {
                    const BasisPath& b = a.basis[paths[c]];
                    Mat col(z.dims[w], 1, p);
                    if (b.length() == 0) {
                        for (int i = 0; i < z.dims[w]; ++i) col.at(i, 0) = i == k ? 1 : 0;
                    } else {
                        Mat act = path_action(z, b.arrows);
                        for (int i = 0; i < z.dims[w]; ++i) col.at(i, 0) = act.at(i, k);
                    }
                    for (int i = 0; i < z.dims[w]; ++i)
                        pi.mats[w].at(i, colOffset[w] + static_cast<int>(c)) = col.at(i, 0);
                }
            }
            for (int w = 0; w < a.vertex_count(); ++w)
                colOffset[w] += static_cast<int>(a.projBasis[v][w].size());
        }
    }
    internal_check(morphism_commutes(pi), "projective surjection is not natural");
    for (int v = 0; v < a.vertex_count(); ++v)
        internal_check(mat_rank(pi.mats[v]) == z.dims[v], "projective map is not surjective");

    KerCokerImage kpi = ker_coker_image(pi);
    const Module& w = kpi.ker;
    const ModMorphism& iota = kpi.i;

    auto homP = hom_basis(p0, x);
    auto homW = hom_basis(w, x);
    int hw = static_cast<int>(homW.size());

    Mat restr(hw, static_cast<int>(homP.size()), p);
    for (size_t c = 0; c < homP.size(); ++c) {
        auto coords = morphism_coordinates(homW, compose(homP[c], iota));
        for (int r = 0; r < hw; ++r) restr.at(r, static_cast<int>(c)) = coords[r];
    }

    // Complement of the restriction image inside Hom(W, x) = one representative
    // cocycle per class.
    Mat ext = column_space_basis(hstack(column_space_basis(restr), Mat::identity(hw, p)));
    int rk = column_space_basis(restr).cols;
    int extDim = hw - rk;

    uint64_t classes = pow_capped(p, static_cast<size_t>(extDim), class_cap);
    if (classes > class_cap)
        throw CapError("extension class enumeration exceeded the configured cap");

    std::vector<ExtClass> out;
    for (uint64_t code = 0; code < classes; ++code) {
        std::vector<uint32_t> coords(extDim);
        uint64_t c = code;
        for (int i = 0; i < extDim; ++i) {
            coords[i] = static_cast<uint32_t>(c % p);
            c /= p;
        }
        std::vector<uint32_t> inHomW(hw, 0);
        for (int i = 0; i < extDim; ++i)
            if (coords[i])
                for (int r = 0; r < hw; ++r)
                    inHomW[r] = fp_add(p, inHomW[r], fp_mul(p, coords[i], ext.at(r, rk + i)));
        ModMorphism f = morphism_from_coordinates(homW, inHomW, w, x);

        // Pushout of iota along f: quotient x (+) P0 by the antidiagonal image.
        ModMorphism anti = stack_vertical(f, mor_scale(p - 1, iota));
        auto [mid, proj] = quotient_of(direct_sum(x, p0), image_family(anti));
        ExtClass cls;
        cls.coords = coords;
        cls.middle = mid;
        cls.inclusion = compose(proj, incl_left(x, p0));
        cls.projection =
            factor_through_surjection(proj, stack_horizontal(zero_morphism(x, z), pi));
        internal_check(cls.middle.total() == x.total() + z.total(),
                       "extension middle has the wrong dimension");
        for (size_t v = 0; v < cls.inclusion.mats.size(); ++v) {
            internal_check(mat_rank(cls.inclusion.mats[v]) == x.dims[v],
                           "extension inclusion is not injective");
            internal_check(mat_rank(cls.projection.mats[v]) == z.dims[v],
                           "extension projection is not surjective");
        }
        internal_check(compose(cls.projection, cls.inclusion).is_zero(),
                       "extension composite is nonzero");
        out.push_back(std::move(cls));
    }
    return out;
}

}  // namespace nexact
