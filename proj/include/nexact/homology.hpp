#pragma once
#include <optional>
#include <vector>

#include "nexact/modcat.hpp"

namespace nexact {

/* Projective resolutions and the homological calculus built on them: Ext
 * groups, exactness tests for complexes of projectives, the cokernel/
 * resolution correspondence, dualization over the opposite algebra, kernel
 * completion, and the transpose construction.  Complexes store their terms in
 * ascending degree, so a sequence written X_{n+1} -> ... -> X_0 has terms[0]
 * = X_0 and diffs[i] = d_{i+1}: X_{i+1} -> X_i. */

struct Complex {
    std::vector<Module> terms;       // ascending degree; terms[0] sits in degree 0
    std::vector<ModMorphism> diffs;  // diffs[i]: terms[i+1] -> terms[i]

    int top_degree() const { return static_cast<int>(terms.size()) - 1; }
    const ModMorphism& diff(int i) const { return diffs[static_cast<size_t>(i - 1)]; }
};

/* A chain of projective covers under a module: aug: term_0 ->> m, every
 * differential's image inside the radical of its target.  `terminated` says
 * the last kernel vanished within the requested bound, so the length is the
 * exact projective dimension. */
struct Resolution {
    Complex cx;
    ModMorphism aug;
    bool minimal = true;
    bool terminated = false;

    int length() const { return cx.top_degree(); }
};

// Projective dimension up to a bound: value is exact when `exact`, otherwise
// the dimension is known to be at least `value` (= bound + 1).
struct Pdim {
    bool exact = false;
    int value = 0;
};

// Chain maps u: x -> y and v: y -> x over inverse isomorphisms of the values,
// with degreewise homotopies sx (id_x - v.u = d sx + sx d) and sy likewise.
struct HomotopyEquivalence {
    std::vector<ModMorphism> fwd, bwd;
    std::vector<ModMorphism> sx;  // sx[i]: x_i -> x_{i+1}
    std::vector<ModMorphism> sy;  // sy[i]: y_i -> y_{i+1}
};

// --- radicals and covers ------------------------------------------------------

SubspaceFamily radical_family(const Module& m);  // span of all arrow images
std::pair<Module, ModMorphism> top_of(const Module& m);  // quotient by the radical

// Smallest projective mapping onto m: one copy of P_v per dimension of the
// top at v, with the surjection hitting chosen radical complements.
std::pair<Module, ModMorphism> projective_cover(const Module& m);

Resolution minimal_resolution(const Module& m, int bound);
Pdim pdim(const Module& m, int bound);

// dim Ext^i(m, x) for i = 0 .. imax via the Hom cochain complex of a minimal
// resolution; degree 0 is dim Hom(m, x).  The Resolution overload reuses a
// computed resolution and refuses degrees past an unterminated one.
std::vector<int> ext_dims(const Resolution& r, const Module& x, int imax);
std::vector<int> ext_dims(const Module& m, const Module& x, int imax);
int ext_dim(const Module& m, const Module& x, int i);

// --- complexes of projectives -------------------------------------------------

void validate_complex(const Complex& x);  // shapes, matching ends, d.d == 0
Complex zero_complex(const Algebra& a, int top_degree);
Complex complex_direct_sum(const Complex& x, const Complex& y);

// Exactness at degrees 1 .. n for a complex with terms n+1 .. 0, with the top
// differential injective; the two-sided version also requires Hom and Ext
// into every projective to vanish through degree n for the cokernel of d_1.
bool is_left_n_exact(const Complex& x, int n);
bool is_n_exact(const Complex& x, int n);

// Zero, or projective dimension exactly n+1 with Hom and Ext into every
// projective vanishing through degree n.
bool is_exn_member(const Module& f, int n);

// Cok d_1 of an n-exact complex, and the induced map on values of a chain map.
Module fun_of_complex(const Complex& x);
ModMorphism fun_of_chain_map(const Complex& x, const Complex& y,
                             const std::vector<ModMorphism>& f);

// The minimal n-exact complex with value f (its minimal resolution reshaped);
// quasi-inverse to fun_of_complex up to isomorphism.
Complex res_of_module(const Module& f, int n);

// Degreewise dual Hom(-, A) of a complex of projectives, reversed, as a
// complex of projectives over the opposite algebra; an involution up to
// canonical isomorphism.
Complex op_complex(const Complex& x);

// Extends a right-exact stub of projectives (terms m .. 0, weak kernels all
// the way down) to a left n-exact complex by iterated projective covers.
Complex complete_n_kernel(const Complex& partial, int n);

// Value of the dualized resolution: fun(op(res(f))).  Contravariant on
// morphisms, and dim transpose(f)_v always equals dim Ext^{n+1}(f, P_v).
Module transpose(const Module& f, int n);
ModMorphism transpose(const ModMorphism& phi, int n);  // Tr(G) -> Tr(F)

// --- lifting ------------------------------------------------------------------

// h with t . h == g, when g factors through t; deterministic solution of the
// Hom-coordinate linear system, nullopt when none exists.
std::optional<ModMorphism> lift_through(const ModMorphism& t, const ModMorphism& g);

// Degreewise lift of phi: fun(x) -> fun(y) to a chain map between n-exact
// complexes of projectives.
std::vector<ModMorphism> lift_chain_map(const Complex& x, const Complex& y,
                                        const ModMorphism& phi);

// Witness that two n-exact complexes with isomorphic values are homotopy
// equivalent; phi and phiInv must be mutually inverse value isomorphisms.
HomotopyEquivalence homotopy_equivalence(const Complex& x, const Complex& y,
                                         const ModMorphism& phi, const ModMorphism& phiInv);

}  // namespace nexact
