#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nexact/linalg.hpp"

namespace nexact {

struct Algebra;

/* Finite-dimensional representations of a quiver algebra, used as the stand-in
 * for the category of finitely resolved functors on its projectives: a module
 * is a per-vertex dimension vector with one matrix per arrow, morphisms are
 * per-vertex matrices commuting with the arrow action, and every operation is
 * computed pointwise with exact F_p linear algebra. */

struct Module {
    const Algebra* alg = nullptr;
    std::vector<int> dims;   // per vertex
    std::vector<Mat> maps;   // per arrow: dims[tgt] x dims[src]

    int total() const;
    bool is_zero() const { return total() == 0; }
};

struct ModMorphism {
    Module source;
    Module target;
    std::vector<Mat> mats;  // per vertex: target.dims[v] x source.dims[v]

    bool is_zero() const;
};

// Arrow-stable per-vertex column bases describing a submodule.
struct SubspaceFamily {
    std::vector<Mat> basis;  // per vertex: dims[v] x k_v, column-echelon form

    int total() const;
    std::string key() const;  // canonical bytes; equal keys == equal subspace
};

/* Isomorphism-invariant fingerprint plus a verified representative.  Equal
 * fingerprints are a filter, never a proof: merging two classes additionally
 * requires an explicit isomorphism witness. */
struct CanonicalForm {
    Module rep;
    std::vector<int> dims;
    int total = 0;
    std::string fingerprint;
};

struct KerCokerImage {
    Module ker, im, cok;
    ModMorphism i;  // ker -> source
    ModMorphism q;  // source ->> im
    ModMorphism j;  // im -> target   (phi == j . q)
    ModMorphism p;  // target ->> cok
};

struct RightSnake {
    Module left, mid, right;    // 0 -> left -> Cok(beta.alpha) -> Cok(beta) -> 0
    ModMorphism leftIncl;       // left -> mid
    ModMorphism midToRight;     // mid ->> right
    Module quotOfCokAlpha;      // Cok(alpha) / Im(p_alpha . i_{ker beta})
    ModMorphism iso;            // quotOfCokAlpha ~= left, verified invertible
};

enum class Tri { Yes, No, Undecided };

struct IsoResult {
    Tri verdict = Tri::Undecided;
    std::optional<ModMorphism> witness;
    std::string note;
};

struct DecomposeResult {
    std::vector<Module> parts;  // canonical order
    bool certified = true;      // false when the idempotent scan hit a cap
};

struct ExtClass {
    std::vector<uint32_t> coords;  // coordinates in the Ext basis
    Module middle;
    ModMorphism inclusion;   // x -> middle
    ModMorphism projection;  // middle ->> z
};

// --- construction helpers ---------------------------------------------------

Module zero_module(const Algebra& a);
Module simple_module(const Algebra& a, int v);
Module free_module(const Algebra& a, int copies);  // A^k as a representation
Module direct_sum(const Module& x, const Module& y);
Module direct_sum(const std::vector<Module>& parts, const Algebra& a);

ModMorphism identity_morphism(const Module& m);
ModMorphism zero_morphism(const Module& src, const Module& tgt);
ModMorphism compose(const ModMorphism& later, const ModMorphism& first);
ModMorphism mor_add(const ModMorphism& f, const ModMorphism& g);
ModMorphism mor_scale(uint32_t c, const ModMorphism& f);
ModMorphism mor_sub(const ModMorphism& f, const ModMorphism& g);

// Block maps into / out of direct_sum(x, y) in that order.
ModMorphism incl_left(const Module& x, const Module& y);
ModMorphism incl_right(const Module& x, const Module& y);
ModMorphism proj_left(const Module& x, const Module& y);
ModMorphism proj_right(const Module& x, const Module& y);
// [f; g]: common source -> direct_sum(f.target, g.target).
ModMorphism stack_vertical(const ModMorphism& f, const ModMorphism& g);
// [f, g]: direct_sum(f.source, g.source) -> common target.
ModMorphism stack_horizontal(const ModMorphism& f, const ModMorphism& g);

void validate_module(const Module& m);        // shapes + relations act by zero
void validate_morphism(const ModMorphism& f); // shapes + naturality squares
bool modules_equal(const Module& x, const Module& y);  // literal equality
bool morphisms_equal(const ModMorphism& f, const ModMorphism& g);

// Unique factorizations through an injection (j . f == g) or a surjection
// (f . q == g); both solve pointwise, and uniqueness makes the result natural.
ModMorphism factor_through_injection(const ModMorphism& j, const ModMorphism& g);
ModMorphism factor_through_surjection(const ModMorphism& q, const ModMorphism& g);

// Coordinates with respect to an explicit basis of a Hom space.
std::vector<uint32_t> morphism_coordinates(const std::vector<ModMorphism>& basis,
                                           const ModMorphism& f);
ModMorphism morphism_from_coordinates(const std::vector<ModMorphism>& basis,
                                      const std::vector<uint32_t>& coords,
                                      const Module& src, const Module& tgt);

// --- the morphism calculus --------------------------------------------------

std::vector<ModMorphism> hom_basis(const Module& m, const Module& n);
int hom_dim(const Module& m, const Module& n);

KerCokerImage ker_coker_image(const ModMorphism& f);

RightSnake rsnake(const ModMorphism& alpha, const ModMorphism& beta);

// --- submodules and quotients ------------------------------------------------

SubspaceFamily image_family(const ModMorphism& f);
SubspaceFamily cyclic_closure(const Module& m, int v, const std::vector<uint32_t>& vec);
SubspaceFamily family_join(const Module& m, const SubspaceFamily& s, const SubspaceFamily& t);
SubspaceFamily full_family(const Module& m);
SubspaceFamily zero_family(const Module& m);

std::pair<Module, ModMorphism> submodule_of(const Module& m, const SubspaceFamily& s);
std::pair<Module, ModMorphism> quotient_of(const Module& m, const SubspaceFamily& s);

// All submodules: cyclic closures saturated under pairwise joins.
std::vector<SubspaceFamily> submodules(const Module& m, size_t lattice_cap = 65536);

// --- isomorphy, decomposition, extensions ------------------------------------

std::string fingerprint(const Module& m);
CanonicalForm canonical_form(const Module& m);
// Global deterministic order: (total dim, dim vector, fingerprint bytes).
bool canonical_less(const CanonicalForm& x, const CanonicalForm& y);

IsoResult is_isomorphic(const Module& m, const Module& n, size_t scan_cap = 1u << 20,
                        uint64_t seed = 0);

DecomposeResult decompose(const Module& m, size_t scan_cap = 1u << 20, uint64_t seed = 0);

/* Ext^1(z, x) through a projective presentation 0 -> W -> P0 -> z -> 0 as
 * Cok(Hom(P0, x) -> Hom(W, x)); one entry per Ext class (p^dim of them), each
 * with its pushout middle and the verified short exact sequence maps. */
std::vector<ExtClass> extension_middle_terms(const Module& z, const Module& x,
                                             size_t class_cap = 4096);

}  // namespace nexact
