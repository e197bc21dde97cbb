#pragma once
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nexact/homology.hpp"

namespace nexact {

/* The subclass calculus on the extension-closed classes of higher-exact
 * modules: enumerate an indecomposable carrier up to a dimension bound,
 * filter it down to the members, run the pullback / pushout stability
 * operators to their joint fixpoint, audit the five axioms, and enumerate
 * every structure between the split one and the maximal one. */

// Caps for the searches underneath.  Every verdict that depended on one of
// these says so instead of silently pretending to be unconditional.
struct StructureLimits {
    size_t isoCap = 1u << 20;   // endomorphism scans in decompose / is_isomorphic
    size_t latticeCap = 65536;  // submodule lattices and per-level class lists
    size_t classCap = 4096;     // extension classes per pair
    uint64_t seed = 0;          // randomized fallbacks in the iso scan
};

/* Indecomposables of total dimension <= dimBound up to isomorphism, sorted by
 * canonical_less.  Built level by level: every module of dimension d maps
 * onto a simple with kernel of dimension d-1, so the level-d indecomposables
 * all appear among middle terms of extensions of simples by sums of earlier
 * levels, and each level is complete once the previous ones are.  `complete`
 * drops to false when any cap interrupted a level. */
struct Enumeration {
    const Algebra* alg = nullptr;
    int dimBound = 0;
    std::vector<CanonicalForm> indecs;
    bool complete = true;
};

Enumeration enumerate_indecomposables(const Algebra& a, int dimBound,
                                      const StructureLimits& lim = {});

/* An isomorphism-closed, summand-closed class of members, carried by its
 * indecomposables: an arbitrary module belongs exactly when all of its
 * decompose parts do, and the zero module always belongs.  The flags record
 * what has been established about the class, never more: extensionBound 0
 * means closed by construction, k >= 1 means verified on sums of at most k
 * indecomposable summands per side. */
struct StructureSet {
    const Algebra* alg = nullptr;  // which side the members live on
    int n = 1;
    int dimBound = 0;                   // carrier bound all claims are relative to
    std::vector<CanonicalForm> indecs;  // sorted by canonical_less; each passes the ex_n test
    bool extensionClosed = false;
    int extensionBound = 0;
    bool pbStable = false;
    bool poStable = false;
    bool complete = true;  // false when a cap limited the carrier underneath

    size_t size() const { return indecs.size(); }
};

// Same members, decided on canonical fingerprints.  Reliable between sets
// drawn from one carrier (shared representatives), which is how every
// fixpoint loop below uses it.
bool same_members(const StructureSet& x, const StructureSet& y);

// Members of the enumerated carrier that pass the ex_n test.  The result is
// extension-closed by construction (extensionBound 0).
StructureSet compute_exn(const Algebra& a, int n, int dimBound,
                         const StructureLimits& lim = {});
StructureSet compute_exn(const Enumeration& carrier, int n);

// Wraps candidate members into a StructureSet, rejecting any that fail the
// ex_n test with the offender's index and reason in the message.
StructureSet structure_set_from_modules(const Algebra& a, int n, int dimBound,
                                        const std::vector<Module>& members,
                                        const StructureLimits& lim = {});

// Empty when f passes the ex_n test, otherwise a short reason such as
// "pdim = 1 != 2" or "Ext^1 into P_3 is nonzero".
std::string exn_rejection(const Module& f, int n);

// All decompose parts of m lie in s.indecs; Undecided only when a cap stopped
// the decomposition or an isomorphism scan.
Tri member_of(const Module& m, const StructureSet& s, const StructureLimits& lim = {});

// Verdict of the pullback membership test, with the offending submodule and
// quotient when it fails.
struct PbVerdict {
    bool pass = false;
    std::optional<std::pair<Module, Module>> counterexample;  // (submodule, quotient)
    std::string note;
};

// True iff every submodule M of f and the quotient f/M are both members.
// Quantifying over the submodule lattice is exact: images of morphisms from
// projectives into f are precisely the submodules of f.
PbVerdict pb_member(const Module& f, const StructureSet& s, const StructureLimits& lim = {});

// One pullback step: keeps exactly the indecomposables passing pb_member.
// Requires the extension-closed flag (membership is decided summandwise, which
// is only valid for extension-closed classes); the result is re-verified to be
// extension-closed and shrinks or stays equal.
StructureSet pb_step(const StructureSet& s, const StructureLimits& lim = {});

// One pushout step: transpose every indecomposable to the opposite side, run
// pb_step there, and carry the survivors back (the transpose is an involution
// up to isomorphism, so survivors map back positionally).
StructureSet po_step(const StructureSet& s, const StructureLimits& lim = {});

// Removals performed by the fixpoint iteration, for reporting.
struct MaxTrace {
    struct Step {
        std::string op;  // "pb" or "po"
        std::vector<CanonicalForm> removed;
    };
    std::vector<Step> steps;  // only steps that removed something
};

// The joint fixpoint: iterate pb_step from compute_exn until stable, then
// po_step until stable, then assert both stabilities and extension closure on
// the result.  The unique maximal structure relative to the carrier bound.
StructureSet max_n(const Algebra& a, int n, int dimBound, const StructureLimits& lim = {},
                   MaxTrace* trace = nullptr);

// Extension closure verified on sums of at most multBound indecomposable
// summands per side; (z, x, middle) counterexample on failure.
struct ClosureVerdict {
    bool pass = false;
    int bound = 0;
    std::optional<std::array<Module, 3>> counterexample;
};

ClosureVerdict is_extension_closed(const StructureSet& s, int multBound,
                                   const StructureLimits& lim = {});

enum class VerdictKind { Pass, PassUpToBound, Fail };

struct AxiomVerdict {
    VerdictKind kind = VerdictKind::Pass;
    int bound = 0;  // meaningful for PassUpToBound
    std::string note;
    std::vector<Module> modules;  // replayable counterexample payload
    std::vector<ModMorphism> morphisms;

    bool ok() const { return kind != VerdictKind::Fail; }
};

struct AxiomReport {
    AxiomVerdict ex0, ex1, ex1op, ex2, ex2op;

    bool all_pass() const {
        return ex0.ok() && ex1.ok() && ex1op.ok() && ex2.ok() && ex2op.ok();
    }
};

/* Audits the candidate class against the axioms: pullback stability stands in
 * for the weak-kernel axiom and pushout stability for the weak-cokernel one
 * (their criterion form), extension closure for both composition axioms, and
 * a direct spot-check composes deflations of resolved members through every
 * isomorphism between the padded end terms and confirms the composite's
 * cokernel is again a member. */
AxiomReport check_structure(const StructureSet& s, int multBound = 2,
                            const StructureLimits& lim = {});

// Every structure between the split one and the maximal one.
struct StructureEnumeration {
    StructureSet max;
    std::vector<StructureSet> structures;  // sorted by size, then canonical members
    std::vector<AxiomReport> reports;      // aligned with structures
};

// All subsets of indecs(max_n) passing check_structure.  Justified carrier:
// every qualifying class sits inside the maximal one and is closed under
// summands, so subsets of the maximal indecomposables exhaust the candidates.
// Refuses to run past subsetCap rather than truncating.
StructureEnumeration enumerate_structures(const Algebra& a, int n, int dimBound,
                                          size_t subsetCap = 1u << 20, int multBound = 2,
                                          const StructureLimits& lim = {});

// True iff pb_step and po_step both fix compute_exn on the nose (relative to
// the carrier bound).  On false, *whyNot names the first unstable member.
bool is_quasi_n_abelian(const Algebra& a, int n, int dimBound,
                        const StructureLimits& lim = {}, std::string* whyNot = nullptr);

}  // namespace nexact
