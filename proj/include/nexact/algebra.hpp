#pragma once
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "nexact/linalg.hpp"
#include "nexact/modcat.hpp"

namespace nexact {

/* A finite-dimensional quotient of a path algebra over F_p, presented by a
 * quiver and a list of relations.  Paths are stored in application order:
 * {a, b} means "a first, then b" and prints as "b*a".  The product x * y
 * composes in the same sense: y acts first.
 *
 * The basis is a fixed set of residue paths chosen greedily by (length,
 * generation order) against the relation ideal, so every basis element is a
 * single path and all structure constants come from reducing concatenations. */

struct Arrow {
    std::string name;
    int src = -1;
    int tgt = -1;
};

struct Quiver {
    std::vector<std::string> vertices;
    std::vector<Arrow> arrows;

    int vertex_index(const std::string& label) const;  // -1 when absent
    int arrow_index(const std::string& name) const;    // -1 when absent
};

struct RelationTerm {
    uint32_t coeff = 1;
    std::vector<int> arrows;  // application order, length >= 2
};

struct Relation {
    std::vector<RelationTerm> terms;  // all terms share source and target
};

struct BasisPath {
    std::vector<int> arrows;  // application order; empty = trivial path e_v
    int src = -1;
    int tgt = -1;

    int length() const { return static_cast<int>(arrows.size()); }
    std::string display(const Quiver& q) const;  // "b*a" or "e_v"
};

// Coordinates of an algebra element on the path basis: (basis id, coefficient).
using SparseVec = std::vector<std::pair<int, uint32_t>>;

struct Algebra {
    uint32_t p = 2;
    Quiver quiver;
    std::vector<Relation> relations;
    int default_n = 1;

    std::vector<BasisPath> basis;
    // multTable[i][j] = coordinates of basis[i] * basis[j] (j acts first).
    std::vector<std::vector<SparseVec>> multTable;
    std::vector<Module> projectives;                    // per vertex
    std::vector<std::vector<std::vector<int>>> projBasis;  // [v][w] -> basis ids v->w

    const Algebra* opposite = nullptr;

    Algebra() = default;
    Algebra(const Algebra&) = delete;
    Algebra& operator=(const Algebra&) = delete;

    int dim() const { return static_cast<int>(basis.size()); }
    int vertex_count() const { return static_cast<int>(quiver.vertices.size()); }
    int arrow_count() const { return static_cast<int>(quiver.arrows.size()); }
    bool is_opposite_side() const { return opSide_; }

    // Coordinates of the residue of an arbitrary path (application order).
    std::vector<uint32_t> reduce_path(const std::vector<int>& arrows_applied_first) const;
    SparseVec multiply(int bi, int bj) const;  // table lookup
    std::vector<uint32_t> multiply_vec(const std::vector<uint32_t>& x,
                                       const std::vector<uint32_t>& y) const;
    const Module& projective(int v) const;

  private:
    bool opSide_ = false;
    std::unique_ptr<Algebra> oppositeOwned_;
    std::vector<int> trivialBasisId_;  // per vertex: basis index of e_v
    std::vector<int> arrowBasisId_;    // per arrow: basis index of the length-1 path

    friend struct AlgebraBuilder;
    friend std::unique_ptr<Algebra> build_algebra(const Quiver&, const std::vector<Relation>&,
                                                  uint32_t, int, int);
};

/* Builds the algebra and its opposite (linked through `opposite` on both
 * sides).  Throws InputError when the input is malformed, when no path length
 * within `path_cap` stops contributing basis elements, or when the relations
 * fail to define an admissible quotient (non-nilpotent radical, or basis
 * paths reappearing past the stop length). */
std::unique_ptr<Algebra> build_algebra(const Quiver& q, const std::vector<Relation>& rels,
                                       uint32_t p, int path_cap = 32, int default_n = 1);

const Algebra& opposite_algebra(const Algebra& a);

}  // namespace nexact
