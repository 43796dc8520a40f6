#pragma once

#include "stab/polyhedra.hpp"

#include <vector>

namespace stab {

// An irreducible closed set of the equational topology. For DOAG this is
// any affine subspace with integer normals; for DLO the rows stay in the
// difference/pin shape (x_i - x_j = 0 or x_i = c), which elimination
// preserves, so one representation serves both theories.
struct IrreducibleClosed {
    AffineSubspace space;
    Theory theory = Theory::Doag;

    int dim() const { return space.dim(); }

    bool operator==(const IrreducibleClosed&) const = default;
    friend bool operator<(const IrreducibleClosed& a, const IrreducibleClosed& b) {
        return a.space < b.space;
    }
};

// Finite union of pairwise incomparable irreducible closed sets, the unique
// irredundant decomposition. No components means the empty set.
struct EquationalClosedSet {
    std::vector<IrreducibleClosed> components;

    SemilinearSet to_set(const VarList& vars) const;
    bool operator==(const EquationalClosedSet&) const = default;
};

EquationalClosedSet make_closed_set(std::vector<IrreducibleClosed> components);

// Closure with respect to the equational topology. DOAG: union of affine
// hulls of the cells. DLO: per cell, the conjunction of all entailed atoms
// of shape x_i = x_j or x_i = c, with candidate pins drawn from the
// constants of the cell.
EquationalClosedSet equational_closure(const SemilinearSet& s, Theory theory);

// Accessor with revalidation of pairwise incomparability.
std::vector<IrreducibleClosed> irreducible_components(const EquationalClosedSet& z);

// Outcome of rewriting a hyperplane section modulo a component's equations.
// PureX: on V, h = 0 is equivalent to a constraint on the x-variables only
// (rewritten holds the pure normal); PureY symmetric. NonSplit carries
// tangent directions u, v witnessing that neither rewrite exists: u is in
// the kernel of V's x-coefficient block with k.u != 0, v likewise for y.
struct SplitResult {
    enum class Tag { PureX, PureY, NonSplit } tag = Tag::NonSplit;
    Hyperplane rewritten; // PureX / PureY
    Vec dir_x, dir_y;     // NonSplit
};

// Requires h to cut V properly (h meets V and does not contain it); the
// caller filters degenerate hyperplanes.
SplitResult split_modulo(const Hyperplane& h, const IrreducibleClosed& V,
                         const Partition& partition);

} // namespace stab
