#pragma once

#include "stab/equational.hpp"

#include <optional>
#include <vector>

namespace stab {

// A codimension-1 stratum of the constraint arrangement inside a component
// whose two adjacent full-dimensional cells differ in D-membership, with
// the rewrite analysis of its hyperplane.
struct FacetAnalysis {
    enum class Side { Lower, Upper };
    Cell facet;           // representative facet cell, smooth by construction
    Hyperplane hyperplane;
    Side in_side;         // which open side of the hyperplane lies in D
    SplitResult split;
};

// (Z \ W) n (X x Y): Z, W unions of irreducible equational closed sets,
// X over the x-variables only, Y over the y-variables only.
struct SpecialStablePiece {
    EquationalClosedSet zset;
    EquationalClosedSet wset;
    SemilinearSet xset;
    SemilinearSet yset;
};

// The subset of M^(x;y) a piece denotes.
SemilinearSet piece_set(const SpecialStablePiece& piece, const Partition& partition);

// Half-graph of length k: membership of (a_i, b_j) iff i <= j.
struct LadderWitness {
    std::size_t k = 0;
    std::vector<Vec> a, b;
};

struct StabilityVerdict {
    enum class Tag { Stable, Unstable } tag = Tag::Stable;
    std::vector<SpecialStablePiece> pieces;    // Stable: union equivalent to D
    std::optional<FacetAnalysis> culprit;      // Unstable
    std::optional<IrreducibleClosed> component;
    // context carried for witness synthesis and verification
    SemilinearSet set;
    Partition partition;
    Theory theory = Theory::Doag;

    bool stable() const { return tag == Tag::Stable; }
};

// Essential boundary facets of D_V inside the component V: the arrangement
// of all constraint hyperplanes of D_V's cells is refined within V, and a
// facet is emitted when its two adjacent full-dimensional cells differ in
// D_V-membership. One FacetAnalysis per (hyperplane, side), ordered by the
// canonical hyperplane.
std::vector<FacetAnalysis> essential_boundary(const SemilinearSet& d_v,
                                              const IrreducibleClosed& V,
                                              const Partition& partition);

// Facet enumeration relative to an explicit universe (used with a box
// universe by the boundary-characterization tests): a facet is essential
// when one adjacent cell lies in X and the other in universe \ X. Returns
// every facet cell unmerged.
struct BoundaryFacet {
    Cell cell;
    AffineRow term;   // canonical within the carrier
    bool d_on_upper;  // X-side is the term > 0 side
};
std::vector<BoundaryFacet> boundary_facets(const SemilinearSet& x, const SemilinearSet& universe,
                                           const AffineSubspace& carrier);

// Product-arrangement decomposition of a component whose essential facets
// all rewrite as pure-x or pure-y constraints. Emits one piece per grid
// cell meeting D_V in full dimension, corrected by the equational closure
// of the cell's junk; the remainder has strictly smaller dimension (checked
// at run time).
struct GridResult {
    std::vector<SpecialStablePiece> pieces;
    SemilinearSet remainder;
};
GridResult grid_decompose(const SemilinearSet& d_v, const IrreducibleClosed& V,
                          const std::vector<FacetAnalysis>& facets, const Partition& partition);

struct GridStats {
    long invocations = 0;
    long violations = 0;
};
GridStats& grid_stats();
void reset_grid_stats();

// Explicit half-graph of length k for a NonSplit facet, built on the plane
// p + s*u + t*v through a smooth facet point and validated pair by pair
// against D. Scales are chosen inside a subinterval of the smoothness
// radius where the off-side of the hyperplane is provably D-free.
LadderWitness make_ladder(const FacetAnalysis& facet, const IrreducibleClosed& V,
                          const SemilinearSet& d, const Partition& partition, std::size_t k);

// The classification engine: quantifier elimination, then dimension
// recursion over equational closure components.
StabilityVerdict analyze(const Problem& problem);

} // namespace stab
