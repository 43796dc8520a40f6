#pragma once

#include "stab/formula.hpp"

#include <optional>
#include <vector>

namespace stab {

// A conjunction of canonical atoms over a fixed ambient, split by relation.
// Construction goes through `conjoin`, which also merges parallel
// constraints per linear functional (tightest lower/upper bound wins, a
// closed pinch becomes an equation) and reports syntactic inconsistency.
// A Cell kept inside a SemilinearSet is additionally known non-empty.
struct Cell {
    std::vector<Atom> eqs;
    std::vector<Atom> stricts; // term > 0
    std::vector<Atom> weaks;   // term >= 0

    static std::optional<Cell> conjoin(std::vector<Atom> atoms);
    std::optional<Cell> with(std::vector<Atom> extra) const;

    std::vector<Atom> all_atoms() const;
    bool contains(const Vec& point) const;
    bool closure_contains(const Vec& point) const; // strict atoms relaxed to weak

    bool operator==(const Cell&) const = default;
    friend bool operator<(const Cell& a, const Cell& b) {
        if (a.eqs != b.eqs) return a.eqs < b.eqs;
        if (a.stricts != b.stricts) return a.stricts < b.stricts;
        return a.weaks < b.weaks;
    }
};

// Finite union of cells over an ordered ambient variable list; the empty
// union denotes the empty set.
struct SemilinearSet {
    VarList vars;
    std::vector<Cell> cells;

    bool contains(const Vec& point) const;
    FormulaPtr to_formula() const;
};

SemilinearSet full_set(VarList vars);
SemilinearSet empty_set(VarList vars);

// Structural helpers. `project_prefix` drops trailing columns, which must
// be zero in every atom; `embed` widens the ambient placing the old columns
// at `offset`; `product` juxtaposes two sets over disjoint variables.
SemilinearSet project_prefix(const SemilinearSet& s, const VarList& target);
Cell embed_cell(const Cell& cell, std::size_t offset, std::size_t target_n);
SemilinearSet embed(const SemilinearSet& s, std::size_t offset, VarList target);
SemilinearSet product(const SemilinearSet& x, const SemilinearSet& y);

// One Fourier-Motzkin step on a single cell: eliminates `var` exactly
// (solve an equation for it when possible, otherwise combine lower and
// upper bounds pairwise with strictness the disjunction of the pair's).
// nullopt means the cell was recognized inconsistent.
std::optional<Cell> fm_eliminate(const Cell& cell, std::size_t var);

// Quantifier-free DNF with negations pushed to atoms and inconsistent
// cells removed.
SemilinearSet to_cells(const FormulaPtr& f, const VarList& vars);

// Full quantifier elimination for DLO/DOAG over the rationals. The result
// ranges over the partition variables only.
SemilinearSet eliminate_quantifiers(const Problem& problem);

// Deterministic single-block eliminator used by the order-independence
// tests: eliminates the given variables from the cells in the order given.
std::vector<Cell> eliminate_block(std::vector<Cell> cells, const std::vector<std::size_t>& vars);

} // namespace stab
