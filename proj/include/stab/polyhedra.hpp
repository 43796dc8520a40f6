#pragma once

#include "stab/qe.hpp"

#include <vector>

namespace stab {

// Solution set of a canonical (rref) system of affine equations. Never
// inconsistent by construction.
struct AffineSubspace {
    std::vector<AffineRow> rows;
    std::size_t nvars = 0;

    static AffineSubspace full(std::size_t nvars) { return {{}, nvars}; }
    // rref-reduces the given equations; nullopt if inconsistent.
    static std::optional<AffineSubspace> from_rows(std::vector<AffineRow> rows, std::size_t nvars);

    int dim() const { return static_cast<int>(nvars) - static_cast<int>(rows.size()); }
    AffineRow reduce(AffineRow row) const { return reduce_mod(rows, std::move(row)); }
    bool contains_point(const Vec& p) const;
    bool contains(const AffineSubspace& other) const; // other subseteq this
    Cell to_cell() const;

    bool operator==(const AffineSubspace&) const = default;
    friend bool operator<(const AffineSubspace& a, const AffineSubspace& b) {
        if (a.nvars != b.nvars) return a.nvars < b.nvars;
        if (a.rows.size() != b.rows.size()) return a.rows.size() < b.rows.size();
        for (std::size_t i = 0; i < a.rows.size(); ++i) {
            if (a.rows[i].coef != b.rows[i].coef) return a.rows[i].coef < b.rows[i].coef;
            if (a.rows[i].cst != b.rows[i].cst) return a.rows[i].cst < b.rows[i].cst;
        }
        return false;
    }
};

// k.x + l.y = c with (k, l) integral, gcd 1, leading coefficient positive.
struct Hyperplane {
    Vec normal_x, normal_y;
    Rational offset;

    static Hyperplane from_term(const AffineRow& term, std::size_t nx);
    AffineRow term() const; // k.x + l.y - c as an affine row

    bool operator==(const Hyperplane&) const = default;
    friend bool operator<(const Hyperplane& a, const Hyperplane& b) {
        if (a.normal_x != b.normal_x) return a.normal_x < b.normal_x;
        if (a.normal_y != b.normal_y) return a.normal_y < b.normal_y;
        return a.offset < b.offset;
    }
};

// Exact emptiness over the rationals, by variable elimination.
bool is_empty(const Cell& cell);

// Smallest affine subspace containing a non-empty cell: its equations plus
// every weak inequality entailed to be an equality.
AffineSubspace affine_hull(const Cell& cell, std::size_t nvars);

// Max over non-empty cells of the affine hull dimension; -1 for the empty
// set.
int dimension(const SemilinearSet& s);

// Max dimension over cells whose topological closure contains p; -1 when no
// closure does. Exact for cell presentations because cells are convex.
int local_dimension(const SemilinearSet& s, const Vec& p);

enum class SetOp { Union, Intersect, Difference, Symdiff };
SemilinearSet combine(SetOp op, const SemilinearSet& a, const SemilinearSet& b);
SemilinearSet complement(const SemilinearSet& s);
bool equivalent(const SemilinearSet& a, const SemilinearSet& b);
bool is_empty_set(const SemilinearSet& s);

// Complement of a cell union as a cell union (per-atom negation,
// redistributed), inconsistent cells removed.
std::vector<Cell> complement_cells(const std::vector<Cell>& cells, std::size_t nvars);

// A rational point of the relative interior: all equations hold, every
// inequality not entailed to be an equality holds strictly.
Vec sample_interior(const Cell& cell, std::size_t nvars);

// Non-empty sign-condition cells of the hyperplane arrangement within the
// carrier. Hyperplanes containing the carrier are skipped (their sign is
// identically zero there); the cells partition the carrier.
std::vector<Cell> arrangement(const std::vector<Hyperplane>& hyperplanes,
                              const AffineSubspace& carrier);

// Generic sign-vector enumeration over arbitrary linear terms, starting
// from a base cell. Signs per term: -1, 0, +1; zero branches are taken only
// when with_zero is set. Terms identically zero on the base's ambient must
// be filtered by the caller. Cells are returned in DFS order (sign +1
// first), which fixes the deterministic ordering used everywhere above.
struct SignedCell {
    std::vector<int> signs;
    Cell cell;
};
std::vector<SignedCell> sign_cells(const std::vector<AffineRow>& terms, const Cell& base,
                                   bool with_zero);

} // namespace stab
