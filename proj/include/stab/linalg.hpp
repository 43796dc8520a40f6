#pragma once

#include "stab/rational.hpp"

#include <optional>
#include <vector>

namespace stab {

// Dense exact linear algebra on small systems. Rows are affine: a row
// (c_0..c_{n-1} | k) stands for the equation sum c_i v_i + k = 0; the
// constant sits in its own field so the pivot search never touches it.
struct AffineRow {
    Vec coef;
    Rational cst;

    bool operator==(const AffineRow&) const = default;
};

// Scales a row so all entries are integral, the gcd of the nonzero variable
// coefficients is 1 and (if sign_normalize) the leading coefficient is
// positive. Rows without variable coefficients are left untouched.
void canonicalize_row(AffineRow& row, bool sign_normalize);

// Reduced row echelon form over the variable columns, canonicalized as
// above. Returns false if the system is inconsistent (0 = c with c != 0);
// redundant rows are dropped.
bool rref(std::vector<AffineRow>& rows);

// Residual of `row` modulo the rref basis `rows`. The result has a zero
// coefficient in every pivot column of the basis.
AffineRow reduce_mod(const std::vector<AffineRow>& rows, AffineRow row);

// Solves lambda * M = target over the rationals, M given by rows. Returns
// nullopt when target is outside the row space of M.
std::optional<Vec> solve_left(const std::vector<Vec>& rows, const Vec& target);

// Basis of { u : M u = 0 }. ncols is the ambient dimension (rows may be
// empty, in which case the kernel is everything).
std::vector<Vec> kernel_basis(const std::vector<Vec>& rows, std::size_t ncols);

} // namespace stab
