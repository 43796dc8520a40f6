#include "stab/linalg.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cassert>

namespace stab {

void canonicalize_row(AffineRow& row, bool sign_normalize) {
    Integer l = 1;
    for (const auto& c : row.coef) l = lcm(l, den(c));
    Integer g = 0;
    for (const auto& c : row.coef) g = gcd(g, abs(num(c * l)));
    if (g == 0) return;
    Rational scale = Rational(l, g);
    for (auto& c : row.coef) c *= scale;
    row.cst *= scale;
    if (sign_normalize) {
        for (const auto& c : row.coef) {
            if (c == 0) continue;
            if (c < 0) {
                for (auto& d : row.coef) d = -d;
                row.cst = -row.cst;
            }
            break;
        }
    }
}

bool rref(std::vector<AffineRow>& rows) {
    if (rows.empty()) return true;
    const std::size_t n = rows[0].coef.size();
    std::vector<AffineRow> basis;
    std::vector<std::size_t> pivots;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t found = rows.size();
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].coef[col] != 0) {
                found = r;
                break;
            }
        }
        if (found == rows.size()) continue;
        AffineRow piv = rows[found];
        rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(found));
        Rational p = piv.coef[col];
        for (auto& c : piv.coef) c /= p;
        piv.cst /= p;
        for (auto& r : rows) {
            if (r.coef[col] == 0) continue;
            Rational f = r.coef[col];
            for (std::size_t j = 0; j < n; ++j) r.coef[j] -= f * piv.coef[j];
            r.cst -= f * piv.cst;
        }
        for (std::size_t b = 0; b < basis.size(); ++b) {
            if (basis[b].coef[col] == 0) continue;
            Rational f = basis[b].coef[col] / piv.coef[col];
            for (std::size_t j = 0; j < n; ++j) basis[b].coef[j] -= f * piv.coef[j];
            basis[b].cst -= f * piv.cst;
        }
        basis.push_back(std::move(piv));
        pivots.push_back(col);
    }
    for (const auto& r : rows) {
        if (r.cst != 0) return false;
    }
    for (auto& r : basis) canonicalize_row(r, true);
    rows = std::move(basis);
    return true;
}

AffineRow reduce_mod(const std::vector<AffineRow>& rows, AffineRow row) {
    for (const auto& b : rows) {
        std::size_t piv = b.coef.size();
        for (std::size_t j = 0; j < b.coef.size(); ++j) {
            if (b.coef[j] != 0) {
                piv = j;
                break;
            }
        }
        if (piv == b.coef.size() || row.coef[piv] == 0) continue;
        Rational f = row.coef[piv] / b.coef[piv];
        for (std::size_t j = 0; j < row.coef.size(); ++j) row.coef[j] -= f * b.coef[j];
        row.cst -= f * b.cst;
    }
    return row;
}

std::optional<Vec> solve_left(const std::vector<Vec>& rows, const Vec& target) {
    // Gaussian elimination on the transposed system M^T lambda^T = target^T.
    const std::size_t m = rows.size();
    if (m == 0) return is_zero(target) ? std::optional<Vec>(Vec{}) : std::nullopt;
    const std::size_t n = rows[0].size();
    // aug[j] = (rows[0][j], ..., rows[m-1][j] | target[j])
    std::vector<Vec> aug(n, Vec(m + 1));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < m; ++i) aug[j][i] = rows[i][j];
        aug[j][m] = target[j];
    }
    std::vector<std::size_t> pivot_row(m, n);
    std::size_t rank_row = 0;
    for (std::size_t col = 0; col < m && rank_row < n; ++col) {
        std::size_t sel = n;
        for (std::size_t r = rank_row; r < n; ++r) {
            if (aug[r][col] != 0) {
                sel = r;
                break;
            }
        }
        if (sel == n) continue;
        std::swap(aug[rank_row], aug[sel]);
        Rational p = aug[rank_row][col];
        for (auto& v : aug[rank_row]) v /= p;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == rank_row || aug[r][col] == 0) continue;
            Rational f = aug[r][col];
            for (std::size_t j = 0; j <= m; ++j) aug[r][j] -= f * aug[rank_row][j];
        }
        pivot_row[col] = rank_row;
        ++rank_row;
    }
    for (std::size_t r = rank_row; r < n; ++r) {
        bool all_zero = true;
        for (std::size_t j = 0; j < m; ++j) {
            if (aug[r][j] != 0) {
                all_zero = false;
                break;
            }
        }
        if (all_zero && aug[r][m] != 0) return std::nullopt;
    }
    Vec lambda(m, Rational(0));
    for (std::size_t col = 0; col < m; ++col) {
        if (pivot_row[col] != n) lambda[col] = aug[pivot_row[col]][m];
    }
    return lambda;
}

std::vector<Vec> kernel_basis(const std::vector<Vec>& rows, std::size_t ncols) {
    std::vector<AffineRow> sys;
    sys.reserve(rows.size());
    for (const auto& r : rows) sys.push_back({r, Rational(0)});
    bool ok = rref(sys);
    assert(ok);
    (void)ok;
    std::vector<std::size_t> pivots;
    std::vector<bool> is_pivot(ncols, false);
    for (const auto& r : sys) {
        for (std::size_t j = 0; j < ncols; ++j) {
            if (r.coef[j] != 0) {
                pivots.push_back(j);
                is_pivot[j] = true;
                break;
            }
        }
    }
    std::vector<Vec> basis;
    for (std::size_t free = 0; free < ncols; ++free) {
        if (is_pivot[free]) continue;
        Vec u(ncols, Rational(0));
        u[free] = 1;
        for (std::size_t r = 0; r < sys.size(); ++r) {
            // pivot coefficient is positive after canonicalization
            u[pivots[r]] = -sys[r].coef[free] / sys[r].coef[pivots[r]];
        }
        basis.push_back(std::move(u));
    }
    return basis;
}

} // namespace stab
