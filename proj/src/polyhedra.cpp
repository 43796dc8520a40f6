#include "stab/polyhedra.hpp"

#include <algorithm>
#include <cassert>

namespace stab {

std::optional<AffineSubspace> AffineSubspace::from_rows(std::vector<AffineRow> rows,
                                                        std::size_t nvars) {
    if (!rref(rows)) return std::nullopt;
    return AffineSubspace{std::move(rows), nvars};
}

bool AffineSubspace::contains_point(const Vec& p) const {
    for (const auto& r : rows) {
        if (dot(r.coef, p) + r.cst != 0) return false;
    }
    return true;
}

bool AffineSubspace::contains(const AffineSubspace& other) const {
    for (const auto& r : rows) {
        AffineRow res = other.reduce(r);
        if (!is_zero(res.coef) || res.cst != 0) return false;
    }
    return true;
}

Cell AffineSubspace::to_cell() const {
    std::vector<Atom> atoms;
    for (const auto& r : rows) atoms.push_back(Atom{r.coef, r.cst, Rel::Eq});
    auto c = Cell::conjoin(std::move(atoms));
    assert(c);
    return *c;
}

Hyperplane Hyperplane::from_term(const AffineRow& term, std::size_t nx) {
    AffineRow t = term;
    canonicalize_row(t, true);
    Hyperplane h;
    h.normal_x.assign(t.coef.begin(), t.coef.begin() + static_cast<std::ptrdiff_t>(nx));
    h.normal_y.assign(t.coef.begin() + static_cast<std::ptrdiff_t>(nx), t.coef.end());
    h.offset = -t.cst;
    return h;
}

AffineRow Hyperplane::term() const {
    Vec coef = normal_x;
    coef.insert(coef.end(), normal_y.begin(), normal_y.end());
    return {std::move(coef), -offset};
}

bool is_empty(const Cell& cell) {
    std::size_t n = 0;
    for (const auto& a : cell.all_atoms()) n = std::max(n, a.coef.size());
    std::optional<Cell> cur = cell;
    for (std::size_t v = n; v-- > 0;) {
        cur = fm_eliminate(*cur, v);
        if (!cur) return true;
    }
    return false;
}

namespace {

// Affine hull rows plus, for each weak atom, whether it is entailed to be
// an equality on the cell.
struct HullInfo {
    AffineSubspace hull;
    std::vector<bool> weak_pinched;
};

HullInfo hull_info(const Cell& cell, std::size_t nvars) {
    if (is_empty(cell)) throw input_error("affine_hull: empty cell");
    std::vector<AffineRow> rows;
    for (const auto& a : cell.eqs) rows.push_back(a.row());
    std::vector<bool> pinched(cell.weaks.size(), false);
    for (std::size_t i = 0; i < cell.weaks.size(); ++i) {
        const Atom& w = cell.weaks[i];
        auto tight = cell.with({Atom{w.coef, w.cst, Rel::Gt}});
        if (!tight || is_empty(*tight)) {
            pinched[i] = true;
            rows.push_back(w.row());
        }
    }
    auto hull = AffineSubspace::from_rows(std::move(rows), nvars);
    assert(hull); // consistent because the cell is non-empty
    return {std::move(*hull), std::move(pinched)};
}

} // namespace

AffineSubspace affine_hull(const Cell& cell, std::size_t nvars) {
    return hull_info(cell, nvars).hull;
}

int dimension(const SemilinearSet& s) {
    int d = -1;
    for (const auto& c : s.cells) {
        if (is_empty(c)) continue;
        AffineSubspace h = hull_info(c, s.vars.size()).hull;
        d = std::max(d, h.dim());
    }
    return d;
}

int local_dimension(const SemilinearSet& s, const Vec& p) {
    int d = -1;
    for (const auto& c : s.cells) {
        if (!c.closure_contains(p)) continue;
        if (is_empty(c)) continue;
        d = std::max(d, hull_info(c, s.vars.size()).hull.dim());
    }
    return d;
}

std::vector<Cell> complement_cells(const std::vector<Cell>& cells, std::size_t nvars) {
    std::vector<Cell> acc{Cell{}};
    for (const auto& c : cells) {
        std::vector<Cell> negs;
        for (const auto& a : c.all_atoms()) {
            Vec neg(a.coef.size());
            for (std::size_t i = 0; i < a.coef.size(); ++i) neg[i] = -a.coef[i];
            switch (a.rel) {
            case Rel::Eq:
                negs.push_back(*Cell::conjoin({Atom{a.coef, a.cst, Rel::Gt}}));
                negs.push_back(*Cell::conjoin({Atom{neg, -a.cst, Rel::Gt}}));
                break;
            case Rel::Gt:
                negs.push_back(*Cell::conjoin({Atom{std::move(neg), -a.cst, Rel::Ge}}));
                break;
            case Rel::Ge:
                negs.push_back(*Cell::conjoin({Atom{std::move(neg), -a.cst, Rel::Gt}}));
                break;
            }
        }
        if (negs.empty()) return {}; // complement of the full cell
        std::vector<Cell> next;
        for (const auto& base : acc) {
            for (const auto& n : negs) {
                auto merged = base.with(n.all_atoms());
                if (merged && !is_empty(*merged)) next.push_back(std::move(*merged));
            }
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        acc = std::move(next);
        if (acc.empty()) break;
    }
    (void)nvars;
    return acc;
}

namespace {

void check_same_ambient(const SemilinearSet& a, const SemilinearSet& b) {
    if (a.vars != b.vars) throw input_error("combine: ambient variable mismatch");
}

} // namespace

SemilinearSet complement(const SemilinearSet& s) {
    return {s.vars, complement_cells(s.cells, s.vars.size())};
}

SemilinearSet combine(SetOp op, const SemilinearSet& a, const SemilinearSet& b) {
    check_same_ambient(a, b);
    switch (op) {
    case SetOp::Union: {
        std::vector<Cell> cells = a.cells;
        cells.insert(cells.end(), b.cells.begin(), b.cells.end());
        std::sort(cells.begin(), cells.end());
        cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
        return {a.vars, std::move(cells)};
    }
    case SetOp::Intersect: {
        std::vector<Cell> cells;
        for (const auto& ca : a.cells) {
            for (const auto& cb : b.cells) {
                auto c = ca.with(cb.all_atoms());
                if (c && !is_empty(*c)) cells.push_back(std::move(*c));
            }
        }
        std::sort(cells.begin(), cells.end());
        cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
        return {a.vars, std::move(cells)};
    }
    case SetOp::Difference:
        return combine(SetOp::Intersect, a, complement(b));
    case SetOp::Symdiff:
        return combine(SetOp::Union, combine(SetOp::Difference, a, b),
                        combine(SetOp::Difference, b, a));
    }
    throw std::logic_error("unreachable");
}

bool is_empty_set(const SemilinearSet& s) {
    for (const auto& c : s.cells) {
        if (!is_empty(c)) return false;
    }
    return true;
}

bool equivalent(const SemilinearSet& a, const SemilinearSet& b) {
    return is_empty_set(combine(SetOp::Symdiff, a, b));
}

namespace {

Vec sample_rec(const Cell& cell, std::size_t nvars) {
    // highest-index variable still mentioned
    std::size_t var = nvars;
    for (const auto& a : cell.all_atoms()) {
        for (std::size_t j = a.coef.size(); j-- > 0;) {
            if (a.coef[j] != 0) {
                if (var == nvars || j > var) var = j;
                break;
            }
        }
    }
    if (var == nvars) return Vec(nvars, Rational(0));

    for (const auto& e : cell.eqs) {
        if (e.coef[var] == 0) continue;
        auto rest = fm_eliminate(cell, var);
        assert(rest);
        Vec p = sample_rec(*rest, nvars);
        Rational acc = e.cst;
        for (std::size_t j = 0; j < e.coef.size(); ++j) {
            if (j != var) acc += e.coef[j] * p[j];
        }
        p[var] = -acc / e.coef[var];
        return p;
    }

    auto rest = fm_eliminate(cell, var);
    assert(rest);
    Vec p = sample_rec(*rest, nvars);
    bool has_lo = false, has_hi = false;
    Rational lo, hi;
    for (const auto& a : cell.all_atoms()) {
        if (a.coef[var] == 0) continue;
        Rational r = a.cst;
        for (std::size_t j = 0; j < a.coef.size(); ++j) {
            if (j != var) r += a.coef[j] * p[j];
        }
        Rational bound = -r / a.coef[var];
        if (a.coef[var] > 0) {
            if (!has_lo || bound > lo) lo = bound;
            has_lo = true;
        } else {
            if (!has_hi || bound < hi) hi = bound;
            has_hi = true;
        }
    }
    if (has_lo && has_hi) {
        assert(lo < hi);
        p[var] = (lo + hi) / 2;
    } else if (has_lo) {
        p[var] = lo + 1;
    } else if (has_hi) {
        p[var] = hi - 1;
    } else {
        p[var] = 0;
    }
    return p;
}

} // namespace

Vec sample_interior(const Cell& cell, std::size_t nvars) {
    const std::size_t n = nvars;
    HullInfo info = hull_info(cell, n); // throws on empty cell
    std::vector<Atom> atoms;
    for (const auto& r : info.hull.rows) atoms.push_back(Atom{r.coef, r.cst, Rel::Eq});
    for (const auto& a : cell.stricts) atoms.push_back(a);
    for (std::size_t i = 0; i < cell.weaks.size(); ++i) {
        if (!info.weak_pinched[i])
            atoms.push_back(Atom{cell.weaks[i].coef, cell.weaks[i].cst, Rel::Gt});
    }
    auto relint = Cell::conjoin(std::move(atoms));
    assert(relint); // the relative interior of a non-empty cell is non-empty
    Vec p = sample_rec(*relint, n);
    assert(relint->contains(p));
    return p;
}

std::vector<SignedCell> sign_cells(const std::vector<AffineRow>& terms, const Cell& base,
                                   bool with_zero) {
    std::vector<SignedCell> out;
    std::vector<int> signs;
    auto rec = [&](auto&& self, const Cell& cur, std::size_t i) -> void {
        if (i == terms.size()) {
            out.push_back({signs, cur});
            return;
        }
        const AffineRow& t = terms[i];
        Vec neg(t.coef.size());
        for (std::size_t j = 0; j < t.coef.size(); ++j) neg[j] = -t.coef[j];
        const int menu[] = {+1, -1, 0};
        for (int sgn : menu) {
            if (sgn == 0 && !with_zero) continue;
            std::optional<Cell> next;
            if (sgn == +1)
                next = cur.with({Atom{t.coef, t.cst, Rel::Gt}});
            else if (sgn == -1)
                next = cur.with({Atom{neg, -t.cst, Rel::Gt}});
            else
                next = cur.with({Atom{t.coef, t.cst, Rel::Eq}});
            if (!next || is_empty(*next)) continue;
            signs.push_back(sgn);
            self(self, *next, i + 1);
            signs.pop_back();
        }
    };
    rec(rec, base, 0);
    return out;
}

std::vector<Cell> arrangement(const std::vector<Hyperplane>& hyperplanes,
                              const AffineSubspace& carrier) {
    std::vector<AffineRow> terms;
    for (const auto& h : hyperplanes) {
        AffineRow res = carrier.reduce(h.term());
        if (is_zero(res.coef)) continue; // contains the carrier or misses it entirely
        canonicalize_row(res, true);
        if (std::find(terms.begin(), terms.end(), res) == terms.end()) terms.push_back(res);
    }
    std::vector<Cell> cells;
    for (auto& sc : sign_cells(terms, carrier.to_cell(), true)) cells.push_back(std::move(sc.cell));
    return cells;
}

} // namespace stab
