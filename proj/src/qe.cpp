#include "stab/qe.hpp"
#include "stab/polyhedra.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace stab {

namespace {

// Orientation of an atom relative to the sign-canonical form of its
// functional: returns the canonical key and whether the atom reads against
// it.
std::pair<Vec, bool> functional_key(const Vec& coef) {
    for (const auto& c : coef) {
        if (c == 0) continue;
        if (c < 0) {
            Vec k(coef.size());
            for (std::size_t i = 0; i < coef.size(); ++i) k[i] = -coef[i];
            return {k, true};
        }
        break;
    }
    return {coef, false};
}

struct Bounds {
    bool has_pin = false, has_lo = false, has_hi = false;
    Rational pin, lo, hi;
    bool lo_strict = false, hi_strict = false;
    bool bad = false;

    void add_pin(const Rational& v) {
        if (has_pin && pin != v) bad = true;
        has_pin = true;
        pin = v;
    }
    void add_lo(const Rational& v, bool strict) {
        if (!has_lo || v > lo || (v == lo && strict)) {
            lo = v;
            lo_strict = strict;
        }
        has_lo = true;
    }
    void add_hi(const Rational& v, bool strict) {
        if (!has_hi || v < hi || (v == hi && strict)) {
            hi = v;
            hi_strict = strict;
        }
        has_hi = true;
    }
};

} // namespace

std::optional<Cell> Cell::conjoin(std::vector<Atom> atoms) {
    std::map<Vec, Bounds> table;
    for (const auto& a : atoms) {
        auto [key, flipped] = functional_key(a.coef);
        Bounds& b = table[key];
        switch (a.rel) {
        case Rel::Eq:
            b.add_pin(flipped ? a.cst : -a.cst);
            break;
        case Rel::Gt:
            if (flipped)
                b.add_hi(a.cst, true);
            else
                b.add_lo(-a.cst, true);
            break;
        case Rel::Ge:
            if (flipped)
                b.add_hi(a.cst, false);
            else
                b.add_lo(-a.cst, false);
            break;
        }
        if (b.bad) return std::nullopt;
    }
    Cell out;
    for (auto& [key, b] : table) {
        if (b.has_lo && b.has_hi && !b.has_pin) {
            if (b.lo > b.hi) return std::nullopt;
            if (b.lo == b.hi) {
                if (b.lo_strict || b.hi_strict) return std::nullopt;
                b.add_pin(b.lo);
            }
        }
        if (b.has_pin) {
            if (b.has_lo && (b.lo_strict ? !(b.pin > b.lo) : !(b.pin >= b.lo))) return std::nullopt;
            if (b.has_hi && (b.hi_strict ? !(b.pin < b.hi) : !(b.pin <= b.hi))) return std::nullopt;
            out.eqs.push_back(Atom{key, -b.pin, Rel::Eq});
            continue;
        }
        if (b.has_lo) {
            (b.lo_strict ? out.stricts : out.weaks).push_back(Atom{key, -b.lo, b.lo_strict ? Rel::Gt : Rel::Ge});
        }
        if (b.has_hi) {
            Vec neg(key.size());
            for (std::size_t i = 0; i < key.size(); ++i) neg[i] = -key[i];
            (b.hi_strict ? out.stricts : out.weaks).push_back(Atom{std::move(neg), b.hi, b.hi_strict ? Rel::Gt : Rel::Ge});
        }
    }
    std::sort(out.eqs.begin(), out.eqs.end());
    std::sort(out.stricts.begin(), out.stricts.end());
    std::sort(out.weaks.begin(), out.weaks.end());
    return out;
}

std::optional<Cell> Cell::with(std::vector<Atom> extra) const {
    std::vector<Atom> atoms = all_atoms();
    atoms.insert(atoms.end(), extra.begin(), extra.end());
    return conjoin(std::move(atoms));
}

std::vector<Atom> Cell::all_atoms() const {
    std::vector<Atom> out = eqs;
    out.insert(out.end(), stricts.begin(), stricts.end());
    out.insert(out.end(), weaks.begin(), weaks.end());
    return out;
}

bool Cell::contains(const Vec& point) const {
    for (const auto& a : eqs)
        if (!a.holds_at(point)) return false;
    for (const auto& a : stricts)
        if (!a.holds_at(point)) return false;
    for (const auto& a : weaks)
        if (!a.holds_at(point)) return false;
    return true;
}

bool Cell::closure_contains(const Vec& point) const {
    for (const auto& a : eqs)
        if (!a.holds_at(point)) return false;
    for (const auto& a : stricts)
        if (a.value_at(point) < 0) return false;
    for (const auto& a : weaks)
        if (!a.holds_at(point)) return false;
    return true;
}

bool SemilinearSet::contains(const Vec& point) const {
    for (const auto& c : cells)
        if (c.contains(point)) return true;
    return false;
}

FormulaPtr SemilinearSet::to_formula() const {
    std::vector<FormulaPtr> disjuncts;
    for (const auto& c : cells) {
        std::vector<FormulaPtr> leaves;
        for (const auto& a : c.all_atoms()) leaves.push_back(mk_leaf(a));
        disjuncts.push_back(mk_and(std::move(leaves)));
    }
    return mk_or(std::move(disjuncts));
}

SemilinearSet full_set(VarList vars) { return {std::move(vars), {Cell{}}}; }
SemilinearSet empty_set(VarList vars) { return {std::move(vars), {}}; }

SemilinearSet project_prefix(const SemilinearSet& s, const VarList& target) {
    const std::size_t m = target.size();
    SemilinearSet out{target, {}};
    for (const auto& c : s.cells) {
        std::vector<Atom> atoms;
        for (const auto& a : c.all_atoms()) {
            for (std::size_t j = m; j < a.coef.size(); ++j) {
                if (a.coef[j] != 0) throw std::logic_error("project_prefix: live column dropped");
            }
            Atom b = a;
            b.coef.resize(m);
            atoms.push_back(std::move(b));
        }
        auto cc = Cell::conjoin(std::move(atoms));
        assert(cc);
        out.cells.push_back(std::move(*cc));
    }
    return out;
}

Cell embed_cell(const Cell& cell, std::size_t offset, std::size_t target_n) {
    std::vector<Atom> atoms;
    for (const auto& a : cell.all_atoms()) {
        Vec coef(target_n, Rational(0));
        for (std::size_t j = 0; j < a.coef.size(); ++j) coef[offset + j] = a.coef[j];
        atoms.push_back(Atom{std::move(coef), a.cst, a.rel});
    }
    auto cc = Cell::conjoin(std::move(atoms));
    assert(cc);
    return *cc;
}

SemilinearSet embed(const SemilinearSet& s, std::size_t offset, VarList target) {
    SemilinearSet out{std::move(target), {}};
    for (const auto& c : s.cells) out.cells.push_back(embed_cell(c, offset, out.vars.size()));
    return out;
}

SemilinearSet product(const SemilinearSet& x, const SemilinearSet& y) {
    VarList vars = x.vars;
    vars.insert(vars.end(), y.vars.begin(), y.vars.end());
    SemilinearSet out{vars, {}};
    for (const auto& cx : x.cells) {
        Cell ex = embed_cell(cx, 0, vars.size());
        for (const auto& cy : y.cells) {
            Cell ey = embed_cell(cy, x.vars.size(), vars.size());
            auto c = ex.with(ey.all_atoms());
            assert(c);
            out.cells.push_back(std::move(*c));
        }
    }
    return out;
}

std::optional<Cell> fm_eliminate(const Cell& cell, std::size_t var) {
    const Atom* eq = nullptr;
    for (const auto& a : cell.eqs) {
        if (a.coef[var] != 0) {
            eq = &a;
            break;
        }
    }
    std::vector<Atom> out;
    if (eq) {
        // substitute the solved variable into every atom; the pivot itself
        // reduces to 0 = 0 and is dropped
        for (const auto& a : cell.all_atoms()) {
            Atom b = a;
            if (b.coef[var] != 0) {
                Rational f = b.coef[var] / eq->coef[var];
                for (std::size_t j = 0; j < b.coef.size(); ++j) b.coef[j] -= f * eq->coef[j];
                b.cst -= f * eq->cst;
            }
            AtomOrConst r = make_atom(std::move(b.coef), std::move(b.cst), b.rel);
            if (r.is_const) {
                if (!r.const_value) return std::nullopt;
                continue;
            }
            out.push_back(std::move(r.atom));
        }
        return Cell::conjoin(std::move(out));
    }
    std::vector<Atom> lowers, uppers;
    for (const auto& a : cell.all_atoms()) {
        if (a.coef[var] == 0) {
            out.push_back(a);
        } else if (a.rel == Rel::Eq) {
            assert(false);
        } else if (a.coef[var] > 0) {
            lowers.push_back(a);
        } else {
            uppers.push_back(a);
        }
    }
    for (const auto& l : lowers) {
        for (const auto& u : uppers) {
            const Rational a = l.coef[var];  // > 0
            const Rational b = u.coef[var];  // < 0
            Vec coef(l.coef.size());
            for (std::size_t j = 0; j < coef.size(); ++j) coef[j] = a * u.coef[j] - b * l.coef[j];
            Rational cst = a * u.cst - b * l.cst;
            Rel rel = (l.rel == Rel::Gt || u.rel == Rel::Gt) ? Rel::Gt : Rel::Ge;
            AtomOrConst r = make_atom(std::move(coef), std::move(cst), rel);
            if (r.is_const) {
                if (!r.const_value) return std::nullopt;
                continue;
            }
            out.push_back(std::move(r.atom));
        }
    }
    return Cell::conjoin(std::move(out));
}

namespace {

std::vector<Cell> negate_atom(const Atom& a) {
    std::vector<Cell> out;
    Vec neg(a.coef.size());
    for (std::size_t i = 0; i < a.coef.size(); ++i) neg[i] = -a.coef[i];
    switch (a.rel) {
    case Rel::Eq: {
        auto c1 = Cell::conjoin({Atom{a.coef, a.cst, Rel::Gt}});
        auto c2 = Cell::conjoin({Atom{neg, -a.cst, Rel::Gt}});
        out.push_back(*c1);
        out.push_back(*c2);
        break;
    }
    case Rel::Gt:
        out.push_back(*Cell::conjoin({Atom{neg, -a.cst, Rel::Ge}}));
        break;
    case Rel::Ge:
        out.push_back(*Cell::conjoin({Atom{neg, -a.cst, Rel::Gt}}));
        break;
    }
    return out;
}

std::vector<Cell> cross(const std::vector<Cell>& a, const std::vector<Cell>& b) {
    std::vector<Cell> out;
    for (const auto& ca : a) {
        for (const auto& cb : b) {
            auto c = ca.with(cb.all_atoms());
            if (c) out.push_back(std::move(*c));
        }
    }
    return out;
}

void dedupe(std::vector<Cell>& cells) {
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
}

std::vector<Cell> dnf(const FormulaPtr& f, bool pos, std::size_t nvars, bool allow_quant);

std::vector<Cell> dnf_children_product(const std::vector<FormulaPtr>& kids, bool pos,
                                       std::size_t nvars, bool allow_quant) {
    std::vector<Cell> acc{Cell{}};
    for (const auto& k : kids) {
        acc = cross(acc, dnf(k, pos, nvars, allow_quant));
        if (acc.empty()) break;
    }
    return acc;
}

std::vector<Cell> dnf_children_concat(const std::vector<FormulaPtr>& kids, bool pos,
                                      std::size_t nvars, bool allow_quant) {
    std::vector<Cell> acc;
    for (const auto& k : kids) {
        auto cs = dnf(k, pos, nvars, allow_quant);
        acc.insert(acc.end(), cs.begin(), cs.end());
    }
    dedupe(acc);
    return acc;
}

std::vector<Cell> dnf(const FormulaPtr& f, bool pos, std::size_t nvars, bool allow_quant) {
    switch (f->kind) {
    case Formula::Kind::True: return pos ? std::vector<Cell>{Cell{}} : std::vector<Cell>{};
    case Formula::Kind::False: return pos ? std::vector<Cell>{} : std::vector<Cell>{Cell{}};
    case Formula::Kind::Leaf:
        if (pos) return {*Cell::conjoin({f->atom})};
        return negate_atom(f->atom);
    case Formula::Kind::And:
        return pos ? dnf_children_product(f->kids, pos, nvars, allow_quant)
                   : dnf_children_concat(f->kids, pos, nvars, allow_quant);
    case Formula::Kind::Or:
        return pos ? dnf_children_concat(f->kids, pos, nvars, allow_quant)
                   : dnf_children_product(f->kids, pos, nvars, allow_quant);
    case Formula::Kind::Not: return dnf(f->kids[0], !pos, nvars, allow_quant);
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
        if (!allow_quant) throw input_error("to_cells requires a quantifier-free formula");
        const bool exists_shape = (f->kind == Formula::Kind::Exists) == pos;
        // exists-shape: eliminate from the body with matching polarity;
        // forall-shape: eliminate from the negated body, then complement.
        std::vector<Cell> body = dnf(f->kids[0], exists_shape ? pos : !pos, nvars, allow_quant);
        std::vector<Cell> elim = eliminate_block(std::move(body), f->bound);
        if (exists_shape) {
            dedupe(elim);
            return elim;
        }
        std::vector<Cell> comp = complement_cells(elim, nvars);
        dedupe(comp);
        return comp;
    }
    }
    return {};
}

} // namespace

std::vector<Cell> eliminate_block(std::vector<Cell> cells, const std::vector<std::size_t>& vars) {
    for (std::size_t v : vars) {
        std::vector<Cell> next;
        for (const auto& c : cells) {
            auto e = fm_eliminate(c, v);
            if (e) next.push_back(std::move(*e));
        }
        dedupe(next);
        cells = std::move(next);
    }
    return cells;
}

SemilinearSet to_cells(const FormulaPtr& f, const VarList& vars) {
    std::vector<Cell> cells = dnf(f, true, vars.size(), false);
    std::vector<Cell> kept;
    for (auto& c : cells) {
        if (!is_empty(c)) kept.push_back(std::move(c));
    }
    dedupe(kept);
    return {vars, std::move(kept)};
}

SemilinearSet eliminate_quantifiers(const Problem& problem) {
    std::vector<Cell> cells = dnf(problem.formula, true, problem.vars.size(), true);
    std::vector<Cell> kept;
    for (auto& c : cells) {
        if (!is_empty(c)) kept.push_back(std::move(c));
    }
    dedupe(kept);
    SemilinearSet wide{problem.vars, std::move(kept)};
    return project_prefix(wide, problem.partition.all());
}

} // namespace stab
