#include "stab/equational.hpp"

#include <algorithm>
#include <cassert>
#include <set>

namespace stab {

SemilinearSet EquationalClosedSet::to_set(const VarList& vars) const {
    SemilinearSet out{vars, {}};
    for (const auto& c : components) out.cells.push_back(c.space.to_cell());
    std::sort(out.cells.begin(), out.cells.end());
    out.cells.erase(std::unique(out.cells.begin(), out.cells.end()), out.cells.end());
    return out;
}

EquationalClosedSet make_closed_set(std::vector<IrreducibleClosed> components) {
    std::sort(components.begin(), components.end());
    components.erase(std::unique(components.begin(), components.end()), components.end());
    std::vector<IrreducibleClosed> maximal;
    for (std::size_t i = 0; i < components.size(); ++i) {
        bool absorbed = false;
        for (std::size_t j = 0; j < components.size() && !absorbed; ++j) {
            // distinct canonical representations denote distinct sets, so
            // containment here is strict
            if (i != j && components[j].space.contains(components[i].space)) absorbed = true;
        }
        if (!absorbed) maximal.push_back(components[i]);
    }
    return {std::move(maximal)};
}

namespace {

EquationalClosedSet closure_doag(const SemilinearSet& s) {
    std::vector<IrreducibleClosed> comps;
    for (const auto& c : s.cells) {
        if (is_empty(c)) continue;
        comps.push_back({affine_hull(c, s.vars.size()), Theory::Doag});
    }
    return make_closed_set(std::move(comps));
}

EquationalClosedSet closure_dlo(const SemilinearSet& s) {
    const std::size_t n = s.vars.size();
    std::vector<IrreducibleClosed> comps;
    for (const auto& c : s.cells) {
        if (is_empty(c)) continue;
        // candidate pins: constants mentioned by the cell's one-variable atoms
        std::set<Rational> consts;
        for (const auto& a : c.all_atoms()) {
            std::size_t nz = 0, var = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (a.coef[j] != 0) {
                    ++nz;
                    var = j;
                }
            }
            if (nz == 1) consts.insert(-a.cst / a.coef[var]);
        }
        auto entailed = [&](Vec coef, const Rational& cst) {
            Vec neg(coef.size());
            for (std::size_t j = 0; j < coef.size(); ++j) neg[j] = -coef[j];
            auto above = c.with({Atom{coef, cst, Rel::Gt}});
            if (above && !is_empty(*above)) return false;
            auto below = c.with({Atom{std::move(neg), -cst, Rel::Gt}});
            return !below || is_empty(*below);
        };
        std::vector<AffineRow> rows;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                Vec coef(n, Rational(0));
                coef[i] = 1;
                coef[j] = -1;
                if (entailed(coef, Rational(0))) rows.push_back({std::move(coef), Rational(0)});
            }
            for (const auto& k : consts) {
                Vec coef(n, Rational(0));
                coef[i] = 1;
                if (entailed(coef, -k)) rows.push_back({std::move(coef), -k});
            }
        }
        auto space = AffineSubspace::from_rows(std::move(rows), n);
        assert(space); // cell is non-empty, so the entailed system is consistent
        comps.push_back({std::move(*space), Theory::Dlo});
    }
    return make_closed_set(std::move(comps));
}

} // namespace

EquationalClosedSet equational_closure(const SemilinearSet& s, Theory theory) {
    return theory == Theory::Doag ? closure_doag(s) : closure_dlo(s);
}

std::vector<IrreducibleClosed> irreducible_components(const EquationalClosedSet& z) {
    for (std::size_t i = 0; i < z.components.size(); ++i) {
        for (std::size_t j = 0; j < z.components.size(); ++j) {
            if (i == j) continue;
            if (z.components[j].space.contains(z.components[i].space))
                throw std::logic_error("irreducible_components: comparable components");
        }
    }
    return z.components;
}

SplitResult split_modulo(const Hyperplane& h, const IrreducibleClosed& V,
                         const Partition& partition) {
    const std::size_t nx = partition.x.size(), ny = partition.y.size();
    AffineRow residual = V.space.reduce(h.term());
    if (is_zero(residual.coef))
        throw input_error("split_modulo: hyperplane does not cut the component");

    std::vector<Vec> ex, ey;
    for (const auto& r : V.space.rows) {
        ex.emplace_back(r.coef.begin(), r.coef.begin() + static_cast<std::ptrdiff_t>(nx));
        ey.emplace_back(r.coef.begin() + static_cast<std::ptrdiff_t>(nx), r.coef.end());
    }

    SplitResult out;
    auto rewrite = [&](const Vec& lambda) {
        AffineRow t = h.term();
        for (std::size_t i = 0; i < lambda.size(); ++i) {
            for (std::size_t j = 0; j < t.coef.size(); ++j)
                t.coef[j] -= lambda[i] * V.space.rows[i].coef[j];
            t.cst -= lambda[i] * V.space.rows[i].cst;
        }
        return Hyperplane::from_term(t, nx);
    };

    if (auto lambda = solve_left(ey, h.normal_y)) {
        out.tag = SplitResult::Tag::PureX;
        out.rewritten = rewrite(*lambda);
        assert(is_zero(out.rewritten.normal_y));
        return out;
    }
    if (auto mu = solve_left(ex, h.normal_x)) {
        out.tag = SplitResult::Tag::PureY;
        out.rewritten = rewrite(*mu);
        assert(is_zero(out.rewritten.normal_x));
        return out;
    }
    out.tag = SplitResult::Tag::NonSplit;
    for (const auto& u : kernel_basis(ex, nx)) {
        if (dot(h.normal_x, u) != 0) {
            out.dir_x = u;
            break;
        }
    }
    for (const auto& v : kernel_basis(ey, ny)) {
        if (dot(h.normal_y, v) != 0) {
            out.dir_y = v;
            break;
        }
    }
    assert(!out.dir_x.empty() && !out.dir_y.empty());
    return out;
}

} // namespace stab
