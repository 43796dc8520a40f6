#include "stab/stability.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace stab {

SemilinearSet piece_set(const SpecialStablePiece& piece, const Partition& partition) {
    VarList vars = partition.all();
    SemilinearSet s = combine(SetOp::Intersect, piece.zset.to_set(vars),
                              product(piece.xset, piece.yset));
    if (piece.wset.components.empty()) return s;
    return combine(SetOp::Difference, s, piece.wset.to_set(vars));
}

// ---------------------------------------------------------------------------
// Essential boundary

namespace {

// Canonical nonzero residuals of every atom hyperplane of `cells` modulo
// the carrier.
std::vector<AffineRow> constraint_terms(const std::vector<Cell>& cells,
                                        const AffineSubspace& carrier) {
    std::vector<AffineRow> terms;
    for (const auto& c : cells) {
        for (const auto& a : c.all_atoms()) {
            AffineRow res = carrier.reduce(a.row());
            if (is_zero(res.coef)) continue;
            canonicalize_row(res, true);
            if (std::find(terms.begin(), terms.end(), res) == terms.end())
                terms.push_back(std::move(res));
        }
    }
    std::sort(terms.begin(), terms.end(), [](const AffineRow& a, const AffineRow& b) {
        if (a.coef != b.coef) return a.coef < b.coef;
        return a.cst < b.cst;
    });
    return terms;
}

enum class Region { InX, InComplement, Outside };

} // namespace

std::vector<BoundaryFacet> boundary_facets(const SemilinearSet& x, const SemilinearSet& universe,
                                           const AffineSubspace& carrier) {
    std::vector<Cell> all_cells = x.cells;
    all_cells.insert(all_cells.end(), universe.cells.begin(), universe.cells.end());
    std::vector<AffineRow> terms = constraint_terms(all_cells, carrier);
    const std::size_t n = carrier.nvars;
    const Cell base = carrier.to_cell();

    // classify every full-dimensional cell of the arrangement by a sample
    std::map<std::vector<int>, Region> region;
    for (const auto& sc : sign_cells(terms, base, false)) {
        Vec p = sample_interior(sc.cell, n);
        Region r = Region::Outside;
        if (x.contains(p))
            r = Region::InX;
        else if (universe.contains(p))
            r = Region::InComplement;
        region.emplace(sc.signs, r);
    }

    std::vector<BoundaryFacet> out;
    for (std::size_t h = 0; h < terms.size(); ++h) {
        std::vector<AffineRow> others;
        others.reserve(terms.size() - 1);
        for (std::size_t i = 0; i < terms.size(); ++i)
            if (i != h) others.push_back(terms[i]);
        auto on_h = base.with({Atom{terms[h].coef, terms[h].cst, Rel::Eq}});
        if (!on_h || is_empty(*on_h)) continue;
        for (const auto& sc : sign_cells(others, *on_h, false)) {
            // adjacent full-dimensional cells: same signs, h flipped
            std::vector<int> up, down;
            up.reserve(terms.size());
            for (std::size_t i = 0, oi = 0; i < terms.size(); ++i) {
                if (i == h) {
                    up.push_back(+1);
                    down.push_back(-1);
                } else {
                    up.push_back(sc.signs[oi]);
                    down.push_back(sc.signs[oi]);
                    ++oi;
                }
            }
            auto iu = region.find(up), id = region.find(down);
            assert(iu != region.end() && id != region.end());
            bool ux = iu->second == Region::InX, uc = iu->second == Region::InComplement;
            bool dx = id->second == Region::InX, dc = id->second == Region::InComplement;
            if ((ux && dc) || (dx && uc)) out.push_back({sc.cell, terms[h], ux});
        }
    }
    return out;
}

std::vector<FacetAnalysis> essential_boundary(const SemilinearSet& d_v,
                                              const IrreducibleClosed& V,
                                              const Partition& partition) {
    if (dimension(d_v) != V.dim())
        throw input_error("essential_boundary: dimension mismatch between D_V and V");
    SemilinearSet vset{d_v.vars, {V.space.to_cell()}};
    std::vector<BoundaryFacet> raw = boundary_facets(d_v, vset, V.space);

    std::vector<FacetAnalysis> out;
    std::vector<std::pair<AffineRow, bool>> seen;
    for (auto& f : raw) {
        auto key = std::make_pair(f.term, f.d_on_upper);
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
        seen.push_back(key);
        FacetAnalysis fa;
        fa.facet = std::move(f.cell);
        fa.hyperplane = Hyperplane::from_term(f.term, partition.x.size());
        fa.in_side = f.d_on_upper ? FacetAnalysis::Side::Upper : FacetAnalysis::Side::Lower;
        fa.split = split_modulo(fa.hyperplane, V, partition);
        out.push_back(std::move(fa));
    }
    std::sort(out.begin(), out.end(), [](const FacetAnalysis& a, const FacetAnalysis& b) {
        if (a.hyperplane != b.hyperplane) return a.hyperplane < b.hyperplane;
        return a.in_side < b.in_side;
    });
    return out;
}

namespace {

bool affine_row_less(const AffineRow& a, const AffineRow& b) {
    if (a.coef != b.coef) return a.coef < b.coef;
    return a.cst < b.cst;
}

} // namespace

// ---------------------------------------------------------------------------
// Grid decomposition

GridStats& grid_stats() {
    static GridStats stats;
    return stats;
}

void reset_grid_stats() { grid_stats() = GridStats{}; }

GridResult grid_decompose(const SemilinearSet& d_v, const IrreducibleClosed& V,
                          const std::vector<FacetAnalysis>& facets, const Partition& partition) {
    const std::size_t nx = partition.x.size(), ny = partition.y.size();
    std::vector<AffineRow> x_terms, y_terms;
    for (const auto& f : facets) {
        if (f.split.tag == SplitResult::Tag::NonSplit)
            throw std::logic_error("grid_decompose: NonSplit facet present");
        const Hyperplane& rw = f.split.rewritten;
        if (f.split.tag == SplitResult::Tag::PureX) {
            AffineRow t{rw.normal_x, -rw.offset};
            canonicalize_row(t, true);
            if (std::find(x_terms.begin(), x_terms.end(), t) == x_terms.end())
                x_terms.push_back(std::move(t));
        } else {
            AffineRow t{rw.normal_y, -rw.offset};
            canonicalize_row(t, true);
            if (std::find(y_terms.begin(), y_terms.end(), t) == y_terms.end())
                y_terms.push_back(std::move(t));
        }
    }
    std::sort(x_terms.begin(), x_terms.end(), affine_row_less);
    std::sort(y_terms.begin(), y_terms.end(), affine_row_less);

    std::vector<Cell> x_cells, y_cells;
    for (auto& sc : sign_cells(x_terms, Cell{}, false)) x_cells.push_back(std::move(sc.cell));
    for (auto& sc : sign_cells(y_terms, Cell{}, false)) y_cells.push_back(std::move(sc.cell));

    const VarList vars = partition.all();
    const int vdim = V.dim();
    GridResult out;
    out.remainder = empty_set(vars);
    std::vector<SemilinearSet> piece_sets;
    for (const auto& cx : x_cells) {
        for (const auto& cy : y_cells) {
            auto t = V.space.to_cell().with(embed_cell(cx, 0, vars.size()).all_atoms());
            assert(t);
            t = t->with(embed_cell(cy, nx, vars.size()).all_atoms());
            assert(t);
            if (is_empty(*t)) continue;
            SemilinearSet tset{vars, {*t}};
            SemilinearSet inter = combine(SetOp::Intersect, tset, d_v);
            if (dimension(inter) < vdim) continue;
            EquationalClosedSet w =
                equational_closure(combine(SetOp::Difference, tset, d_v), V.theory);
            SpecialStablePiece piece;
            piece.zset = make_closed_set({V});
            piece.wset = std::move(w);
            piece.xset = SemilinearSet{partition.x, {cx}};
            piece.yset = SemilinearSet{partition.y, {cy}};
            piece_sets.push_back(piece_set(piece, partition));
            out.pieces.push_back(std::move(piece));
        }
    }
    SemilinearSet covered = empty_set(vars);
    for (const auto& ps : piece_sets) covered = combine(SetOp::Union, covered, ps);
    out.remainder = combine(SetOp::Difference, d_v, covered);

    GridStats& stats = grid_stats();
    ++stats.invocations;
    if (dimension(out.remainder) >= vdim) {
        ++stats.violations;
        throw std::logic_error("grid_decompose: remainder did not drop dimension");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Ladder synthesis

namespace {

Rational inf_norm(const Vec& v) {
    Rational m = 0;
    for (const auto& c : v) {
        Rational a = c < 0 ? -c : c;
        if (a > m) m = a;
    }
    return m;
}

// Pullback of D under (s, t) -> (p_x + s u, p_y + t v), exact.
SemilinearSet pullback_plane(const SemilinearSet& d, const Vec& p, const Vec& u, const Vec& v,
                             std::size_t nx) {
    SemilinearSet out{{"s", "t"}, {}};
    for (const auto& c : d.cells) {
        std::vector<Atom> atoms;
        bool dead = false;
        for (const auto& a : c.all_atoms()) {
            Rational cs = 0, ct = 0;
            for (std::size_t j = 0; j < nx; ++j) cs += a.coef[j] * u[j];
            for (std::size_t j = nx; j < a.coef.size(); ++j) ct += a.coef[j] * v[j - nx];
            AtomOrConst r = make_atom({cs, ct}, a.value_at(p), a.rel);
            if (r.is_const) {
                if (!r.const_value) {
                    dead = true;
                    break;
                }
                continue;
            }
            atoms.push_back(std::move(r.atom));
        }
        if (dead) continue;
        auto cc = Cell::conjoin(std::move(atoms));
        if (cc && !is_empty(*cc)) out.cells.push_back(std::move(*cc));
    }
    std::sort(out.cells.begin(), out.cells.end());
    out.cells.erase(std::unique(out.cells.begin(), out.cells.end()), out.cells.end());
    return out;
}

SemilinearSet open_box2(const Rational& lo, const Rational& hi) {
    auto c = Cell::conjoin({Atom{{1, 0}, -lo, Rel::Gt}, Atom{{-1, 0}, hi, Rel::Gt},
                            Atom{{0, 1}, -lo, Rel::Gt}, Atom{{0, -1}, hi, Rel::Gt}});
    assert(c);
    return SemilinearSet{{"s", "t"}, {*c}};
}

} // namespace

LadderWitness make_ladder(const FacetAnalysis& facet, const IrreducibleClosed& V,
                          const SemilinearSet& d, const Partition& partition, std::size_t k) {
    if (facet.split.tag != SplitResult::Tag::NonSplit)
        throw std::logic_error("make_ladder: facet splits, no ladder there");
    if (k == 0) throw input_error("make_ladder: k must be positive");
    const std::size_t nx = partition.x.size(), ny = partition.y.size();
    const std::size_t n = nx + ny;

    // orient the hyperplane so its positive side lies in D
    AffineRow h = facet.hyperplane.term();
    if (facet.in_side == FacetAnalysis::Side::Lower) {
        for (auto& c : h.coef) c = -c;
        h.cst = -h.cst;
    }
    Vec hx(h.coef.begin(), h.coef.begin() + static_cast<std::ptrdiff_t>(nx));
    Vec hy(h.coef.begin() + static_cast<std::ptrdiff_t>(nx), h.coef.end());

    // normalize directions: k.u = 1, l.v = -1, so h(p + su, p + tv) = s - t
    Vec u = facet.split.dir_x, v = facet.split.dir_y;
    Rational ku = dot(hx, u), lv = dot(hy, v);
    assert(ku != 0 && lv != 0);
    for (auto& c : u) c /= ku;
    for (auto& c : v) c /= -lv;

    Vec p = sample_interior(facet.facet, n);

    // smoothness radius: the closed inf-ball about p within which every
    // other constraint hyperplane keeps its sign
    Rational rho = 1;
    bool first = true;
    for (const auto& a : facet.facet.stricts) {
        Rational val = a.value_at(p);
        assert(val > 0);
        Rational weight = 1;
        for (const auto& c : a.coef) weight += (c < 0 ? -c : c);
        Rational margin = val / weight;
        if (first || margin < rho) rho = margin;
        first = false;
    }
    Rational norm = inf_norm(u);
    if (inf_norm(v) > norm) norm = inf_norm(v);
    assert(norm > 0);
    Rational bound = rho / (2 * norm);

    // exact local picture of D on the sample plane
    SemilinearSet dhat = pullback_plane(d, p, u, v, nx);
    SemilinearSet box = open_box2(0, bound);
    SemilinearSet above{{"s", "t"}, {*Cell::conjoin({Atom{{1, -1}, 0, Rel::Gt}})}};
    SemilinearSet below{{"s", "t"}, {*Cell::conjoin({Atom{{-1, 1}, 0, Rel::Gt}})}};
    if (!is_empty_set(combine(SetOp::Difference, combine(SetOp::Intersect, box, above), dhat)))
        throw std::logic_error("make_ladder: in-side of the facet is not D-covered");
    SemilinearSet bad = combine(SetOp::Intersect, combine(SetOp::Intersect, box, below), dhat);

    // shrink to a subinterval whose below-diagonal square avoids D: the
    // leftover pieces near the facet pull back to rectangles living weakly
    // above the diagonal, so some interval below their cut points is clean,
    // and halving toward zero reaches it
    Rational alpha = 0, beta = bound;
    bool clean = false;
    for (int depth = 0; depth < 64 && !clean; ++depth) {
        if (is_empty_set(combine(SetOp::Intersect, bad, open_box2(alpha, beta)))) {
            clean = true;
            break;
        }
        Rational mid = (alpha + beta) / 2;
        if (is_empty_set(combine(SetOp::Intersect, bad, open_box2(mid, beta)))) {
            alpha = mid;
            clean = true;
            break;
        }
        beta = mid;
    }
    if (!clean && !is_empty_set(combine(SetOp::Intersect, bad, open_box2(alpha, beta))))
        throw std::logic_error("make_ladder: no clean subinterval found");

    LadderWitness w;
    w.k = k;
    Rational delta = (beta - alpha) / Rational(2 * k + 1);
    for (std::size_t i = 1; i <= k; ++i) {
        Rational s = beta - Rational(2 * i - 1) * delta;
        Rational t = beta - Rational(2 * i) * delta;
        Vec a = Vec(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(nx));
        for (std::size_t j = 0; j < nx; ++j) a[j] += s * u[j];
        Vec b = Vec(p.begin() + static_cast<std::ptrdiff_t>(nx), p.end());
        for (std::size_t j = 0; j < ny; ++j) b[j] += t * v[j];
        w.a.push_back(std::move(a));
        w.b.push_back(std::move(b));
    }
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            Vec point = w.a[i];
            point.insert(point.end(), w.b[j].begin(), w.b[j].end());
            if (d.contains(point) != (i <= j))
                throw std::logic_error("make_ladder: constructed ladder failed verification");
        }
    }
    return w;
}

// ---------------------------------------------------------------------------
// The classification recursion

namespace {

StabilityVerdict analyze_set(const SemilinearSet& d, Theory theory, const Partition& partition,
                             int depth);

StabilityVerdict stable_verdict(std::vector<SpecialStablePiece> pieces) {
    StabilityVerdict v;
    v.tag = StabilityVerdict::Tag::Stable;
    v.pieces = std::move(pieces);
    return v;
}

StabilityVerdict analyze_component(const SemilinearSet& d_v, const IrreducibleClosed& V,
                                   Theory theory, const Partition& partition, int depth) {
    std::vector<FacetAnalysis> facets = essential_boundary(d_v, V, partition);
    for (const auto& f : facets) {
        if (f.split.tag == SplitResult::Tag::NonSplit) {
            StabilityVerdict v;
            v.tag = StabilityVerdict::Tag::Unstable;
            v.culprit = f;
            v.component = V;
            return v;
        }
    }
    GridResult grid = grid_decompose(d_v, V, facets, partition);
    StabilityVerdict rest = analyze_set(grid.remainder, theory, partition, depth - 1);
    if (!rest.stable()) return rest;
    std::vector<SpecialStablePiece> pieces = std::move(grid.pieces);
    pieces.insert(pieces.end(), rest.pieces.begin(), rest.pieces.end());
    return stable_verdict(std::move(pieces));
}

StabilityVerdict analyze_set(const SemilinearSet& d, Theory theory, const Partition& partition,
                             int depth) {
    if (depth < 0) throw std::logic_error("analyze: recursion depth exceeded");
    const int dim_d = dimension(d);
    if (dim_d <= 0) {
        // a set of isolated points; each is equational on its own
        std::vector<SpecialStablePiece> pieces;
        std::vector<AffineSubspace> seen;
        for (const auto& c : d.cells) {
            if (is_empty(c)) continue;
            AffineSubspace h = affine_hull(c, d.vars.size());
            assert(h.dim() == 0);
            if (std::find(seen.begin(), seen.end(), h) != seen.end()) continue;
            seen.push_back(h);
            SpecialStablePiece piece;
            piece.zset = make_closed_set({IrreducibleClosed{h, theory}});
            piece.xset = full_set(partition.x);
            piece.yset = full_set(partition.y);
            pieces.push_back(std::move(piece));
        }
        return stable_verdict(std::move(pieces));
    }
    EquationalClosedSet z = equational_closure(d, theory);
    std::vector<SpecialStablePiece> pieces;
    for (const auto& V : irreducible_components(z)) {
        SemilinearSet d_v = combine(SetOp::Intersect, d, EquationalClosedSet{{V}}.to_set(d.vars));
        if (d_v.cells.empty()) continue;
        EquationalClosedSet re = equational_closure(d_v, theory);
        StabilityVerdict sub = (re.components.size() == 1 && re.components[0] == V)
                                   ? analyze_component(d_v, V, theory, partition, depth)
                                   : analyze_set(d_v, theory, partition, depth - 1);
        if (!sub.stable()) return sub;
        pieces.insert(pieces.end(), sub.pieces.begin(), sub.pieces.end());
    }
    return stable_verdict(std::move(pieces));
}

} // namespace

StabilityVerdict analyze(const Problem& problem) {
    SemilinearSet d = eliminate_quantifiers(problem);
    const int max_depth = static_cast<int>(problem.arity()) + 3;
    StabilityVerdict v = analyze_set(d, problem.theory, problem.partition, max_depth);
    v.set = std::move(d);
    v.partition = problem.partition;
    v.theory = problem.theory;
    return v;
}

} // namespace stab
