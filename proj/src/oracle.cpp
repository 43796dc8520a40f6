#include "stab/oracle.hpp"

#include <algorithm>
#include <cassert>

namespace stab {

namespace {

// pair schedule: levels by max(i, j), so new points enter one at a time
std::vector<std::pair<std::size_t, std::size_t>> pair_schedule(std::size_t k) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t level = 1; level <= k; ++level) {
        for (std::size_t j = 1; j <= level; ++j) pairs.push_back({level, j});
        for (std::size_t i = 1; i < level; ++i) pairs.push_back({i, level});
    }
    return pairs;
}

// atoms of a cell over (x; y), instanced on copy (a_i, b_j) of the big
// ambient: a-blocks first, then b-blocks
std::vector<Atom> instance_atoms(const Cell& cell, std::size_t nx, std::size_t ny, std::size_t k,
                                 std::size_t i, std::size_t j) {
    const std::size_t big = k * (nx + ny);
    const std::size_t a_off = (i - 1) * nx;
    const std::size_t b_off = k * nx + (j - 1) * ny;
    std::vector<Atom> out;
    for (const auto& a : cell.all_atoms()) {
        Vec coef(big, Rational(0));
        for (std::size_t t = 0; t < nx; ++t) coef[a_off + t] = a.coef[t];
        for (std::size_t t = 0; t < ny; ++t) coef[b_off + t] = a.coef[nx + t];
        out.push_back(Atom{std::move(coef), a.cst, a.rel});
    }
    return out;
}

struct Searcher {
    const std::vector<Cell>& in_cells;
    const std::vector<Cell>& out_cells;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::size_t nx, ny, k;
    long budget;
    long nodes = 0;
    bool blown = false;

    std::optional<Cell> found;

    bool dfs(const Cell& acc, std::size_t idx) {
        if (idx == pairs.size()) {
            found = acc;
            return true;
        }
        auto [i, j] = pairs[idx];
        const std::vector<Cell>& menu = (i <= j) ? in_cells : out_cells;
        for (const auto& choice : menu) {
            if (++nodes > budget) {
                blown = true;
                return false;
            }
            auto next = acc.with(instance_atoms(choice, nx, ny, k, i, j));
            if (!next || is_empty(*next)) continue;
            if (dfs(*next, idx + 1)) return true;
            if (blown) return false;
        }
        return false;
    }
};

} // namespace

LadderSearch ladder_exists(const SemilinearSet& d, const Partition& partition, std::size_t k,
                           long budget) {
    if (k == 0) throw input_error("ladder_exists: k must be positive");
    const std::size_t nx = partition.x.size(), ny = partition.y.size();
    std::vector<Cell> comp = complement_cells(d.cells, nx + ny);
    Searcher s{d.cells, comp, pair_schedule(k), nx, ny, k, budget};
    LadderSearch out;
    bool ok = s.dfs(Cell{}, 0);
    out.nodes = s.nodes;
    if (s.blown) {
        out.status = LadderStatus::Budget;
        return out;
    }
    if (!ok) {
        out.status = LadderStatus::None;
        return out;
    }
    const std::size_t big = k * (nx + ny);
    Vec p = sample_interior(*s.found, big);
    LadderWitness w;
    w.k = k;
    for (std::size_t i = 0; i < k; ++i)
        w.a.emplace_back(p.begin() + static_cast<std::ptrdiff_t>(i * nx),
                         p.begin() + static_cast<std::ptrdiff_t>((i + 1) * nx));
    for (std::size_t j = 0; j < k; ++j)
        w.b.emplace_back(p.begin() + static_cast<std::ptrdiff_t>(k * nx + j * ny),
                         p.begin() + static_cast<std::ptrdiff_t>(k * nx + (j + 1) * ny));
    out.status = LadderStatus::Found;
    out.witness = std::move(w);
    return out;
}

bool verify_ladder(const SemilinearSet& d, const LadderWitness& w, const Partition& partition) {
    if (w.a.size() != w.k || w.b.size() != w.k)
        throw input_error("verify_ladder: witness length mismatch");
    for (const auto& t : w.a)
        if (t.size() != partition.x.size()) throw input_error("verify_ladder: arity mismatch");
    for (const auto& t : w.b)
        if (t.size() != partition.y.size()) throw input_error("verify_ladder: arity mismatch");
    for (std::size_t i = 0; i < w.k; ++i) {
        for (std::size_t j = 0; j < w.k; ++j) {
            Vec point = w.a[i];
            point.insert(point.end(), w.b[j].begin(), w.b[j].end());
            if (d.contains(point) != (i <= j)) return false;
        }
    }
    return true;
}

DecompositionReport verify_decomposition(const SemilinearSet& d,
                                         const std::vector<SpecialStablePiece>& pieces,
                                         const Partition& partition) {
    DecompositionReport rep;
    const VarList vars = partition.all();

    rep.pieces_special = true;
    for (const auto& p : pieces) {
        if (p.xset.vars != partition.x || p.yset.vars != partition.y) rep.pieces_special = false;
        for (const auto& c : p.zset.components)
            if (c.space.nvars != vars.size()) rep.pieces_special = false;
        for (const auto& c : p.wset.components)
            if (c.space.nvars != vars.size()) rep.pieces_special = false;
    }

    SemilinearSet covered = empty_set(vars);
    rep.pieces_subset = true;
    for (const auto& p : pieces) {
        SemilinearSet ps = piece_set(p, partition);
        if (!is_empty_set(combine(SetOp::Difference, ps, d))) rep.pieces_subset = false;
        covered = combine(SetOp::Union, covered, ps);
    }
    rep.union_matches = equivalent(covered, d);
    return rep;
}

} // namespace stab
