#pragma once

#include "stab/stability.hpp"

#include <optional>

namespace stab {

// Brute-force ladder search: decides satisfiability of the length-k
// half-graph pattern by depth-first choice of a defining cell per pair,
// with incremental feasibility pruning. Complete for fixed k; a blown
// budget is reported as Budget, distinct from None.
enum class LadderStatus { Found, None, Budget };

struct LadderSearch {
    LadderStatus status = LadderStatus::None;
    std::optional<LadderWitness> witness;
    long nodes = 0;
};

LadderSearch ladder_exists(const SemilinearSet& d, const Partition& partition, std::size_t k,
                           long budget = 2'000'000);

// Checks membership of all k*k pairs against the i <= j convention.
bool verify_ladder(const SemilinearSet& d, const LadderWitness& w, const Partition& partition);

struct DecompositionReport {
    bool union_matches = false;  // union of pieces equivalent to D
    bool pieces_special = false; // variable scopes and equational-only shape
    bool pieces_subset = false;  // every piece contained in D

    bool pass() const { return union_matches && pieces_special && pieces_subset; }
};

DecompositionReport verify_decomposition(const SemilinearSet& d,
                                         const std::vector<SpecialStablePiece>& pieces,
                                         const Partition& partition);

} // namespace stab
