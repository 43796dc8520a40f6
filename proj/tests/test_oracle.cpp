#include <doctest.h>

#include "stab/oracle.hpp"

using namespace stab;

namespace {

Atom atom(Vec coef, Rational cst, Rel rel) {
    AtomOrConst a = make_atom(std::move(coef), std::move(cst), rel);
    REQUIRE(!a.is_const);
    return a.atom;
}

Cell cell(std::vector<Atom> atoms) {
    auto c = Cell::conjoin(std::move(atoms));
    REQUIRE(c);
    return *c;
}

const Partition part11{{"x1"}, {"y1"}};

SemilinearSet set2(std::vector<Cell> cells) { return {VarList{"x1", "y1"}, std::move(cells)}; }

} // namespace

TEST_CASE("ladder search finds the ordering witness") {
    SemilinearSet lower = set2({cell({atom({1, -1}, 0, Rel::Gt)})});
    LadderSearch r = ladder_exists(lower, part11, 3);
    REQUIRE(r.status == LadderStatus::Found);
    CHECK(verify_ladder(lower, *r.witness, part11));
}

TEST_CASE("ladder search proves the diagonal has no 2-ladder") {
    SemilinearSet diag = set2({cell({atom({1, -1}, 0, Rel::Eq)})});
    CHECK(ladder_exists(diag, part11, 2).status == LadderStatus::None);
    // k = 1 reduces to non-emptiness
    LadderSearch one = ladder_exists(diag, part11, 1);
    REQUIRE(one.status == LadderStatus::Found);
    CHECK(verify_ladder(diag, *one.witness, part11));
    CHECK(ladder_exists(set2({}), part11, 1).status == LadderStatus::None);
}

TEST_CASE("budget exhaustion reports Budget, not None") {
    SemilinearSet lower = set2({cell({atom({1, -1}, 0, Rel::Gt)})});
    CHECK(ladder_exists(lower, part11, 3, 2).status == LadderStatus::Budget);
}

TEST_CASE("the frozen ordering witness verifies") {
    SemilinearSet lower = set2({cell({atom({1, -1}, 0, Rel::Gt)})});
    LadderWitness w;
    w.k = 3;
    w.a = {{-1}, {-2}, {-3}};
    w.b = {{make_rational(-3, 2)}, {make_rational(-5, 2)}, {make_rational(-7, 2)}};
    CHECK(verify_ladder(lower, w, part11));
    // roles swapped: the (1,1) pair already fails
    LadderWitness sw;
    sw.k = 3;
    sw.a = w.b;
    sw.b = w.a;
    CHECK_FALSE(verify_ladder(lower, sw, part11));
}

TEST_CASE("verify_ladder rejects arity mismatches") {
    SemilinearSet lower = set2({cell({atom({1, -1}, 0, Rel::Gt)})});
    LadderWitness w;
    w.k = 1;
    w.a = {{0, 0}};
    w.b = {{0}};
    CHECK_THROWS_AS(verify_ladder(lower, w, part11), input_error);
}

TEST_CASE("ladder monotonicity: restrictions of witnesses verify") {
    SemilinearSet band = set2({cell({atom({1, 1}, 0, Rel::Gt)})});
    LadderSearch r = ladder_exists(band, part11, 3);
    REQUIRE(r.status == LadderStatus::Found);
    for (std::size_t kk = 1; kk < 3; ++kk) {
        LadderWitness restr;
        restr.k = kk;
        restr.a.assign(r.witness->a.begin(), r.witness->a.begin() + static_cast<std::ptrdiff_t>(kk));
        restr.b.assign(r.witness->b.begin(), r.witness->b.begin() + static_cast<std::ptrdiff_t>(kk));
        CHECK(verify_ladder(band, restr, part11));
    }
}

TEST_CASE("verify_decomposition accepts the diagonal piece") {
    SemilinearSet diag = set2({cell({atom({1, -1}, 0, Rel::Eq)})});
    auto space = AffineSubspace::from_rows({{{1, -1}, 0}}, 2);
    REQUIRE(space);
    SpecialStablePiece p;
    p.zset = make_closed_set({IrreducibleClosed{*space, Theory::Doag}});
    p.xset = full_set(part11.x);
    p.yset = full_set(part11.y);
    CHECK(verify_decomposition(diag, {p}, part11).pass());
}

TEST_CASE("verify_decomposition rejects the full-plane piece for a half-plane") {
    SemilinearSet lower = set2({cell({atom({1, -1}, 0, Rel::Gt)})});
    SpecialStablePiece p;
    p.zset = make_closed_set({IrreducibleClosed{AffineSubspace::full(2), Theory::Doag}});
    p.xset = full_set(part11.x);
    p.yset = full_set(part11.y);
    DecompositionReport rep = verify_decomposition(lower, {p}, part11);
    CHECK_FALSE(rep.union_matches);
    CHECK_FALSE(rep.pieces_subset);
    CHECK(rep.pieces_special);
}

TEST_CASE("verify_decomposition accepts the rewritten affine piece") {
    Partition part{{"x1", "x2"}, {"y1"}};
    SemilinearSet d{{"x1", "x2", "y1"},
                    {cell({atom({-1, 1, -1}, 0, Rel::Eq), atom({1, 0, -1}, 0, Rel::Gt)})}};
    auto space = AffineSubspace::from_rows({{{-1, 1, -1}, 0}}, 3);
    REQUIRE(space);
    SpecialStablePiece p;
    p.zset = make_closed_set({IrreducibleClosed{*space, Theory::Doag}});
    p.xset = SemilinearSet{part.x, {cell({atom({2, -1}, 0, Rel::Gt)})}};
    p.yset = full_set(part.y);
    CHECK(verify_decomposition(d, {p}, part).pass());
}

TEST_CASE("mutated decompositions fail verification") {
    Partition part{{"x1"}, {"y1"}};
    SemilinearSet d = set2({cell({atom({1, 0}, 0, Rel::Gt), atom({0, 1}, 0, Rel::Gt)}),
                            cell({atom({1, -1}, 0, Rel::Eq)})});
    auto diag_space = AffineSubspace::from_rows({{{1, -1}, 0}}, 2);
    REQUIRE(diag_space);
    SpecialStablePiece quadrant;
    quadrant.zset = make_closed_set({IrreducibleClosed{AffineSubspace::full(2), Theory::Doag}});
    quadrant.xset = SemilinearSet{part.x, {cell({atom({1}, 0, Rel::Gt)})}};
    quadrant.yset = SemilinearSet{part.y, {cell({atom({1}, 0, Rel::Gt)})}};
    SpecialStablePiece diag;
    diag.zset = make_closed_set({IrreducibleClosed{*diag_space, Theory::Doag}});
    diag.xset = full_set(part.x);
    diag.yset = full_set(part.y);
    CHECK(verify_decomposition(d, {quadrant, diag}, part).pass());
    // dropping a piece breaks the union
    CHECK_FALSE(verify_decomposition(d, {quadrant}, part).union_matches);
    // widening X breaks containment
    SpecialStablePiece wide = quadrant;
    wide.xset = full_set(part.x);
    DecompositionReport rep = verify_decomposition(d, {wide, diag}, part);
    CHECK_FALSE(rep.pieces_subset);
}

TEST_CASE("complement of a special stable piece recomposes as special stables") {
    // (Z n (X x Y))^c = (full \ Z) n (X x Y) u X^c x Y^c u X^c x Y u X x Y^c
    Partition part{{"x1"}, {"y1"}};
    auto zspace = AffineSubspace::from_rows({{{1, -1}, 0}}, 2);
    REQUIRE(zspace);
    SpecialStablePiece piece;
    piece.zset = make_closed_set({IrreducibleClosed{*zspace, Theory::Doag}});
    piece.xset = SemilinearSet{part.x, {cell({atom({1}, 0, Rel::Gt)})}};
    piece.yset = SemilinearSet{part.y, {cell({atom({1}, -1, Rel::Gt)})}};

    SemilinearSet xc = complement(piece.xset), yc = complement(piece.yset);
    EquationalClosedSet fullz =
        make_closed_set({IrreducibleClosed{AffineSubspace::full(2), Theory::Doag}});
    SpecialStablePiece p1{fullz, piece.zset, piece.xset, piece.yset};
    SpecialStablePiece p2{fullz, {}, xc, yc};
    SpecialStablePiece p3{fullz, {}, xc, piece.yset};
    SpecialStablePiece p4{fullz, {}, piece.xset, yc};
    SemilinearSet recomposed = empty_set(part.all());
    for (const auto& p : {p1, p2, p3, p4})
        recomposed = combine(SetOp::Union, recomposed, piece_set(p, part));
    CHECK(equivalent(recomposed, complement(piece_set(piece, part))));
}
