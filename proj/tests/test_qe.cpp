#include <doctest.h>

#include "stab/polyhedra.hpp"
#include "stab/qe.hpp"

#include <random>

using namespace stab;

namespace {

Problem parse1(const std::string& text) { return parse(text); }

SemilinearSet cells_of(const std::string& text) {
    Problem p = parse1(text);
    return eliminate_quantifiers(p);
}

} // namespace

TEST_CASE("density: exists between strict bounds") {
    SemilinearSet s = cells_of("theory dlo\nvars x: x1 x2 ; y: y1\n"
                               "formula (exists (u) (and (< x1 u) (< u x2)))");
    SemilinearSet expect = to_cells(parse1("theory dlo\nvars x: x1 x2 ; y: y1\nformula (< x1 x2)").formula,
                                    VarList{"x1", "x2", "y1"});
    CHECK(equivalent(s, expect));
}

TEST_CASE("divisibility: scaled bound variable") {
    SemilinearSet s = cells_of("theory doag\nvars x: x1 x2 ; y: y1\n"
                               "formula (exists (u) (and (< x1 (* 2 u)) (< (* 2 u) x2)))");
    SemilinearSet expect = to_cells(parse1("theory doag\nvars x: x1 x2 ; y: y1\nformula (< x1 x2)").formula,
                                    VarList{"x1", "x2", "y1"});
    CHECK(equivalent(s, expect));
}

TEST_CASE("equation substitution during elimination") {
    SemilinearSet s = cells_of("theory doag\nvars x: x1 ; y: y1\n"
                               "formula (exists (u) (and (= u (+ x1 y1)) (< y1 x1)))");
    SemilinearSet expect = to_cells(parse1("theory doag\nvars x: x1 ; y: y1\nformula (< y1 x1)").formula,
                                    VarList{"x1", "y1"});
    CHECK(equivalent(s, expect));
}

TEST_CASE("to_cells splits negated equations by trichotomy") {
    Problem p = parse1("theory doag\nvars x: x1 ; y: y1\nformula (not (= x1 y1))");
    SemilinearSet s = to_cells(p.formula, p.vars);
    CHECK(s.cells.size() == 2);
    for (const auto& c : s.cells) {
        CHECK(c.eqs.empty());
        CHECK(c.stricts.size() == 1);
    }
}

TEST_CASE("to_cells removes inconsistent cells") {
    Problem p = parse1("theory doag\nvars x: x1 ; y: y1\nformula (and (= x1 y1) (not (= x1 y1)))");
    SemilinearSet s = to_cells(p.formula, p.vars);
    CHECK(s.cells.empty());
}

TEST_CASE("to_cells keeps both disjuncts") {
    Problem p = parse1("theory doag\nvars x: x1 ; y: y1\n"
                       "formula (or (and (< 0 x1) (< 0 y1)) (= x1 y1))");
    SemilinearSet s = to_cells(p.formula, p.vars);
    CHECK(s.cells.size() == 2);
}

TEST_CASE("to_cells is idempotent up to equivalence") {
    Problem p = parse1("theory doag\nvars x: x1 x2 ; y: y1\n"
                       "formula (or (and (< y1 x1) (<= x2 y1)) (not (= x2 x1)))");
    SemilinearSet s1 = to_cells(p.formula, p.vars);
    SemilinearSet s2 = to_cells(s1.to_formula(), p.vars);
    CHECK(equivalent(s1, s2));
}

TEST_CASE("universal quantifier via negation") {
    SemilinearSet s = cells_of("theory dlo\nvars x: x1 ; y: y1\n"
                               "formula (forall (u) (or (< u x1) (< y1 u)))");
    SemilinearSet expect = to_cells(parse1("theory dlo\nvars x: x1 ; y: y1\nformula (< y1 x1)").formula,
                                    VarList{"x1", "y1"});
    // every u lies below x1 or above y1 iff there is no u in [x1, y1]
    CHECK(equivalent(s, expect));
}

TEST_CASE("weak pinch forces emptiness with a strict atom") {
    Problem p = parse1("theory doag\nvars x: x1 ; y: y1\n"
                       "formula (and (<= 0 x1) (<= x1 0) (< 0 x1))");
    SemilinearSet s = to_cells(p.formula, p.vars);
    CHECK(s.cells.empty());
}

namespace {

// random quantifier-free formulas and single-quantifier wrappers
FormulaPtr random_qf(std::mt19937& rng, std::size_t nvars, int depth) {
    std::uniform_int_distribution<int> kind(0, depth > 0 ? 3 : 0);
    std::uniform_int_distribution<int> coefd(-3, 3);
    std::uniform_int_distribution<int> reld(0, 2);
    std::uniform_int_distribution<std::size_t> nkids(2, 3);
    switch (kind(rng)) {
    case 1: {
        std::vector<FormulaPtr> kids;
        for (std::size_t i = nkids(rng); i-- > 0;) kids.push_back(random_qf(rng, nvars, depth - 1));
        return mk_and(std::move(kids));
    }
    case 2: {
        std::vector<FormulaPtr> kids;
        for (std::size_t i = nkids(rng); i-- > 0;) kids.push_back(random_qf(rng, nvars, depth - 1));
        return mk_or(std::move(kids));
    }
    case 3: return mk_not(random_qf(rng, nvars, depth - 1));
    default: {
        Vec coef(nvars);
        bool any = false;
        for (auto& c : coef) {
            c = coefd(rng);
            if (c != 0) any = true;
        }
        if (!any) coef[0] = 1;
        Rel rel = reld(rng) == 0 ? Rel::Eq : (reld(rng) == 1 ? Rel::Gt : Rel::Ge);
        AtomOrConst a = make_atom(std::move(coef), Rational(coefd(rng)), rel);
        if (a.is_const) return a.const_value ? mk_true() : mk_false();
        return mk_leaf(a.atom);
    }
    }
}

} // namespace

TEST_CASE("eliminator agrees with the substitution oracle") {
    std::mt19937 rng(77);
    std::uniform_int_distribution<int> nd(-6, 6), dd(1, 3);
    VarList vars{"x1", "x2", "y1", "u"};
    Partition part{{"x1", "x2"}, {"y1"}};
    for (int iter = 0; iter < 50; ++iter) {
        FormulaPtr body = random_qf(rng, 4, 2);
        FormulaPtr q = mk_quant(iter % 2 == 0, {3}, body);
        if (q->kind != Formula::Kind::Exists && q->kind != Formula::Kind::Forall) continue;
        Problem prob{Theory::Doag, part, q, vars};
        SemilinearSet s = eliminate_quantifiers(prob);
        for (int pt = 0; pt < 25; ++pt) {
            Assignment a;
            Vec point;
            for (const auto& v : part.all()) {
                Rational r = make_rational(nd(rng), dd(rng));
                a[v] = r;
                point.push_back(r);
            }
            CHECK(s.contains(point) == eval_quantified_oracle(q, vars, a));
        }
    }
}

TEST_CASE("elimination order does not matter") {
    std::mt19937 rng(78);
    VarList vars{"x1", "y1", "u", "v"};
    for (int iter = 0; iter < 25; ++iter) {
        FormulaPtr body = random_qf(rng, 4, 2);
        std::vector<Cell> cells = to_cells(body, vars).cells;
        std::vector<Cell> uv = eliminate_block(cells, {2, 3});
        std::vector<Cell> vu = eliminate_block(cells, {3, 2});
        SemilinearSet a{vars, uv}, b{vars, vu};
        CHECK(equivalent(a, b));
    }
}
