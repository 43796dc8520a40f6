#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stab/formula.hpp"

#include <random>

using namespace stab;

namespace {

Problem parse_doag(const std::string& body, const std::string& xs = "x1", const std::string& ys = "y1") {
    return parse("theory doag\nvars x: " + xs + " ; y: " + ys + "\nformula " + body);
}

} // namespace

TEST_CASE("parse basic doag problem") {
    Problem p = parse("theory doag\nvars x: x1 ; y: y1\nformula (< y1 x1)");
    CHECK(p.theory == Theory::Doag);
    CHECK(p.partition.x == VarList{"x1"});
    CHECK(p.partition.y == VarList{"y1"});
    REQUIRE(p.formula->kind == Formula::Kind::Leaf);
    // y1 < x1 canonicalizes to x1 - y1 > 0
    CHECK(p.formula->atom.rel == Rel::Gt);
    CHECK(p.formula->atom.coef == Vec{1, -1});
    CHECK(p.formula->atom.cst == 0);
}

TEST_CASE("parse rejects scalar multiplication under dlo") {
    CHECK_THROWS_AS(parse("theory dlo\nvars x: x1 ; y: y1\nformula (< (* 2 x1) y1)"), input_error);
}

TEST_CASE("parse canonicalizes equations and inequalities") {
    Problem p = parse("theory doag\nvars x: x1 x2 ; y: y1\n"
                      "formula (and (= x2 (+ x1 y1)) (< y1 x1))");
    REQUIRE(p.formula->kind == Formula::Kind::And);
    const Atom& eq = p.formula->kids[0]->atom;
    CHECK(eq.rel == Rel::Eq);
    CHECK(eq.coef == Vec{1, -1, 1}); // x1 - x2 + y1 = 0, leading coefficient positive
    const Atom& lt = p.formula->kids[1]->atom;
    CHECK(lt.rel == Rel::Gt);
    CHECK(lt.coef == Vec{1, 0, -1}); // x1 - y1 > 0
}

TEST_CASE("parse error carries position") {
    try {
        parse("theory doag\nvars x: x1 ; y: y1\nformula (< y1 x1");
        CHECK(false);
    } catch (const parse_error& e) {
        CHECK(e.line >= 3);
    }
}

TEST_CASE("parse rejects undeclared variable") {
    CHECK_THROWS_AS(parse_doag("(< z1 x1)"), input_error);
}

TEST_CASE("parse rejects empty partition side") {
    CHECK_THROWS_AS(parse("theory dlo\nvars x: ; y: y1\nformula (< y1 y1)"), input_error);
}

TEST_CASE("parse rejects bound variable clashing with free") {
    CHECK_THROWS_AS(parse_doag("(exists (x1) (< x1 y1))"), input_error);
}

TEST_CASE("bound variable out of scope is undeclared") {
    CHECK_THROWS_AS(parse_doag("(and (exists (u) (< u x1)) (< u y1))"), input_error);
}

TEST_CASE("evaluate atoms and boolean structure") {
    Problem p = parse_doag("(< y1 x1)");
    CHECK(evaluate(p.formula, p.vars, {{"x1", -1}, {"y1", make_rational(-3, 2)}}));

    Problem q = parse("theory doag\nvars x: x1 x2 ; y: y1\nformula (= x2 (+ x1 y1))");
    CHECK(evaluate(q.formula, q.vars, {{"x1", 1}, {"x2", 2}, {"y1", 1}}));

    Problem r = parse_doag("(and (< x1 y1) (< y1 x1))");
    CHECK_FALSE(evaluate(r.formula, r.vars, {{"x1", 0}, {"y1", 5}}));
    CHECK_FALSE(evaluate(r.formula, r.vars, {{"x1", 5}, {"y1", 0}}));
}

TEST_CASE("evaluate requires every free variable") {
    Problem p = parse_doag("(< y1 x1)");
    CHECK_THROWS_AS(evaluate(p.formula, p.vars, {{"x1", 0}}), input_error);
}

TEST_CASE("quantified oracle on one-variable blocks") {
    Problem p = parse("theory dlo\nvars x: x1 x2 ; y: y1\nformula (exists (u) (and (< x1 u) (< u x2)))");
    CHECK(eval_quantified_oracle(p.formula, p.vars, {{"x1", 0}, {"x2", 1}}));
    CHECK_FALSE(eval_quantified_oracle(p.formula, p.vars, {{"x1", 1}, {"x2", 0}}));

    Problem q = parse("theory doag\nvars x: x1 ; y: y1\nformula (exists (u) (= u (+ x1 y1)))");
    CHECK(eval_quantified_oracle(q.formula, q.vars, {{"x1", 0}, {"y1", 5}}));

    Problem r = parse("theory dlo\nvars x: x1 ; y: y1\nformula (forall (u) (or (< u x1) (< y1 u)))");
    CHECK(eval_quantified_oracle(r.formula, r.vars, {{"x1", 1}, {"y1", 0}}));
    CHECK_FALSE(eval_quantified_oracle(r.formula, r.vars, {{"x1", 0}, {"y1", 1}}));
}

TEST_CASE("quantified oracle rejects two bound variables") {
    Problem p = parse_doag("(exists (u v) (< u v))");
    CHECK_THROWS_AS(eval_quantified_oracle(p.formula, p.vars, {{"x1", 0}, {"y1", 0}}), input_error);
}

TEST_CASE("parse then print then parse is identity") {
    const char* texts[] = {
        "theory doag\nvars x: x1 ; y: y1\nformula (< y1 x1)",
        "theory doag\nvars x: x1 x2 ; y: y1\nformula (and (= (+ x1 y1) x2) (< y1 x1))",
        "theory dlo\nvars x: x1 ; y: y1\nformula (or (= x1 y1) (and (< x1 0) (< 0 y1)))",
        "theory doag\nvars x: x1 ; y: y1 y2\nformula (exists (u) (and (< (* 2 u) x1) (< y1 u)))",
        "theory doag\nvars x: x1 ; y: y1\nformula (not (<= x1 (+ (* 1/2 y1) 3)))",
        "theory dlo\nvars x: x1 ; y: y1\nformula true",
    };
    for (const char* t : texts) {
        Problem p1 = parse(t);
        std::string s1 = print(p1);
        Problem p2 = parse(s1);
        std::string s2 = print(p2);
        CHECK(s1 == s2);
    }
}

TEST_CASE("evaluate respects boolean structure on random points") {
    Problem p = parse("theory doag\nvars x: x1 x2 ; y: y1\n"
                      "formula (or (and (< y1 x1) (<= x2 3)) (= x2 (+ x1 y1)))");
    Problem np = parse("theory doag\nvars x: x1 x2 ; y: y1\n"
                       "formula (not (or (and (< y1 x1) (<= x2 3)) (= x2 (+ x1 y1))))");
    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> nd(-8, 8), dd(1, 4);
    for (int i = 0; i < 200; ++i) {
        Assignment a;
        for (const auto& v : p.partition.all()) a[v] = make_rational(nd(rng), dd(rng));
        CHECK(evaluate(np.formula, np.vars, a) == !evaluate(p.formula, p.vars, a));
    }
}
