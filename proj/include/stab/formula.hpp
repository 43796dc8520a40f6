#pragma once

#include "stab/linalg.hpp"
#include "stab/rational.hpp"

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace stab {

enum class Theory { Dlo, Doag };

using VarList = std::vector<std::string>;
using Assignment = std::map<std::string, Rational>;

// Raised on malformed input text.
struct parse_error : std::runtime_error {
    int line, col;
    parse_error(int line_, int col_, const std::string& what_)
        : std::runtime_error("parse error at " + std::to_string(line_) + ":" +
                             std::to_string(col_) + ": " + what_),
          line(line_), col(col_) {}
};

// Raised on structurally valid but semantically rejected input
// (undeclared variable, theory/atom mismatch, empty partition side, ...).
struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Rel { Eq, Gt, Ge }; // term = 0, term > 0, term >= 0

// A canonical linear atom over a fixed ambient variable list. Variable
// coefficients are integral with gcd 1; the constant stays rational so
// DLO pins like x = 5/2 keep unit variable coefficients. Equations carry a
// positive leading coefficient. Atoms that collapse to a constant are
// represented by the formula constants True/False instead.
struct Atom {
    Vec coef;
    Rational cst;
    Rel rel = Rel::Eq;

    AffineRow row() const { return {coef, cst}; }
    Rational value_at(const Vec& point) const { return dot(coef, point) + cst; }
    bool holds_at(const Vec& point) const;

    bool operator==(const Atom&) const = default;
    friend bool operator<(const Atom& a, const Atom& b) {
        if (a.rel != b.rel) return a.rel < b.rel;
        if (a.coef != b.coef) return a.coef < b.coef;
        return a.cst < b.cst;
    }
};

// Canonicalizes term `rel` 0. Returns the atom, or true/false when the term
// has no variables left.
struct AtomOrConst {
    bool is_const = false;
    bool const_value = false;
    Atom atom;
};
AtomOrConst make_atom(Vec coef, Rational cst, Rel rel);

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    enum class Kind { True, False, Leaf, And, Or, Not, Exists, Forall };
    Kind kind;
    Atom atom;                    // Leaf
    std::vector<FormulaPtr> kids; // And/Or: n-ary, Not/quantifiers: 1
    std::vector<std::size_t> bound; // quantifiers: indices into the problem's var list
};

FormulaPtr mk_true();
FormulaPtr mk_false();
FormulaPtr mk_leaf(Atom a);
FormulaPtr mk_and(std::vector<FormulaPtr> kids);
FormulaPtr mk_or(std::vector<FormulaPtr> kids);
FormulaPtr mk_not(FormulaPtr f);
FormulaPtr mk_quant(bool exists, std::vector<std::size_t> bound, FormulaPtr body);

struct Partition {
    VarList x, y;

    VarList all() const {
        VarList v = x;
        v.insert(v.end(), y.begin(), y.end());
        return v;
    }
};

// A parsed and validated problem. `vars` lists the partition variables
// followed by every bound variable; atoms are dense over `vars`.
struct Problem {
    Theory theory;
    Partition partition;
    FormulaPtr formula;
    VarList vars;

    std::size_t arity() const { return partition.x.size() + partition.y.size(); }
};

Problem parse(const std::string& text);
std::string print(const Problem& problem);
std::string print_formula(const FormulaPtr& f, const VarList& vars);
std::string print_atom(const Atom& a, const VarList& vars);

bool is_quantifier_free(const FormulaPtr& f);

// Truth of a quantifier-free formula at a rational point. Every free
// variable of the formula must be assigned.
bool evaluate(const FormulaPtr& f, const VarList& vars, const Assignment& point);
bool evaluate(const FormulaPtr& f, const Vec& point);

// Decides a formula with at most one quantifier over one variable by
// substituting finitely many candidate values for the bound variable: the
// roots of each atom, midpoints between consecutive roots, and the roots
// shifted by +-1. Exact for linear atoms over a dense order. Test oracle
// for the eliminator; deliberately independent of it.
bool eval_quantified_oracle(const FormulaPtr& f, const VarList& vars, const Assignment& point);

} // namespace stab
