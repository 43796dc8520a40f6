#include "stab/formula.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <sstream>

namespace stab {

bool Atom::holds_at(const Vec& point) const {
    Rational v = value_at(point);
    switch (rel) {
    case Rel::Eq: return v == 0;
    case Rel::Gt: return v > 0;
    case Rel::Ge: return v >= 0;
    }
    return false;
}

AtomOrConst make_atom(Vec coef, Rational cst, Rel rel) {
    AtomOrConst out;
    bool any = false;
    for (const auto& c : coef)
        if (c != 0) any = true;
    if (!any) {
        out.is_const = true;
        switch (rel) {
        case Rel::Eq: out.const_value = (cst == 0); break;
        case Rel::Gt: out.const_value = (cst > 0); break;
        case Rel::Ge: out.const_value = (cst >= 0); break;
        }
        return out;
    }
    AffineRow row{std::move(coef), std::move(cst)};
    canonicalize_row(row, rel == Rel::Eq);
    out.atom = Atom{std::move(row.coef), std::move(row.cst), rel};
    return out;
}

FormulaPtr mk_true() {
    static const FormulaPtr t = std::make_shared<Formula>(Formula{Formula::Kind::True, {}, {}, {}});
    return t;
}

FormulaPtr mk_false() {
    static const FormulaPtr f = std::make_shared<Formula>(Formula{Formula::Kind::False, {}, {}, {}});
    return f;
}

FormulaPtr mk_leaf(Atom a) {
    return std::make_shared<Formula>(Formula{Formula::Kind::Leaf, std::move(a), {}, {}});
}

FormulaPtr mk_and(std::vector<FormulaPtr> kids) {
    std::vector<FormulaPtr> flat;
    for (auto& k : kids) {
        if (k->kind == Formula::Kind::False) return mk_false();
        if (k->kind == Formula::Kind::True) continue;
        if (k->kind == Formula::Kind::And) {
            flat.insert(flat.end(), k->kids.begin(), k->kids.end());
        } else {
            flat.push_back(std::move(k));
        }
    }
    if (flat.empty()) return mk_true();
    if (flat.size() == 1) return flat[0];
    return std::make_shared<Formula>(Formula{Formula::Kind::And, {}, std::move(flat), {}});
}

FormulaPtr mk_or(std::vector<FormulaPtr> kids) {
    std::vector<FormulaPtr> flat;
    for (auto& k : kids) {
        if (k->kind == Formula::Kind::True) return mk_true();
        if (k->kind == Formula::Kind::False) continue;
        if (k->kind == Formula::Kind::Or) {
            flat.insert(flat.end(), k->kids.begin(), k->kids.end());
        } else {
            flat.push_back(std::move(k));
        }
    }
    if (flat.empty()) return mk_false();
    if (flat.size() == 1) return flat[0];
    return std::make_shared<Formula>(Formula{Formula::Kind::Or, {}, std::move(flat), {}});
}

FormulaPtr mk_not(FormulaPtr f) {
    if (f->kind == Formula::Kind::True) return mk_false();
    if (f->kind == Formula::Kind::False) return mk_true();
    if (f->kind == Formula::Kind::Not) return f->kids[0];
    return std::make_shared<Formula>(Formula{Formula::Kind::Not, {}, {std::move(f)}, {}});
}

FormulaPtr mk_quant(bool exists, std::vector<std::size_t> bound, FormulaPtr body) {
    if (body->kind == Formula::Kind::True || body->kind == Formula::Kind::False) return body;
    return std::make_shared<Formula>(
        Formula{exists ? Formula::Kind::Exists : Formula::Kind::Forall, {}, {std::move(body)},
                std::move(bound)});
}

// ---------------------------------------------------------------------------
// Lexing / parsing

namespace {

struct Token {
    std::string text;
    int line, col;
};

std::vector<Token> lex(const std::string& text) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::string cur;
    int tl = 0, tc = 0;
    auto flush = [&] {
        if (!cur.empty()) {
            out.push_back({cur, tl, tc});
            cur.clear();
        }
    };
    for (char ch : text) {
        if (ch == '\n') {
            flush();
            ++line;
            col = 1;
            continue;
        }
        if (ch == ' ' || ch == '\t' || ch == '\r') {
            flush();
            ++col;
            continue;
        }
        if (ch == '(' || ch == ')' || ch == ';') {
            flush();
            out.push_back({std::string(1, ch), line, col});
            ++col;
            continue;
        }
        if (cur.empty()) {
            tl = line;
            tc = col;
        }
        cur.push_back(ch);
        ++col;
    }
    flush();
    return out;
}

bool is_ident(const std::string& s) {
    if (s.empty()) return false;
    if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

// Sparse term during parsing; densified once all variables are known.
struct SparseTerm {
    std::map<std::size_t, Rational> coef;
    Rational cst;
};

struct RawNode {
    enum class Kind { Atom, And, Or, Not, Exists, Forall } kind;
    Rel rel = Rel::Eq;
    SparseTerm term; // Atom: term rel 0
    std::vector<RawNode> kids;
    std::vector<std::size_t> bound;
    int line = 0, col = 0;
};

class Parser {
  public:
    Parser(std::vector<Token> toks, Theory theory) : toks_(std::move(toks)), theory_(theory) {}

    const Token& peek() {
        if (pos_ >= toks_.size()) throw parse_error(last_line(), last_col(), "unexpected end of input");
        return toks_[pos_];
    }
    Token next() {
        const Token& t = peek();
        ++pos_;
        return t;
    }
    bool done() const { return pos_ >= toks_.size(); }
    void expect(const std::string& s) {
        Token t = next();
        if (t.text != s) throw parse_error(t.line, t.col, "expected '" + s + "', got '" + t.text + "'");
    }
    int last_line() const { return toks_.empty() ? 1 : toks_.back().line; }
    int last_col() const { return toks_.empty() ? 1 : toks_.back().col + 1; }

    VarList vars;                       // partition vars then bound vars
    std::map<std::string, std::size_t> index;

    std::size_t declare(const Token& t) {
        if (!is_ident(t.text)) throw parse_error(t.line, t.col, "expected identifier, got '" + t.text + "'");
        if (std::find(vars.begin(), vars.end(), t.text) != vars.end())
            throw input_error("duplicate variable '" + t.text + "'");
        index[t.text] = vars.size();
        vars.push_back(t.text);
        return vars.size() - 1;
    }

    RawNode parse_sexpr() {
        Token t = peek();
        if (t.text != "(") {
            // bare constants permitted so canonical problems round-trip
            if (t.text == "true" || t.text == "false") {
                next();
                RawNode n;
                n.kind = RawNode::Kind::Atom;
                n.rel = Rel::Ge;
                n.term.cst = (t.text == "true") ? 0 : -1;
                n.line = t.line;
                n.col = t.col;
                return n;
            }
            throw parse_error(t.line, t.col, "expected '(', got '" + t.text + "'");
        }
        next();
        Token head = next();
        RawNode n;
        n.line = head.line;
        n.col = head.col;
        if (head.text == "and" || head.text == "or") {
            n.kind = head.text == "and" ? RawNode::Kind::And : RawNode::Kind::Or;
            while (peek().text != ")") n.kids.push_back(parse_sexpr());
            if (n.kids.empty()) throw parse_error(head.line, head.col, "'" + head.text + "' needs at least one argument");
            expect(")");
            return n;
        }
        if (head.text == "not") {
            n.kind = RawNode::Kind::Not;
            n.kids.push_back(parse_sexpr());
            expect(")");
            return n;
        }
        if (head.text == "exists" || head.text == "forall") {
            n.kind = head.text == "exists" ? RawNode::Kind::Exists : RawNode::Kind::Forall;
            expect("(");
            while (peek().text != ")") n.bound.push_back(declare(next()));
            expect(")");
            if (n.bound.empty()) throw parse_error(head.line, head.col, "quantifier binds no variables");
            n.kids.push_back(parse_sexpr());
            expect(")");
            for (std::size_t b : n.bound) index.erase(vars[b]); // lexical scope ends here
            return n;
        }
        if (head.text == "<" || head.text == "<=" || head.text == "=") {
            SparseTerm lhs = parse_term();
            SparseTerm rhs = parse_term();
            expect(")");
            n.kind = RawNode::Kind::Atom;
            if (head.text == "=") {
                n.rel = Rel::Eq;
                n.term = sub(lhs, rhs);
            } else {
                n.rel = head.text == "<" ? Rel::Gt : Rel::Ge;
                n.term = sub(rhs, lhs);
            }
            return n;
        }
        throw parse_error(head.line, head.col, "unknown operator '" + head.text + "'");
    }

  private:
    static SparseTerm sub(const SparseTerm& a, const SparseTerm& b) {
        SparseTerm r = a;
        for (const auto& [i, c] : b.coef) r.coef[i] -= c;
        r.cst -= b.cst;
        return r;
    }

    SparseTerm parse_term() {
        Token t = peek();
        if (t.text != "(") {
            next();
            SparseTerm r;
            if (auto q = rat_from_string(t.text)) {
                r.cst = *q;
                return r;
            }
            if (!is_ident(t.text)) throw parse_error(t.line, t.col, "expected term, got '" + t.text + "'");
            auto it = index.find(t.text);
            if (it == index.end()) throw input_error("undeclared variable '" + t.text + "'");
            r.coef[it->second] = 1;
            return r;
        }
        next();
        Token head = next();
        if (theory_ == Theory::Dlo)
            throw input_error("theory/atom mismatch: DLO terms are variables and constants only");
        if (head.text == "+") {
            SparseTerm r;
            bool any = false;
            while (peek().text != ")") {
                SparseTerm s = parse_term();
                for (const auto& [i, c] : s.coef) r.coef[i] += c;
                r.cst += s.cst;
                any = true;
            }
            if (!any) throw parse_error(head.line, head.col, "'+' needs at least one argument");
            expect(")");
            return r;
        }
        if (head.text == "-") {
            SparseTerm a = parse_term();
            SparseTerm b = parse_term();
            expect(")");
            return sub(a, b);
        }
        if (head.text == "*") {
            Token c = next();
            auto q = rat_from_string(c.text);
            if (!q) throw parse_error(c.line, c.col, "expected rational scalar, got '" + c.text + "'");
            SparseTerm s = parse_term();
            expect(")");
            for (auto& [i, v] : s.coef) v *= *q;
            s.cst *= *q;
            return s;
        }
        throw parse_error(head.line, head.col, "unknown term operator '" + head.text + "'");
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    Theory theory_;
};

FormulaPtr densify(const RawNode& n, std::size_t nvars, Theory theory) {
    switch (n.kind) {
    case RawNode::Kind::Atom: {
        Vec coef(nvars, Rational(0));
        for (const auto& [i, c] : n.term.coef) coef[i] = c;
        AtomOrConst a = make_atom(std::move(coef), n.term.cst, n.rel);
        if (a.is_const) return a.const_value ? mk_true() : mk_false();
        if (theory == Theory::Dlo) {
            std::size_t nz = 0;
            bool unit = true, opposite = false;
            Rational first = 0;
            for (const auto& c : a.atom.coef) {
                if (c == 0) continue;
                ++nz;
                if (c != 1 && c != -1) unit = false;
                if (first == 0)
                    first = c;
                else if (c == -first)
                    opposite = true;
            }
            bool ok = (nz == 1) || (nz == 2 && unit && opposite && a.atom.cst == 0);
            if (!ok)
                throw input_error("theory/atom mismatch: atom is not expressible in DLO");
        }
        return mk_leaf(std::move(a.atom));
    }
    case RawNode::Kind::And:
    case RawNode::Kind::Or: {
        std::vector<FormulaPtr> kids;
        kids.reserve(n.kids.size());
        for (const auto& k : n.kids) kids.push_back(densify(k, nvars, theory));
        return n.kind == RawNode::Kind::And ? mk_and(std::move(kids)) : mk_or(std::move(kids));
    }
    case RawNode::Kind::Not:
        return mk_not(densify(n.kids[0], nvars, theory));
    case RawNode::Kind::Exists:
    case RawNode::Kind::Forall:
        return mk_quant(n.kind == RawNode::Kind::Exists, n.bound,
                        densify(n.kids[0], nvars, theory));
    }
    throw std::logic_error("unreachable");
}

} // namespace

Problem parse(const std::string& text) {
    std::vector<Token> toks = lex(text);
    Theory theory;
    {
        // header before the parser so the theory steers term parsing
        if (toks.size() < 2 || toks[0].text != "theory")
            throw parse_error(toks.empty() ? 1 : toks[0].line, toks.empty() ? 1 : toks[0].col,
                              "expected 'theory'");
        if (toks[1].text == "dlo")
            theory = Theory::Dlo;
        else if (toks[1].text == "doag")
            theory = Theory::Doag;
        else
            throw parse_error(toks[1].line, toks[1].col, "theory must be 'dlo' or 'doag'");
    }
    Parser p(std::move(toks), theory);
    p.next();
    p.next();
    p.expect("vars");
    p.expect("x:");
    Partition part;
    while (p.peek().text != ";") part.x.push_back(p.vars[p.declare(p.next())]);
    p.expect(";");
    p.expect("y:");
    while (p.peek().text != "formula") part.y.push_back(p.vars[p.declare(p.next())]);
    if (part.x.empty() || part.y.empty()) throw input_error("empty partition side");
    p.expect("formula");
    RawNode raw = p.parse_sexpr();
    if (!p.done()) {
        const Token& t = p.peek();
        throw parse_error(t.line, t.col, "trailing input after formula");
    }
    Problem prob;
    prob.theory = theory;
    prob.partition = std::move(part);
    prob.vars = p.vars;
    prob.formula = densify(raw, p.vars.size(), theory);
    return prob;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

void print_part(std::ostringstream& os, const std::vector<std::pair<Rational, std::size_t>>& monos,
                const Rational& cst, const VarList& vars) {
    std::size_t count = monos.size() + (cst != 0 ? 1 : 0);
    if (count == 0) {
        os << "0";
        return;
    }
    if (count > 1) os << "(+ ";
    bool first = true;
    for (const auto& [c, i] : monos) {
        if (!first) os << " ";
        first = false;
        if (c == 1)
            os << vars[i];
        else
            os << "(* " << rat_to_string(c) << " " << vars[i] << ")";
    }
    if (cst != 0) {
        if (!first) os << " ";
        os << rat_to_string(cst);
    }
    if (count > 1) os << ")";
}

} // namespace

std::string print_atom(const Atom& a, const VarList& vars) {
    std::vector<std::pair<Rational, std::size_t>> pos, neg;
    for (std::size_t i = 0; i < a.coef.size(); ++i) {
        if (a.coef[i] > 0) pos.push_back({a.coef[i], i});
        if (a.coef[i] < 0) neg.push_back({-a.coef[i], i});
    }
    Rational pc = a.cst > 0 ? a.cst : Rational(0);
    Rational nc = a.cst < 0 ? -a.cst : Rational(0);
    std::ostringstream os;
    switch (a.rel) {
    case Rel::Eq: os << "(= "; break;
    case Rel::Gt: os << "(< "; break;
    case Rel::Ge: os << "(<= "; break;
    }
    if (a.rel == Rel::Eq) {
        print_part(os, pos, pc, vars);
        os << " ";
        print_part(os, neg, nc, vars);
    } else {
        print_part(os, neg, nc, vars);
        os << " ";
        print_part(os, pos, pc, vars);
    }
    os << ")";
    return os.str();
}

std::string print_formula(const FormulaPtr& f, const VarList& vars) {
    switch (f->kind) {
    case Formula::Kind::True: return "true";
    case Formula::Kind::False: return "false";
    case Formula::Kind::Leaf: return print_atom(f->atom, vars);
    case Formula::Kind::And:
    case Formula::Kind::Or: {
        std::string s = f->kind == Formula::Kind::And ? "(and" : "(or";
        for (const auto& k : f->kids) s += " " + print_formula(k, vars);
        return s + ")";
    }
    case Formula::Kind::Not:
        return "(not " + print_formula(f->kids[0], vars) + ")";
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
        std::string s = f->kind == Formula::Kind::Exists ? "(exists (" : "(forall (";
        for (std::size_t i = 0; i < f->bound.size(); ++i) {
            if (i) s += " ";
            s += vars[f->bound[i]];
        }
        return s + ") " + print_formula(f->kids[0], vars) + ")";
    }
    }
    return "";
}

std::string print(const Problem& problem) {
    std::ostringstream os;
    os << "theory " << (problem.theory == Theory::Dlo ? "dlo" : "doag") << "\n";
    os << "vars x:";
    for (const auto& v : problem.partition.x) os << " " << v;
    os << " ; y:";
    for (const auto& v : problem.partition.y) os << " " << v;
    os << "\nformula " << print_formula(problem.formula, problem.vars) << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Evaluation

bool is_quantifier_free(const FormulaPtr& f) {
    if (f->kind == Formula::Kind::Exists || f->kind == Formula::Kind::Forall) return false;
    for (const auto& k : f->kids)
        if (!is_quantifier_free(k)) return false;
    return true;
}

bool evaluate(const FormulaPtr& f, const Vec& point) {
    switch (f->kind) {
    case Formula::Kind::True: return true;
    case Formula::Kind::False: return false;
    case Formula::Kind::Leaf: return f->atom.holds_at(point);
    case Formula::Kind::And:
        for (const auto& k : f->kids)
            if (!evaluate(k, point)) return false;
        return true;
    case Formula::Kind::Or:
        for (const auto& k : f->kids)
            if (evaluate(k, point)) return true;
        return false;
    case Formula::Kind::Not: return !evaluate(f->kids[0], point);
    default: throw input_error("evaluate requires a quantifier-free formula");
    }
}

namespace {

void collect_support(const FormulaPtr& f, std::set<std::size_t>& out) {
    if (f->kind == Formula::Kind::Leaf) {
        for (std::size_t i = 0; i < f->atom.coef.size(); ++i)
            if (f->atom.coef[i] != 0) out.insert(i);
    }
    for (const auto& k : f->kids) collect_support(k, out);
}

Vec assignment_to_point(const FormulaPtr& f, const VarList& vars, const Assignment& point,
                        const std::set<std::size_t>& skip) {
    std::set<std::size_t> support;
    collect_support(f, support);
    Vec p(vars.size(), Rational(0));
    for (std::size_t i : support) {
        if (skip.count(i)) continue;
        auto it = point.find(vars[i]);
        if (it == point.end()) throw input_error("missing assignment for '" + vars[i] + "'");
        p[i] = it->second;
    }
    return p;
}

} // namespace

bool evaluate(const FormulaPtr& f, const VarList& vars, const Assignment& point) {
    if (!is_quantifier_free(f)) throw input_error("evaluate requires a quantifier-free formula");
    return evaluate(f, assignment_to_point(f, vars, point, {}));
}

namespace {

void collect_quantifiers(const FormulaPtr& f, std::vector<const Formula*>& out) {
    if (f->kind == Formula::Kind::Exists || f->kind == Formula::Kind::Forall) out.push_back(f.get());
    for (const auto& k : f->kids) collect_quantifiers(k, out);
}

void collect_atoms(const FormulaPtr& f, std::vector<const Atom*>& out) {
    if (f->kind == Formula::Kind::Leaf) out.push_back(&f->atom);
    for (const auto& k : f->kids) collect_atoms(k, out);
}

bool eval_oracle_rec(const FormulaPtr& f, Vec& point) {
    switch (f->kind) {
    case Formula::Kind::True: return true;
    case Formula::Kind::False: return false;
    case Formula::Kind::Leaf: return f->atom.holds_at(point);
    case Formula::Kind::And:
        for (const auto& k : f->kids)
            if (!eval_oracle_rec(k, point)) return false;
        return true;
    case Formula::Kind::Or:
        for (const auto& k : f->kids)
            if (eval_oracle_rec(k, point)) return true;
        return false;
    case Formula::Kind::Not: return !eval_oracle_rec(f->kids[0], point);
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
        const std::size_t v = f->bound[0];
        std::vector<const Atom*> atoms;
        collect_atoms(f->kids[0], atoms);
        std::vector<Rational> roots;
        for (const Atom* a : atoms) {
            if (a->coef[v] == 0) continue;
            Rational rest = a->value_at(point) - a->coef[v] * point[v];
            roots.push_back(-rest / a->coef[v]);
        }
        std::sort(roots.begin(), roots.end());
        roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
        std::vector<Rational> cands;
        if (roots.empty()) {
            cands.push_back(0);
        } else {
            cands.push_back(roots.front() - 1);
            for (std::size_t i = 0; i < roots.size(); ++i) {
                cands.push_back(roots[i]);
                if (i + 1 < roots.size()) cands.push_back((roots[i] + roots[i + 1]) / 2);
            }
            cands.push_back(roots.back() + 1);
        }
        const bool exists = f->kind == Formula::Kind::Exists;
        Rational saved = point[v];
        bool res = !exists;
        for (const auto& c : cands) {
            point[v] = c;
            bool b = eval_oracle_rec(f->kids[0], point);
            if (exists && b) {
                res = true;
                break;
            }
            if (!exists && !b) {
                res = false;
                break;
            }
        }
        point[v] = saved;
        return res;
    }
    }
    return false;
}

} // namespace

bool eval_quantified_oracle(const FormulaPtr& f, const VarList& vars, const Assignment& point) {
    std::vector<const Formula*> quants;
    collect_quantifiers(f, quants);
    if (quants.size() > 1 || (quants.size() == 1 && quants[0]->bound.size() > 1))
        throw input_error("eval_quantified_oracle: more than one bound variable");
    std::set<std::size_t> skip;
    if (!quants.empty()) skip.insert(quants[0]->bound[0]);
    Vec p = assignment_to_point(f, vars, point, skip);
    return eval_oracle_rec(f, p);
}

} // namespace stab
