#pragma once

// The in-language: terms are variables or HFSet literals; formulas add the
// connectives and (bounded) quantifiers. Includes the parser, printer,
// Sigma/Pi classification, the code-based bounded evaluator, and the
// brute-force finite-universe evaluator used as the independent oracle.

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "rreal/error.hpp"
#include "rreal/hfset.hpp"
#include "rreal/setcode.hpp"

namespace rreal {

struct Term {
    bool is_var = false;
    std::string var;
    HFSet lit;

    static Term mkvar(std::string v) {
        Term t;
        t.is_var = true;
        t.var = std::move(v);
        return t;
    }
    static Term mklit(HFSet s) {
        Term t;
        t.lit = std::move(s);
        return t;
    }
    std::string str() const { return is_var ? var : lit.str(); }
    bool operator==(const Term& o) const {
        if (is_var != o.is_var) return false;
        return is_var ? var == o.var : lit == o.lit;
    }
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    enum Kind {
        Member,
        Equal,
        And,
        Or,
        Not,
        Implies,
        Iff,
        ForAll,
        Exists,
        ForAllIn,
        ExistsIn
    };
    Kind kind;
    Term t1, t2;            // atomic operands
    FormulaPtr a, b;        // children
    std::string var;        // quantified variable
    Term bound;             // bounded-quantifier bound (var or literal)

    static FormulaPtr atom(Kind k, Term l, Term r) {
        auto f = std::make_shared<Formula>();
        f->kind = k;
        f->t1 = std::move(l);
        f->t2 = std::move(r);
        return f;
    }
    static FormulaPtr binop(Kind k, FormulaPtr l, FormulaPtr r) {
        auto f = std::make_shared<Formula>();
        f->kind = k;
        f->a = std::move(l);
        f->b = std::move(r);
        return f;
    }
    static FormulaPtr mknot(FormulaPtr x) {
        auto f = std::make_shared<Formula>();
        f->kind = Not;
        f->a = std::move(x);
        return f;
    }
    static FormulaPtr quant(Kind k, std::string v, FormulaPtr body) {
        auto f = std::make_shared<Formula>();
        f->kind = k;
        f->var = std::move(v);
        f->a = std::move(body);
        return f;
    }
    static FormulaPtr bquant(Kind k, std::string v, Term bnd, FormulaPtr body) {
        auto f = std::make_shared<Formula>();
        f->kind = k;
        f->var = std::move(v);
        f->bound = std::move(bnd);
        f->a = std::move(body);
        return f;
    }
};

enum class FormulaClass { Delta0, Sigma, Pi, Unclassified };
struct Classification {
    FormulaClass cls = FormulaClass::Unclassified;
    int n = 0;  // level for Sigma/Pi

    std::string str() const {
        switch (cls) {
            case FormulaClass::Delta0: return "Delta0";
            case FormulaClass::Sigma: return "Sigma" + std::to_string(n);
            case FormulaClass::Pi: return "Pi" + std::to_string(n);
            default: return "Unclassified";
        }
    }
};

// --- printing -----------------------------------------------------------

inline std::string print_formula(const FormulaPtr& f) {
    using K = Formula::Kind;
    switch (f->kind) {
        case K::Member: return "(" + f->t1.str() + " in " + f->t2.str() + ")";
        case K::Equal: return "(" + f->t1.str() + " = " + f->t2.str() + ")";
        case K::And: return "(" + print_formula(f->a) + " and " + print_formula(f->b) + ")";
        case K::Or: return "(" + print_formula(f->a) + " or " + print_formula(f->b) + ")";
        case K::Not: return "(not " + print_formula(f->a) + ")";
        case K::Implies: return "(" + print_formula(f->a) + " -> " + print_formula(f->b) + ")";
        case K::Iff: return "(" + print_formula(f->a) + " <-> " + print_formula(f->b) + ")";
        case K::ForAll: return "(all " + f->var + ")" + print_formula(f->a);
        case K::Exists: return "(ex " + f->var + ")" + print_formula(f->a);
        case K::ForAllIn:
            return "(all " + f->var + " in " + f->bound.str() + ")" + print_formula(f->a);
        case K::ExistsIn:
            return "(ex " + f->var + " in " + f->bound.str() + ")" + print_formula(f->a);
    }
    return "?";
}

inline bool formula_eq(const FormulaPtr& f, const FormulaPtr& g) {
    return print_formula(f) == print_formula(g);
}

// --- structural helpers -------------------------------------------------

inline void free_vars(const FormulaPtr& f, std::set<std::string>& bound,
                      std::set<std::string>& out) {
    using K = Formula::Kind;
    auto term = [&](const Term& t) {
        if (t.is_var && !bound.count(t.var)) out.insert(t.var);
    };
    switch (f->kind) {
        case K::Member:
        case K::Equal:
            term(f->t1);
            term(f->t2);
            return;
        case K::Not:
            free_vars(f->a, bound, out);
            return;
        case K::And:
        case K::Or:
        case K::Implies:
        case K::Iff:
            free_vars(f->a, bound, out);
            free_vars(f->b, bound, out);
            return;
        case K::ForAllIn:
        case K::ExistsIn:
            term(f->bound);
            [[fallthrough]];
        case K::ForAll:
        case K::Exists: {
            bool was = bound.count(f->var) > 0;
            bound.insert(f->var);
            free_vars(f->a, bound, out);
            if (!was) bound.erase(f->var);
            return;
        }
    }
}

inline std::set<std::string> free_vars(const FormulaPtr& f) {
    std::set<std::string> bound, out;
    free_vars(f, bound, out);
    return out;
}

// f[x := t]; quantifiers binding x shield their bodies.
inline FormulaPtr substitute(const FormulaPtr& f, const std::string& x, const Term& t) {
    using K = Formula::Kind;
    auto sub_term = [&](const Term& u) { return (u.is_var && u.var == x) ? t : u; };
    switch (f->kind) {
        case K::Member:
        case K::Equal:
            return Formula::atom(f->kind, sub_term(f->t1), sub_term(f->t2));
        case K::Not:
            return Formula::mknot(substitute(f->a, x, t));
        case K::And:
        case K::Or:
        case K::Implies:
        case K::Iff:
            return Formula::binop(f->kind, substitute(f->a, x, t), substitute(f->b, x, t));
        case K::ForAll:
        case K::Exists:
            if (f->var == x) return f;
            return Formula::quant(f->kind, f->var, substitute(f->a, x, t));
        case K::ForAllIn:
        case K::ExistsIn: {
            Term bnd = sub_term(f->bound);
            if (f->var == x) return Formula::bquant(f->kind, f->var, bnd, f->a);
            return Formula::bquant(f->kind, f->var, bnd, substitute(f->a, x, t));
        }
    }
    return f;
}

// "t is free for x in f": substituting t for x captures no variable of t.
inline bool free_for(const Term& t, const std::string& x, const FormulaPtr& f) {
    if (!t.is_var) return true;
    using K = Formula::Kind;
    switch (f->kind) {
        case K::Member:
        case K::Equal:
            return true;
        case K::Not:
            return free_for(t, x, f->a);
        case K::And:
        case K::Or:
        case K::Implies:
        case K::Iff:
            return free_for(t, x, f->a) && free_for(t, x, f->b);
        case K::ForAll:
        case K::Exists:
        case K::ForAllIn:
        case K::ExistsIn: {
            if (f->var == x) return true;
            bool x_free_below = free_vars(f->a).count(x) > 0;
            if (x_free_below && f->var == t.var) return false;
            return free_for(t, x, f->a);
        }
    }
    return true;
}

// --- classification -----------------------------------------------------

namespace detail {
inline bool all_bounded(const FormulaPtr& f) {
    using K = Formula::Kind;
    switch (f->kind) {
        case K::Member:
        case K::Equal:
            return true;
        case K::Not:
            return all_bounded(f->a);
        case K::And:
        case K::Or:
        case K::Implies:
        case K::Iff:
            return all_bounded(f->a) && all_bounded(f->b);
        case K::ForAllIn:
        case K::ExistsIn:
            return all_bounded(f->a);
        case K::ForAll:
        case K::Exists:
            return false;
    }
    return false;
}
}  // namespace detail

inline Classification classify(const FormulaPtr& f) {
    using K = Formula::Kind;
    if (detail::all_bounded(f)) return {FormulaClass::Delta0, 0};
    if (f->kind == K::Exists || f->kind == K::ForAll) {
        K block = f->kind;
        FormulaPtr body = f;
        while (body->kind == block) body = body->a;
        Classification inner = classify(body);
        if (inner.cls == FormulaClass::Delta0)
            return {block == K::Exists ? FormulaClass::Sigma : FormulaClass::Pi, 1};
        if (block == K::Exists && inner.cls == FormulaClass::Pi)
            return {FormulaClass::Sigma, inner.n + 1};
        if (block == K::ForAll && inner.cls == FormulaClass::Sigma)
            return {FormulaClass::Pi, inner.n + 1};
        return {FormulaClass::Unclassified, 0};
    }
    return {FormulaClass::Unclassified, 0};
}

// --- parser -------------------------------------------------------------
//
// precedence: not > and > or > -> (right assoc) > <->

namespace detail {

struct FormulaParser {
    const std::string& s;
    std::size_t pos = 0;
    explicit FormulaParser(const std::string& text) : s(text) {}

    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError("formula: " + msg + " at position " + std::to_string(pos), 1, pos);
    }
    void skip() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool peek_word(const std::string& w) {
        skip();
        if (s.compare(pos, w.size(), w) != 0) return false;
        std::size_t end = pos + w.size();
        if (end < s.size() &&
            (std::isalnum(static_cast<unsigned char>(s[end])) || s[end] == '_'))
            return false;
        return true;
    }
    bool eat_word(const std::string& w) {
        if (!peek_word(w)) return false;
        pos += w.size();
        return true;
    }
    bool eat_sym(const std::string& w) {
        skip();
        if (s.compare(pos, w.size(), w) != 0) return false;
        pos += w.size();
        return true;
    }
    std::string ident() {
        skip();
        std::size_t start = pos;
        while (pos < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
            ++pos;
        if (start == pos) fail("expected identifier");
        return s.substr(start, pos - start);
    }
    Term term() {
        skip();
        if (pos < s.size() && s[pos] == '{') return Term::mklit(parse_hfset(s, pos));
        return Term::mkvar(ident());
    }

    FormulaPtr parse() {
        FormulaPtr f = iff();
        skip();
        if (pos != s.size()) fail("trailing input");
        return f;
    }
    FormulaPtr iff() {
        FormulaPtr l = implies();
        while (eat_sym("<->")) l = Formula::binop(Formula::Iff, l, implies());
        return l;
    }
    FormulaPtr implies() {
        FormulaPtr l = disj();
        if (eat_sym("->")) return Formula::binop(Formula::Implies, l, implies());
        return l;
    }
    FormulaPtr disj() {
        FormulaPtr l = conj();
        while (eat_word("or")) l = Formula::binop(Formula::Or, l, conj());
        return l;
    }
    FormulaPtr conj() {
        FormulaPtr l = unary();
        while (eat_word("and")) l = Formula::binop(Formula::And, l, unary());
        return l;
    }
    FormulaPtr unary() {
        if (eat_word("not")) return Formula::mknot(unary());
        return primary();
    }
    FormulaPtr primary() {
        skip();
        if (pos < s.size() && s[pos] == '(') {
            // Quantifier prefix or grouping.
            std::size_t save = pos;
            ++pos;
            if (peek_word("all") || peek_word("ex")) {
                bool universal = eat_word("all");
                if (!universal) eat_word("ex");
                std::string v = ident();
                if (eat_word("in")) {
                    Term bnd = term();
                    if (!eat_sym(")")) fail("expected ')'");
                    return Formula::bquant(
                        universal ? Formula::ForAllIn : Formula::ExistsIn, v, bnd,
                        unary());
                }
                if (!eat_sym(")")) fail("expected ')'");
                return Formula::quant(universal ? Formula::ForAll : Formula::Exists,
                                      v, unary());
            }
            pos = save;
            ++pos;
            FormulaPtr f = iff();
            if (!eat_sym(")")) fail("expected ')'");
            return f;
        }
        // Atomic: term (in|=) term
        Term l = term();
        if (eat_word("in")) return Formula::atom(Formula::Member, l, term());
        if (eat_sym("=")) return Formula::atom(Formula::Equal, l, term());
        fail("expected 'in' or '=' after term");
    }
};

}  // namespace detail

inline FormulaPtr parse_formula(const std::string& text) {
    detail::FormulaParser p(text);
    return p.parse();
}

// --- evaluation ---------------------------------------------------------

// Code-based bounded evaluation: every term denotes a SetCode; bounded
// quantifiers range over derived codes of the bound's members; atomic tests
// are code_member/code_eq. Throws NotDelta0 on unbounded quantifiers.
inline bool eval_bounded(const FormulaPtr& f, std::map<std::string, SetCode> env,
                         std::size_t fuel = 100000) {
    using K = Formula::Kind;
    struct Ev {
        std::size_t fuel;
        bool run(const FormulaPtr& f, std::map<std::string, SetCode>& env) {
            if (fuel-- == 0) throw FuelExhaustedError("eval_bounded: out of fuel");
            auto resolve = [&](const Term& t) -> SetCode {
                if (!t.is_var) return encode(t.lit);
                auto it = env.find(t.var);
                if (it == env.end()) throw UnboundVariable("unbound variable " + t.var);
                return it->second;
            };
            switch (f->kind) {
                case K::Member:
                    return code_member(resolve(f->t1), resolve(f->t2)) == 1;
                case K::Equal:
                    return code_eq(resolve(f->t1), resolve(f->t2)) == 1;
                case K::And: return run(f->a, env) && run(f->b, env);
                case K::Or: return run(f->a, env) || run(f->b, env);
                case K::Not: return !run(f->a, env);
                case K::Implies: return !run(f->a, env) || run(f->b, env);
                case K::Iff: return run(f->a, env) == run(f->b, env);
                case K::ForAllIn:
                case K::ExistsIn: {
                    SetCode bnd = resolve(f->bound);
                    bool universal = f->kind == K::ForAllIn;
                    for (const Ordinal& idx : root_member_indices(bnd)) {
                        SetCode m = derived_code(bnd, idx);
                        auto saved = env.find(f->var);
                        SetCode old;
                        bool had = saved != env.end();
                        if (had) old = saved->second;
                        env[f->var] = m;
                        bool v = run(f->a, env);
                        if (had)
                            env[f->var] = old;
                        else
                            env.erase(f->var);
                        if (universal && !v) return false;
                        if (!universal && v) return true;
                    }
                    return universal;
                }
                case K::ForAll:
                case K::Exists:
                    throw NotDelta0("eval_bounded: unbounded quantifier over " + f->var);
            }
            return false;
        }
    };
    Ev ev{fuel};
    return ev.run(f, env);
}

// Independent brute-force oracle: pure HFSet recursion, unbounded
// quantifiers range over the supplied universe.
inline bool eval_over_universe(const FormulaPtr& f, const std::vector<HFSet>& universe,
                               std::map<std::string, HFSet> env) {
    using K = Formula::Kind;
    auto resolve = [&](const Term& t) -> HFSet {
        if (!t.is_var) return t.lit;
        auto it = env.find(t.var);
        if (it == env.end()) throw UnboundVariable("unbound variable " + t.var);
        return it->second;
    };
    switch (f->kind) {
        case K::Member: return resolve(f->t2).contains(resolve(f->t1));
        case K::Equal: return resolve(f->t1) == resolve(f->t2);
        case K::And:
            return eval_over_universe(f->a, universe, env) &&
                   eval_over_universe(f->b, universe, env);
        case K::Or:
            return eval_over_universe(f->a, universe, env) ||
                   eval_over_universe(f->b, universe, env);
        case K::Not: return !eval_over_universe(f->a, universe, env);
        case K::Implies:
            return !eval_over_universe(f->a, universe, env) ||
                   eval_over_universe(f->b, universe, env);
        case K::Iff:
            return eval_over_universe(f->a, universe, env) ==
                   eval_over_universe(f->b, universe, env);
        case K::ForAllIn:
        case K::ExistsIn: {
            HFSet bnd = resolve(f->bound);
            bool universal = f->kind == K::ForAllIn;
            for (const HFSet& m : bnd.elems()) {
                env[f->var] = m;
                bool v = eval_over_universe(f->a, universe, env);
                if (universal && !v) return false;
                if (!universal && v) return true;
            }
            return universal;
        }
        case K::ForAll:
        case K::Exists: {
            bool universal = f->kind == K::ForAll;
            for (const HFSet& m : universe) {
                env[f->var] = m;
                bool v = eval_over_universe(f->a, universe, env);
                if (universal && !v) return false;
                if (!universal && v) return true;
            }
            return universal;
        }
    }
    return false;
}

// Universal closure of f over its free variables (sorted for determinism).
inline FormulaPtr universal_closure(const FormulaPtr& f) {
    FormulaPtr g = f;
    std::set<std::string> fv = free_vars(f);
    for (auto it = fv.rbegin(); it != fv.rend(); ++it)
        g = Formula::quant(Formula::ForAll, *it, g);
    return g;
}

}  // namespace rreal
