#pragma once

// Ordinals below epsilon_0 in Cantor normal form, with the arithmetic and the
// Godel pairing function that every encoding in this library is built on.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rreal/error.hpp"

namespace rreal {

class Ordinal {
public:
    struct Term;

    Ordinal() = default;

    static Ordinal fin(std::uint64_t n);
    static Ordinal omega();
    // w^exp * coeff, coeff >= 1.
    static Ordinal w_pow(const Ordinal& exp, std::uint64_t coeff = 1);

    bool is_zero() const { return terms_.empty(); }
    bool is_finite() const;
    // Value of a finite ordinal.
    std::uint64_t as_nat() const;

    // m = limit_part() + nat_part(), limit_part zero or a limit ordinal.
    Ordinal limit_part() const;
    std::uint64_t nat_part() const;
    bool is_limit() const { return !is_zero() && nat_part() == 0; }

    const std::vector<Term>& terms() const { return terms_; }

    std::string str() const;

    friend int ord_cmp(const Ordinal& a, const Ordinal& b);
    friend Ordinal ord_add(const Ordinal& a, const Ordinal& b);
    friend Ordinal ord_mul(const Ordinal& a, const Ordinal& b);

    bool operator==(const Ordinal& o) const { return ord_cmp(*this, o) == 0; }
    bool operator!=(const Ordinal& o) const { return ord_cmp(*this, o) != 0; }
    bool operator<(const Ordinal& o) const { return ord_cmp(*this, o) < 0; }
    bool operator<=(const Ordinal& o) const { return ord_cmp(*this, o) <= 0; }
    bool operator>(const Ordinal& o) const { return ord_cmp(*this, o) > 0; }
    bool operator>=(const Ordinal& o) const { return ord_cmp(*this, o) >= 0; }

    // Exponent towers deeper than this are rejected (finite CNF working range).
    static constexpr int kMaxTowerDepth = 32;

private:
    // Strictly decreasing exponents, coefficients >= 1. Empty list is 0.
    std::vector<Term> terms_;

    void check_depth() const;
    int depth() const;
};

struct Ordinal::Term {
    Ordinal exp;
    std::uint64_t coeff = 1;
};

inline int ord_cmp(const Ordinal& a, const Ordinal& b);

inline Ordinal Ordinal::fin(std::uint64_t n) {
    Ordinal o;
    if (n > 0) o.terms_.push_back(Term{Ordinal(), n});
    return o;
}

inline Ordinal Ordinal::omega() { return w_pow(fin(1)); }

inline Ordinal Ordinal::w_pow(const Ordinal& exp, std::uint64_t coeff) {
    Ordinal o;
    if (coeff == 0) return o;
    o.terms_.push_back(Term{exp, coeff});
    o.check_depth();
    return o;
}

inline bool Ordinal::is_finite() const {
    return terms_.empty() || terms_.front().exp.is_zero();
}

inline std::uint64_t Ordinal::as_nat() const {
    if (is_zero()) return 0;
    if (!is_finite()) throw OrdinalOverflow("as_nat on infinite ordinal " + str());
    return terms_.front().coeff;
}

inline Ordinal Ordinal::limit_part() const {
    Ordinal o;
    for (const Term& t : terms_)
        if (!t.exp.is_zero()) o.terms_.push_back(t);
    return o;
}

inline std::uint64_t Ordinal::nat_part() const {
    if (!terms_.empty() && terms_.back().exp.is_zero()) return terms_.back().coeff;
    return 0;
}

inline int Ordinal::depth() const {
    int d = 0;
    for (const Term& t : terms_) d = std::max(d, 1 + t.exp.depth());
    return d;
}

inline void Ordinal::check_depth() const {
    if (depth() > kMaxTowerDepth)
        throw OrdinalOverflow("exponent tower deeper than " + std::to_string(kMaxTowerDepth));
}

inline int ord_cmp(const Ordinal& a, const Ordinal& b) {
    std::size_t n = std::min(a.terms_.size(), b.terms_.size());
    for (std::size_t i = 0; i < n; ++i) {
        int e = ord_cmp(a.terms_[i].exp, b.terms_[i].exp);
        if (e != 0) return e;
        if (a.terms_[i].coeff != b.terms_[i].coeff)
            return a.terms_[i].coeff < b.terms_[i].coeff ? -1 : 1;
    }
    if (a.terms_.size() == b.terms_.size()) return 0;
    return a.terms_.size() < b.terms_.size() ? -1 : 1;
}

inline Ordinal ord_add(const Ordinal& a, const Ordinal& b) {
    if (b.is_zero()) return a;
    Ordinal r;
    const Ordinal& lead = b.terms_.front().exp;
    for (const Ordinal::Term& t : a.terms_) {
        if (ord_cmp(t.exp, lead) > 0)
            r.terms_.push_back(t);
        else
            break;
    }
    std::size_t i = 0;
    if (!r.terms_.empty() || a.terms_.empty() || true) {
        // Merge if a still has a term with exponent equal to b's lead.
    }
    // Find the term of a (if any) with exponent == lead; it merges coefficients.
    std::uint64_t merged = b.terms_.front().coeff;
    for (const Ordinal::Term& t : a.terms_) {
        if (ord_cmp(t.exp, lead) == 0) {
            merged += t.coeff;
            break;
        }
    }
    r.terms_.push_back(Ordinal::Term{lead, merged});
    for (i = 1; i < b.terms_.size(); ++i) r.terms_.push_back(b.terms_[i]);
    return r;
}

inline Ordinal ord_mul(const Ordinal& a, const Ordinal& b) {
    Ordinal r;
    if (a.is_zero() || b.is_zero()) return r;
    for (const Ordinal::Term& t : b.terms_) {
        Ordinal part;
        if (t.exp.is_zero()) {
            // a * n: the leading coefficient multiplies, the tail survives once.
            part = a;
            part.terms_.front().coeff *= t.coeff;
        } else {
            part = Ordinal::w_pow(ord_add(a.terms_.front().exp, t.exp), t.coeff);
        }
        r = ord_add(r, part);
    }
    r.check_depth();
    return r;
}

// --- Godel pairing ------------------------------------------------------
//
// Pairs are well-ordered by (max, first, second). godel_pair(a,b) is the
// order type of the pairs preceding (a,b); square_type(m) below is the order
// type of {(x,y) : max(x,y) < m}.

namespace detail {

inline Ordinal square_type(const Ordinal& m) {
    if (m.is_zero()) return Ordinal();
    if (m.is_finite()) {
        std::uint64_t n = m.as_nat();
        return Ordinal::fin(n * n);
    }
    Ordinal lambda = m.limit_part();
    std::uint64_t n = m.nat_part();
    if (n > 0) {
        // square_type(lambda + n) accumulates one max-block per successor.
        Ordinal s = square_type(lambda);
        for (std::uint64_t k = 0; k < n; ++k) {
            Ordinal mk = ord_add(lambda, Ordinal::fin(k));
            s = ord_add(s, ord_add(ord_mul(mk, Ordinal::fin(2)), Ordinal::fin(1)));
        }
        return s;
    }
    // m is a limit; peel one copy of w^a off the last CNF term.
    std::vector<Ordinal::Term> ts = m.terms();
    Ordinal a = ts.back().exp;
    Ordinal prefix;
    {
        Ordinal p;
        for (std::size_t i = 0; i + 1 < ts.size(); ++i)
            p = ord_add(p, Ordinal::w_pow(ts[i].exp, ts[i].coeff));
        if (ts.back().coeff > 1) p = ord_add(p, Ordinal::w_pow(a, ts.back().coeff - 1));
        prefix = p;
    }
    if (prefix.is_zero()) {
        // square_type(w^a).
        if (a.nat_part() > 0) {
            // a = a0 + 1
            Ordinal a0 = ord_add(a.limit_part(), Ordinal::fin(a.nat_part() - 1));
            Ordinal s0 = square_type(Ordinal::w_pow(a0));
            return ord_add(s0, Ordinal::w_pow(ord_add(ord_mul(a0, Ordinal::fin(2)), Ordinal::fin(1))));
        }
        // a is a limit: sup over b < a of w^(b*2+1) = w^(rho*2 + w^g),
        // where a = rho + w^g peels the last exponent-level term.
        std::vector<Ordinal::Term> at = a.terms();
        Ordinal g = at.back().exp;
        Ordinal rho;
        for (std::size_t i = 0; i + 1 < at.size(); ++i)
            rho = ord_add(rho, Ordinal::w_pow(at[i].exp, at[i].coeff));
        if (at.back().coeff > 1) rho = ord_add(rho, Ordinal::w_pow(g, at.back().coeff - 1));
        Ordinal s_exp = ord_add(ord_mul(rho, Ordinal::fin(2)), Ordinal::w_pow(g));
        return Ordinal::w_pow(s_exp);
    }
    // square_type(prefix + w^a) = square_type(prefix) + w^(p1 + a),
    // p1 the leading exponent of prefix.
    Ordinal p1 = prefix.terms().front().exp;
    return ord_add(square_type(prefix), Ordinal::w_pow(ord_add(p1, a)));
}

inline std::uint64_t isqrt(std::uint64_t n) {
    std::uint64_t r = static_cast<std::uint64_t>(std::max(0.0, std::sqrt(static_cast<double>(n)) - 2));
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

}  // namespace detail

inline Ordinal godel_pair(const Ordinal& a, const Ordinal& b) {
    const Ordinal& m = ord_cmp(a, b) >= 0 ? a : b;
    Ordinal s = detail::square_type(m);
    if (ord_cmp(a, m) < 0) return ord_add(s, a);
    return ord_add(s, ord_add(m, b));
}

inline std::pair<Ordinal, Ordinal> godel_unpair(const Ordinal& c) {
    if (!c.is_finite())
        throw OrdinalOverflow("godel_unpair supports finite codes only, got " + c.str());
    std::uint64_t n = c.as_nat();
    std::uint64_t m = detail::isqrt(n);
    std::uint64_t off = n - m * m;
    if (off < m) return {Ordinal::fin(off), Ordinal::fin(m)};
    return {Ordinal::fin(m), Ordinal::fin(off - m)};
}

// --- text form ----------------------------------------------------------
//
// Grammar: sum of w^<ordinal>*<nat> terms, strictly decreasing exponents;
// `w^1` may be written `w`, `w^0*n` as `n`.

inline std::string Ordinal::str() const {
    if (is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const Term& t : terms_) {
        if (!first) out += "+";
        first = false;
        if (t.exp.is_zero()) {
            out += std::to_string(t.coeff);
            continue;
        }
        if (t.exp == Ordinal::fin(1)) {
            out += "w";
        } else if (t.exp.is_finite() && t.exp.terms().size() == 1) {
            out += "w^" + std::to_string(t.exp.as_nat());
        } else {
            out += "w^(" + t.exp.str() + ")";
        }
        if (t.coeff != 1) out += "*" + std::to_string(t.coeff);
    }
    return out;
}

namespace detail {

struct OrdParser {
    const std::string& s;
    std::size_t pos = 0;

    explicit OrdParser(const std::string& text) : s(text) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError("ordinal: " + msg + " at position " + std::to_string(pos), 1, pos);
    }

    std::uint64_t nat() {
        skip_ws();
        if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
            fail("expected number");
        std::uint64_t n = 0;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            n = n * 10 + static_cast<std::uint64_t>(s[pos] - '0');
            ++pos;
        }
        return n;
    }

    Ordinal term() {
        skip_ws();
        if (pos < s.size() && (s[pos] == 'w' || s[pos] == 'W')) {
            ++pos;
            Ordinal exp = Ordinal::fin(1);
            if (eat('^')) {
                skip_ws();
                if (eat('(')) {
                    exp = sum();
                    if (!eat(')')) fail("expected ')'");
                } else if (pos < s.size() && (s[pos] == 'w' || s[pos] == 'W')) {
                    exp = term();
                } else {
                    exp = Ordinal::fin(nat());
                }
            }
            std::uint64_t coeff = 1;
            if (eat('*')) coeff = nat();
            if (coeff == 0) fail("zero coefficient");
            return Ordinal::w_pow(exp, coeff);
        }
        return Ordinal::fin(nat());
    }

    Ordinal sum() {
        Ordinal r = term();
        while (eat('+')) r = ord_add(r, term());
        return r;
    }
};

}  // namespace detail

inline Ordinal parse_ordinal(const std::string& text) {
    detail::OrdParser p(text);
    Ordinal r = p.sum();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input");
    return r;
}

}  // namespace rreal
