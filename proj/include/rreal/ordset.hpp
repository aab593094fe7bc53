#pragma once

// Finite sets of ordinals: the interleaving a(+)b, its projections, the
// equality indicator delta, and the n-ary packaging used by chain witnesses.

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "rreal/error.hpp"
#include "rreal/ordinal.hpp"

namespace rreal {

class OrdSet {
public:
    OrdSet() = default;
    OrdSet(std::initializer_list<Ordinal> xs) {
        for (const Ordinal& x : xs) insert(x);
    }
    explicit OrdSet(std::vector<Ordinal> xs) {
        for (Ordinal& x : xs) insert(x);
    }

    bool empty() const { return elems_.empty(); }
    std::size_t size() const { return elems_.size(); }
    const std::vector<Ordinal>& elems() const { return elems_; }

    bool contains(const Ordinal& x) const {
        return std::binary_search(elems_.begin(), elems_.end(), x);
    }

    void insert(const Ordinal& x) {
        auto it = std::lower_bound(elems_.begin(), elems_.end(), x);
        if (it == elems_.end() || *it != x) elems_.insert(it, x);
    }

    bool operator==(const OrdSet& o) const { return elems_ == o.elems_; }
    bool operator!=(const OrdSet& o) const { return !(*this == o); }
    bool operator<(const OrdSet& o) const {
        return std::lexicographical_compare(elems_.begin(), elems_.end(),
                                            o.elems_.begin(), o.elems_.end());
    }

    std::string str() const {
        std::string out = "{";
        bool first = true;
        for (const Ordinal& x : elems_) {
            if (!first) out += ", ";
            first = false;
            out += x.str();
        }
        return out + "}";
    }

private:
    std::vector<Ordinal> elems_;  // sorted ascending, duplicate-free
};

inline OrdSet ord_union(const OrdSet& a, const OrdSet& b) {
    OrdSet r = a;
    for (const Ordinal& x : b.elems()) r.insert(x);
    return r;
}

// a(+)b = {2*i : i in a} union {2*i+1 : i in b}, 2 multiplied on the left so
// that 2*(lambda+n) = lambda+2n: parity of the finite part picks the side.
inline OrdSet interleave(const OrdSet& a, const OrdSet& b) {
    OrdSet r;
    const Ordinal two = Ordinal::fin(2);
    for (const Ordinal& x : a.elems()) r.insert(ord_mul(two, x));
    for (const Ordinal& x : b.elems())
        r.insert(ord_add(ord_mul(two, x), Ordinal::fin(1)));
    return r;
}

inline OrdSet project(const OrdSet& x, int side) {
    OrdSet r;
    for (const Ordinal& e : x.elems()) {
        std::uint64_t n = e.nat_part();
        if (static_cast<int>(n % 2) != side) continue;
        r.insert(ord_add(e.limit_part(), Ordinal::fin(n / 2)));
    }
    return r;
}

inline int delta(const OrdSet& x, const OrdSet& y) { return x == y ? 1 : 0; }

// Right-nested n-ary packaging: pack(x0..xk) = x0 (+) (x1 (+) (... xk)).
inline OrdSet pack_right(const std::vector<OrdSet>& xs) {
    if (xs.empty()) return OrdSet{};
    OrdSet r = xs.back();
    for (std::size_t i = xs.size() - 1; i-- > 0;) r = interleave(xs[i], r);
    return r;
}

// Length-tagged pack: {n} (+) right-nested pack of the n entries. Unlike
// pack_right this is unambiguously invertible for any n >= 0.
inline OrdSet pack_list(const std::vector<OrdSet>& xs) {
    OrdSet tag;
    tag.insert(Ordinal::fin(xs.size()));
    return interleave(tag, pack_right(xs));
}

inline std::vector<OrdSet> unpack_list(const OrdSet& s) {
    OrdSet tag = project(s, 0);
    if (tag.size() != 1 || !tag.elems().front().is_finite())
        throw MalformedSerialization("pack_list: bad length tag in " + s.str());
    std::uint64_t n = tag.elems().front().as_nat();
    std::vector<OrdSet> out;
    OrdSet rest = project(s, 1);
    for (std::uint64_t i = 0; i + 1 < n; ++i) {
        out.push_back(project(rest, 0));
        rest = project(rest, 1);
    }
    if (n > 0) out.push_back(rest);
    return out;
}

inline OrdSet parse_ordset(const std::string& text) {
    std::size_t pos = 0;
    auto skip = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    skip();
    if (pos >= text.size() || text[pos] != '{')
        throw ParseError("ordset: expected '{'", 1, pos);
    ++pos;
    OrdSet r;
    skip();
    if (pos < text.size() && text[pos] == '}') {
        ++pos;
    } else {
        for (;;) {
            std::size_t start = pos;
            int depth = 0;
            while (pos < text.size()) {
                char c = text[pos];
                if (c == '(') ++depth;
                if (c == ')') --depth;
                if (depth == 0 && (c == ',' || c == '}')) break;
                ++pos;
            }
            if (pos >= text.size())
                throw ParseError("ordset: unterminated set literal", 1, pos);
            r.insert(parse_ordinal(text.substr(start, pos - start)));
            if (text[pos] == '}') {
                ++pos;
                break;
            }
            ++pos;  // skip ','
        }
    }
    skip();
    if (pos != text.size()) throw ParseError("ordset: trailing input", 1, pos);
    return r;
}

}  // namespace rreal
