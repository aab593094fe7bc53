#pragma once

// Hereditarily finite sets with a canonical total order (rank first, then
// lexicographic on ordered children), transitive closures, and rank-bounded
// universe enumeration.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "rreal/error.hpp"

namespace rreal {

class HFSet {
public:
    HFSet() = default;
    explicit HFSet(std::vector<HFSet> children) {
        for (HFSet& c : children) insert(std::move(c));
    }

    bool empty() const { return elems_.empty(); }
    std::size_t size() const { return elems_.size(); }
    const std::vector<HFSet>& elems() const { return elems_; }

    void insert(HFSet x) {
        auto it = std::lower_bound(elems_.begin(), elems_.end(), x, canon_less);
        if (it == elems_.end() || !(*it == x)) elems_.insert(it, std::move(x));
    }

    bool contains(const HFSet& x) const {
        return std::binary_search(elems_.begin(), elems_.end(), x, canon_less);
    }

    int rank() const {
        int r = 0;
        for (const HFSet& c : elems_) r = std::max(r, 1 + c.rank());
        return r;
    }

    // Canonical order: by rank, then lexicographically on the (canonically
    // ordered) child lists. Total on HF.
    static int cmp(const HFSet& a, const HFSet& b) {
        int ra = a.rank(), rb = b.rank();
        if (ra != rb) return ra < rb ? -1 : 1;
        std::size_t n = std::min(a.elems_.size(), b.elems_.size());
        for (std::size_t i = 0; i < n; ++i) {
            int c = cmp(a.elems_[i], b.elems_[i]);
            if (c != 0) return c;
        }
        if (a.elems_.size() == b.elems_.size()) return 0;
        return a.elems_.size() < b.elems_.size() ? -1 : 1;
    }
    static bool canon_less(const HFSet& a, const HFSet& b) { return cmp(a, b) < 0; }

    bool operator==(const HFSet& o) const { return cmp(*this, o) == 0; }
    bool operator!=(const HFSet& o) const { return cmp(*this, o) != 0; }
    bool operator<(const HFSet& o) const { return cmp(*this, o) < 0; }

    std::string str() const {
        std::string out = "{";
        bool first = true;
        for (const HFSet& c : elems_) {
            if (!first) out += ",";
            first = false;
            out += c.str();
        }
        return out + "}";
    }

private:
    std::vector<HFSet> elems_;  // canonically sorted, duplicate-free
};

inline HFSet hf_empty() { return HFSet{}; }

inline HFSet hf_singleton(const HFSet& x) {
    HFSet s;
    s.insert(x);
    return s;
}

inline HFSet hf_pair(const HFSet& a, const HFSet& b) {
    HFSet s;
    s.insert(a);
    s.insert(b);
    return s;
}

inline HFSet hf_union_members(const HFSet& x) {
    HFSet u;
    for (const HFSet& m : x.elems())
        for (const HFSet& c : m.elems()) u.insert(c);
    return u;
}

// von Neumann natural n.
inline HFSet hf_nat(int n) {
    HFSet s;
    for (int i = 0; i < n; ++i) {
        HFSet next = s;
        next.insert(s);
        s = std::move(next);
    }
    return s;
}

// Kuratowski pair (a,b) = {{a},{a,b}}.
inline HFSet hf_kuratowski(const HFSet& a, const HFSet& b) {
    return hf_pair(hf_singleton(a), hf_pair(a, b));
}

namespace detail {
inline void tc_collect(const HFSet& x, std::vector<HFSet>& acc) {
    for (const HFSet& c : x.elems()) {
        if (std::find(acc.begin(), acc.end(), c) == acc.end()) {
            acc.push_back(c);
            tc_collect(c, acc);
        }
    }
}
}  // namespace detail

// tc(x): all members, members of members, ... (not including x itself).
inline HFSet hf_tc(const HFSet& x) {
    std::vector<HFSet> acc;
    detail::tc_collect(x, acc);
    HFSet r;
    for (HFSet& e : acc) r.insert(std::move(e));
    return r;
}

// tc({x}): x together with its transitive closure.
inline std::vector<HFSet> hf_tc_with_self(const HFSet& x) {
    std::vector<HFSet> acc{x};
    detail::tc_collect(x, acc);
    return acc;
}

// All HFSets of rank <= r in canonical order. |rank<=0| = 1, <=1 -> 2,
// <=2 -> 4, <=3 -> 16, <=4 -> 65536.
inline std::vector<HFSet> hf_universe(int max_rank) {
    std::vector<HFSet> layer{hf_empty()};
    for (int r = 0; r < max_rank; ++r) {
        std::vector<HFSet> next;
        std::size_t n = layer.size();
        if (n > 20) throw Error("hf_universe: layer too large to enumerate");
        for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
            HFSet s;
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (1ull << i)) s.insert(layer[i]);
            next.push_back(std::move(s));
        }
        std::sort(next.begin(), next.end(), HFSet::canon_less);
        next.erase(std::unique(next.begin(), next.end()), next.end());
        layer = std::move(next);
    }
    return layer;
}

inline HFSet parse_hfset(const std::string& text, std::size_t& pos) {
    auto skip = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    skip();
    if (pos >= text.size() || text[pos] != '{')
        throw ParseError("hfset: expected '{'", 1, pos);
    ++pos;
    HFSet r;
    skip();
    if (pos < text.size() && text[pos] == '}') {
        ++pos;
        return r;
    }
    for (;;) {
        r.insert(parse_hfset(text, pos));
        skip();
        if (pos >= text.size()) throw ParseError("hfset: unterminated literal", 1, pos);
        if (text[pos] == '}') {
            ++pos;
            return r;
        }
        if (text[pos] != ',') throw ParseError("hfset: expected ',' or '}'", 1, pos);
        ++pos;
        skip();
    }
}

inline HFSet parse_hfset(const std::string& text) {
    std::size_t pos = 0;
    HFSet r = parse_hfset(text, pos);
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos != text.size()) throw ParseError("hfset: trailing input", 1, pos);
    return r;
}

}  // namespace rreal
