#pragma once

// Set-as-ordinal codes: a set x is coded by an enumeration f of tc({x}) with
// f(0) = x, the code being {p(i,j) : f(i) in f(j)} for the Godel pairing p.

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rreal/error.hpp"
#include "rreal/hfset.hpp"
#include "rreal/ordinal.hpp"
#include "rreal/ordset.hpp"

namespace rreal {

struct SetCode {
    OrdSet code;
    Ordinal domain;  // the alpha with f : alpha -> tc({x})

    bool operator==(const SetCode& o) const {
        return code == o.code && domain == o.domain;
    }
    bool operator!=(const SetCode& o) const { return !(*this == o); }
};

namespace detail {

// Membership pairs of a finite-domain code as (member_index, parent_index).
inline std::vector<std::pair<std::uint64_t, std::uint64_t>> code_pairs(
    const SetCode& c) {
    if (!c.domain.is_finite())
        throw IllFormedCode("code has infinite domain " + c.domain.str());
    std::uint64_t n = c.domain.as_nat();
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    for (const Ordinal& e : c.code.elems()) {
        auto [a, b] = godel_unpair(e);
        std::uint64_t i = a.as_nat(), j = b.as_nat();
        if (i >= n || j >= n)
            throw IllFormedCode("pair index out of domain in code " + c.code.str());
        out.emplace_back(i, j);
    }
    return out;
}

}  // namespace detail

// Encode with an explicit enumeration (enumeration[0] must be x, the rest
// tc(x) in any order). Canonical encode below fixes the canonical order.
inline SetCode encode_with(const std::vector<HFSet>& enumeration) {
    std::uint64_t n = enumeration.size();
    SetCode c;
    c.domain = Ordinal::fin(n);
    for (std::uint64_t j = 0; j < n; ++j)
        for (std::uint64_t i = 0; i < n; ++i)
            if (enumeration[j].contains(enumeration[i]))
                c.code.insert(godel_pair(Ordinal::fin(i), Ordinal::fin(j)));
    return c;
}

// Canonical code: f(0) = x, remaining members of tc(x) ordered by rank
// descending (root-down), ties broken by the canonical HFSet order. This
// makes encode deterministic; e.g. encode({{{}}}) = {p(1,0), p(2,1)} = {2,7}.
inline SetCode encode(const HFSet& x) {
    std::vector<HFSet> en = hf_tc_with_self(x);
    std::sort(en.begin() + 1, en.end(), [](const HFSet& a, const HFSet& b) {
        int ra = a.rank(), rb = b.rank();
        if (ra != rb) return ra > rb;
        return HFSet::cmp(a, b) < 0;
    });
    return encode_with(en);
}

// Decode with full validation: indices in range, root 0 memberless-upward,
// everything reachable from 0, acyclic, extensional.
inline HFSet decode(const SetCode& c) {
    if (!c.domain.is_finite() || c.domain.is_zero())
        throw IllFormedCode("decode: domain must be a positive natural, got " +
                            c.domain.str());
    std::uint64_t n = c.domain.as_nat();
    auto pairs = detail::code_pairs(c);
    std::vector<std::vector<std::uint64_t>> members(n);
    for (auto [i, j] : pairs) {
        if (i == 0)
            throw IllFormedCode("decode: root index 0 occurs as a member");
        members[j].push_back(i);
    }
    // Reachability from the root.
    std::vector<bool> seen(n, false);
    std::vector<std::uint64_t> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
        std::uint64_t j = stack.back();
        stack.pop_back();
        for (std::uint64_t i : members[j])
            if (!seen[i]) {
                seen[i] = true;
                stack.push_back(i);
            }
    }
    for (std::uint64_t i = 0; i < n; ++i)
        if (!seen[i])
            throw IllFormedCode("decode: index " + std::to_string(i) +
                                " unreachable from root");
    // Build sets bottom-up; colour marks detect cycles.
    std::vector<int> colour(n, 0);
    std::vector<HFSet> val(n);
    std::vector<bool> have(n, false);
    std::vector<std::uint64_t> order;
    std::vector<std::pair<std::uint64_t, bool>> dfs{{0, false}};
    while (!dfs.empty()) {
        auto [j, post] = dfs.back();
        dfs.pop_back();
        if (post) {
            colour[j] = 2;
            HFSet s;
            for (std::uint64_t i : members[j]) s.insert(val[i]);
            val[j] = std::move(s);
            have[j] = true;
            continue;
        }
        if (colour[j] == 2) continue;
        if (colour[j] == 1) throw IllFormedCode("decode: membership cycle");
        colour[j] = 1;
        dfs.emplace_back(j, true);
        for (std::uint64_t i : members[j]) {
            if (colour[i] == 1) throw IllFormedCode("decode: membership cycle");
            if (colour[i] == 0) dfs.emplace_back(i, false);
        }
    }
    for (std::uint64_t i = 0; i < n; ++i)
        for (std::uint64_t j = i + 1; j < n; ++j)
            if (val[i] == val[j])
                throw IllFormedCode("decode: indices " + std::to_string(i) + " and " +
                                    std::to_string(j) + " decode to the same set");
    return val[0];
}

// The code for f(x_index) derived from c: restrict the enumeration to
// tc({f(x_index)}), re-enumerated with x_index first and the remaining
// indices in ascending old order.
inline SetCode derived_code(const SetCode& c, const Ordinal& x_index) {
    if (!c.domain.is_finite())
        throw IllFormedCode("derived_code: infinite domain");
    if (!x_index.is_finite() || ord_cmp(x_index, c.domain) >= 0)
        throw IndexOutOfRange("derived_code: index " + x_index.str() +
                              " not below domain " + c.domain.str());
    std::uint64_t n = c.domain.as_nat();
    std::uint64_t root = x_index.as_nat();
    auto pairs = detail::code_pairs(c);
    std::vector<std::vector<std::uint64_t>> members(n);
    for (auto [i, j] : pairs) members[j].push_back(i);
    std::vector<bool> keep(n, false);
    std::vector<std::uint64_t> stack{root};
    keep[root] = true;
    while (!stack.empty()) {
        std::uint64_t j = stack.back();
        stack.pop_back();
        for (std::uint64_t i : members[j])
            if (!keep[i]) {
                keep[i] = true;
                stack.push_back(i);
            }
    }
    std::map<std::uint64_t, std::uint64_t> renum;
    renum[root] = 0;
    std::uint64_t next = 1;
    for (std::uint64_t i = 0; i < n; ++i)
        if (keep[i] && i != root) renum[i] = next++;
    SetCode out;
    out.domain = Ordinal::fin(next);
    for (auto [i, j] : pairs)
        if (keep[i] && keep[j])
            out.code.insert(
                godel_pair(Ordinal::fin(renum[i]), Ordinal::fin(renum[j])));
    return out;
}

inline int code_eq(const SetCode& c, const SetCode& d) {
    return decode(c) == decode(d) ? 1 : 0;
}

inline int code_member(const SetCode& c, const SetCode& d) {
    return decode(d).contains(decode(c)) ? 1 : 0;
}

// Indices of the members of the coded set (the i with p(i,0) in the code).
inline std::vector<Ordinal> root_member_indices(const SetCode& c) {
    std::vector<Ordinal> out;
    for (auto [i, j] : detail::code_pairs(c))
        if (j == 0) out.push_back(Ordinal::fin(i));
    std::sort(out.begin(), out.end());
    return out;
}

// Code for tc(decode(c)): adjoin a new top whose members are all non-root
// indices, then re-root to it (restriction drops the old root).
inline SetCode tc_code(const SetCode& c) {
    decode(c);  // validate
    std::uint64_t n = c.domain.as_nat();
    SetCode widened;
    widened.domain = Ordinal::fin(n + 1);
    widened.code = c.code;
    for (std::uint64_t i = 1; i < n; ++i)
        widened.code.insert(godel_pair(Ordinal::fin(i), Ordinal::fin(n)));
    return derived_code(widened, Ordinal::fin(n));
}

// Domain inferred from the pairs alone: one more than the largest index used
// (1 for the empty code, which codes the empty set).
inline Ordinal infer_domain(const OrdSet& code) {
    std::uint64_t top = 0;
    for (const Ordinal& e : code.elems()) {
        auto [a, b] = godel_unpair(e);
        top = std::max({top, a.as_nat(), b.as_nat()});
    }
    return Ordinal::fin(top + 1);
}

}  // namespace rreal
