#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "rreal/setcode.hpp"

using namespace rreal;

TEST_CASE("canonical encodings of the first few sets") {
    SetCode e = encode(hf_empty());
    CHECK(e.code == OrdSet{});
    CHECK(e.domain.as_nat() == 1);

    SetCode s1 = encode(hf_singleton(hf_empty()));
    CHECK(s1.code == parse_ordset("{2}"));
    CHECK(s1.domain.as_nat() == 2);

    SetCode s2 = encode(hf_singleton(hf_singleton(hf_empty())));
    CHECK(s2.code == parse_ordset("{2, 7}"));
    CHECK(s2.domain.as_nat() == 3);
}

TEST_CASE("decode inverts encode on the whole rank-3 universe") {
    for (const HFSet& x : hf_universe(3)) {
        SetCode c = encode(x);
        CHECK(decode(c) == x);
        CHECK(infer_domain(c.code) == c.domain);
    }
}

TEST_CASE("decode rejects ill-formed codes") {
    // 0 in 1 with nothing below the root: index 1 is unreachable from 0
    SetCode bad;
    bad.code.insert(godel_pair(Ordinal::fin(0), Ordinal::fin(1)));
    bad.domain = Ordinal::fin(2);
    CHECK_THROWS_AS(decode(bad), IllFormedCode);

    // self-membership is cyclic
    SetCode cyc;
    cyc.code.insert(godel_pair(Ordinal::fin(0), Ordinal::fin(0)));
    cyc.domain = Ordinal::fin(1);
    CHECK_THROWS_AS(decode(cyc), IllFormedCode);

    // pair index beyond the domain
    SetCode oob;
    oob.code.insert(godel_pair(Ordinal::fin(1), Ordinal::fin(0)));
    oob.domain = Ordinal::fin(1);
    CHECK_THROWS_AS(decode(oob), IllFormedCode);

    // zero-width domain
    SetCode zero;
    zero.domain = Ordinal::fin(0);
    CHECK_THROWS_AS(decode(zero), IllFormedCode);
}

TEST_CASE("derived codes decode to the root's members") {
    for (const HFSet& x : hf_universe(3)) {
        SetCode c = encode(x);
        std::vector<Ordinal> idx = root_member_indices(c);
        CHECK(idx.size() == x.elems().size());
        std::vector<HFSet> members;
        for (const Ordinal& i : idx) {
            SetCode d = derived_code(c, i);
            members.push_back(decode(d));
        }
        for (const HFSet& m : x.elems())
            CHECK(std::count(members.begin(), members.end(), m) == 1);
    }
}

TEST_CASE("derived_code rejects out-of-range indices") {
    SetCode c = encode(hf_singleton(hf_empty()));
    CHECK_THROWS_AS(derived_code(c, Ordinal::fin(7)), IndexOutOfRange);
}

TEST_CASE("code_eq and code_member on canonical codes") {
    std::vector<HFSet> uni = hf_universe(2);
    for (const HFSet& x : uni)
        for (const HFSet& y : uni) {
            CHECK(code_eq(encode(x), encode(y)) == (x == y ? 1 : 0));
            CHECK(code_member(encode(x), encode(y)) ==
                  (y.contains(x) ? 1 : 0));
        }
}

TEST_CASE("code_eq sees through non-canonical enumerations") {
    // encode {{{}},{}} with the transitive closure listed in a different order
    HFSet s0 = hf_empty();
    HFSet s1 = hf_singleton(s0);
    HFSet x = hf_pair(s1, s0);
    std::vector<HFSet> enum_a = {x, s1, s0};
    std::vector<HFSet> enum_b = {x, s0, s1};
    SetCode ca = encode_with(enum_a), cb = encode_with(enum_b);
    CHECK(!(ca.code == cb.code));
    CHECK(code_eq(ca, cb) == 1);
    CHECK(code_eq(ca, encode(x)) == 1);
    CHECK(decode(ca) == x);
    CHECK(decode(cb) == x);
    CHECK(code_eq(ca, encode(s1)) == 0);
}

TEST_CASE("tc_code adds exactly the transitive closure") {
    HFSet x = hf_singleton(hf_singleton(hf_empty()));
    SetCode t = tc_code(encode(x));
    HFSet expect = hf_tc(x);  // {{{}}} |-> {{{}}, {}}
    CHECK(decode(t) == expect);
    CHECK(code_eq(t, encode(expect)) == 1);
    for (const HFSet& y : hf_universe(3))
        CHECK(decode(tc_code(encode(y))) == hf_tc(y));
}

TEST_CASE("rank-4 encode/decode round trip on a random sample") {
    std::vector<HFSet> uni3 = hf_universe(3);
    std::mt19937_64 rng(0x5e7c0de);
    for (int t = 0; t < 300; ++t) {
        HFSet x;
        std::size_t n = rng() % 4;
        for (std::size_t i = 0; i < n; ++i)
            x.insert(uni3[rng() % uni3.size()]);
        CHECK(decode(encode(x)) == x);
    }
}
