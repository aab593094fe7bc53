#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "rreal/ordset.hpp"

using namespace rreal;

namespace {

OrdSet S(const std::string& t) { return parse_ordset(t); }

OrdSet random_subset(std::mt19937_64& rng, int bound) {
    OrdSet s;
    for (int i = 0; i < bound; ++i)
        if (rng() % 2) s.insert(Ordinal::fin(i));
    return s;
}

}  // namespace

TEST_CASE("ordset parse and print") {
    CHECK(S("{0, 2, w, w+1}").str() == "{0, 2, w, w+1}");
    CHECK(S("{}").str() == "{}");
    CHECK(S("{3, 1}") == S("{1, 3}"));
    CHECK_THROWS_AS(parse_ordset("{1,"), ParseError);
}

TEST_CASE("interleave on finite positions") {
    CHECK(interleave(S("{0,1}"), S("{0}")) == S("{0,1,2}"));
    CHECK(interleave(S("{}"), S("{}")) == S("{}"));
}

TEST_CASE("interleave on transfinite positions") {
    CHECK(interleave(S("{w}"), S("{w}")) == S("{w, w+1}"));
}

TEST_CASE("projection inverts interleave") {
    CHECK(project(S("{0,1,2}"), 0) == S("{0,1}"));
    CHECK(project(S("{0,1,2}"), 1) == S("{0}"));
    std::mt19937_64 rng(0x05e7);
    for (int t = 0; t < 500; ++t) {
        OrdSet a = random_subset(rng, 8), b = random_subset(rng, 8);
        OrdSet z = interleave(a, b);
        CHECK(project(z, 0) == a);
        CHECK(project(z, 1) == b);
    }
}

TEST_CASE("interleave halves occupy disjoint position classes") {
    std::mt19937_64 rng(0x05e8);
    for (int t = 0; t < 200; ++t) {
        OrdSet a = random_subset(rng, 6), b = random_subset(rng, 6);
        OrdSet left = interleave(a, OrdSet{});
        OrdSet right = interleave(OrdSet{}, b);
        for (const Ordinal& e : left.elems()) CHECK(!right.contains(e));
        CHECK(ord_union(left, right) == interleave(a, b));
    }
}

TEST_CASE("interleave is injective") {
    std::mt19937_64 rng(0x05e9);
    for (int t = 0; t < 200; ++t) {
        OrdSet a = random_subset(rng, 5), b = random_subset(rng, 5);
        OrdSet c = random_subset(rng, 5), d = random_subset(rng, 5);
        bool same_args = a == c && b == d;
        CHECK((interleave(a, b) == interleave(c, d)) == same_args);
    }
}

TEST_CASE("delta is the equality indicator") {
    CHECK(delta(S("{1}"), S("{1}")) == 1);
    CHECK(delta(S("{1}"), S("{2}")) == 0);
    CHECK(delta(S("{}"), S("{}")) == 1);
}

TEST_CASE("pack_list round-trips through unpack_list") {
    std::mt19937_64 rng(0x05ea);
    for (int t = 0; t < 200; ++t) {
        std::size_t n = rng() % 5;
        std::vector<OrdSet> xs;
        for (std::size_t i = 0; i < n; ++i) xs.push_back(random_subset(rng, 6));
        std::vector<OrdSet> back = unpack_list(pack_list(xs));
        REQUIRE(back.size() == xs.size());
        for (std::size_t i = 0; i < n; ++i) CHECK(back[i] == xs[i]);
    }
}

TEST_CASE("pack_right nests to the right") {
    OrdSet a = S("{1}"), b = S("{2}"), c = S("{3}");
    OrdSet packed = pack_right({a, b, c});
    CHECK(project(packed, 0) == a);
    CHECK(project(project(packed, 1), 0) == b);
    CHECK(project(project(packed, 1), 1) == c);
    CHECK(pack_right({a}) == a);
}
