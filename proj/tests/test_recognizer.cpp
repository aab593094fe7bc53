#include <catch2/catch_amalgamated.hpp>

#include "rreal/recognizer.hpp"

using namespace rreal;

namespace {
constexpr std::uint64_t kFuel = 1000000;

CandidatePool pool_of(std::initializer_list<const char*> sets) {
    CandidatePool p;
    for (const char* s : sets) p.add(parse_ordset(s));
    return p;
}
}  // namespace

TEST_CASE("eq-constant recognizes its constant in a pool") {
    Recognizer r = eq_constant(parse_ordset("{2}"));
    RecognitionVerdict v =
        test_recognizer(r, pool_of({"{}", "{2}", "{3}"}), std::nullopt, kFuel);
    REQUIRE(v.kind == RecognitionVerdict::Recognizes);
    CHECK(v.witness == parse_ordset("{2}"));
}

TEST_CASE("constant reject and constant accept programs") {
    Recognizer rej = Recognizer::from_macro_text("halt 0");
    CHECK(test_recognizer(rej, pool_of({"{}", "{1}"}), std::nullopt, kFuel)
              .kind == RecognitionVerdict::RejectsAll);

    Recognizer acc = Recognizer::from_macro_text("halt 1");
    RecognitionVerdict v =
        test_recognizer(acc, pool_of({"{}", "{1}"}), std::nullopt, kFuel);
    REQUIRE(v.kind == RecognitionVerdict::Ambiguous);
    CHECK(v.witnesses.size() == 2);
}

TEST_CASE("recognition relative to a base set") {
    // accept iff the candidate half of the oracle equals {2}
    Recognizer r = Recognizer::from_macro_text(
        "orsec r1 1\nload r2 {2}\ndelta r1 r2\nhalt r");
    RecognitionVerdict v = test_recognizer(r, pool_of({"{}", "{2}", "{5}"}),
                                           parse_ordset("{0, 9}"), kFuel);
    REQUIRE(v.kind == RecognitionVerdict::Recognizes);
    CHECK(v.witness == parse_ordset("{2}"));

    // a base-sensitive program: accept iff candidate equals the base
    Recognizer echo = Recognizer::from_macro_text(
        "orsec r0 0\norsec r1 1\ndelta r0 r1\nhalt r");
    RecognitionVerdict w = test_recognizer(echo, pool_of({"{}", "{7}", "{1}"}),
                                           parse_ordset("{7}"), kFuel);
    REQUIRE(w.kind == RecognitionVerdict::Recognizes);
    CHECK(w.witness == parse_ordset("{7}"));
}

TEST_CASE("undetermined on fuel exhaustion") {
    Recognizer r = Recognizer::from_macro_text(
        "top:\nload r1 {}\njmp top\nhalt 1");
    RecognitionVerdict v = test_recognizer(r, pool_of({"{}"}), std::nullopt, 50);
    CHECK(v.kind == RecognitionVerdict::Undetermined);
}

TEST_CASE("rho splits the recognized witness") {
    OrdSet z = interleave(parse_ordset("{1}"), parse_ordset("{4}"));
    Recognizer r = eq_constant(z);
    CandidatePool pool = pool_of({"{}", "{1}", "{4}"});
    pool.add(z);
    RhoResult res = rho(r, pool, kFuel);
    REQUIRE(res.defined);
    CHECK(res.rho0 == parse_ordset("{1}"));
    CHECK(res.rho1 == parse_ordset("{4}"));

    RhoResult none = rho(eq_constant(parse_ordset("{9}")), pool, kFuel);
    CHECK(!none.defined);
}

TEST_CASE("harvest_witness surfaces the written witness") {
    Recognizer r = Recognizer::from_macro_text(
        "load r8 {3}\nwriteout r8\norsec r1 1\ndelta r1 r8\nhalt r");
    auto w = harvest_witness(r, OrdSet{}, kFuel);
    REQUIRE(w.has_value());
    CHECK(*w == parse_ordset("{3}"));
}

TEST_CASE("single-link chain package") {
    Recognizer link = Recognizer::from_macro_text(
        "orsec r1 1\nload r2 {1}\ndelta r1 r2\nhalt r");
    ChainPackage pkg = chain_package({{link, parse_ordset("{1}")}});
    CHECK(pkg.z == interleave(parse_ordset("{1}"), OrdSet{}));
    // distractors differ in the chain-head slot, which the link inspects
    CandidatePool pool;
    pool.add(pkg.z);
    pool.add(interleave(parse_ordset("{2}"), OrdSet{}));
    pool.add(interleave(parse_ordset("{}"), OrdSet{}));
    pool.add(interleave(parse_ordset("{1, 3}"), OrdSet{}));
    RecognitionVerdict v =
        test_recognizer(pkg.composite, pool, OrdSet{}, kFuel);
    REQUIRE(v.kind == RecognitionVerdict::Recognizes);
    CHECK(v.witness == pkg.z);
}

TEST_CASE("two-link chain over the empty base") {
    OrdSet x = parse_ordset("{1}"), y = parse_ordset("{2}");
    // R0 recognizes x relative to y, R1 recognizes y relative to the base
    Recognizer r0 = Recognizer::from_macro_text(
        "orsec r0 0\norsec r1 1\nload r2 {2}\ndelta r0 r2\nbrf no\n"
        "load r3 {1}\ndelta r1 r3\nhalt r\nno:\nhalt 0");
    Recognizer r1 = Recognizer::from_macro_text(
        "orsec r1 1\nload r2 {2}\ndelta r1 r2\nhalt r");
    ChainPackage pkg = chain_package({{r0, x}, {r1, y}});
    CHECK(pkg.z == interleave(x, pack_right({y})));
    CandidatePool pool = mutation_pool(pkg.z, 7);
    CHECK(pool.size() == 8);
    RecognitionVerdict v =
        test_recognizer(pkg.composite, pool, OrdSet{}, kFuel);
    REQUIRE(v.kind == RecognitionVerdict::Recognizes);
    CHECK(v.witness == pkg.z);
}

TEST_CASE("empty chains are rejected") {
    CHECK_THROWS_AS(chain_package({}), EmptyChain);
}

TEST_CASE("mutation pools contain the witness and distinct mutants") {
    OrdSet w = parse_ordset("{0, 2, 5}");
    CandidatePool pool = mutation_pool(w, 7);
    CHECK(pool.size() == 8);
    bool has_witness = false;
    for (const OrdSet& c : pool.candidates)
        if (c == w) has_witness = true;
    CHECK(has_witness);
    for (std::size_t i = 0; i < pool.candidates.size(); ++i)
        for (std::size_t j = i + 1; j < pool.candidates.size(); ++j)
            CHECK(!(pool.candidates[i] == pool.candidates[j]));
}
