#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "rreal/realizability.hpp"

using namespace rreal;

namespace {

RealizerPtr random_tree(std::mt19937_64& rng, int depth) {
    int pick = depth <= 0 ? int(rng() % 2) : int(rng() % 5);
    switch (pick) {
        case 0: return Realizer::mkempty();
        case 1: {
            OrdSet s;
            for (int i = 0; i < 5; ++i)
                if (rng() % 2) s.insert(Ordinal::fin(i));
            return Realizer::mkleaf(s);
        }
        case 2:
            return Realizer::mkpair(random_tree(rng, depth - 1),
                                    random_tree(rng, depth - 1));
        case 3:
            return Realizer::mkchoice(int(rng() % 2),
                                      random_tree(rng, depth - 1));
        default: {
            OrdSet p;
            if (rng() % 2) p.insert(Ordinal::fin(rng() % 4));
            return Realizer::mkprog_text("halt 1", p);
        }
    }
}

}  // namespace

TEST_CASE("empty realizer proves a true atomic sentence") {
    CheckContext ctx = make_context(2);
    CHECK(check(Realizer::mkempty(), parse_formula("{} = {}"), ctx).kind ==
          CheckVerdict::Realized);
    CHECK(check(Realizer::mkempty(), parse_formula("{} in {{}}"), ctx).kind ==
          CheckVerdict::Realized);
}

TEST_CASE("choice realizers pick a disjunct") {
    CheckContext ctx = make_context(2);
    FormulaPtr f = parse_formula("({} = {}) or ({} in {})");
    CHECK(check(Realizer::mkchoice(0, Realizer::mkempty()), f, ctx).kind ==
          CheckVerdict::Realized);
    // choosing the false disjunct refutes
    CHECK(check(Realizer::mkchoice(1, Realizer::mkempty()), f, ctx).kind ==
          CheckVerdict::Refuted);
}

TEST_CASE("false atomic sentences are refuted under any candidate") {
    CheckContext ctx = make_context(2);
    FormulaPtr f = parse_formula("{} in {}");
    for (const RealizerPtr& r : refutation_candidates())
        CHECK(check(r, f, ctx).kind == CheckVerdict::Refuted);
}

TEST_CASE("pair realizers split conjunctions") {
    CheckContext ctx = make_context(2);
    FormulaPtr f = parse_formula("({} = {}) and ({} in {{}})");
    RealizerPtr ok = Realizer::mkpair(Realizer::mkempty(), Realizer::mkempty());
    CHECK(check(ok, f, ctx).kind == CheckVerdict::Realized);
    FormulaPtr bad = parse_formula("({} = {}) and ({} in {})");
    CHECK(check(ok, bad, ctx).kind == CheckVerdict::Refuted);
}

TEST_CASE("canonical realizers for closed Delta0 truths") {
    CheckContext ctx = make_context(2);
    RealizerPtr r = canonical_delta0_realizer(parse_formula("{} = {}"));
    CHECK(realizer_eq(r, Realizer::mkempty()));
    CHECK(check(r, parse_formula("{} = {}"), ctx).kind ==
          CheckVerdict::Realized);

    CHECK_THROWS_AS(canonical_delta0_realizer(parse_formula("{} in {}")),
                    NotTrue);

    std::vector<std::string> truths = {
        "({} = {}) and ({} in {{}})",
        "({} in {}) or ({{}} = {{}})",
        "(not ({} in {}))",
        "(all z in {{}})(z = {})",
        "(ex z in {{},{{}}})(z = {{}})",
        "({} in {}) -> ({} in {})",
    };
    for (const std::string& t : truths) {
        FormulaPtr f = parse_formula(t);
        CHECK(check(canonical_delta0_realizer(f), f, ctx).kind ==
              CheckVerdict::Realized);
    }
}

TEST_CASE("realizer_for_true handles quantified truths") {
    CheckContext ctx = make_context(2);
    std::vector<std::string> truths = {
        "(all x)(x = x)",
        "(ex x)({} in x)",
        "(all x in {{}})(x = {})",
        "(ex x in {{}})(x = {})",
    };
    for (const std::string& t : truths) {
        FormulaPtr f = parse_formula(t);
        RealizerPtr r = realizer_for_true(f, ctx.universe);
        ctx.register_realizer(f, r);
        CHECK(check(r, f, ctx).kind == CheckVerdict::Realized);
    }
}

TEST_CASE("serialize/deserialize is the identity on realizer trees") {
    std::mt19937_64 rng(0x5e71a1);
    for (int t = 0; t < 1000; ++t) {
        RealizerPtr r = random_tree(rng, 5);
        RealizerPtr back = deserialize(serialize(r));
        CHECK(realizer_eq(r, back));
    }
}

TEST_CASE("deserialize rejects malformed blobs") {
    OrdSet junk;
    junk.insert(godel_pair(Ordinal::fin(9), Ordinal::fin(0)));
    CHECK_THROWS_AS(deserialize(junk), MalformedSerialization);
}

TEST_CASE("verdicts are ordered Refuted over Unknown over Realized") {
    CheckContext ctx = make_context(2);
    FormulaPtr f = parse_formula("(ex x)(x = x)");
    // wrong realizer shape for a quantifier refutes the candidate outright
    CHECK(check(Realizer::mkempty(), f, ctx).kind == CheckVerdict::Refuted);
    // a program that accepts nothing leaves the claim Unknown
    RealizerPtr mute = Realizer::mkprog_text("halt 0");
    CHECK(check(mute, f, ctx).kind == CheckVerdict::Unknown);
    // an Unknown conjunct merged with a refuted one collapses to Refuted
    FormulaPtr g = parse_formula("((ex x)(x = x)) and ({} in {})");
    RealizerPtr pr = Realizer::mkpair(mute, Realizer::mkempty());
    CHECK(check(pr, g, ctx).kind == CheckVerdict::Refuted);
    // and merged with a realized one stays Unknown
    FormulaPtr h = parse_formula("((ex x)(x = x)) and ({} = {})");
    RealizerPtr ph = Realizer::mkpair(mute, Realizer::mkempty());
    CHECK(check(ph, h, ctx).kind == CheckVerdict::Unknown);
}
