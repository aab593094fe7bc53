#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "rreal/formula.hpp"

using namespace rreal;

TEST_CASE("formula parse/print round trip") {
    std::vector<std::string> texts = {
        "x in y",
        "x = {}",
        "(all x in X)(x = {})",
        "(ex y)((y = {}) and ({} in y))",
        "(all x)(ex y)((all z in y)(z in x))",
        "(not (x = y)) -> (x in y)",
        "(x = y) <-> (y = x)",
        "(ex w in {{}})(w = {})",
    };
    for (const std::string& t : texts) {
        FormulaPtr f = parse_formula(t);
        FormulaPtr g = parse_formula(print_formula(f));
        CHECK(formula_eq(f, g));
    }
    CHECK_THROWS_AS(parse_formula("(all x"), ParseError);
    CHECK_THROWS_AS(parse_formula("x ="), ParseError);
}

TEST_CASE("classification of the spec levels") {
    CHECK(classify(parse_formula("(all x in X)(x = {})")).str() == "Delta0");
    CHECK(classify(parse_formula("x in y")).str() == "Delta0");
    CHECK(classify(parse_formula("(ex y)((all z in y)(z in x))")).str() ==
          "Sigma1");
    CHECK(classify(parse_formula("(all x)((ex z in x)(z = z))")).str() ==
          "Pi1");
    CHECK(classify(parse_formula("(all x)(ex y)((all z in y)(z in x))")).str() ==
          "Pi2");
    CHECK(classify(parse_formula(
                       "((all x)(x = x)) and ((ex y)(y = y))"))
              .str() == "Unclassified");
}

TEST_CASE("free variables and substitution") {
    FormulaPtr f = parse_formula("(all x in y)((x in z) or (x = y))");
    std::set<std::string> fv = free_vars(f);
    CHECK(fv == std::set<std::string>{"y", "z"});

    FormulaPtr g = substitute(f, "z", Term::mklit(hf_empty()));
    CHECK(free_vars(g) == std::set<std::string>{"y"});
    // bound occurrences are untouched
    FormulaPtr h = substitute(f, "x", Term::mklit(hf_empty()));
    CHECK(formula_eq(h, f));
}

TEST_CASE("free_for detects capture") {
    FormulaPtr f = parse_formula("(ex y)(x in y)");
    CHECK(!free_for(Term::mkvar("y"), "x", f));
    CHECK(free_for(Term::mkvar("w"), "x", f));
    CHECK(free_for(Term::mklit(hf_empty()), "x", f));
}

TEST_CASE("bounded evaluation over set codes") {
    std::map<std::string, SetCode> env;
    env["x"] = encode(hf_empty());
    env["y"] = encode(hf_singleton(hf_empty()));
    CHECK(eval_bounded(parse_formula("x in y"), env));
    CHECK(!eval_bounded(parse_formula("y in x"), env));
    CHECK(eval_bounded(parse_formula("(all z in y)(z = x)"), env));
    CHECK(eval_bounded(parse_formula("(ex z in y)(z = {})"), env));
    CHECK(!eval_bounded(parse_formula("(ex z in x)(z = z)"), env));
    CHECK(eval_bounded(parse_formula("{} in {{},{{}}}"), {}));
    CHECK_THROWS_AS(eval_bounded(parse_formula("x in q"), env),
                    UnboundVariable);
}

TEST_CASE("universe evaluation handles unbounded quantifiers") {
    std::vector<HFSet> uni = hf_universe(2);
    CHECK(eval_over_universe(parse_formula("(all x)(x = x)"), uni, {}));
    CHECK(eval_over_universe(parse_formula("(ex x)({} in x)"), uni, {}));
    CHECK(!eval_over_universe(parse_formula("(all x)({} in x)"), uni, {}));
    std::map<std::string, HFSet> env{{"y", hf_singleton(hf_empty())}};
    CHECK(eval_over_universe(parse_formula("(ex x)(x in y)"), uni, env));
}

TEST_CASE("the two evaluators agree on closed Delta0 sentences") {
    std::vector<HFSet> uni = hf_universe(2);
    std::mt19937_64 rng(0xf0a3);
    std::vector<std::string> shapes = {
        "A in B",    "A = B",         "(all z in A)(z in B)",
        "(ex z in A)(z = B)", "(A = B) or (A in B)",
        "(not (A in B)) and (A = A)"};
    int tried = 0;
    for (const std::string& shape : shapes)
        for (int t = 0; t < 40; ++t) {
            const HFSet& a = uni[rng() % uni.size()];
            const HFSet& b = uni[rng() % uni.size()];
            FormulaPtr f = substitute(
                substitute(parse_formula(shape), "A", Term::mklit(a)), "B",
                Term::mklit(b));
            CHECK(eval_bounded(f, {}) == eval_over_universe(f, {}, {}));
            ++tried;
        }
    CHECK(tried == 240);
}

TEST_CASE("universal closure binds exactly the free variables") {
    FormulaPtr f = parse_formula("(x in y) or (x = z)");
    FormulaPtr c = universal_closure(f);
    CHECK(free_vars(c).empty());
    CHECK(c->kind == Formula::ForAll);
    FormulaPtr closed = parse_formula("{} = {}");
    CHECK(formula_eq(universal_closure(closed), closed));
}
