#include <catch2/catch_amalgamated.hpp>

#include "rreal/proofcalc.hpp"

using namespace rreal;

namespace {

const char* T = "{} = {}";
const char* T2 = "{} in {{}}";

SchemaBindings bind(
    std::initializer_list<std::pair<std::string, const char*>> fs,
    std::initializer_list<std::pair<std::string, const char*>> vs = {}) {
    SchemaBindings b;
    for (auto& [k, v] : fs) b.formulas[k] = parse_formula(v);
    for (auto& [k, v] : vs) b.vars[k] = v;
    return b;
}

}  // namespace

TEST_CASE("every schema instance checks as realized") {
    // propositional schemata over true atomic sentences
    {
        CheckContext ctx = make_context(2);
        SchemaBindings b = bind({{"phi", T}, {"psi", T2}});
        CHECK(check(realize_axiom("P1", b), schema_formula("P1", b), ctx).kind ==
              CheckVerdict::Realized);
    }
    {
        CheckContext ctx = make_context(2);
        SchemaBindings b = bind({{"phi", T}, {"psi", T2}, {"xi", T}});
        FormulaPtr f = schema_formula("P2", b);
        ctx.register_realizer(f->a, realizer_for_true(f->a, ctx.universe));
        ctx.register_realizer(f->b->a,
                              realizer_for_true(f->b->a, ctx.universe));
        CHECK(check(realize_axiom("P2", b), f, ctx).kind ==
              CheckVerdict::Realized);
    }
    {
        CheckContext ctx = make_context(2);
        SchemaBindings b = bind({{"phi", T}, {"psi", T2}});
        CHECK(check(realize_axiom("P3", b), schema_formula("P3", b), ctx).kind ==
              CheckVerdict::Realized);
    }
    for (const char* side : {"left", "right"}) {
        CheckContext ctx = make_context(2);
        SchemaBindings b = bind({{"phi", T}, {"psi", T2}}, {{"side", side}});
        FormulaPtr f = schema_formula("P4", b);
        ctx.register_realizer(f->a, realizer_for_true(f->a, ctx.universe));
        CHECK(check(realize_axiom("P4", b), f, ctx).kind ==
              CheckVerdict::Realized);
    }
    for (const char* side : {"left", "right"}) {
        CheckContext ctx = make_context(2);
        SchemaBindings b = bind({{"phi", T}, {"psi", T2}}, {{"side", side}});
        CHECK(check(realize_axiom("P5", b), schema_formula("P5", b), ctx).kind ==
              CheckVerdict::Realized);
    }
    {
        CheckContext ctx = make_context(2);
        SchemaBindings b = bind({{"phi", T}, {"psi", T2}, {"xi", T}});
        FormulaPtr f = schema_formula("P6", b);
        ctx.register_realizer(f->a, realizer_for_true(f->a, ctx.universe));
        ctx.register_realizer(f->b->a,
                              realizer_for_true(f->b->a, ctx.universe));
        ctx.register_realizer(f->b->b->a,
                              realizer_for_true(f->b->b->a, ctx.universe));
        CHECK(check(realize_axiom("P6", b), f, ctx).kind ==
              CheckVerdict::Realized);
    }
    {
        CheckContext ctx = make_context(2);
        SchemaBindings b = bind({{"phi", T}, {"psi", T2}});
        FormulaPtr f = schema_formula("P7", b);
        ctx.register_realizer(f->a, realizer_for_true(f->a, ctx.universe));
        CHECK(check(realize_axiom("P7", b), f, ctx).kind ==
              CheckVerdict::Realized);
    }
    {
        CheckContext ctx = make_context(2);
        SchemaBindings b = bind({{"phi", T}, {"psi", T2}});
        CHECK(check(realize_axiom("P8", b), schema_formula("P8", b), ctx).kind ==
              CheckVerdict::Realized);
    }
    // quantifier schemata
    {
        CheckContext ctx = make_context(2);
        SchemaBindings b = bind({{"phi", "x = x"}}, {{"x", "x"}, {"t", "z"}});
        FormulaPtr all = parse_formula("(all x)(x = x)");
        ctx.register_realizer(all, realizer_for_true(all, ctx.universe));
        CHECK(check(realize_axiom("Q1", b), schema_formula("Q1", b), ctx).kind ==
              CheckVerdict::Realized);
    }
    {
        CheckContext ctx = make_context(2);
        SchemaBindings b = bind({{"phi", "x = x"}}, {{"x", "x"}, {"t", "z"}});
        CHECK(check(realize_axiom("Q2", b), schema_formula("Q2", b), ctx).kind ==
              CheckVerdict::Realized);
    }
    {
        CheckContext ctx = make_context(2);
        SchemaBindings b = bind({}, {{"x", "x"}});
        CHECK(check(realize_axiom("Q3", b), schema_formula("Q3", b), ctx).kind ==
              CheckVerdict::Realized);
    }
    {
        CheckContext ctx = make_context(2);
        SchemaBindings b =
            bind({{"phi", "x = x"}}, {{"x", "x"}, {"s", "a"}, {"t", "b"}});
        CHECK(check(realize_axiom("Q4", b), schema_formula("Q4", b), ctx).kind ==
              CheckVerdict::Realized);
    }
}

TEST_CASE("unknown schema ids are rejected") {
    SchemaBindings b = bind({{"phi", T}});
    CHECK_THROWS_AS(schema_formula("P9", b), MalformedInstance);
    CHECK_THROWS_AS(realize_axiom("Z1", b), MalformedInstance);
}

TEST_CASE("the five-step identity proof checks and extracts") {
    std::string text =
        "axiom P2 phi=\"" + std::string(T) + "\" psi=\"(" + T + ") -> (" + T +
        ")\" xi=\"" + T + "\"\n" +
        "axiom P1 phi=\"" + T + "\" psi=\"(" + T + ") -> (" + T + ")\"\n" +
        "mp 2 1\n" +
        "axiom P1 phi=\"" + T + "\" psi=\"" + T + "\"\n" +
        "mp 4 3\n";
    Proof p = parse_proof(text);
    ProofCheck pc = check_proof(p);
    REQUIRE(pc.valid);

    ExtractionEnv env;
    env.ctx = make_context(2);
    ExtractionResult ex = extract(p, env);
    CHECK(print_formula(ex.conclusion) ==
          print_formula(parse_formula("(" + std::string(T) + ") -> (" + T +
                                      ")")));
    CHECK(check(ex.realizer, ex.conclusion, env.ctx).kind ==
          CheckVerdict::Realized);

    // extraction is deterministic: run again and compare serializations
    ExtractionEnv env2;
    env2.ctx = make_context(2);
    Proof p2 = parse_proof(text);
    check_proof(p2);
    ExtractionResult ex2 = extract(p2, env2);
    CHECK(serialize(ex.realizer) == serialize(ex2.realizer));
}

TEST_CASE("modus ponens from premises") {
    std::string text = std::string("premise ") + T + "\n" + "premise (" + T +
                       ") -> ((" + T + ") or (" + T2 + "))\n" + "mp 1 2\n";
    Proof p = parse_proof(text);
    REQUIRE(check_proof(p).valid);
    ExtractionEnv env;
    env.ctx = make_context(2);
    for (int i = 0; i < 2; ++i)
        env.premise_realizers[print_formula(p.steps[i].formula)] =
            realizer_for_true(p.steps[i].formula, env.ctx.universe);
    ExtractionResult ex = extract(p, env);
    CHECK(check(ex.realizer, ex.conclusion, env.ctx).kind ==
          CheckVerdict::Realized);
}

TEST_CASE("generalized implication introduction") {
    std::string text =
        std::string("premise (") + T + ") -> (y = y)\n" + "genimp 1 x y\n";
    Proof p = parse_proof(text);
    REQUIRE(check_proof(p).valid);
    ExtractionEnv env;
    env.ctx = make_context(2);
    env.premise_realizers[print_formula(p.steps[0].formula)] =
        realizer_for_true(p.steps[0].formula, env.ctx.universe);
    ExtractionResult ex = extract(p, env);
    CHECK(check(ex.realizer, ex.conclusion, env.ctx).kind ==
          CheckVerdict::Realized);
}

TEST_CASE("existential elimination") {
    std::string text =
        std::string("premise (y = y) -> (") + T + ")\n" + "exelim 1 x y\n";
    Proof p = parse_proof(text);
    REQUIRE(check_proof(p).valid);
    ExtractionEnv env;
    env.ctx = make_context(2);
    env.premise_realizers[print_formula(p.steps[0].formula)] =
        realizer_for_true(p.steps[0].formula, env.ctx.universe);
    FormulaPtr exf = parse_formula("(ex x)(x = x)");
    env.ctx.register_realizer(exf, realizer_for_true(exf, env.ctx.universe));
    ExtractionResult ex = extract(p, env);
    CHECK(check(ex.realizer, ex.conclusion, env.ctx).kind ==
          CheckVerdict::Realized);
}

TEST_CASE("invalid proofs are rejected") {
    // modus ponens with mismatched antecedent
    Proof p1 = parse_proof(std::string("premise ") + T + "\npremise (" + T2 +
                           ") -> (" + T + ")\nmp 1 2\n");
    CHECK(!check_proof(p1).valid);

    // genimp with the generalized variable free in the antecedent
    Proof p2 = parse_proof("premise (y = y) -> (y in y)\ngenimp 1 x y\n");
    CHECK(!check_proof(p2).valid);

    // out-of-range step references
    CHECK_THROWS_AS(
        [&] {
            Proof p3 = parse_proof(std::string("premise ") + T + "\nmp 1 5\n");
            return check_proof(p3);
        }(),
        Error);

    // mp on a non-implication
    Proof p4 = parse_proof(std::string("premise ") + T + "\npremise " + T2 +
                           "\nmp 1 2\n");
    CHECK(!check_proof(p4).valid);

    // malformed proof text
    CHECK_THROWS_AS(parse_proof("axiom\n"), ParseError);
    CHECK_THROWS_AS(parse_proof("mp one two\n"), ParseError);
}

TEST_CASE("proof files allow comments and blank lines") {
    std::string text = std::string("# tautology\n\npremise ") + T + "\n";
    Proof p = parse_proof(text);
    REQUIRE(p.steps.size() == 1);
    CHECK(check_proof(p).valid);
}

TEST_CASE("extraction requires realized premises") {
    Proof p = parse_proof(std::string("premise ") + T + "\npremise (" + T +
                          ") -> (" + T2 + ")\nmp 1 2\n");
    REQUIRE(check_proof(p).valid);
    ExtractionEnv env;
    env.ctx = make_context(2);
    // no premise realizers supplied
    CHECK_THROWS_AS(extract(p, env), PremiseNotRealized);
}
