#include <catch2/catch_amalgamated.hpp>

#include "rreal/kp.hpp"

using namespace rreal;

namespace {

// Register the construction's auxiliary realizers, then check the emission.
CheckVerdict::Kind checked(EmissionResult& em, CheckContext& ctx) {
    // anonymous auxiliaries (null formula) are witness programs, not
    // antecedents; only named ones join the suite
    for (auto& [f, r] : em.auxiliaries)
        if (f) ctx.register_realizer(f, r);
    ctx.register_realizer(em.formula, em.realizer);
    return check(em.realizer, em.formula, ctx).kind;
}

// The emitted witness must be uniquely recognized within its mutation pool.
bool unique_witness_by(const EmissionResult& em, const RealizerPtr& prog,
                       const OrdSet& base) {
    REQUIRE(prog->kind == Realizer::ProgParam);
    Recognizer r = Recognizer::from_macro_text(
        ProgramRegistry::instance().text_of(prog->godel), prog->parameter);
    RecognitionVerdict v =
        test_recognizer(r, em.mutation_pool, base, 1000000);
    if (v.kind != RecognitionVerdict::Recognizes) return false;
    // the composite's package is the last-registered pool entry shape;
    // compare against the named "package" witness
    for (const auto& [name, w] : em.witnesses)
        if (name == "package") return v.witness == w;
    return false;
}

bool unique_witness(const EmissionResult& em, const OrdSet& base) {
    return unique_witness_by(em, em.realizer, base);
}

HFSet hf(const std::string& t) { return parse_hfset(t); }

}  // namespace

TEST_CASE("empty set axiom") {
    CheckContext ctx = make_context(1);
    AxiomInstance ax;
    ax.kind = AxiomInstance::EmptySet;
    EmissionResult em = emit_basic(ax);
    CHECK(em.witnesses[0].second == encode(hf_empty()).code);
    CHECK(checked(em, ctx) == CheckVerdict::Realized);
    CHECK(unique_witness(em, OrdSet{}));
}

TEST_CASE("pairing axiom on {} and {{}}") {
    CheckContext ctx = make_context(1);
    AxiomInstance ax;
    ax.kind = AxiomInstance::Pairing;
    ax.x = hf_empty();
    ax.y = hf_singleton(hf_empty());
    EmissionResult em = emit_basic(ax);
    CHECK(em.witnesses[0].second == encode(hf_pair(ax.x, ax.y)).code);
    CHECK(checked(em, ctx) == CheckVerdict::Realized);
    CHECK(unique_witness(em, OrdSet{}));
}

TEST_CASE("union axiom flattens one level") {
    CheckContext ctx = make_context(1);
    AxiomInstance ax;
    ax.kind = AxiomInstance::Union;
    ax.X = hf("{{{}},{{{}}}}");
    EmissionResult em = emit_basic(ax);
    CHECK(em.witnesses[0].second == encode(hf("{{},{{}}}")).code);
    CHECK(checked(em, ctx) == CheckVerdict::Realized);
    CHECK(unique_witness(em, OrdSet{}));
}

TEST_CASE("extensionality axiom") {
    CheckContext ctx = make_context(2);
    AxiomInstance ax;
    ax.kind = AxiomInstance::Extensionality;
    EmissionResult em = emit_basic(ax);
    for (const HFSet& u : ctx.universe) {
        FormulaPtr ante = substitute(
            substitute(parse_formula("(all z)(z in x <-> z in y)"), "x",
                       Term::mklit(u)),
            "y", Term::mklit(u));
        ctx.register_realizer(ante, realizer_for_true(ante, ctx.universe));
    }
    CHECK(checked(em, ctx) == CheckVerdict::Realized);
}

TEST_CASE("infinity axiom is structural") {
    AxiomInstance ax;
    ax.kind = AxiomInstance::Infinity;
    EmissionResult em = emit_basic(ax);
    CHECK(!em.checkable);
    const OrdSet& code = em.witnesses[0].second;
    // the code orders an omega-chain: i in j for all i < j below the probe
    for (std::uint64_t i = 0; i < 5; ++i)
        for (std::uint64_t j = i + 1; j < 5; ++j)
            CHECK(code.contains(godel_pair(Ordinal::fin(i), Ordinal::fin(j))));
    CHECK(unique_witness(em, OrdSet{}));
}

TEST_CASE("separation filters by a Delta0 body") {
    struct Case {
        const char* phi;
        const char* X;
        const char* want;
    } cases[] = {
        {"x = {}", "{{},{{}}}", "{{}}"},
        {"x = x", "{{},{{}}}", "{{},{{}}}"},
        {"x in {}", "{{},{{}}}", "{}"},
        {"(ex w in x)(w = w)", "{{},{{}},{{{}}}}", "{{{}},{{{}}}}"},
    };
    for (const Case& c : cases) {
        CheckContext ctx = make_context(2);
        EmissionResult em = emit_separation(parse_formula(c.phi), {}, hf(c.X));
        CHECK(em.witnesses[0].second == encode(hf(c.want)).code);
        CHECK(checked(em, ctx) == CheckVerdict::Realized);
        CHECK(unique_witness(em, OrdSet{}));
    }
    CHECK_THROWS_AS(
        emit_separation(parse_formula("(ex y)(x in y)"), {}, hf("{{}}")),
        NotDelta0);
}

TEST_CASE("replacement collects images") {
    struct Case {
        const char* phi;
        const char* X;
        const char* image;
    } cases[] = {
        {"y = x", "{{},{{}}}", "{{},{{}}}"},       // identity map
        {"y = {}", "{{},{{}}}", "{{}}"},           // constant map
        {"y = x", "{}", "{}"},                     // empty domain
    };
    for (const Case& c : cases) {
        CheckContext ctx = make_context(2);
        FormulaPtr phi = parse_formula(c.phi);
        FormulaPtr full = replacement_formula(phi, hf(c.X), "x", "y");
        RealizerPtr ante = realizer_for_true(full->a, ctx.universe);
        EmissionResult em = emit_replacement(phi, {}, hf(c.X), ante, ctx);
        CHECK(em.witnesses[0].second == encode(hf(c.image)).code);
        CHECK(checked(em, ctx) == CheckVerdict::Realized);
        OrdSet base =
            interleave(serialize(ante), interleave(OrdSet{}, OrdSet{}));
        CHECK(unique_witness(em, base));
    }
}

TEST_CASE("epsilon induction builds the descent tables") {
    CheckContext ctx = make_context(3);
    FormulaPtr phi = parse_formula("a = a");
    RealizerPtr prem = realizer_for_true(induction_premise_formula(phi, "a"),
                                         ctx.universe);
    HFSet y = hf("{{}}");
    EmissionResult em = emit_induction(phi, {}, y, prem, ctx);
    CHECK(checked(em, ctx) == CheckVerdict::Realized);
    // T enumerates tc({y}) = {{{}}, {}}
    CHECK(unpack_list(em.witnesses[0].second).size() ==
          hf_tc_with_self(y).size());
    // the verifier program rides along as an anonymous auxiliary
    REQUIRE(!em.auxiliaries.empty());
    RealizerPtr verifier = em.auxiliaries.back().second;
    OrdSet base = interleave(serialize(prem), OrdSet{});
    CHECK(unique_witness_by(em, verifier, base));
}

TEST_CASE("induction premise must be a program realizer") {
    CheckContext ctx = make_context(2);
    CHECK_THROWS_AS(emit_induction(parse_formula("a = a"), {}, hf("{{}}"),
                                   Realizer::mkempty(), ctx),
                    PremiseNotRealized);
}

TEST_CASE("choice picks one pair per member") {
    CheckContext ctx = make_context(2);
    HFSet X = hf("{{{}},{{{}}}}");
    FormulaPtr prem = Formula::bquant(
        Formula::ForAllIn, "y", Term::mklit(X),
        Formula::bquant(Formula::ExistsIn, "z", Term::mkvar("y"),
                        Formula::atom(Formula::Equal, Term::mkvar("z"),
                                      Term::mkvar("z"))));
    RealizerPtr rp = realizer_for_true(prem, ctx.universe);
    EmissionResult em = emit_choice(X, rp, ctx);
    CHECK(checked(em, ctx) == CheckVerdict::Realized);
    // both members are singletons, so the choice function is forced
    HFSet f = decode(SetCode{em.witnesses[0].second,
                             infer_domain(em.witnesses[0].second)});
    HFSet want;
    want.insert(hf_kuratowski(hf("{{}}"), hf("{}")));
    want.insert(hf_kuratowski(hf("{{{}}}"), hf("{{}}")));
    CHECK(f == want);
    OrdSet base = interleave(serialize(rp), interleave(OrdSet{}, OrdSet{}));
    CHECK(unique_witness(em, base));
}

TEST_CASE("choice rejects domains with an empty member") {
    CheckContext ctx = make_context(2);
    RealizerPtr dummy = Realizer::mkprog_text("halt 1", OrdSet{});
    CHECK_THROWS_AS(emit_choice(hf("{{}}"), dummy, ctx), EmptyMember);
}
