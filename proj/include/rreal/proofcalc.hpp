#pragma once

// Intuitionistic Hilbert calculus for the epsilon-language: proof
// representation and checking, realizer constructors for the 12 axiom
// schemata, realizer transformers for the 3 deduction rules, and the
// extractor folding both over a proof.
//
// The schema programs are faithful renderings of the proof cases: each one
// reads the serialized antecedent realizer from the oracle and recognizes
// (accepts exactly, and writes out for harvesting) the package of the
// consequent realizer it can compute from it.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rreal/error.hpp"
#include "rreal/formula.hpp"
#include "rreal/kp.hpp"
#include "rreal/ordset.hpp"
#include "rreal/otm.hpp"
#include "rreal/realizability.hpp"
#include "rreal/realizer.hpp"
#include "rreal/recognizer.hpp"

namespace rreal {

// --- proof representation ------------------------------------------------

struct SchemaBindings {
    std::map<std::string, FormulaPtr> formulas;  // phi, psi, xi
    std::map<std::string, std::string> vars;     // x, y, s, t, side
};

struct ProofStep {
    enum Kind { Premise, Axiom, Rule } kind = Premise;
    FormulaPtr formula;  // premise formula; conclusions filled by check_proof
    std::string schema;  // Axiom: P1..P8, Q1..Q4
    SchemaBindings bindings;
    std::string rule;               // Rule: mp, genimp, exelim
    std::vector<std::size_t> refs;  // 0-based step references
    std::string var_x, var_y;       // genimp/exelim side data
};

struct Proof {
    std::vector<ProofStep> steps;
};

struct ProofCheck {
    bool valid = true;
    std::size_t step = 0;  // 1-based, when invalid
    std::string reason;

    std::string str() const {
        return valid ? "valid"
                     : "invalid at step " + std::to_string(step) + ": " + reason;
    }
};

// --- schema instance formulas --------------------------------------------

namespace detail {

inline FormulaPtr need_formula(const SchemaBindings& b, const std::string& k) {
    auto it = b.formulas.find(k);
    if (it == b.formulas.end())
        throw MalformedInstance("schema binding missing formula '" + k + "'");
    return it->second;
}

inline std::string need_var(const SchemaBindings& b, const std::string& k) {
    auto it = b.vars.find(k);
    if (it == b.vars.end())
        throw MalformedInstance("schema binding missing variable '" + k + "'");
    return it->second;
}

inline FormulaPtr imp(const FormulaPtr& a, const FormulaPtr& b) {
    return Formula::binop(Formula::Implies, a, b);
}

}  // namespace detail

inline FormulaPtr schema_formula(const std::string& id,
                                 const SchemaBindings& b) {
    using detail::imp;
    using detail::need_formula;
    using detail::need_var;
    if (id == "P1") {
        FormulaPtr phi = need_formula(b, "phi"), psi = need_formula(b, "psi");
        return imp(phi, imp(psi, phi));
    }
    if (id == "P2") {
        FormulaPtr phi = need_formula(b, "phi"), psi = need_formula(b, "psi"),
                   xi = need_formula(b, "xi");
        return imp(imp(phi, imp(psi, xi)), imp(imp(phi, psi), imp(phi, xi)));
    }
    if (id == "P3") {
        FormulaPtr phi = need_formula(b, "phi"), psi = need_formula(b, "psi");
        return imp(phi, imp(psi, Formula::binop(Formula::And, phi, psi)));
    }
    if (id == "P4") {
        FormulaPtr phi = need_formula(b, "phi"), psi = need_formula(b, "psi");
        std::string side = need_var(b, "side");
        if (side != "left" && side != "right")
            throw MalformedInstance("P4 side must be left or right");
        return imp(Formula::binop(Formula::And, phi, psi),
                   side == "left" ? phi : psi);
    }
    if (id == "P5") {
        FormulaPtr phi = need_formula(b, "phi"), psi = need_formula(b, "psi");
        std::string side = need_var(b, "side");
        if (side != "left" && side != "right")
            throw MalformedInstance("P5 side must be left or right");
        return imp(side == "left" ? phi : psi,
                   Formula::binop(Formula::Or, phi, psi));
    }
    if (id == "P6") {
        FormulaPtr phi = need_formula(b, "phi"), psi = need_formula(b, "psi"),
                   xi = need_formula(b, "xi");
        return imp(Formula::binop(Formula::Or, phi, psi),
                   imp(imp(phi, xi), imp(imp(psi, xi), xi)));
    }
    if (id == "P7") {
        FormulaPtr phi = need_formula(b, "phi"), psi = need_formula(b, "psi");
        return imp(imp(phi, psi),
                   imp(imp(phi, Formula::mknot(psi)), Formula::mknot(phi)));
    }
    if (id == "P8") {
        FormulaPtr phi = need_formula(b, "phi"), psi = need_formula(b, "psi");
        return imp(phi, imp(Formula::mknot(phi), psi));
    }
    if (id == "Q1" || id == "Q2") {
        FormulaPtr phi = need_formula(b, "phi");
        std::string x = need_var(b, "x"), t = need_var(b, "t");
        if (!free_for(Term::mkvar(t), x, phi))
            throw MalformedInstance(id + ": " + t + " is not free for " + x);
        FormulaPtr inst = substitute(phi, x, Term::mkvar(t));
        if (id == "Q1") return imp(Formula::quant(Formula::ForAll, x, phi), inst);
        return imp(inst, Formula::quant(Formula::Exists, x, phi));
    }
    if (id == "Q3") {
        std::string x = need_var(b, "x");
        return Formula::atom(Formula::Equal, Term::mkvar(x), Term::mkvar(x));
    }
    if (id == "Q4") {
        FormulaPtr phi = need_formula(b, "phi");
        std::string x = need_var(b, "x"), s = need_var(b, "s"),
                    t = need_var(b, "t");
        if (!free_for(Term::mkvar(s), x, phi) ||
            !free_for(Term::mkvar(t), x, phi))
            throw MalformedInstance("Q4: substituents not free for " + x);
        return imp(Formula::atom(Formula::Equal, Term::mkvar(s), Term::mkvar(t)),
                   imp(substitute(phi, x, Term::mkvar(s)),
                       substitute(phi, x, Term::mkvar(t))));
    }
    throw MalformedInstance("unknown schema " + id);
}

// --- proof checking ------------------------------------------------------

inline ProofCheck check_proof(Proof& p) {
    auto fail = [](std::size_t i, std::string why) {
        return ProofCheck{false, i + 1, std::move(why)};
    };
    for (std::size_t i = 0; i < p.steps.size(); ++i) {
        ProofStep& st = p.steps[i];
        for (std::size_t r : st.refs)
            if (r >= i) return fail(i, "forward or self reference");
        switch (st.kind) {
            case ProofStep::Premise:
                if (!st.formula) return fail(i, "premise without formula");
                break;
            case ProofStep::Axiom:
                try {
                    st.formula = schema_formula(st.schema, st.bindings);
                } catch (const MalformedInstance& e) {
                    return fail(i, e.what());
                }
                break;
            case ProofStep::Rule: {
                if (st.rule == "mp") {
                    if (st.refs.size() != 2) return fail(i, "mp needs 2 operands");
                    const FormulaPtr& a = p.steps[st.refs[0]].formula;
                    const FormulaPtr& ab = p.steps[st.refs[1]].formula;
                    if (ab->kind != Formula::Implies)
                        return fail(i, "mp: second operand is not an implication");
                    if (!formula_eq(ab->a, a))
                        return fail(i, "mp: antecedent mismatch");
                    st.formula = ab->b;
                } else if (st.rule == "genimp" || st.rule == "exelim") {
                    if (st.refs.size() != 1)
                        return fail(i, st.rule + " needs 1 operand");
                    const FormulaPtr& prem = p.steps[st.refs[0]].formula;
                    if (prem->kind != Formula::Implies)
                        return fail(i, st.rule + ": operand is not an implication");
                    const std::string& x = st.var_x;
                    const std::string& y = st.var_y;
                    FormulaPtr side = st.rule == "genimp" ? prem->a : prem->b;
                    FormulaPtr theta = st.rule == "genimp" ? prem->b : prem->a;
                    FormulaPtr phi = substitute(theta, y, Term::mkvar(x));
                    if (free_vars(side).count(y))
                        return fail(i, st.rule + ": " + y + " occurs free in the side formula");
                    if (x != y && free_vars(phi).count(y))
                        return fail(i, st.rule + ": " + y + " occurs free after renaming");
                    if (!free_for(Term::mkvar(y), x, phi))
                        return fail(i, st.rule + ": " + y + " is not free for " + x);
                    if (!formula_eq(substitute(phi, x, Term::mkvar(y)), theta))
                        return fail(i, st.rule + ": operand does not match the schema");
                    if (st.rule == "genimp")
                        st.formula = detail::imp(
                            side, Formula::quant(Formula::ForAll, x, phi));
                    else
                        st.formula = detail::imp(
                            Formula::quant(Formula::Exists, x, phi), side);
                } else {
                    return fail(i, "unknown rule " + st.rule);
                }
                break;
            }
        }
    }
    if (p.steps.empty()) return {false, 0, "empty proof"};
    return {};
}

// --- assembly builders for schema programs -------------------------------

namespace detail {

struct Asm {
    std::string text;
    void l(const std::string& s) { text += s + "\n"; }
    static std::string R(int r) { return "r" + std::to_string(r); }
    // rD := serialization of ProgParam(g, param held in rP); clobbers rT.
    void progser(int rD, std::uint64_t g, int rP, int rT) {
        l("load " + R(rT) + " {" + std::to_string(g) + "}");
        l("ilv " + R(rD) + " " + R(rT) + " " + R(rP));
        l("load " + R(rT) + " {4}");
        l("ilv " + R(rD) + " " + R(rT) + " " + R(rD));
    }
    void eqser(int rD, int rP, int rT) { progser(rD, eqcand_godel(), rP, rT); }
    // rD := ilv(rS, {}); clobbers rT.
    void package(int rD, int rS, int rT) {
        l("load " + R(rT) + " {}");
        l("ilv " + R(rD) + " " + R(rS) + " " + R(rT));
    }
    // Harvest from a program whose serialization is in rP, relative to the
    // antecedent serialization in rA: rD := output of the sub-run with
    // oracle ilv(ilv(rA, {}), {}). Clobbers rT.
    void harvest_ante(int rD, int rP, int rA, int rT) {
        l("load " + R(rT) + " {}");
        l("ilv " + R(rD) + " " + R(rA) + " " + R(rT));
        l("ilv " + R(rD) + " " + R(rD) + " " + R(rT));
        l("runsub " + R(rD) + " " + R(rP) + " " + R(rD));
    }
    // As above but against a bare code base (universal tables).
    void harvest_code(int rD, int rP, int rC, int rT) {
        l("load " + R(rT) + " {}");
        l("ilv " + R(rD) + " " + R(rC) + " " + R(rT));
        l("runsub " + R(rD) + " " + R(rP) + " " + R(rD));
    }
    // Reject when rS is empty (a failed harvest); clobbers rT.
    void need_nonempty(int rS, int rT) {
        l("load " + R(rT) + " {}");
        l("delta " + R(rS) + " " + R(rT));
        l("brt reject");
    }
    // Accept exactly the package in rPkg; clobbers rT.
    void accept(int rPkg, int rT) {
        l("writeout " + R(rPkg));
        l("orsec " + R(rT) + " 1");
        l("delta " + R(rT) + " " + R(rPkg));
        l("halt r");
    }
    void reject_block() { l("reject:"); l("halt 0"); }
};

// Passthrough: recognizes the antecedent realizer itself.
inline std::uint64_t passthru_godel() {
    static std::uint64_t g = [] {
        Asm a;
        a.l("orsec r0 00");
        a.package(1, 0, 15);
        a.accept(1, 2);
        return ProgramRegistry::instance().intern(a.text);
    }();
    return g;
}

// P1: on r, recognize the program that checks equality with r.
inline std::uint64_t p1_godel() {
    static std::uint64_t g = [] {
        Asm a;
        a.l("orsec r0 00");
        a.package(1, 0, 15);   // package_of(r)
        a.eqser(2, 1, 3);      // ser eqcand(package_of(r))
        a.package(4, 2, 15);
        a.accept(4, 5);
        return ProgramRegistry::instance().intern(a.text);
    }();
    return g;
}

// P2 inner stage: param = ilv(ser r, ser s), antecedent t; recognizes the
// xi-realizer package via the right-to-left triple of sub-recognitions.
inline std::uint64_t p2_r2_godel() {
    static std::uint64_t g = [] {
        Asm a;
        a.l("orsec r0 00");        // ser t
        a.l("param r1");
        a.l("proj r2 r1 0");       // ser r
        a.l("proj r3 r1 1");       // ser s
        a.harvest_ante(4, 2, 0, 14);  // rho0(r, t)
        a.need_nonempty(4, 14);
        a.l("proj r4 r4 0");       // ser t'
        a.harvest_ante(5, 3, 0, 14);  // rho0(s, t)
        a.need_nonempty(5, 14);
        a.l("proj r5 r5 0");       // ser s''
        a.harvest_ante(6, 4, 5, 14);  // t' relative s''
        a.need_nonempty(6, 14);
        a.accept(6, 7);
        a.reject_block();
        return ProgramRegistry::instance().intern(a.text);
    }();
    return g;
}

inline std::uint64_t p2_r1_godel() {
    static std::uint64_t g = [] {
        Asm a;
        a.l("orsec r0 00");   // ser s; re-run later, so must be runnable
        a.l("proj r2 r0 0");
        a.l("load r3 {4}");
        a.l("delta r2 r3");
        a.l("brf reject");
        a.l("param r1");      // ser r
        a.l("ilv r2 r1 r0");
        a.progser(3, p2_r2_godel(), 2, 14);
        a.package(4, 3, 15);
        a.accept(4, 5);
        a.reject_block();
        return ProgramRegistry::instance().intern(a.text);
    }();
    return g;
}

inline std::uint64_t p2_godel() {
    static std::uint64_t g = [] {
        Asm a;
        a.l("orsec r0 00");   // ser r; must be runnable, since the final
        a.l("proj r1 r0 0");  // stage re-runs it on the phi-realizer
        a.l("load r2 {4}");
        a.l("delta r1 r2");
        a.l("brf reject");
        a.progser(1, p2_r1_godel(), 0, 14);
        a.package(2, 1, 15);
        a.accept(2, 3);
        a.reject_block();
        return ProgramRegistry::instance().intern(a.text);
    }();
    return g;
}

// P3: on r then s, recognize the pair (r, s).
inline std::uint64_t p3_r1_godel() {
    static std::uint64_t g = [] {
        Asm a;
        a.l("orsec r0 00");   // ser s
        a.l("param r1");      // ser r
        a.l("ilv r2 r1 r0");  // pair payload
        a.l("load r3 {2}");
        a.l("ilv r2 r3 r2");  // ser Pair(r, s)
        a.package(4, 2, 15);
        a.accept(4, 5);
        return ProgramRegistry::instance().intern(a.text);
    }();
    return g;
}

inline std::uint64_t p3_godel() {
    static std::uint64_t g = [] {
        Asm a;
        a.l("orsec r0 00");
        a.progser(1, p3_r1_godel(), 0, 14);
        a.package(2, 1, 15);
        a.accept(2, 3);
        return ProgramRegistry::instance().intern(a.text);
    }();
    return g;
}

// P4: on the pair (r0, r1), recognize the requested component.
inline std::uint64_t p4_godel(bool left) {
    auto make = [](bool lft) {
        Asm a;
        a.l("orsec r0 00");
        a.l("proj r1 r0 0");  // tag
        a.l("load r2 {2}");
        a.l("delta r1 r2");
        a.l("brf reject");
        a.l("proj r3 r0 1");  // payload ilv(ser a, ser b)
        a.l(std::string("proj r4 r3 ") + (lft ? "0" : "1"));
        a.package(5, 4, 15);
        a.accept(5, 6);
        a.reject_block();
        return ProgramRegistry::instance().intern(a.text);
    };
    static std::uint64_t gl = make(true);
    static std::uint64_t gr = make(false);
    return left ? gl : gr;
}

// P5: on r, recognize (0, r) or (1, r).
inline std::uint64_t p5_godel(bool left) {
    auto make = [](bool lft) {
        Asm a;
        a.l("orsec r0 00");
        a.l(std::string("load r1 ") + (lft ? "{0}" : "{1}"));
        a.l("ilv r2 r1 r0");
        a.l("load r3 {3}");
        a.l("ilv r2 r3 r2");  // ser Choice(i, r)
        a.package(4, 2, 15);
        a.accept(4, 5);
        return ProgramRegistry::instance().intern(a.text);
    };
    static std::uint64_t gl = make(true);
    static std::uint64_t gr = make(false);
    return left ? gl : gr;
}

// P6 case tag 0: param = ser r'; on s realizing phi -> xi, recognize the
// realizer of (psi -> xi) -> xi that ignores its input and recognizes s'.
inline std::uint64_t p6_r1a_godel() {
    static std::uint64_t g = [] {
        Asm a;
        a.l("orsec r0 00");           // ser s
        a.l("param r1");              // ser r'
        a.harvest_ante(2, 0, 1, 14);  // s relative r' -> package(s')
        a.need_nonempty(2, 14);
        a.l("proj r2 r2 0");          // ser s'
        a.package(3, 2, 15);
        a.eqser(4, 3, 14);            // constant recognizer of s'
        a.package(5, 4, 15);
        a.accept(5, 6);
        a.reject_block();
        return ProgramRegistry::instance().intern(a.text);
    }();
    return g;
}

// P6 case tag 1 inner: param = ser r'; on u realizing psi -> xi, recognize
// the xi-realizer u yields relative to r'.
inline std::uint64_t p6_r2b_godel() {
    static std::uint64_t g = [] {
        Asm a;
        a.l("orsec r0 00");           // ser u
        a.l("param r1");              // ser r'
        a.harvest_ante(2, 0, 1, 14);
        a.need_nonempty(2, 14);
        a.accept(2, 3);
        a.reject_block();
        return ProgramRegistry::instance().intern(a.text);
    }();
    return g;
}

inline std::uint64_t p6_r1b_godel() {
    static std::uint64_t g = [] {
        Asm a;
        a.l("param r1");  // ser r' (the phi -> xi realizer is ignored)
        a.progser(2, p6_r2b_godel(), 1, 14);
        a.package(3, 2, 15);
        a.accept(3, 4);
        return ProgramRegistry::instance().intern(a.text);
    }();
    return g;
}

inline std::uint64_t p6_godel() {
    static std::uint64_t g = [] {
        Asm a;
        a.l("orsec r0 00");   // ser r, a choice realizer
        a.l("proj r1 r0 0");  // tag
        a.l("load r2 {3}");
        a.l("delta r1 r2");
        a.l("brf reject");
        a.l("proj r3 r0 1");  // ilv({i}, ser r')
        a.l("proj r4 r3 0");
        a.l("proj r5 r3 1");  // ser r'
        a.l("load r6 {0}");
        a.l("delta r4 r6");
        a.l("brf case1");
        a.progser(7, p6_r1a_godel(), 5, 14);
        a.l("jmp done");
        a.l("case1:");
        a.progser(7, p6_r1b_godel(), 5, 14);
        a.l("done:");
        a.package(8, 7, 15);
        a.accept(8, 9);
        a.reject_block();
        return ProgramRegistry::instance().intern(a.text);
    }();
    return g;
}

// P7 inner: param = ilv(ser r, ser s), antecedent t realizing phi; the
// composite chain ends in a (vacuous) realizer of 1 = 0.
inline std::uint64_t p7_r2_godel() {
    static std::uint64_t g = [] {
        Asm a;
        a.l("orsec r0 00");  // ser t
        a.l("param r1");
        a.l("proj r2 r1 0");          // ser r  (phi -> psi)
        a.l("proj r3 r1 1");          // ser s  (phi -> not psi)
        a.harvest_ante(4, 2, 0, 14);  // t' realizing psi
        a.need_nonempty(4, 14);
        a.l("proj r4 r4 0");
        a.harvest_ante(5, 3, 0, 14);  // t'' realizing not psi
        a.need_nonempty(5, 14);
        a.l("proj r5 r5 0");
        a.harvest_ante(6, 5, 4, 14);  // t'' relative t'
        a.need_nonempty(6, 14);
        a.accept(6, 7);
        a.reject_block();
        return ProgramRegistry::instance().intern(a.text);
    }();
    return g;
}

inline std::uint64_t p7_r1_godel() {
    static std::uint64_t g = [] {
        Asm a;
        a.l("orsec r0 00");   // ser s; re-run later, so must be runnable
        a.l("proj r2 r0 0");
        a.l("load r3 {4}");
        a.l("delta r2 r3");
        a.l("brf reject");
        a.l("param r1");      // ser r
        a.l("ilv r2 r1 r0");
        a.progser(3, p7_r2_godel(), 2, 14);
        a.package(4, 3, 15);
        a.accept(4, 5);
        a.reject_block();
        return ProgramRegistry::instance().intern(a.text);
    }();
    return g;
}

inline std::uint64_t p7_godel() {
    static std::uint64_t g = [] {
        Asm a;
        a.l("orsec r0 00");   // ser r; re-run later, so must be runnable
        a.l("proj r1 r0 0");
        a.l("load r2 {4}");
        a.l("delta r1 r2");
        a.l("brf reject");
        a.progser(1, p7_r1_godel(), 0, 14);
        a.package(2, 1, 15);
        a.accept(2, 3);
        a.reject_block();
        return ProgramRegistry::instance().intern(a.text);
    }();
    return g;
}

// Q1 inner: param = c_u; on r realizing (all x)phi, recognize the package r
// itself recognizes at base c_u.
inline std::uint64_t q1_r1_godel() {
    static std::uint64_t g = [] {
        Asm a;
        a.l("orsec r0 00");  // ser r
        a.l("param r1");     // c_u
        a.harvest_code(2, 0, 1, 14);
        a.need_nonempty(2, 14);
        a.accept(2, 3);
        a.reject_block();
        return ProgramRegistry::instance().intern(a.text);
    }();
    return g;
}

inline std::uint64_t q1_godel() {
    static std::uint64_t g = [] {
        Asm a;
        a.l("orsec r0 0");  // bare code base from the closure
        a.progser(1, q1_r1_godel(), 0, 14);
        a.package(2, 1, 15);
        a.accept(2, 3);
        return ProgramRegistry::instance().intern(a.text);
    }();
    return g;
}

// Q2 inner: param = c_t; on r realizing phi[t/x], recognize the program
// recognizing the pair (c_t, r).
inline std::uint64_t q2_r1_godel() {
    static std::uint64_t g = [] {
        Asm a;
        a.l("orsec r0 00");   // ser r
        a.l("param r1");      // c_t
        a.l("ilv r2 r1 r0");  // (c_t, ser r)
        a.package(3, 2, 15);  // expected existential package
        a.eqser(4, 3, 14);
        a.package(5, 4, 15);
        a.accept(5, 6);
        return ProgramRegistry::instance().intern(a.text);
    }();
    return g;
}

inline std::uint64_t q2_godel() {
    static std::uint64_t g = [] {
        Asm a;
        a.l("orsec r0 0");
        a.progser(1, q2_r1_godel(), 0, 14);
        a.package(2, 1, 15);
        a.accept(2, 3);
        return ProgramRegistry::instance().intern(a.text);
    }();
    return g;
}

// GenImp: the premise realizer r of (all y)(psi -> phi[x/y]) is re-read, per
// clause 10, as the table supplying per-instance implication realizers; the
// output realizer forwards a psi-realizer through it pointwise.
inline std::uint64_t genimp_all_godel() {
    static std::uint64_t g = [] {
        Asm a;
        a.l("orsec r0 0");  // c_u
        a.l("param r1");
        a.l("proj r2 r1 0");  // ser r
        a.l("proj r3 r1 1");  // ser r_psi
        a.harvest_code(4, 2, 0, 14);
        a.need_nonempty(4, 14);
        a.l("proj r4 r4 0");          // ser of psi -> phi[u] realizer
        a.harvest_ante(5, 4, 3, 14);  // relative r_psi
        a.need_nonempty(5, 14);
        a.accept(5, 6);
        a.reject_block();
        return ProgramRegistry::instance().intern(a.text);
    }();
    return g;
}

inline std::uint64_t genimp_godel() {
    static std::uint64_t g = [] {
        Asm a;
        a.l("orsec r0 00");   // ser r_psi
        a.l("param r1");      // ser r
        a.l("ilv r2 r1 r0");  // ilv(ser r, ser r_psi)
        a.progser(3, genimp_all_godel(), 2, 14);
        a.package(4, 3, 15);
        a.accept(4, 5);
        return ProgramRegistry::instance().intern(a.text);
    }();
    return g;
}

// ExElim: the program Q of the proof; on u realizing (ex x)phi, harvest the
// witness pair (c, t), instantiate the implication realizer at c, run it on
// t, and recognize the pair (s, s').
inline std::uint64_t exelim_godel() {
    static std::uint64_t g = [] {
        Asm a;
        a.l("orsec r0 00");  // ser u
        a.l("param r1");     // ser r, realizer of (all y)(phi[y] -> psi)
        a.l("load r15 {}");
        a.l("ilv r2 r15 r15");
        a.l("runsub r3 r0 r2");  // harvest u's existential package
        a.need_nonempty(3, 14);
        a.l("proj r3 r3 0");  // (c, ser t)
        a.l("proj r4 r3 0");  // c
        a.l("proj r5 r3 1");  // ser t
        a.harvest_code(7, 1, 4, 14);
        a.need_nonempty(7, 14);
        a.l("proj r7 r7 0");          // ser s' = ser r'
        a.harvest_ante(8, 7, 5, 14);  // r' relative t -> package(s)
        a.need_nonempty(8, 14);
        a.l("proj r8 r8 0");  // ser s
        a.l("ilv r9 r8 r7");  // the pair (s, s'); its first slot realizes psi
        a.accept(9, 10);
        a.reject_block();
        return ProgramRegistry::instance().intern(a.text);
    }();
    return g;
}

}  // namespace detail

// --- realize_axiom -------------------------------------------------------

inline RealizerPtr realize_axiom(const std::string& id,
                                 const SchemaBindings& b) {
    schema_formula(id, b);  // validates the instance; throws MalformedInstance
    using namespace detail;
    if (id == "P1") return Realizer::mkprog(p1_godel(), {});
    if (id == "P2") return Realizer::mkprog(p2_godel(), {});
    if (id == "P3") return Realizer::mkprog(p3_godel(), {});
    if (id == "P4")
        return Realizer::mkprog(p4_godel(need_var(b, "side") == "left"), {});
    if (id == "P5")
        return Realizer::mkprog(p5_godel(need_var(b, "side") == "left"), {});
    if (id == "P6") return Realizer::mkprog(p6_godel(), {});
    if (id == "P7") return Realizer::mkprog(p7_godel(), {});
    if (id == "P8") return eqcand_realizer(package_of(Realizer::mkempty()));
    if (id == "Q1") return Realizer::mkprog(q1_godel(), {});
    if (id == "Q2") return Realizer::mkprog(q2_godel(), {});
    if (id == "Q3") return eqcand_realizer(package_of(Realizer::mkempty()));
    if (id == "Q4") {
        RealizerPtr r3 = Realizer::mkprog(passthru_godel(), {});
        RealizerPtr r2 = eqcand_realizer(package_of(r3));
        RealizerPtr r1 = eqcand_realizer(package_of(r2));
        return eqcand_realizer(package_of(r1));
    }
    throw MalformedInstance("unknown schema " + id);
}

// --- deduction rules -----------------------------------------------------

struct ExtractionEnv {
    std::map<std::string, RealizerPtr> premise_realizers;  // by printed formula
    CheckContext ctx;
};

inline RealizerPtr apply_rule(const std::string& rule,
                              const std::vector<RealizerPtr>& inputs,
                              const std::string& /*x*/, const std::string& /*y*/,
                              ExtractionEnv& env) {
    if (rule == "mp") {
        if (inputs.size() != 2) throw MalformedInstance("mp needs 2 realizers");
        const RealizerPtr& r_phi = inputs[0];
        const RealizerPtr& r_imp = inputs[1];
        if (r_imp->kind != Realizer::ProgParam)
            throw PremiseNotRealized("mp: implication realizer is not a program");
        Recognizer rec;
        rec.macro = parsed_program(r_imp->godel);
        rec.parameter = r_imp->parameter;
        OrdSet base = interleave(serialize(r_phi),
                                 interleave(OrdSet{}, OrdSet{}));
        auto w = harvest_witness(rec, base, env.ctx.fuel);
        if (w && !w->empty()) env.ctx.pool.add(*w);
        RecognitionVerdict v =
            test_recognizer(rec, env.ctx.pool, base, env.ctx.fuel);
        if (v.kind != RecognitionVerdict::Recognizes)
            throw RecognitionFailed("mp: " + v.str());
        try {
            return deserialize(project(v.witness, 0));
        } catch (const MalformedSerialization& e) {
            throw RecognitionFailed(std::string("mp: recognized package is not "
                                                "a realizer: ") +
                                    e.what());
        }
    }
    if (rule == "genimp") {
        if (inputs.size() != 1) throw MalformedInstance("genimp needs 1 realizer");
        return Realizer::mkprog(detail::genimp_godel(), serialize(inputs[0]));
    }
    if (rule == "exelim") {
        if (inputs.size() != 1) throw MalformedInstance("exelim needs 1 realizer");
        return Realizer::mkprog(detail::exelim_godel(), serialize(inputs[0]));
    }
    throw MalformedInstance("unknown rule " + rule);
}

// --- extraction ----------------------------------------------------------

struct ExtractionResult {
    RealizerPtr realizer;                 // for the final step
    std::vector<RealizerPtr> per_step;    // one per proof step
    FormulaPtr conclusion;
};

inline ExtractionResult extract(Proof& p, ExtractionEnv& env) {
    ProofCheck pc = check_proof(p);
    if (!pc.valid) throw MalformedInstance("extract: " + pc.str());
    ExtractionResult out;
    for (std::size_t i = 0; i < p.steps.size(); ++i) {
        ProofStep& st = p.steps[i];
        RealizerPtr r;
        switch (st.kind) {
            case ProofStep::Premise: {
                auto it = env.premise_realizers.find(print_formula(st.formula));
                if (it == env.premise_realizers.end())
                    throw PremiseNotRealized("no realizer for premise " +
                                             print_formula(st.formula));
                r = it->second;
                break;
            }
            case ProofStep::Axiom:
                r = realize_axiom(st.schema, st.bindings);
                break;
            case ProofStep::Rule: {
                std::vector<RealizerPtr> ins;
                for (std::size_t ref : st.refs) ins.push_back(out.per_step[ref]);
                r = apply_rule(st.rule, ins, st.var_x, st.var_y, env);
                break;
            }
        }
        // Auto-register every intermediate so later recognition steps and
        // the final check can surface it.
        env.ctx.register_realizer(st.formula, r);
        out.per_step.push_back(r);
    }
    out.realizer = out.per_step.back();
    out.conclusion = p.steps.back().formula;
    return out;
}

// --- proof file format ---------------------------------------------------
//
//   premise <formula>
//   axiom <schema-id> [key="<formula>"] [key=var] ...
//   mp <i> <j>
//   genimp <i> <x> <y>
//   exelim <i> <x> <y>
//
// Steps are referenced by 1-based indices; '#' starts a comment line.

namespace detail {

inline std::vector<std::string> proof_tokens(const std::string& line,
                                             std::size_t lineno) {
    std::vector<std::string> toks;
    std::size_t i = 0;
    while (i < line.size()) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        bool in_quote = false;
        while (i < line.size() &&
               (in_quote || !std::isspace(static_cast<unsigned char>(line[i])))) {
            if (line[i] == '"') in_quote = !in_quote;
            ++i;
        }
        if (in_quote) throw ParseError("proof: unterminated quote", lineno, start);
        toks.push_back(line.substr(start, i - start));
    }
    return toks;
}

}  // namespace detail

inline Proof parse_proof(const std::string& text) {
    Proof p;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t h = line.find('#');
        if (h != std::string::npos) line = line.substr(0, h);
        std::vector<std::string> toks = detail::proof_tokens(line, lineno);
        if (toks.empty()) continue;
        ProofStep st;
        const std::string& op = toks[0];
        auto ref = [&](const std::string& tok) -> std::size_t {
            std::size_t idx;
            try {
                idx = std::stoul(tok);
            } catch (...) {
                throw ParseError("proof: bad step reference '" + tok + "'",
                                 lineno, 0);
            }
            if (idx == 0 || idx > p.steps.size())
                throw ParseError("proof: step reference out of range", lineno, 0);
            return idx - 1;
        };
        if (op == "premise") {
            st.kind = ProofStep::Premise;
            std::string rest;
            for (std::size_t i = 1; i < toks.size(); ++i) {
                if (i > 1) rest += " ";
                rest += toks[i];
            }
            st.formula = parse_formula(rest);
        } else if (op == "axiom") {
            if (toks.size() < 2)
                throw ParseError("proof: axiom needs a schema id", lineno, 0);
            st.kind = ProofStep::Axiom;
            st.schema = toks[1];
            for (std::size_t i = 2; i < toks.size(); ++i) {
                std::size_t eq = toks[i].find('=');
                if (eq == std::string::npos)
                    throw ParseError("proof: bad binding '" + toks[i] + "'",
                                     lineno, 0);
                std::string key = toks[i].substr(0, eq);
                std::string val = toks[i].substr(eq + 1);
                if (val.size() >= 2 && val.front() == '"' && val.back() == '"')
                    st.bindings.formulas[key] =
                        parse_formula(val.substr(1, val.size() - 2));
                else
                    st.bindings.vars[key] = val;
            }
        } else if (op == "mp") {
            if (toks.size() != 3)
                throw ParseError("proof: mp <i> <j>", lineno, 0);
            st.kind = ProofStep::Rule;
            st.rule = "mp";
            st.refs = {ref(toks[1]), ref(toks[2])};
        } else if (op == "genimp" || op == "exelim") {
            if (toks.size() != 4)
                throw ParseError("proof: " + op + " <i> <x> <y>", lineno, 0);
            st.kind = ProofStep::Rule;
            st.rule = op;
            st.refs = {ref(toks[1])};
            st.var_x = toks[2];
            st.var_y = toks[3];
        } else {
            throw ParseError("proof: unknown step '" + op + "'", lineno, 0);
        }
        p.steps.push_back(std::move(st));
    }
    return p;
}

}  // namespace rreal
