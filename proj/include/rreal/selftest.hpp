#pragma once

// Acceptance self-test: twelve oracle- and property-based criteria run at
// desk scale. Each criterion reports one pass/fail line with timing; the
// suite as a whole passes only if every criterion does.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rreal/kp.hpp"
#include "rreal/proofcalc.hpp"

namespace rreal {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = true;
    double seconds = 0;
    std::string detail;
    std::vector<std::string> failures;

    void fail(const std::string& why) {
        pass = false;
        if (failures.size() < 8) failures.push_back(why);
    }
    void expect(bool cond, const std::string& why) {
        if (!cond) fail(why);
    }
};

namespace selftest_detail {

// ---- criterion 1 oracle: ordinal polynomials with finite exponents ------
//
// Independent of the CNF Ordinal class: an ordinal below omega^k is a list
// of (finite exponent, coefficient) pairs in strictly decreasing exponent
// order. Addition, multiplication and comparison are implemented directly
// from the textbook recursions on this flat representation.

using Poly = std::vector<std::pair<int, std::uint64_t>>;

inline Poly poly_add(const Poly& a, const Poly& b) {
    if (b.empty()) return a;
    int k = b.front().first;
    Poly r;
    std::uint64_t at_k = 0;
    for (const auto& t : a) {
        if (t.first > k)
            r.push_back(t);
        else if (t.first == k)
            at_k = t.second;
    }
    r.emplace_back(k, at_k + b.front().second);
    for (std::size_t i = 1; i < b.size(); ++i) r.push_back(b[i]);
    return r;
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
    Poly acc;
    if (a.empty()) return acc;
    int lead = a.front().first;
    for (const auto& [e, c] : b) {
        Poly t;
        if (c == 0) continue;
        if (e > 0) {
            t.emplace_back(lead + e, c);
        } else if (lead > 0) {
            t.emplace_back(lead, a.front().second * c);
            for (std::size_t i = 1; i < a.size(); ++i) t.push_back(a[i]);
        } else {
            t.emplace_back(0, a.front().second * c);
        }
        acc = poly_add(acc, t);
    }
    return acc;
}

inline int poly_cmp(const Poly& a, const Poly& b) {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i].first != b[i].first) return a[i].first < b[i].first ? -1 : 1;
        if (a[i].second != b[i].second) return a[i].second < b[i].second ? -1 : 1;
    }
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    return 0;
}

inline Poly to_poly(const Ordinal& o) {
    Poly p;
    for (const auto& t : o.terms())
        p.emplace_back(static_cast<int>(t.exp.as_nat()), t.coeff);
    return p;
}

inline std::string poly_str(const Poly& p) {
    std::ostringstream os;
    os << "[";
    for (const auto& [e, c] : p) os << " " << e << ":" << c;
    os << " ]";
    return os.str();
}

// ---- random Delta0 formula generator ------------------------------------

struct D0Gen {
    std::mt19937_64 rng;
    std::vector<HFSet> lits;
    int fresh = 0;

    explicit D0Gen(std::uint64_t seed) : rng(seed), lits(hf_universe(2)) {}

    std::uint64_t pick(std::uint64_t n) { return rng() % n; }

    Term term(const std::vector<std::string>& scope) {
        if (!scope.empty() && pick(2) == 0)
            return Term::mkvar(scope[pick(scope.size())]);
        return Term::mklit(lits[pick(lits.size())]);
    }

    FormulaPtr atom(const std::vector<std::string>& scope) {
        Formula::Kind k = pick(2) ? Formula::Member : Formula::Equal;
        return Formula::atom(k, term(scope), term(scope));
    }

    FormulaPtr gen(int depth, std::vector<std::string> scope) {
        if (depth <= 0) return atom(scope);
        switch (pick(8)) {
            case 0: return atom(scope);
            case 1:
                return Formula::binop(Formula::And, gen(depth - 1, scope),
                                      gen(depth - 1, scope));
            case 2:
                return Formula::binop(Formula::Or, gen(depth - 1, scope),
                                      gen(depth - 1, scope));
            case 3: return Formula::mknot(gen(depth - 1, scope));
            case 4:
                return Formula::binop(Formula::Implies, gen(depth - 1, scope),
                                      gen(depth - 1, scope));
            case 5:
                return Formula::binop(Formula::Iff, gen(depth - 1, scope),
                                      gen(depth - 1, scope));
            default: {
                std::string v = "q" + std::to_string(fresh++);
                Term bnd = term(scope);
                Formula::Kind k =
                    pick(2) ? Formula::ForAllIn : Formula::ExistsIn;
                scope.push_back(v);
                FormulaPtr body = gen(depth - 1, scope);
                scope.pop_back();
                return Formula::bquant(k, v, bnd, body);
            }
        }
    }
};

// ---- realizer-pool helpers ----------------------------------------------

inline Recognizer recognizer_of(const RealizerPtr& r) {
    Recognizer rec;
    rec.macro = assemble_macro(ProgramRegistry::instance().text_of(r->godel));
    rec.parameter = r->parameter;
    return rec;
}

// Uniqueness within the emission's mutation pool, relative to base.
inline bool unique_in_pool(const EmissionResult& em,
                           const std::optional<OrdSet>& base,
                           std::string& why) {
    if (em.realizer->kind != Realizer::ProgParam) return true;
    RecognitionVerdict v =
        test_recognizer(recognizer_of(em.realizer), em.mutation_pool, base,
                        1000000);
    if (v.kind == RecognitionVerdict::Recognizes) return true;
    why = v.str();
    return false;
}

inline bool emission_realized(EmissionResult& em, CheckContext& ctx,
                              std::string& why) {
    for (auto& [f, r] : em.auxiliaries)
        if (f) ctx.register_realizer(f, r);
    CheckVerdict v = check(em.realizer, em.formula, ctx);
    if (v.kind == CheckVerdict::Realized) return true;
    why = v.str();
    return false;
}

}  // namespace selftest_detail

struct Selftest {
    // Every formula that any criterion verified Realized, for the
    // cross-suite non-contradiction assertion (criterion 11).
    std::vector<FormulaPtr> realized_ledger;

    void note_realized(const FormulaPtr& f) { realized_ledger.push_back(f); }

    // 1. Ordinal arithmetic agrees with the flat polynomial oracle on all
    //    ordinals < w^3 with coefficients <= 4, exhaustively.
    CriterionResult c1_ordinal_oracle() {
        using namespace selftest_detail;
        CriterionResult res{1, "ordinal-oracle"};
        std::vector<std::pair<Ordinal, Poly>> os;
        for (std::uint64_t c2 = 0; c2 <= 4; ++c2)
            for (std::uint64_t c1 = 0; c1 <= 4; ++c1)
                for (std::uint64_t c0 = 0; c0 <= 4; ++c0) {
                    Poly p;
                    if (c2) p.emplace_back(2, c2);
                    if (c1) p.emplace_back(1, c1);
                    if (c0) p.emplace_back(0, c0);
                    Ordinal o;
                    if (c2) o = ord_add(o, Ordinal::w_pow(Ordinal::fin(2), c2));
                    if (c1) o = ord_add(o, Ordinal::w_pow(Ordinal::fin(1), c1));
                    if (c0) o = ord_add(o, Ordinal::fin(c0));
                    if (to_poly(o) != p) {
                        res.fail("construction mismatch at " + poly_str(p));
                        continue;
                    }
                    os.emplace_back(o, p);
                }
        std::size_t checked = 0;
        for (const auto& [a, pa] : os)
            for (const auto& [b, pb] : os) {
                ++checked;
                if (to_poly(ord_add(a, b)) != poly_add(pa, pb))
                    res.fail("add mismatch " + a.str() + " + " + b.str());
                if (to_poly(ord_mul(a, b)) != poly_mul(pa, pb))
                    res.fail("mul mismatch " + a.str() + " * " + b.str());
                int lib = ord_cmp(a, b), orc = poly_cmp(pa, pb);
                if ((lib < 0) != (orc < 0) || (lib == 0) != (orc == 0))
                    res.fail("cmp mismatch " + a.str() + " ? " + b.str());
            }
        res.detail = std::to_string(checked) + " pairs";
        return res;
    }

    // 2. Godel pairing is a bijection, roundtrips, and is monotone in the
    //    (max, lex) order.
    CriterionResult c2_pairing() {
        CriterionResult res{2, "pairing-bijectivity"};
        std::set<std::uint64_t> codes;
        struct Entry { std::uint64_t a, b, code; };
        std::vector<Entry> entries;
        for (std::uint64_t a = 0; a < 100; ++a)
            for (std::uint64_t b = 0; b < 100; ++b) {
                Ordinal c = godel_pair(Ordinal::fin(a), Ordinal::fin(b));
                if (!c.is_finite()) {
                    res.fail("non-finite code for finite pair");
                    continue;
                }
                codes.insert(c.as_nat());
                entries.push_back({a, b, c.as_nat()});
                auto [ua, ub] = godel_unpair(c);
                if (!(ua == Ordinal::fin(a)) || !(ub == Ordinal::fin(b)))
                    res.fail("unpair(pair) mismatch at (" + std::to_string(a) +
                             "," + std::to_string(b) + ")");
            }
        res.expect(codes.size() == 10000, "codes not pairwise distinct");
        for (std::uint64_t c = 0; c < 1000; ++c) {
            auto [a, b] = godel_unpair(Ordinal::fin(c));
            if (!(godel_pair(a, b) == Ordinal::fin(c)))
                res.fail("pair(unpair) mismatch at code " + std::to_string(c));
        }
        std::sort(entries.begin(), entries.end(),
                  [](const Entry& l, const Entry& r) {
                      std::uint64_t ml = std::max(l.a, l.b),
                                    mr = std::max(r.a, r.b);
                      if (ml != mr) return ml < mr;
                      if (l.a != r.a) return l.a < r.a;
                      return l.b < r.b;
                  });
        for (std::size_t i = 1; i < entries.size(); ++i)
            if (entries[i - 1].code >= entries[i].code) {
                res.fail("not monotone in (max,lex) near (" +
                         std::to_string(entries[i].a) + "," +
                         std::to_string(entries[i].b) + ")");
                break;
            }
        res.detail = "10000 pairs, 1000 codes";
        return res;
    }

    // 3. Interleave/project roundtrip, exhaustive over subsets of {0..7}
    //    plus randomized sets with limit elements.
    CriterionResult c3_interleave() {
        CriterionResult res{3, "interleave-roundtrip"};
        auto from_mask = [](unsigned m) {
            OrdSet s;
            for (int i = 0; i < 8; ++i)
                if (m & (1u << i)) s.insert(Ordinal::fin(i));
            return s;
        };
        std::size_t checked = 0;
        for (unsigned ma = 0; ma < 256; ++ma) {
            OrdSet a = from_mask(ma);
            for (unsigned mb = 0; mb < 256; mb += 5) {
                OrdSet b = from_mask(mb);
                OrdSet z = interleave(a, b);
                ++checked;
                if (!(project(z, 0) == a) || !(project(z, 1) == b))
                    res.fail("project mismatch on finite masks");
            }
        }
        std::mt19937_64 rng(0x5e1f7e57);
        auto rand_set = [&]() {
            OrdSet s;
            std::size_t n = rng() % 7;
            for (std::size_t i = 0; i < n; ++i) {
                std::uint64_t k = rng() % 5, m = rng() % 10;
                Ordinal o = ord_add(ord_mul(Ordinal::omega(), Ordinal::fin(k)),
                                    Ordinal::fin(m));
                s.insert(o);
            }
            return s;
        };
        for (int i = 0; i < 500; ++i) {
            OrdSet a = rand_set(), b = rand_set();
            OrdSet z = interleave(a, b);
            ++checked;
            if (!(project(z, 0) == a) || !(project(z, 1) == b))
                res.fail("project mismatch on randomized sets");
            if (!(interleave(project(z, 0), project(z, 1)) == z))
                res.fail("re-interleave mismatch on randomized sets");
        }
        res.detail = std::to_string(checked) + " pairs";
        return res;
    }

    // 4. Set-code roundtrip and derived_code coherence.
    CriterionResult c4_setcode() {
        CriterionResult res{4, "setcode-roundtrip"};
        std::vector<HFSet> uni = hf_universe(3);
        for (const HFSet& x : uni) {
            if (!(decode(encode(x)) == x))
                res.fail("roundtrip mismatch at " + x.str());
            SetCode c = encode(x);
            std::vector<HFSet> got;
            for (const Ordinal& idx : root_member_indices(c))
                got.push_back(decode(derived_code(c, idx)));
            if (got.size() != x.elems().size()) {
                res.fail("derived_code count mismatch at " + x.str());
            } else {
                for (const HFSet& m : x.elems()) {
                    bool found = false;
                    for (const HFSet& g : got)
                        if (g == m) found = true;
                    if (!found)
                        res.fail("derived_code misses member " + m.str());
                }
            }
        }
        std::mt19937_64 rng(0xc0dec0de);
        for (int i = 0; i < 1000; ++i) {
            unsigned mask = static_cast<unsigned>(rng() & 0xffff);
            HFSet x;
            for (int j = 0; j < 16; ++j)
                if (mask & (1u << j)) x.insert(uni[j]);
            if (!(decode(encode(x)) == x))
                res.fail("rank-4 roundtrip mismatch at " + x.str());
        }
        res.detail = "16 exhaustive + 1000 rank-4 samples";
        return res;
    }

    // 5. The two Delta0 evaluators agree on generated formulas.
    CriterionResult c5_delta0_oracle() {
        using namespace selftest_detail;
        CriterionResult res{5, "delta0-evaluators"};
        D0Gen gen(0xde17a0);
        std::vector<HFSet> uni = hf_universe(3);
        for (int i = 0; i < 500; ++i) {
            FormulaPtr f = gen.gen(3, {"x", "y"});
            HFSet X = uni[gen.pick(uni.size())], Y = uni[gen.pick(uni.size())];
            bool a = eval_bounded(f, {{"x", encode(X)}, {"y", encode(Y)}},
                                  1000000);
            bool b = eval_over_universe(f, uni, {{"x", X}, {"y", Y}});
            if (a != b)
                res.fail("disagreement on " + print_formula(f) + " with x=" +
                         X.str() + " y=" + Y.str());
        }
        res.detail = "500 formulas";
        return res;
    }

    // 6. Truth lemma, executable direction: canonical realizers of true
    //    Delta0 sentences check Realized; every candidate is Refuted on
    //    false ones.
    CriterionResult c6_truth_lemma() {
        using namespace selftest_detail;
        CriterionResult res{6, "truth-lemma"};
        D0Gen gen(0x712774);
        CheckContext ctx = make_context(1);
        int trues = 0, falses = 0, iters = 0;
        std::vector<RealizerPtr> cands = refutation_candidates();
        while ((trues < 300 || falses < 300) && iters++ < 8000) {
            FormulaPtr f = gen.gen(2, {});
            bool truth = eval_over_universe(f, {}, {});
            if (truth && trues < 300) {
                ++trues;
                RealizerPtr r = canonical_delta0_realizer(f);
                CheckVerdict v = check(r, f, ctx);
                if (v.kind != CheckVerdict::Realized)
                    res.fail("true sentence not Realized: " + print_formula(f) +
                             " -> " + v.str());
                else
                    note_realized(f);
            } else if (!truth && falses < 300) {
                ++falses;
                for (const RealizerPtr& r : cands) {
                    CheckVerdict v = check(r, f, ctx);
                    if (v.kind != CheckVerdict::Refuted)
                        res.fail("false sentence not Refuted: " +
                                 print_formula(f) + " -> " + v.str());
                }
            }
        }
        res.expect(trues >= 300 && falses >= 300,
                   "generator did not produce enough sentences");
        res.detail = std::to_string(trues) + " true / " +
                     std::to_string(falses) + " false";
        return res;
    }

    // 7. EQ-constant recognizers satisfy the delta contract; two-link chain
    //    composites recognize exactly their package.
    CriterionResult c7_recognizers() {
        using namespace selftest_detail;
        CriterionResult res{7, "delta-law-and-chains"};
        Ordinal w = Ordinal::omega();
        auto S = [](std::initializer_list<Ordinal> xs) {
            OrdSet s;
            for (const Ordinal& o : xs) s.insert(o);
            return s;
        };
        std::vector<OrdSet> consts = {
            OrdSet{},
            S({Ordinal::fin(0)}),
            S({Ordinal::fin(1), Ordinal::fin(2)}),
            S({w}),
            S({ord_add(ord_mul(w, Ordinal::fin(2)), Ordinal::fin(1)),
               Ordinal::fin(3)}),
            S({Ordinal::fin(0), Ordinal::fin(1), Ordinal::fin(2),
               Ordinal::fin(3), Ordinal::fin(4), Ordinal::fin(5),
               Ordinal::fin(6), Ordinal::fin(7)}),
            S({Ordinal::w_pow(Ordinal::fin(2))}),
            S({Ordinal::fin(5)}),
            S({ord_add(w, Ordinal::fin(1)), ord_mul(w, Ordinal::fin(2))}),
            S({Ordinal::fin(2), Ordinal::fin(4), Ordinal::fin(6)})};
        for (const OrdSet& c : consts) {
            Recognizer r = eq_constant(c);
            CandidatePool pool = mutation_pool(c, 7);
            if (pool.size() < 8) res.fail("pool too small for " + c.str());
            RecognitionVerdict v = test_recognizer(r, pool, std::nullopt,
                                                   1000000);
            if (v.kind != RecognitionVerdict::Recognizes || !(v.witness == c))
                res.fail("eq_constant verdict " + v.str() + " for " + c.str());
            for (const OrdSet& cand : pool.candidates) {
                RunResult rr = r.run(cand, 1000000);
                if (!rr.halted() || rr.output_bit != delta(cand, c))
                    res.fail("delta contract violated on " + cand.str());
            }
        }
        // two-link chains over rotating (x1, x2, base) triples
        int chains = 0;
        for (std::size_t i = 0; i + 2 < consts.size() && chains < 8; ++i) {
            const OrdSet &x1 = consts[i], &x2 = consts[i + 1],
                         &base = consts[i + 2];
            Recognizer r1 = eq_constant(interleave(x2, x1));
            Recognizer r2 = eq_constant(interleave(base, x2));
            ChainPackage pkg = chain_package({{r1, x1}, {r2, x2}});
            CandidatePool pool = mutation_pool(pkg.z, 7);
            RecognitionVerdict v =
                test_recognizer(pkg.composite, pool, base, 1000000);
            if (v.kind == RecognitionVerdict::Ambiguous)
                res.fail("chain composite ambiguous at triple " +
                         std::to_string(i));
            else if (v.kind != RecognitionVerdict::Recognizes ||
                     !(v.witness == pkg.z))
                res.fail("chain composite verdict " + v.str());
            ++chains;
        }
        res.detail = std::to_string(consts.size()) + " constants, " +
                     std::to_string(chains) + " chains";
        return res;
    }

    // 8. KP emission suite: instances per axiom at operand rank <= 3,
    //    Realized + witness oracles + mutation-pool uniqueness.
    CriterionResult c8_kp_suite();

    // 9. Epsilon-induction over every y of rank <= 3 for a tautological and
    //    a bounded-universal phi; corrupted tables are rejected.
    CriterionResult c9_induction();

    // 10. Intuitionistic closure: proof corpus extraction and schema
    //     totality.
    CriterionResult c10_proofs();

    // 11. Non-contradiction across the whole run.
    CriterionResult c11_non_contradiction() {
        using namespace selftest_detail;
        CriterionResult res{11, "non-contradiction"};
        // Ledger cross-check: no formula Realized together with its negation.
        for (std::size_t i = 0; i < realized_ledger.size(); ++i)
            for (std::size_t j = 0; j < realized_ledger.size(); ++j) {
                const FormulaPtr& f = realized_ledger[i];
                const FormulaPtr& g = realized_ledger[j];
                if (g->kind == Formula::Not && formula_eq(g->a, f))
                    res.fail("ledger holds both " + print_formula(f) +
                             " and its negation");
            }
        // Active probe on fresh Delta0 sentences.
        D0Gen gen(0x11c071);
        CheckContext ctx = make_context(1);
        std::vector<RealizerPtr> cands = refutation_candidates();
        int probed = 0, iters = 0;
        while (probed < 50 && iters++ < 2000) {
            FormulaPtr f = gen.gen(2, {});
            if (!eval_over_universe(f, {}, {})) continue;
            ++probed;
            CheckVerdict v = check(canonical_delta0_realizer(f), f, ctx);
            if (v.kind != CheckVerdict::Realized)
                res.fail("probe sentence not Realized: " + print_formula(f));
            FormulaPtr nf = Formula::mknot(f);
            for (const RealizerPtr& r : cands) {
                CheckVerdict nv = check(r, nf, ctx);
                if (nv.kind == CheckVerdict::Realized)
                    res.fail("negation Realized: " + print_formula(nf));
            }
        }
        res.expect(probed == 50, "not enough probe sentences");
        res.detail = std::to_string(realized_ledger.size()) +
                     " ledger entries, 50 probes";
        return res;
    }

    // 12. Resource monotonicity: enlarging fuel and pool never flips
    //     Realized <-> Refuted.
    CriterionResult c12_monotonicity() {
        using namespace selftest_detail;
        CriterionResult res{12, "resource-monotonicity"};
        D0Gen g2(0x3070);
        std::vector<RealizerPtr> cands = refutation_candidates();
        int cases = 0, resolved = 0, iters = 0;
        while (cases < 50 && iters++ < 2000) {
            FormulaPtr f = g2.gen(2, {});
            bool truth = eval_over_universe(f, {}, {});
            RealizerPtr r;
            if (truth && cases % 2 == 0)
                r = canonical_delta0_realizer(f);
            else
                r = cands[cases % cands.size()];
            ++cases;
            CheckContext small = make_context(1, 500);
            CheckContext big = make_context(2, 1000000);
            CheckVerdict vs = check(r, f, small);
            CheckVerdict vb = check(r, f, big);
            bool flip = (vs.kind == CheckVerdict::Realized &&
                         vb.kind == CheckVerdict::Refuted) ||
                        (vs.kind == CheckVerdict::Refuted &&
                         vb.kind == CheckVerdict::Realized);
            if (flip)
                res.fail("verdict flipped on " + print_formula(f) + ": " +
                         vs.str() + " -> " + vb.str());
            if (vs.kind == CheckVerdict::Unknown &&
                vb.kind != CheckVerdict::Unknown)
                ++resolved;
        }
        res.expect(cases == 50, "not enough cases");
        res.detail = "50 cases, " + std::to_string(resolved) +
                     " Unknown resolved";
        return res;
    }

    std::vector<CriterionResult> run_all(std::ostream& os);
};

// --- criterion 8 ---------------------------------------------------------

inline CriterionResult Selftest::c8_kp_suite() {
    using namespace selftest_detail;
    CriterionResult res{8, "kp-emission"};
    std::vector<HFSet> uni3 = hf_universe(3);
    int instances = 0;

    auto realize_and_pool = [&](EmissionResult& em, CheckContext& ctx,
                                const std::optional<OrdSet>& base,
                                const std::string& tag) {
        std::string why;
        if (!emission_realized(em, ctx, why)) {
            res.fail(tag + " not Realized: " + why);
            return;
        }
        note_realized(em.formula);
        if (!unique_in_pool(em, base, why))
            res.fail(tag + " pool: " + why);
        ++instances;
    };

    // EmptySet (the unique instance).
    {
        CheckContext ctx = make_context(1);
        AxiomInstance ax;
        ax.kind = AxiomInstance::EmptySet;
        EmissionResult em = emit_basic(ax);
        realize_and_pool(em, ctx, OrdSet{}, "emptyset");
    }
    // Pairing: 20 operand pairs of rank <= 3.
    {
        int done = 0;
        for (std::size_t i = 0; i < uni3.size() && done < 20; ++i)
            for (std::size_t j = i; j < uni3.size() && done < 20; ++j) {
                if ((i + j) % 3 != 0) continue;  // spread the sample
                CheckContext ctx = make_context(1);
                AxiomInstance ax;
                ax.kind = AxiomInstance::Pairing;
                ax.x = uni3[i];
                ax.y = uni3[j];
                EmissionResult em = emit_basic(ax);
                realize_and_pool(em, ctx, OrdSet{},
                                 "pairing " + ax.x.str() + "," + ax.y.str());
                // brute witness: the unordered pair
                HFSet want = hf_pair(ax.x, ax.y);
                if (!(em.witnesses[0].second == encode(want).code))
                    res.fail("pairing witness mismatch");
                ++done;
            }
        res.expect(done == 20, "pairing instance count");
    }
    // Union: every rank <= 3 set as X, plus constructed extras.
    {
        std::vector<HFSet> xs = uni3;
        xs.push_back(hf_pair(uni3[5 % uni3.size()], uni3[7 % uni3.size()]));
        xs.push_back(hf_pair(uni3[9 % uni3.size()], uni3[11 % uni3.size()]));
        xs.push_back(hf_singleton(uni3.back()));
        xs.push_back(hf_pair(uni3[3], uni3.back()));
        int done = 0;
        for (const HFSet& X : xs) {
            if (done >= 20) break;
            CheckContext ctx = make_context(1);
            AxiomInstance ax;
            ax.kind = AxiomInstance::Union;
            ax.X = X;
            EmissionResult em = emit_basic(ax);
            realize_and_pool(em, ctx, OrdSet{}, "union " + X.str());
            HFSet want;
            for (const HFSet& m : X.elems())
                for (const HFSet& w : m.elems()) want.insert(w);
            if (!(em.witnesses[0].second == encode(want).code))
                res.fail("union witness mismatch at " + X.str());
            ++done;
        }
        res.expect(done == 20, "union instance count");
    }
    // Extensionality (uniform instance over the rank-2 universe).
    {
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
        realize_and_pool(em, ctx, OrdSet{}, "extensionality");
    }
    // Infinity: structural witness only.
    {
        AxiomInstance ax;
        ax.kind = AxiomInstance::Infinity;
        EmissionResult em = emit_basic(ax);
        res.expect(!em.checkable, "infinity should be structural-only");
        const OrdSet& code = em.witnesses[0].second;
        for (std::uint64_t i = 0; i < 6; ++i)
            for (std::uint64_t j = i + 1; j < 6; ++j)
                if (!code.contains(godel_pair(Ordinal::fin(i), Ordinal::fin(j))))
                    res.fail("infinity code misses a membership pair");
        std::string why;
        if (!unique_in_pool(em, OrdSet{}, why))
            res.fail("infinity pool: " + why);
        ++instances;
    }
    // Delta0-separation: 4 bodies x 5 domains.
    {
        std::vector<FormulaPtr> phis = {
            parse_formula("(ex w in x)(w = w)"), parse_formula("x = {}"),
            parse_formula("{} in x"), parse_formula("(all w in x)(w = {})")};
        std::vector<HFSet> doms = uni3;
        std::sort(doms.begin(), doms.end(), [](const HFSet& a, const HFSet& b) {
            return a.elems().size() > b.elems().size();
        });
        doms.resize(5);
        int done = 0;
        for (const FormulaPtr& phi : phis)
            for (const HFSet& X : doms) {
                CheckContext ctx = make_context(1);
                EmissionResult em = emit_separation(phi, {}, X);
                realize_and_pool(em, ctx, OrdSet{},
                                 "separation " + print_formula(phi) + " over " +
                                     X.str());
                HFSet want;  // brute filter via the independent evaluator
                for (const HFSet& m : X.elems())
                    if (eval_bounded(substitute(phi, "x", Term::mklit(m)), {},
                                     1000000))
                        want.insert(m);
                if (!(em.witnesses[0].second == encode(want).code))
                    res.fail("separation filter mismatch at " + X.str());
                ++done;
            }
        res.expect(done == 20, "separation instance count");
    }
    // Replacement: identity-style functional bodies over rank-2 domains.
    {
        std::vector<FormulaPtr> phis = {parse_formula("y = x"),
                                        parse_formula("y = x and x = x"),
                                        parse_formula("x = y")};
        std::vector<HFSet> uni2 = hf_universe(2);
        std::vector<HFSet> doms;
        for (unsigned mask = 1; mask < 16 && doms.size() < 7; mask += 2) {
            HFSet X;
            for (int j = 0; j < 4; ++j)
                if (mask & (1u << j)) X.insert(uni2[j]);
            doms.push_back(X);
        }
        int done = 0;
        for (const FormulaPtr& phi : phis)
            for (const HFSet& X : doms) {
                if (done >= 20) break;
                CheckContext ctx = make_context(2);
                FormulaPtr full = replacement_formula(phi, X, "x", "y");
                RealizerPtr ante = realizer_for_true(full->a, ctx.universe);
                EmissionResult em = emit_replacement(phi, {}, X, ante, ctx);
                OrdSet base = interleave(serialize(ante),
                                         interleave(OrdSet{}, OrdSet{}));
                realize_and_pool(em, ctx, base,
                                 "replacement " + print_formula(phi) +
                                     " over " + X.str());
                HFSet image;  // brute image via the independent evaluator
                for (const HFSet& m : X.elems())
                    for (const HFSet& c : ctx.universe) {
                        FormulaPtr inst = substitute(
                            substitute(phi, "x", Term::mklit(m)), "y",
                            Term::mklit(c));
                        if (eval_over_universe(inst, ctx.universe, {}))
                            image.insert(c);
                    }
                if (!(em.witnesses[0].second == encode(image).code))
                    res.fail("replacement image mismatch at " + X.str());
                ++done;
            }
        res.expect(done >= 20, "replacement instance count");
    }
    // Epsilon-induction: 20 (phi, y) bindings, checked deeply in criterion 9.
    {
        CheckContext ctx = make_context(3);
        FormulaPtr phi1 = parse_formula("a = a");
        FormulaPtr phi2 = parse_formula("(all w in a)(w = w)");
        RealizerPtr prem1 =
            realizer_for_true(induction_premise_formula(phi1, "a"), ctx.universe);
        RealizerPtr prem2 =
            realizer_for_true(induction_premise_formula(phi2, "a"), ctx.universe);
        int done = 0;
        for (const HFSet& y : uni3) {
            if (done >= 16) break;
            EmissionResult em = emit_induction(phi1, {}, y, prem1, ctx);
            std::string why;
            if (!emission_realized(em, ctx, why))
                res.fail("induction " + y.str() + " not Realized: " + why);
            else {
                note_realized(em.formula);
                ++instances;
            }
            ++done;
        }
        for (const HFSet& y : hf_universe(2)) {
            EmissionResult em = emit_induction(phi2, {}, y, prem2, ctx);
            std::string why;
            if (!emission_realized(em, ctx, why))
                res.fail("induction' " + y.str() + " not Realized: " + why);
            else {
                note_realized(em.formula);
                ++instances;
            }
            ++done;
        }
        res.expect(done == 20, "induction instance count");
    }
    // Choice: 20 domains of nonempty members.
    {
        std::vector<HFSet> nonempty;
        for (const HFSet& u : uni3)
            if (!u.empty()) nonempty.push_back(u);
        std::vector<HFSet> doms;
        std::mt19937_64 rng(0xc401ce);
        std::set<std::string> seen;
        while (doms.size() < 20) {
            HFSet X;
            std::size_t n = 1 + rng() % 3;
            for (std::size_t i = 0; i < n; ++i)
                X.insert(nonempty[rng() % nonempty.size()]);
            if (seen.insert(X.str()).second) doms.push_back(X);
        }
        int done = 0;
        for (const HFSet& X : doms) {
            CheckContext ctx = make_context(2);
            FormulaPtr prem = Formula::bquant(
                Formula::ForAllIn, "y", Term::mklit(X),
                Formula::bquant(Formula::ExistsIn, "z", Term::mkvar("y"),
                                Formula::atom(Formula::Equal, Term::mkvar("z"),
                                              Term::mkvar("z"))));
            RealizerPtr rp = realizer_for_true(prem, ctx.universe);
            EmissionResult em = emit_choice(X, rp, ctx);
            OrdSet base =
                interleave(serialize(rp), interleave(OrdSet{}, OrdSet{}));
            realize_and_pool(em, ctx, base, "choice over " + X.str());
            // brute check of the choice-function witness
            SetCode fc{em.witnesses[0].second,
                       infer_domain(em.witnesses[0].second)};
            HFSet f = decode(fc);
            std::size_t matched = 0;
            for (const HFSet& y : X.elems()) {
                int hits = 0;
                for (const HFSet& p : f.elems())
                    for (const HFSet& w : y.elems())
                        if (p == hf_kuratowski(y, w)) ++hits;
                if (hits == 1) ++matched;
                else res.fail("choice pick not unique for " + y.str());
            }
            if (f.elems().size() != X.elems().size() ||
                matched != X.elems().size())
                res.fail("choice function has junk at " + X.str());
            ++done;
        }
        res.expect(done == 20, "choice instance count");
    }
    res.detail = std::to_string(instances) + " instances Realized";
    return res;
}

// --- criterion 9 ---------------------------------------------------------

inline CriterionResult Selftest::c9_induction() {
    using namespace selftest_detail;
    CriterionResult res{9, "epsilon-induction"};
    CheckContext ctx = make_context(3);
    std::vector<FormulaPtr> phis = {parse_formula("a = a"),
                                    parse_formula("(all w in a)(w = w)")};
    std::vector<RealizerPtr> prems;
    for (const FormulaPtr& phi : phis)
        prems.push_back(
            realizer_for_true(induction_premise_formula(phi, "a"), ctx.universe));
    int cases = 0;
    for (std::size_t pi = 0; pi < phis.size(); ++pi)
        for (const HFSet& y : hf_universe(3)) {
            ++cases;
            std::string tag = "phi" + std::to_string(pi) + " y=" + y.str();
            EmissionResult em;
            try {
                em = emit_induction(phis[pi], {}, y, prems[pi], ctx);
            } catch (const Error& e) {
                res.fail(tag + " emission failed: " + e.what());
                continue;
            }
            std::string why;
            if (!emission_realized(em, ctx, why)) {
                res.fail(tag + " not Realized: " + why);
                continue;
            }
            note_realized(em.formula);
            const OrdSet& T = em.witnesses[0].second;
            std::vector<OrdSet> items = unpack_list(T);
            if (items.size() != hf_tc_with_self(y).size()) {
                res.fail(tag + " |T| != |tc({y})|");
                continue;
            }
            // The verifying recognizer must reject every table with one
            // corrupted entry while still recognizing the genuine package.
            RealizerPtr ver = em.auxiliaries.back().second;
            Recognizer rec = recognizer_of(ver);
            OrdSet base = interleave(serialize(prems[pi]), OrdSet{});
            CandidatePool pool = em.mutation_pool;
            const OrdSet& rho = em.witnesses[1].second;
            for (std::size_t i = 0; i < items.size(); ++i) {
                std::vector<OrdSet> corrupted = items;
                corrupted[i] = interleave(
                    project(items[i], 0),
                    interleave(serialize(Realizer::mkempty()),
                               project(project(items[i], 1), 1)));
                pool.add(interleave(pack_list(corrupted), rho));
            }
            RecognitionVerdict v = test_recognizer(rec, pool, base, 1000000);
            if (v.kind != RecognitionVerdict::Recognizes ||
                !(v.witness == em.witnesses[2].second))
                res.fail(tag + " verifier pool: " + v.str());
        }
    res.detail = std::to_string(cases) + " (phi, y) cases";
    return res;
}

// --- criterion 10 --------------------------------------------------------

inline CriterionResult Selftest::c10_proofs() {
    using namespace selftest_detail;
    CriterionResult res{10, "intuitionistic-closure"};

    // ---- proof corpus ----
    struct ProofCase {
        std::string name;
        std::string text;
        std::vector<std::string> registrations;  // suite realizers
    };
    const std::vector<std::string> A = {
        "{} = {}", "{} in {{}}", "{{}} in {{{}}}", "{} in {{},{{}}}",
        "{{}} = {{}}"};
    std::vector<ProofCase> corpus;
    for (int i = 0; i < 5; ++i) {  // phi -> phi, five instances
        const std::string& t = A[i];
        std::string text = "axiom P2 phi=\"" + t + "\" psi=\"(" + t + ") -> (" +
                           t + ")\" xi=\"" + t + "\"\n" + "axiom P1 phi=\"" +
                           t + "\" psi=\"(" + t + ") -> (" + t + ")\"\n" +
                           "mp 2 1\n" + "axiom P1 phi=\"" + t + "\" psi=\"" +
                           t + "\"\n" + "mp 4 3\n";
        corpus.push_back({"imp-id-" + std::to_string(i), text, {}});
    }
    for (int i = 0; i < 3; ++i) {  // premise modus ponens
        const std::string &p = A[i], &q = A[(i + 1) % 5];
        corpus.push_back({"mp-" + std::to_string(i),
                          "premise " + p + "\npremise (" + p + ") -> ((" + q +
                              ") or (" + p + "))\nmp 1 2\n",
                          {}});
    }
    for (int i = 0; i < 2; ++i) {  // conjunction introduction via P3
        const std::string &p = A[i], &q = A[i + 2];
        corpus.push_back({"conj-" + std::to_string(i),
                          "premise " + p + "\npremise " + q + "\naxiom P3 " +
                              "phi=\"" + p + "\" psi=\"" + q +
                              "\"\nmp 1 3\nmp 2 4\n",
                          {}});
    }
    for (int i = 0; i < 2; ++i) {  // projection via P4
        const std::string &p = A[i], &q = A[i + 1];
        corpus.push_back({"proj-" + std::to_string(i),
                          "premise (" + p + ") and (" + q + ")\naxiom P4 " +
                              "phi=\"" + p + "\" psi=\"" + q +
                              "\" side=left\nmp 1 2\n",
                          {}});
    }
    for (int i = 0; i < 2; ++i) {  // injection via P5
        const std::string &p = A[i + 1], &q = A[i + 3];
        corpus.push_back({"inj-" + std::to_string(i),
                          "premise " + p + "\naxiom P5 phi=\"" + p +
                              "\" psi=\"" + q + "\" side=left\nmp 1 2\n",
                          {}});
    }
    for (int i = 0; i < 3; ++i) {  // generalization of an implication
        const std::string& p = A[i];
        const char* bodies[] = {"y = y", "(all w in y)(w = w)",
                                "(all w in y)(w in y)"};
        corpus.push_back({"genimp-" + std::to_string(i),
                          "premise (" + p + ") -> (" + bodies[i] +
                              ")\ngenimp 1 x y\n",
                          {}});
    }
    for (int i = 0; i < 3; ++i) {  // existential elimination
        const std::string& p = A[i];
        corpus.push_back({"exelim-" + std::to_string(i),
                          "premise (y = y) -> (" + p + ")\nexelim 1 x y\n",
                          {"(ex x)(x = x)"}});
    }
    // ex falso chain via P8
    corpus.push_back({"exfalso",
                      "premise " + A[0] + "\naxiom P8 phi=\"" + A[0] +
                          "\" psi=\"" + A[1] + "\"\nmp 1 2\n",
                      {}});
    res.expect(corpus.size() >= 20, "corpus too small");

    int extracted = 0;
    for (const ProofCase& pc : corpus) {
        try {
            Proof p = parse_proof(pc.text);
            ProofCheck chk = check_proof(p);
            if (!chk.valid) {
                res.fail(pc.name + ": " + chk.str());
                continue;
            }
            ExtractionEnv env;
            env.ctx = make_context(2);
            for (const ProofStep& st : p.steps)
                if (st.kind == ProofStep::Premise)
                    env.premise_realizers[print_formula(st.formula)] =
                        realizer_for_true(st.formula, env.ctx.universe);
            for (const std::string& reg : pc.registrations) {
                FormulaPtr f = parse_formula(reg);
                env.ctx.register_realizer(f,
                                          realizer_for_true(f, env.ctx.universe));
            }
            ExtractionResult ex = extract(p, env);
            CheckVerdict v = check(ex.realizer, ex.conclusion, env.ctx);
            if (v.kind != CheckVerdict::Realized) {
                res.fail(pc.name + " conclusion " +
                         print_formula(ex.conclusion) + ": " + v.str());
                continue;
            }
            note_realized(ex.conclusion);
            ++extracted;
        } catch (const Error& e) {
            res.fail(pc.name + " threw: " + std::string(e.what()));
        }
    }

    // ---- schema totality: >= 5 instances per constructor ----
    auto check_schema = [&](const std::string& id, const SchemaBindings& b,
                            const std::string& tag) {
        try {
            CheckContext ctx = make_context(2);
            FormulaPtr f = schema_formula(id, b);
            auto reg = [&](const FormulaPtr& g) {
                ctx.register_realizer(g, realizer_for_true(g, ctx.universe));
            };
            if (id == "P2") {
                reg(f->a);
                reg(f->b->a);
            } else if (id == "P4" || id == "P7") {
                reg(f->a);
            } else if (id == "P6") {
                reg(f->a);
                reg(f->b->a);
                reg(f->b->b->a);
            } else if (id == "Q1") {
                FormulaPtr all = Formula::quant(
                    Formula::ForAll, b.vars.at("x"), b.formulas.at("phi"));
                reg(all);
            }
            RealizerPtr r = realize_axiom(id, b);
            CheckVerdict v = check(r, f, ctx);
            if (v.kind != CheckVerdict::Realized)
                res.fail("schema " + id + " " + tag + ": " + v.str());
            else
                note_realized(f);
        } catch (const Error& e) {
            res.fail("schema " + id + " " + tag + " threw: " +
                     std::string(e.what()));
        }
    };
    std::vector<FormulaPtr> Af;
    for (const std::string& s : A) Af.push_back(parse_formula(s));
    for (int i = 0; i < 5; ++i) {
        SchemaBindings b;
        b.formulas["phi"] = Af[i];
        b.formulas["psi"] = Af[(i + 1) % 5];
        b.formulas["xi"] = Af[(i + 2) % 5];
        std::string tag = "#" + std::to_string(i);
        for (const char* id : {"P1", "P2", "P3", "P6", "P7", "P8"})
            check_schema(id, b, tag);
        SchemaBindings bs = b;
        bs.vars["side"] = (i % 2 == 0) ? "left" : "right";
        check_schema("P4", bs, tag);
        check_schema("P5", bs, tag);
    }
    const char* q1_bodies[] = {"x = x", "(all w in x)(w in x)",
                               "(all w in x)(w = w)", "x = x or x = x",
                               "x = x and x = x"};
    const char* q2_bodies[] = {"x = x", "x in x", "{} in x", "x = {}",
                               "{} = x"};
    const char* q4_bodies[] = {"x = x", "x in x", "{} in x", "x = {}",
                               "x in {{}}"};
    const char* q3_vars[] = {"x", "y", "z", "a", "b"};
    for (int i = 0; i < 5; ++i) {
        std::string tag = "#" + std::to_string(i);
        {
            SchemaBindings b;
            b.formulas["phi"] = parse_formula(q1_bodies[i]);
            b.vars["x"] = "x";
            b.vars["t"] = "z";
            check_schema("Q1", b, tag);
        }
        {
            SchemaBindings b;
            b.formulas["phi"] = parse_formula(q2_bodies[i]);
            b.vars["x"] = "x";
            b.vars["t"] = "z";
            check_schema("Q2", b, tag);
        }
        {
            SchemaBindings b;
            b.vars["x"] = q3_vars[i];
            check_schema("Q3", b, tag);
        }
        {
            SchemaBindings b;
            b.formulas["phi"] = parse_formula(q4_bodies[i]);
            b.vars["x"] = "x";
            b.vars["s"] = "a";
            b.vars["t"] = "b";
            check_schema("Q4", b, tag);
        }
    }
    res.detail = std::to_string(extracted) + "/" +
                 std::to_string(corpus.size()) +
                 " proofs extracted, 12 schemas x 5 instances";
    return res;
}

// --- driver --------------------------------------------------------------

inline std::vector<CriterionResult> Selftest::run_all(std::ostream& os) {
    std::vector<CriterionResult> out;
    auto run = [&](CriterionResult (Selftest::*fn)()) {
        auto t0 = std::chrono::steady_clock::now();
        CriterionResult r = (this->*fn)();
        auto t1 = std::chrono::steady_clock::now();
        r.seconds = std::chrono::duration<double>(t1 - t0).count();
        char line[64];
        std::snprintf(line, sizeof(line), "[%2d] %s  %7.2fs  ", r.id,
                      r.pass ? "PASS" : "FAIL", r.seconds);
        os << line << r.name;
        if (!r.detail.empty()) os << "  (" << r.detail << ")";
        os << "\n";
        for (const std::string& f : r.failures) os << "      - " << f << "\n";
        out.push_back(std::move(r));
        return;
    };
    run(&Selftest::c1_ordinal_oracle);
    run(&Selftest::c2_pairing);
    run(&Selftest::c3_interleave);
    run(&Selftest::c4_setcode);
    run(&Selftest::c5_delta0_oracle);
    run(&Selftest::c6_truth_lemma);
    run(&Selftest::c7_recognizers);
    run(&Selftest::c8_kp_suite);
    run(&Selftest::c9_induction);
    run(&Selftest::c10_proofs);
    run(&Selftest::c11_non_contradiction);
    run(&Selftest::c12_monotonicity);
    return out;
}

inline bool run_selftest(std::ostream& os) {
    Selftest st;
    std::vector<CriterionResult> rs = st.run_all(os);
    bool ok = true;
    for (const CriterionResult& r : rs) ok = ok && r.pass;
    os << (ok ? "selftest: all 12 criteria passed"
              : "selftest: FAILURES present")
       << "\n";
    return ok;
}

}  // namespace rreal
