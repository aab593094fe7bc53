#pragma once

// Recognizers and pool-based recognition judgments: the delta contract
// ("halts with 1 exactly on the recognized set"), rho extraction, witness
// harvesting, and chain packaging for c-recognizability.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rreal/error.hpp"
#include "rreal/ordset.hpp"
#include "rreal/otm.hpp"

namespace rreal {

struct Recognizer {
    std::optional<MicroProgram> micro;
    std::optional<MacroProgram> macro;
    OrdSet parameter;

    static Recognizer from_macro(MacroProgram p, OrdSet param = {}) {
        Recognizer r;
        r.macro = std::move(p);
        r.parameter = std::move(param);
        return r;
    }
    static Recognizer from_macro_text(const std::string& text, OrdSet param = {}) {
        return from_macro(assemble_macro(text), std::move(param));
    }
    static Recognizer from_micro(MicroProgram p, OrdSet param = {}) {
        Recognizer r;
        r.micro = std::move(p);
        r.parameter = std::move(param);
        return r;
    }

    RunResult run(const OrdSet& oracle, std::uint64_t fuel) const {
        if (macro) return macro_run(*macro, oracle, parameter, fuel);
        if (micro) return micro_run(*micro, oracle, parameter, fuel);
        throw MalformedOperand("recognizer has no program");
    }
};

// EQ-constant recognizer: accepts iff the oracle equals c.
inline Recognizer eq_constant(const OrdSet& c) {
    std::string text = TemplateRegistry::instantiate(
        TemplateRegistry::instance().get("eqconst"), {c});
    return Recognizer::from_macro_text(text);
}

struct CandidatePool {
    std::vector<OrdSet> candidates;

    void add(const OrdSet& c) {
        for (const OrdSet& x : candidates)
            if (x == c) return;
        candidates.push_back(c);
    }
    std::size_t size() const { return candidates.size(); }
};

struct RecognitionVerdict {
    enum Kind { Recognizes, RejectsAll, Ambiguous, Undetermined } kind;
    OrdSet witness;                 // Recognizes
    std::vector<OrdSet> witnesses;  // Ambiguous
    std::string reason;             // Undetermined

    std::string str() const {
        switch (kind) {
            case Recognizes: return "recognizes " + witness.str();
            case RejectsAll: return "rejects-all";
            case Ambiguous: return "ambiguous " + std::to_string(witnesses.size());
            case Undetermined: return "undetermined " + reason;
        }
        return "?";
    }
};

// Runs r on every pool candidate, oracle = relative_to (+) candidate, or the
// candidate alone when no base is given. A run that raises MalformedOperand
// rejects that candidate (it is not a well-formed object for the program).
inline RecognitionVerdict test_recognizer(const Recognizer& r,
                                          const CandidatePool& pool,
                                          const std::optional<OrdSet>& relative_to,
                                          std::uint64_t fuel) {
    RecognitionVerdict v;
    std::vector<OrdSet> accepted;
    for (const OrdSet& cand : pool.candidates) {
        OrdSet oracle = relative_to ? interleave(*relative_to, cand) : cand;
        RunResult res;
        try {
            res = r.run(oracle, fuel);
        } catch (const MalformedOperand&) {
            continue;  // candidate rejected
        }
        if (res.status != RunStatus::Halted) {
            v.kind = RecognitionVerdict::Undetermined;
            v.reason = res.status_str() + " on candidate " + cand.str();
            return v;
        }
        if (res.output_bit == 1) accepted.push_back(cand);
    }
    if (accepted.empty()) {
        v.kind = RecognitionVerdict::RejectsAll;
    } else if (accepted.size() == 1) {
        v.kind = RecognitionVerdict::Recognizes;
        v.witness = accepted.front();
    } else {
        v.kind = RecognitionVerdict::Ambiguous;
        v.witnesses = std::move(accepted);
    }
    return v;
}

// rho(P,q): the projections of the recognized set, when recognition succeeds.
struct RhoResult {
    bool defined = false;
    OrdSet rho0, rho1;
    RecognitionVerdict verdict;
};

inline RhoResult rho(const Recognizer& r, const CandidatePool& pool,
                     std::uint64_t fuel,
                     const std::optional<OrdSet>& relative_to = std::nullopt) {
    RhoResult out;
    out.verdict = test_recognizer(r, pool, relative_to, fuel);
    if (out.verdict.kind == RecognitionVerdict::Recognizes) {
        out.defined = true;
        out.rho0 = project(out.verdict.witness, 0);
        out.rho1 = project(out.verdict.witness, 1);
    }
    return out;
}

// Harvest convention: recognizing programs emitted by this library write the
// set they expect to accept onto the output tape. Running them with an empty
// candidate slot surfaces that witness so callers can seed pools.
inline std::optional<OrdSet> harvest_witness(
    const Recognizer& r, const std::optional<OrdSet>& relative_to,
    std::uint64_t fuel) {
    OrdSet oracle = relative_to ? interleave(*relative_to, OrdSet{}) : OrdSet{};
    try {
        RunResult res = r.run(oracle, fuel);
        if (res.output_set.empty() && res.status != RunStatus::Halted)
            return std::nullopt;
        return res.output_set;
    } catch (const MalformedOperand&) {
        return std::nullopt;
    }
}

// --- chain packaging ----------------------------------------------------
//
// links[i] = (R_i, x_i) with R_i recognizing x_i relative to x_{i+1} (the
// final link relative to the chain's base, supplied at test time). The
// package is z = x_0 (+) pack(x_1, ..., x_{m-1}); the composite recognizer
// accepts exactly z relative to the base by replaying every link's
// recognition via the universal machine.

struct ChainPackage {
    Recognizer composite;
    OrdSet z;
};

inline ChainPackage chain_package(
    const std::vector<std::pair<Recognizer, OrdSet>>& links) {
    if (links.empty()) throw EmptyChain("chain_package: no links");
    std::size_t m = links.size();
    std::vector<OrdSet> mids;
    for (std::size_t i = 1; i < m; ++i) mids.push_back(links[i].second);
    OrdSet z = interleave(links[0].second, pack_right(mids));

    std::string text;
    text += "orsec r0 0\n";  // base
    text += "orsec r1 1\n";  // candidate package z
    text += "load r8 " + z.str() + "\n";
    text += "writeout r8\n";
    text += "proj r2 r1 0\n";  // current x_i
    text += "proj r3 r1 1\n";  // remaining intermediates
    for (std::size_t i = 0; i < m; ++i) {
        const Recognizer& link = links[i].first;
        if (!link.macro)
            throw MalformedOperand("chain_package: links must be macro programs");
        std::uint64_t g = ProgramRegistry::instance().intern(link.macro->source);
        OrdSet ser = progparam_ser(g, link.parameter);
        if (i + 1 < m) {
            if (i + 2 < m) {
                text += "proj r7 r3 0\n";
                text += "proj r3 r3 1\n";
            } else {
                // last intermediate is the un-nested tail of the pack
                text += "union r7 r3 r3\n";
            }
        } else {
            text += "union r7 r0 r0\n";  // x_m = base
        }
        text += "load r4 " + ser.str() + "\n";
        text += "ilv r5 r7 r2\n";
        text += "runsub r6 r4 r5\n";
        text += "brf reject\n";
        text += "union r2 r7 r7\n";
    }
    text += "halt 1\n";
    text += "reject:\n";
    text += "halt 0\n";

    ChainPackage pkg;
    pkg.composite = Recognizer::from_macro_text(text);
    pkg.z = z;
    return pkg;
}

// A mutation pool for a witness: the witness itself plus single-element
// insertions/removals, enough for >= 1 + extra mutants.
inline CandidatePool mutation_pool(const OrdSet& witness, std::size_t extra = 7) {
    CandidatePool pool;
    pool.add(witness);
    std::uint64_t probe = 0;
    while (pool.size() < 1 + extra) {
        OrdSet m = witness;
        if (probe < witness.size()) {
            // removal mutant
            OrdSet r;
            std::size_t skip = probe;
            for (std::size_t i = 0; i < witness.elems().size(); ++i)
                if (i != skip) r.insert(witness.elems()[i]);
            m = r;
        } else {
            // insertion mutant
            m.insert(Ordinal::fin(probe - witness.size()));
            if (m == witness) {
                ++probe;
                continue;
            }
        }
        pool.add(m);
        ++probe;
        if (probe > witness.size() + extra + 64) break;
    }
    return pool;
}

}  // namespace rreal
