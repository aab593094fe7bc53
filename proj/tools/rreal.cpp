// rreal: command-line surface for the r-realizability toolkit.
//
// Subcommands: ord, code, otm, rec, formula, realize, kp, proof, selftest.
// Exit codes: 0 success / Realized / valid, 1 Refuted / invalid,
// 2 Unknown / Undetermined, 3 usage or parse errors.

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rreal/selftest.hpp"

namespace {

constexpr int kOk = 0, kRefuted = 1, kUnknown = 2, kUsage = 3;

// Every report embeds the manifest that produced it. The timestamp is
// confined to a single header line so reports stay byte-comparable.
struct Report {
    std::string command;
    std::vector<std::pair<std::string, std::string>> manifest;
    std::vector<std::pair<std::string, std::string>> result;
    bool json = false;

    void m(const std::string& k, const std::string& v) {
        manifest.emplace_back(k, v);
    }
    void r(const std::string& k, const std::string& v) {
        result.emplace_back(k, v);
    }

    void emit(std::ostream& os) const {
        std::time_t t = std::time(nullptr);
        char ts[32];
        std::strftime(ts, sizeof(ts), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
        if (json) {
            nlohmann::json j;
            j["timestamp"] = ts;
            j["manifest"]["command"] = command;
            for (const auto& [k, v] : manifest) j["manifest"][k] = v;
            for (const auto& [k, v] : result) j["result"][k] = v;
            os << j.dump(2) << "\n";
            return;
        }
        os << "# rreal report " << ts << "\n";
        os << "manifest.command=" << command << "\n";
        for (const auto& [k, v] : manifest)
            os << "manifest." << k << "=" << v << "\n";
        for (const auto& [k, v] : result) os << k << "=" << v << "\n";
    }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw rreal::MalformedOperand("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw rreal::MalformedOperand("cannot write file: " + path);
    out << text;
}

rreal::CandidatePool load_pool(const std::string& path) {
    rreal::CandidatePool pool;
    std::istringstream in(slurp(path));
    std::string line;
    while (std::getline(in, line)) {
        std::size_t h = line.find('#');
        if (h != std::string::npos) line = line.substr(0, h);
        std::size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        pool.add(rreal::parse_ordset(line));
    }
    return pool;
}

// SetCode files: a `domain=<ordinal>` header line, then `code=<ordset>`.
rreal::SetCode load_code(const std::string& path) {
    std::istringstream in(slurp(path));
    std::string line;
    rreal::SetCode c;
    bool have_dom = false, have_code = false;
    while (std::getline(in, line)) {
        if (line.rfind("domain=", 0) == 0) {
            c.domain = rreal::parse_ordinal(line.substr(7));
            have_dom = true;
        } else if (line.rfind("code=", 0) == 0) {
            c.code = rreal::parse_ordset(line.substr(5));
            have_code = true;
        }
    }
    if (!have_code) throw rreal::MalformedOperand("code file missing code=");
    if (!have_dom) c.domain = rreal::infer_domain(c.code);
    return c;
}

std::string code_text(const rreal::SetCode& c) {
    return "domain=" + c.domain.str() + "\ncode=" + c.code.str() + "\n";
}

int verdict_exit(const rreal::CheckVerdict& v) {
    switch (v.kind) {
        case rreal::CheckVerdict::Realized: return kOk;
        case rreal::CheckVerdict::Refuted: return kRefuted;
        default: return kUnknown;
    }
}

int recognition_exit(const rreal::RecognitionVerdict& v) {
    switch (v.kind) {
        case rreal::RecognitionVerdict::Recognizes: return kOk;
        case rreal::RecognitionVerdict::Undetermined: return kUnknown;
        default: return kRefuted;
    }
}

}  // namespace

int main(int argc, char** argv) {
    using namespace rreal;
    CLI::App app{"r-realizability toolkit"};
    app.require_subcommand(1);
    bool json = false;
    app.add_flag("--json", json, "emit the report as JSON");

    int universe_rank = 3;
    std::uint64_t fuel = 1000000;

    int exit_code = kOk;
    Report rep;

    // ---- ord -----------------------------------------------------------
    std::string ord_expr;
    auto* c_ord = app.add_subcommand("ord", "normalize an ordinal expression");
    c_ord->add_option("expr", ord_expr, "ordinal expression")->required();
    c_ord->callback([&] {
        rep.command = "ord";
        rep.m("expr", ord_expr);
        rep.r("ordinal", parse_ordinal(ord_expr).str());
    });

    // ---- code ----------------------------------------------------------
    auto* c_code = app.add_subcommand("code", "set codes");
    c_code->require_subcommand(1);
    std::string code_set, code_in, code_out, code_index;
    {
        auto* enc = c_code->add_subcommand("encode", "encode an HF set");
        enc->add_option("--set", code_set, "HF set literal")->required();
        enc->add_option("--out", code_out, "write the code file here");
        enc->callback([&] {
            rep.command = "code encode";
            rep.m("set", code_set);
            SetCode c = encode(parse_hfset(code_set));
            rep.r("domain", c.domain.str());
            rep.r("code", c.code.str());
            if (!code_out.empty()) spit(code_out, code_text(c));
        });
        auto* dec = c_code->add_subcommand("decode", "decode a set code");
        dec->add_option("--in", code_in, "code file")->required();
        dec->callback([&] {
            rep.command = "code decode";
            rep.m("in", code_in);
            rep.r("set", decode(load_code(code_in)).str());
        });
        auto* der = c_code->add_subcommand("derive", "re-root at a member index");
        der->add_option("--in", code_in, "code file")->required();
        der->add_option("--index", code_index, "member index (ordinal)")
            ->required();
        der->add_option("--out", code_out, "write the derived code file here");
        der->callback([&] {
            rep.command = "code derive";
            rep.m("in", code_in);
            rep.m("index", code_index);
            SetCode d =
                derived_code(load_code(code_in), parse_ordinal(code_index));
            rep.r("domain", d.domain.str());
            rep.r("code", d.code.str());
            rep.r("set", decode(d).str());
            if (!code_out.empty()) spit(code_out, code_text(d));
        });
    }

    // ---- otm -----------------------------------------------------------
    auto* c_otm = app.add_subcommand("otm", "macro-machine programs");
    c_otm->require_subcommand(1);
    std::string otm_in, otm_oracle = "{}", otm_param = "{}";
    {
        auto* asmc = c_otm->add_subcommand("assemble", "assemble and normalize");
        asmc->add_option("--in", otm_in, "assembly file")->required();
        asmc->callback([&] {
            rep.command = "otm assemble";
            rep.m("in", otm_in);
            MacroProgram p = assemble_macro(slurp(otm_in));
            rep.r("instructions", std::to_string(p.instrs.size()));
            rep.r("godel", std::to_string(
                              ProgramRegistry::instance().intern(p.source)));
        });
        auto* run = c_otm->add_subcommand("run", "run a macro program");
        run->add_option("--in", otm_in, "assembly file")->required();
        run->add_option("--oracle", otm_oracle, "oracle set (default {})");
        run->add_option("--param", otm_param, "parameter set (default {})");
        run->add_option("--fuel", fuel, "fuel budget");
        run->callback([&] {
            rep.command = "otm run";
            rep.m("in", otm_in);
            rep.m("oracle", otm_oracle);
            rep.m("param", otm_param);
            rep.m("fuel", std::to_string(fuel));
            MacroProgram p = assemble_macro(slurp(otm_in));
            RunResult res = macro_run(p, parse_ordset(otm_oracle),
                                      parse_ordset(otm_param), fuel);
            rep.r("status", res.status_str());
            rep.r("output_bit", std::to_string(res.output_bit));
            rep.r("output_set", res.output_set.str());
            rep.r("steps", std::to_string(res.steps));
            exit_code = res.halted() ? kOk : kUnknown;
        });
    }

    // ---- rec -----------------------------------------------------------
    auto* c_rec = app.add_subcommand("rec", "recognizers");
    c_rec->require_subcommand(1);
    std::string rec_prog, rec_param = "{}", rec_pool, rec_base, rec_links;
    {
        auto add_common = [&](CLI::App* sc, bool need_pool) {
            sc->add_option("--program", rec_prog, "assembly file")->required();
            sc->add_option("--param", rec_param, "parameter set");
            auto* po = sc->add_option("--pool", rec_pool,
                                      "candidate pool file (one set per line)");
            if (need_pool) po->required();
            sc->add_option("--base", rec_base, "relative-to base set");
            sc->add_option("--fuel", fuel, "fuel budget");
        };
        auto make_rec = [&] {
            return Recognizer::from_macro_text(slurp(rec_prog),
                                               parse_ordset(rec_param));
        };
        auto base_opt = [&]() -> std::optional<OrdSet> {
            if (rec_base.empty()) return std::nullopt;
            return parse_ordset(rec_base);
        };
        auto* t = c_rec->add_subcommand("test", "pool recognition verdict");
        add_common(t, true);
        t->callback([&, make_rec, base_opt] {
            rep.command = "rec test";
            rep.m("program", rec_prog);
            rep.m("param", rec_param);
            rep.m("pool", rec_pool);
            rep.m("fuel", std::to_string(fuel));
            RecognitionVerdict v =
                test_recognizer(make_rec(), load_pool(rec_pool), base_opt(),
                                fuel);
            rep.r("verdict", v.str());
            exit_code = recognition_exit(v);
        });
        auto* rh = c_rec->add_subcommand("rho", "recognized-set projections");
        add_common(rh, true);
        rh->callback([&, make_rec, base_opt] {
            rep.command = "rec rho";
            rep.m("program", rec_prog);
            rep.m("pool", rec_pool);
            RhoResult rr =
                rho(make_rec(), load_pool(rec_pool), fuel, base_opt());
            rep.r("verdict", rr.verdict.str());
            if (rr.defined) {
                rep.r("rho0", rr.rho0.str());
                rep.r("rho1", rr.rho1.str());
            }
            exit_code = recognition_exit(rr.verdict);
        });
        auto* ch = c_rec->add_subcommand(
            "chain", "compose chain links into one package");
        ch->add_option("--links", rec_links,
                       "file: one '<program-file> <set>' per line")
            ->required();
        ch->add_option("--pool", rec_pool, "optional pool to test against");
        ch->add_option("--base", rec_base, "relative-to base set");
        ch->add_option("--fuel", fuel, "fuel budget");
        ch->callback([&] {
            rep.command = "rec chain";
            rep.m("links", rec_links);
            std::vector<std::pair<Recognizer, OrdSet>> links;
            std::istringstream in(slurp(rec_links));
            std::string line;
            while (std::getline(in, line)) {
                std::size_t h = line.find('#');
                if (h != std::string::npos) line = line.substr(0, h);
                std::istringstream ls(line);
                std::string path;
                if (!(ls >> path)) continue;
                std::string rest;
                std::getline(ls, rest);
                links.emplace_back(Recognizer::from_macro_text(slurp(path)),
                                   parse_ordset(rest));
            }
            ChainPackage pkg = chain_package(links);
            rep.r("z", pkg.z.str());
            if (!rec_pool.empty()) {
                std::optional<OrdSet> b;
                if (!rec_base.empty()) b = parse_ordset(rec_base);
                RecognitionVerdict v = test_recognizer(
                    pkg.composite, load_pool(rec_pool), b, fuel);
                rep.r("verdict", v.str());
                exit_code = recognition_exit(v);
            }
        });
    }

    // ---- formula -------------------------------------------------------
    auto* c_fml = app.add_subcommand("formula", "formulas");
    c_fml->require_subcommand(1);
    std::string fml_text, fml_in, fml_method = "bounded";
    std::vector<std::string> fml_env;
    {
        auto add_input = [&](CLI::App* sc) {
            sc->add_option("--formula", fml_text, "formula text");
            sc->add_option("--in", fml_in, "formula file");
        };
        auto get_formula = [&] {
            if (!fml_text.empty()) return parse_formula(fml_text);
            if (!fml_in.empty()) return parse_formula(slurp(fml_in));
            throw MalformedOperand("need --formula or --in");
        };
        auto* pa = c_fml->add_subcommand("parse", "parse and reprint");
        add_input(pa);
        pa->callback([&, get_formula] {
            rep.command = "formula parse";
            rep.m("formula", fml_text.empty() ? fml_in : fml_text);
            FormulaPtr f = get_formula();
            rep.r("printed", print_formula(f));
            std::set<std::string> fv = free_vars(f);
            std::string vs;
            for (const std::string& v : fv) vs += (vs.empty() ? "" : " ") + v;
            rep.r("free_vars", vs);
        });
        auto* cl = c_fml->add_subcommand("classify", "quantifier class");
        add_input(cl);
        cl->callback([&, get_formula] {
            rep.command = "formula classify";
            rep.m("formula", fml_text.empty() ? fml_in : fml_text);
            rep.r("class", classify(get_formula()).str());
        });
        auto* ev = c_fml->add_subcommand("eval", "evaluate");
        add_input(ev);
        ev->add_option("--env", fml_env, "binding var=<hfset>, repeatable");
        ev->add_option("--method", fml_method, "bounded | universe");
        ev->add_option("--universe-rank", universe_rank, "rank bound");
        ev->add_option("--fuel", fuel, "fuel budget");
        ev->callback([&, get_formula] {
            rep.command = "formula eval";
            rep.m("formula", fml_text.empty() ? fml_in : fml_text);
            rep.m("method", fml_method);
            rep.m("universe_rank", std::to_string(universe_rank));
            rep.m("fuel", std::to_string(fuel));
            FormulaPtr f = get_formula();
            std::map<std::string, HFSet> henv;
            for (const std::string& b : fml_env) {
                std::size_t eq = b.find('=');
                if (eq == std::string::npos)
                    throw MalformedOperand("--env expects var=<hfset>");
                henv[b.substr(0, eq)] = parse_hfset(b.substr(eq + 1));
                rep.m("env." + b.substr(0, eq), b.substr(eq + 1));
            }
            bool val;
            if (fml_method == "bounded") {
                std::map<std::string, SetCode> cenv;
                for (const auto& [k, v] : henv) cenv[k] = encode(v);
                val = eval_bounded(f, cenv, fuel);
            } else if (fml_method == "universe") {
                val = eval_over_universe(f, hf_universe(universe_rank), henv);
            } else {
                throw MalformedOperand("unknown --method " + fml_method);
            }
            rep.r("value", val ? "true" : "false");
        });
    }

    // ---- realize -------------------------------------------------------
    auto* c_rlz = app.add_subcommand("realize", "realizability checking");
    c_rlz->require_subcommand(1);
    std::string rlz_formula, rlz_formula_file, rlz_realizer, rlz_out;
    std::vector<std::string> rlz_assume;
    {
        auto add_formula = [&](CLI::App* sc) {
            sc->add_option("--formula", rlz_formula, "formula text");
            sc->add_option("--formula-file", rlz_formula_file, "formula file");
        };
        auto get_formula = [&] {
            if (!rlz_formula.empty()) return parse_formula(rlz_formula);
            if (!rlz_formula_file.empty())
                return parse_formula(slurp(rlz_formula_file));
            throw MalformedOperand("need --formula or --formula-file");
        };
        auto* chk = c_rlz->add_subcommand("check", "verdict for a realizer");
        add_formula(chk);
        chk->add_option("--realizer", rlz_realizer, "realizer tree file")
            ->required();
        chk->add_option("--universe-rank", universe_rank, "rank bound");
        chk->add_option("--fuel", fuel, "fuel budget");
        chk->add_option("--assume-true", rlz_assume,
                        "register the canonical realizer of this true "
                        "sentence as an antecedent, repeatable");
        chk->callback([&, get_formula] {
            rep.command = "realize check";
            rep.m("formula",
                  rlz_formula.empty() ? rlz_formula_file : rlz_formula);
            rep.m("realizer", rlz_realizer);
            rep.m("universe_rank", std::to_string(universe_rank));
            rep.m("fuel", std::to_string(fuel));
            FormulaPtr f = get_formula();
            RealizerPtr r = realizer_from_text(slurp(rlz_realizer));
            CheckContext ctx = make_context(universe_rank, fuel);
            for (const std::string& a : rlz_assume) {
                FormulaPtr g = parse_formula(a);
                ctx.register_realizer(g, realizer_for_true(g, ctx.universe));
                rep.m("assume", a);
            }
            CheckVerdict v = check(r, f, ctx);
            rep.r("verdict", v.str());
            exit_code = verdict_exit(v);
        });
        auto* can = c_rlz->add_subcommand("canonical",
                                          "canonical realizer of a truth");
        add_formula(can);
        can->add_option("--universe-rank", universe_rank, "rank bound");
        can->add_option("--out", rlz_out, "write the realizer tree here");
        can->callback([&, get_formula] {
            rep.command = "realize canonical";
            rep.m("formula",
                  rlz_formula.empty() ? rlz_formula_file : rlz_formula);
            rep.m("universe_rank", std::to_string(universe_rank));
            FormulaPtr f = get_formula();
            RealizerPtr r = free_vars(f).empty() && detail::all_bounded(f)
                                ? canonical_delta0_realizer(f)
                                : realizer_for_true(f, hf_universe(universe_rank));
            std::string text = realizer_to_text(r);
            rep.r("realizer", text);
            if (!rlz_out.empty()) spit(rlz_out, text);
        });
        auto* ser = c_rlz->add_subcommand("serialize",
                                          "set-of-ordinals serialization");
        ser->add_option("--realizer", rlz_realizer, "realizer tree file")
            ->required();
        ser->callback([&] {
            rep.command = "realize serialize";
            rep.m("realizer", rlz_realizer);
            rep.r("serialized",
                  serialize(realizer_from_text(slurp(rlz_realizer))).str());
        });
    }

    // ---- kp ------------------------------------------------------------
    auto* c_kp = app.add_subcommand("kp", "KP axiom emission");
    c_kp->require_subcommand(1);
    std::string kp_axiom, kp_x, kp_y, kp_set, kp_phi, kp_out;
    bool kp_check = false;
    {
        auto* em = c_kp->add_subcommand("emit", "emit a realizer instance");
        em->add_option("--axiom", kp_axiom,
                       "emptyset|pairing|union|extensionality|infinity|"
                       "separation|replacement|induction|choice")
            ->required();
        em->add_option("--x", kp_x, "first operand (HF set)");
        em->add_option("--y", kp_y, "second operand (HF set)");
        em->add_option("--set", kp_set, "domain / subject set (HF set)");
        em->add_option("--phi", kp_phi, "scheme body formula");
        em->add_option("--universe-rank", universe_rank, "rank bound");
        em->add_option("--fuel", fuel, "fuel budget");
        em->add_flag("--check", kp_check, "verify the emitted realizer");
        em->add_option("--out", kp_out, "write the realizer tree here");
        em->callback([&] {
            rep.command = "kp emit";
            rep.m("axiom", kp_axiom);
            if (!kp_x.empty()) rep.m("x", kp_x);
            if (!kp_y.empty()) rep.m("y", kp_y);
            if (!kp_set.empty()) rep.m("set", kp_set);
            if (!kp_phi.empty()) rep.m("phi", kp_phi);
            rep.m("universe_rank", std::to_string(universe_rank));
            rep.m("fuel", std::to_string(fuel));
            CheckContext ctx = make_context(universe_rank, fuel);
            EmissionResult emr;
            if (kp_axiom == "emptyset" || kp_axiom == "pairing" ||
                kp_axiom == "union" || kp_axiom == "extensionality" ||
                kp_axiom == "infinity") {
                AxiomInstance ax;
                if (kp_axiom == "emptyset") ax.kind = AxiomInstance::EmptySet;
                if (kp_axiom == "pairing") {
                    ax.kind = AxiomInstance::Pairing;
                    ax.x = parse_hfset(kp_x);
                    ax.y = parse_hfset(kp_y);
                }
                if (kp_axiom == "union") {
                    ax.kind = AxiomInstance::Union;
                    ax.X = parse_hfset(kp_set);
                }
                if (kp_axiom == "extensionality") {
                    ax.kind = AxiomInstance::Extensionality;
                    for (const HFSet& u : ctx.universe) {
                        FormulaPtr ante = substitute(
                            substitute(
                                parse_formula("(all z)(z in x <-> z in y)"),
                                "x", Term::mklit(u)),
                            "y", Term::mklit(u));
                        ctx.register_realizer(
                            ante, realizer_for_true(ante, ctx.universe));
                    }
                }
                if (kp_axiom == "infinity") ax.kind = AxiomInstance::Infinity;
                emr = emit_basic(ax);
            } else if (kp_axiom == "separation") {
                emr = emit_separation(parse_formula(kp_phi), {},
                                      parse_hfset(kp_set));
            } else if (kp_axiom == "replacement") {
                HFSet X = parse_hfset(kp_set);
                FormulaPtr phi = parse_formula(kp_phi);
                FormulaPtr full = replacement_formula(phi, X, "x", "y");
                RealizerPtr ante = realizer_for_true(full->a, ctx.universe);
                emr = emit_replacement(phi, {}, X, ante, ctx);
            } else if (kp_axiom == "induction") {
                FormulaPtr phi = parse_formula(kp_phi);
                RealizerPtr prem = realizer_for_true(
                    induction_premise_formula(phi, "a"), ctx.universe);
                emr = emit_induction(phi, {}, parse_hfset(kp_set), prem, ctx);
            } else if (kp_axiom == "choice") {
                HFSet X = parse_hfset(kp_set);
                FormulaPtr prem = Formula::bquant(
                    Formula::ForAllIn, "y", Term::mklit(X),
                    Formula::bquant(
                        Formula::ExistsIn, "z", Term::mkvar("y"),
                        Formula::atom(Formula::Equal, Term::mkvar("z"),
                                      Term::mkvar("z"))));
                RealizerPtr rp = realizer_for_true(prem, ctx.universe);
                emr = emit_choice(X, rp, ctx);
            } else {
                throw MalformedOperand("unknown axiom: " + kp_axiom);
            }
            rep.r("formula", print_formula(emr.formula));
            rep.r("checkable", emr.checkable ? "yes" : "no");
            for (const auto& [k, v] : emr.witnesses)
                rep.r("witness." + k, v.str());
            if (!kp_out.empty()) spit(kp_out, realizer_to_text(emr.realizer));
            if (kp_check && emr.checkable) {
                for (auto& [f, r] : emr.auxiliaries)
                    if (f) ctx.register_realizer(f, r);
                CheckVerdict v = check(emr.realizer, emr.formula, ctx);
                rep.r("verdict", v.str());
                exit_code = verdict_exit(v);
            }
        });
    }

    // ---- proof ---------------------------------------------------------
    auto* c_prf = app.add_subcommand("proof", "Hilbert-calculus proofs");
    c_prf->require_subcommand(1);
    std::string prf_in, prf_out;
    std::vector<std::string> prf_assume;
    bool prf_check_conclusion = false;
    {
        auto* chk = c_prf->add_subcommand("check", "validate a proof file");
        chk->add_option("--in", prf_in, "proof file")->required();
        chk->callback([&] {
            rep.command = "proof check";
            rep.m("in", prf_in);
            Proof p = parse_proof(slurp(prf_in));
            ProofCheck pc = check_proof(p);
            rep.r("result", pc.str());
            if (pc.valid && !p.steps.empty())
                rep.r("conclusion", print_formula(p.steps.back().formula));
            exit_code = pc.valid ? kOk : kRefuted;
        });
        auto* ext = c_prf->add_subcommand("extract",
                                          "extract the conclusion realizer");
        ext->add_option("--in", prf_in, "proof file")->required();
        ext->add_option("--universe-rank", universe_rank, "rank bound");
        ext->add_option("--fuel", fuel, "fuel budget");
        ext->add_option("--assume-true", prf_assume,
                        "register the canonical realizer of this true "
                        "sentence, repeatable");
        ext->add_flag("--check", prf_check_conclusion,
                      "verify the extracted realizer against the conclusion");
        ext->add_option("--out", prf_out, "write the realizer tree here");
        ext->callback([&] {
            rep.command = "proof extract";
            rep.m("in", prf_in);
            rep.m("universe_rank", std::to_string(universe_rank));
            rep.m("fuel", std::to_string(fuel));
            Proof p = parse_proof(slurp(prf_in));
            ProofCheck pc = check_proof(p);
            if (!pc.valid) {
                rep.r("result", pc.str());
                exit_code = kRefuted;
                return;
            }
            ExtractionEnv env;
            env.ctx = make_context(universe_rank, fuel);
            for (const ProofStep& st : p.steps)
                if (st.kind == ProofStep::Premise)
                    env.premise_realizers[print_formula(st.formula)] =
                        realizer_for_true(st.formula, env.ctx.universe);
            for (const std::string& a : prf_assume) {
                FormulaPtr g = parse_formula(a);
                env.ctx.register_realizer(g,
                                          realizer_for_true(g, env.ctx.universe));
                rep.m("assume", a);
            }
            ExtractionResult ex = extract(p, env);
            rep.r("conclusion", print_formula(ex.conclusion));
            if (!prf_out.empty()) spit(prf_out, realizer_to_text(ex.realizer));
            if (prf_check_conclusion) {
                CheckVerdict v = check(ex.realizer, ex.conclusion, env.ctx);
                rep.r("verdict", v.str());
                exit_code = verdict_exit(v);
            }
        });
    }

    // ---- selftest ------------------------------------------------------
    auto* c_self =
        app.add_subcommand("selftest", "run all acceptance criteria");
    c_self->callback([&] {
        rep.command = "selftest";
        bool ok = run_selftest(std::cout);
        rep.r("result", ok ? "pass" : "fail");
        exit_code = ok ? kOk : kRefuted;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kUsage;
    } catch (const rreal::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    rep.json = json;
    rep.emit(std::cout);
    return exit_code;
}
