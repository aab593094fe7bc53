#pragma once

// Two-layer ordinal machine model.
//
// Micro layer: Koepke-style machines with sparse ordinal-indexed tapes,
// successor steps, left-moves from limit positions resetting to 0, and
// best-effort omega-jumps by eventual-periodicity detection with component-
// wise liminf.
//
// Macro layer: a register VM over OrdSet values with set-level intrinsics
// (projection, interleaving, derived codes, Delta0 evaluation, subprogram
// runs), in which all of the paper-level recognizer programs are written.
// Programs are interned in a global registry; the intern id doubles as the
// program's Godel number.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "rreal/error.hpp"
#include "rreal/formula.hpp"
#include "rreal/ordinal.hpp"
#include "rreal/ordset.hpp"
#include "rreal/setcode.hpp"

namespace rreal {

// --- run results --------------------------------------------------------

enum class RunStatus { Halted, FuelExhausted, LimitUndetermined };

struct MicroSnapshot {
    int state = 0;
    Ordinal head_oracle, head_work, head_output;
    std::set<Ordinal> work, output;
};

struct OmegaJumpRecord {
    std::size_t period = 0;
    std::vector<MicroSnapshot> tail;  // snapshots covering the last two periods
    MicroSnapshot limit;              // the configuration adopted at the limit
};

struct RunResult {
    RunStatus status = RunStatus::FuelExhausted;
    int output_bit = 0;
    OrdSet output_set;
    std::uint64_t steps = 0;
    std::vector<OmegaJumpRecord> omega_jumps;

    bool halted() const { return status == RunStatus::Halted; }
    std::string status_str() const {
        switch (status) {
            case RunStatus::Halted: return "halted";
            case RunStatus::FuelExhausted: return "fuel-exhausted";
            case RunStatus::LimitUndetermined: return "limit-undetermined";
        }
        return "?";
    }
};

// --- micro machine ------------------------------------------------------

enum class Move : char { L = 'L', R = 'R', S = 'S' };

struct MicroAction {
    int write_work = 0;
    int write_output = 0;
    Move move_work = Move::S;
    Move move_oracle = Move::S;
    Move move_output = Move::S;
    int next_state = 0;
};

struct MicroProgram {
    // key: (state, oracle_bit, work_bit, output_bit)
    std::map<std::tuple<int, int, int, int>, MicroAction> trans;
    int start_state = 1;
    int halt_state = 0;

    void add(int st, int o, int w, int f, MicroAction a) {
        trans[{st, o, w, f}] = a;
    }
    // Same action for all read-bit combinations.
    void add_all(int st, MicroAction a) {
        for (int o = 0; o < 2; ++o)
            for (int w = 0; w < 2; ++w)
                for (int f = 0; f < 2; ++f) trans[{st, o, w, f}] = a;
    }
    // Same action for all (oracle, work) bits, split on the output bit.
    void add_on_flash(int st, int f, MicroAction a) {
        for (int o = 0; o < 2; ++o)
            for (int w = 0; w < 2; ++w) trans[{st, o, w, f}] = a;
    }
};

namespace detail {

inline void move_head(Ordinal& h, Move m) {
    switch (m) {
        case Move::S: return;
        case Move::R:
            h = ord_add(h, Ordinal::fin(1));
            return;
        case Move::L:
            // No immediate predecessor (limit or zero) resets the head to 0.
            if (h.nat_part() == 0)
                h = Ordinal();
            else
                h = ord_add(h.limit_part(), Ordinal::fin(h.nat_part() - 1));
            return;
    }
}

struct MicroTraceEntry {
    int state;
    int bits[3];
    MicroAction act;
    MicroSnapshot snap;  // configuration *before* the step

    bool same_pattern(const MicroTraceEntry& o) const {
        return state == o.state && bits[0] == o.bits[0] && bits[1] == o.bits[1] &&
               bits[2] == o.bits[2] && act.next_state == o.act.next_state &&
               act.write_work == o.act.write_work &&
               act.write_output == o.act.write_output &&
               act.move_work == o.act.move_work &&
               act.move_oracle == o.act.move_oracle &&
               act.move_output == o.act.move_output;
    }
};

}  // namespace detail

class MicroRun {
public:
    MicroRun(const MicroProgram& p, const OrdSet& oracle, const OrdSet& param)
        : p_(p) {
        for (const Ordinal& x : oracle.elems()) oracle_.insert(x);
        for (const Ordinal& x : param.elems()) work_.insert(x);
        state_ = p.start_state;
    }

    RunResult run(std::uint64_t fuel) {
        RunResult res;
        constexpr std::size_t kStageBudget = 4096;
        constexpr std::size_t kMaxJumps = 8;
        std::size_t stage_steps = 0;
        while (true) {
            if (state_ == p_.halt_state) {
                res.status = RunStatus::Halted;
                break;
            }
            if (res.steps >= fuel) {
                res.status = RunStatus::FuelExhausted;
                break;
            }
            if (stage_steps >= kStageBudget || (stage_steps > 256 && stage_steps % 64 == 0)) {
                std::optional<OmegaJumpRecord> jump = try_omega_jump();
                if (jump) {
                    if (res.omega_jumps.size() >= kMaxJumps) {
                        res.status = RunStatus::LimitUndetermined;
                        break;
                    }
                    res.omega_jumps.push_back(std::move(*jump));
                    trace_.clear();
                    stage_steps = 0;
                    continue;
                }
                if (stage_steps >= kStageBudget) {
                    res.status = RunStatus::LimitUndetermined;
                    break;
                }
            }
            step();
            ++res.steps;
            ++stage_steps;
        }
        res.output_bit = output_.count(Ordinal()) ? 1 : 0;
        for (const Ordinal& x : output_) res.output_set.insert(x);
        return res;
    }

    MicroSnapshot snapshot() const {
        MicroSnapshot s;
        s.state = state_;
        s.head_oracle = ho_;
        s.head_work = hw_;
        s.head_output = hout_;
        s.work = work_;
        s.output = output_;
        return s;
    }

private:
    const MicroProgram& p_;
    std::set<Ordinal> oracle_, work_, output_;
    Ordinal ho_, hw_, hout_;
    int state_ = 1;
    std::vector<detail::MicroTraceEntry> trace_;

    int bit(const std::set<Ordinal>& tape, const Ordinal& h) const {
        return tape.count(h) ? 1 : 0;
    }

    void step() {
        int o = bit(oracle_, ho_), w = bit(work_, hw_), f = bit(output_, hout_);
        auto it = p_.trans.find({state_, o, w, f});
        if (it == p_.trans.end())
            throw MalformedOperand("micro program has no transition for state " +
                                   std::to_string(state_));
        const MicroAction& a = it->second;
        detail::MicroTraceEntry e;
        e.state = state_;
        e.bits[0] = o;
        e.bits[1] = w;
        e.bits[2] = f;
        e.act = a;
        e.snap = snapshot();
        trace_.push_back(std::move(e));
        if (trace_.size() > 512) trace_.erase(trace_.begin(), trace_.begin() + 256);

        if (a.write_work)
            work_.insert(hw_);
        else
            work_.erase(hw_);
        if (a.write_output)
            output_.insert(hout_);
        else
            output_.erase(hout_);
        detail::move_head(hw_, a.move_work);
        detail::move_head(ho_, a.move_oracle);
        detail::move_head(hout_, a.move_output);
        state_ = a.next_state;
    }

    // Detect an eventually periodic trace tail and, if found, adopt the
    // liminf configuration (component-wise) as the limit configuration.
    std::optional<OmegaJumpRecord> try_omega_jump() {
        const std::size_t n = trace_.size();
        for (std::size_t p = 1; p <= 32; ++p) {
            if (n < 3 * p + 1) continue;
            bool ok = true;
            for (std::size_t i = 0; i < 2 * p && ok; ++i)
                ok = trace_[n - 1 - i].same_pattern(trace_[n - 1 - i - p]);
            if (!ok) continue;
            // Head positions at corresponding phases must be nondecreasing.
            const MicroSnapshot& now = trace_[n - p].snap;
            const MicroSnapshot& prev = trace_[n - 2 * p].snap;
            auto limit_head = [&](const Ordinal& cur, const Ordinal& before,
                                  bool& fine) -> Ordinal {
                int c = ord_cmp(cur, before);
                if (c == 0) return cur;
                if (c < 0) {
                    fine = false;
                    return cur;
                }
                // Advancing by finite amounts each period: liminf is the next
                // limit ordinal above the current limit part.
                return ord_add(cur.limit_part(), Ordinal::omega());
            };
            bool fine = true;
            OmegaJumpRecord rec;
            rec.period = p;
            rec.limit.head_oracle = limit_head(now.head_oracle, prev.head_oracle, fine);
            rec.limit.head_work = limit_head(now.head_work, prev.head_work, fine);
            rec.limit.head_output = limit_head(now.head_output, prev.head_output, fine);
            if (!fine) continue;
            // liminf state over one period.
            int st = trace_[n - 1].state;
            for (std::size_t i = 0; i < p; ++i) st = std::min(st, trace_[n - 1 - i].state);
            rec.limit.state = st;
            // Cells written during both of the last two periods at the same
            // absolute position flash cofinally: their limit value is the
            // minimum written over one period. Other cells keep their value.
            std::map<Ordinal, int> wmin, wprev, omin, oprev;
            for (std::size_t i = 0; i < p; ++i) {
                const detail::MicroTraceEntry& e = trace_[n - 1 - i];
                const detail::MicroTraceEntry& e2 = trace_[n - 1 - i - p];
                auto note = [](std::map<Ordinal, int>& m, const Ordinal& pos, int v) {
                    auto it = m.find(pos);
                    if (it == m.end())
                        m[pos] = v;
                    else
                        it->second = std::min(it->second, v);
                };
                note(wmin, e.snap.head_work, e.act.write_work);
                note(omin, e.snap.head_output, e.act.write_output);
                note(wprev, e2.snap.head_work, e2.act.write_work);
                note(oprev, e2.snap.head_output, e2.act.write_output);
            }
            auto apply = [](std::set<Ordinal>& tape, const std::map<Ordinal, int>& mins,
                            const std::map<Ordinal, int>& prevs) {
                for (const auto& [pos, v] : mins) {
                    if (!prevs.count(pos)) continue;  // not written cofinally
                    if (v)
                        tape.insert(pos);
                    else
                        tape.erase(pos);
                }
            };
            // Record the tail for the soundness check, then commit the jump.
            for (std::size_t i = n - 2 * p; i < n; ++i)
                rec.tail.push_back(trace_[i].snap);
            apply(work_, wmin, wprev);
            apply(output_, omin, oprev);
            state_ = rec.limit.state;
            ho_ = rec.limit.head_oracle;
            hw_ = rec.limit.head_work;
            hout_ = rec.limit.head_output;
            rec.limit.work = work_;
            rec.limit.output = output_;
            return rec;
        }
        return std::nullopt;
    }
};

inline RunResult micro_run(const MicroProgram& p, const OrdSet& oracle,
                           const OrdSet& param, std::uint64_t fuel) {
    MicroRun r(p, oracle, param);
    return r.run(fuel);
}

// Micro EQ-constant: accepts iff the oracle equals the parameter (both sets
// of finite ordinals). The parameter is laid out on the work tape at start.
// A flash cell at output position 0 is held at 1 at the start of every loop
// iteration and dropped to 0 transiently, so its liminf 0 marks stage omega.
// State families: equal-so-far minimum 1, difference-seen minimum 2.
inline MicroProgram micro_eq_param() {
    MicroProgram m;
    m.start_state = 5;
    m.halt_state = 0;
    // All states write the work bit back unchanged unless stated otherwise.
    for (int o = 0; o < 2; ++o)
        for (int w = 0; w < 2; ++w)
            for (int f = 0; f < 2; ++f) {
                // 5: initialize flash to 1, enter the E loop.
                m.add(5, o, w, f, {w, 1, Move::S, Move::S, Move::S, 1});
                // 1: E_check. flash==1 -> finite stage: drop flash, compare.
                // flash==0 -> limit stage, no difference ever seen: accept.
                if (f == 1)
                    m.add(1, o, w, f, {w, 0, Move::S, Move::S, Move::S, 3});
                else
                    m.add(1, o, w, f, {w, 1, Move::S, Move::S, Move::S, 0});
                // 3: compare at the current position; flash up, advance.
                m.add(3, o, w, f, {w, 1, Move::R, Move::R, Move::S, o == w ? 1 : 2});
                // 2: D_check. flash==1 -> keep looping; flash==0 -> reject.
                if (f == 1)
                    m.add(2, o, w, f, {w, 0, Move::S, Move::S, Move::S, 4});
                else
                    m.add(2, o, w, f, {w, 0, Move::S, Move::S, Move::S, 0});
                // 4: D_advance.
                m.add(4, o, w, f, {w, 1, Move::R, Move::R, Move::S, 2});
            }
    return m;
}

// Micro EQ-oracle-section: accepts iff the two interleaved halves of the
// oracle are equal, i.e. project(oracle,0) == project(oracle,1). Compares
// oracle position 2i with 2i+1 each iteration; same flash protocol.
inline MicroProgram micro_eq_sections() {
    MicroProgram m;
    m.start_state = 5;
    m.halt_state = 0;
    m.add_all(5, {0, 1, Move::S, Move::S, Move::S, 1});
    // 1: E_check.
    m.add_on_flash(1, 1, {0, 0, Move::S, Move::S, Move::S, 3});
    m.add_on_flash(1, 0, {0, 1, Move::S, Move::S, Move::S, 0});
    // 3: read even-position bit; branch on it, advance oracle head.
    for (int w = 0; w < 2; ++w)
        for (int f = 0; f < 2; ++f) {
            m.add(3, 0, w, f, {0, 0, Move::S, Move::R, Move::S, 9});
            m.add(3, 1, w, f, {0, 0, Move::S, Move::R, Move::S, 10});
        }
    // 9: expect 0 at the odd position. 10: expect 1.
    for (int w = 0; w < 2; ++w)
        for (int f = 0; f < 2; ++f) {
            m.add(9, 0, w, f, {0, 1, Move::S, Move::R, Move::S, 1});
            m.add(9, 1, w, f, {0, 1, Move::S, Move::R, Move::S, 2});
            m.add(10, 0, w, f, {0, 1, Move::S, Move::R, Move::S, 2});
            m.add(10, 1, w, f, {0, 1, Move::S, Move::R, Move::S, 1});
        }
    // 2/4: difference-seen loop.
    m.add_on_flash(2, 1, {0, 0, Move::S, Move::S, Move::S, 4});
    m.add_on_flash(2, 0, {0, 0, Move::S, Move::S, Move::S, 0});
    m.add_all(4, {0, 1, Move::S, Move::R, Move::S, 6});
    m.add_all(6, {0, 1, Move::S, Move::R, Move::S, 2});
    return m;
}

}  // namespace rreal

// The macro VM continues in the same header below.

namespace rreal {

// --- macro VM -----------------------------------------------------------

enum class MacroOp {
    Load,      // load rD {set}
    Oracle,    // oracle rD
    Param,     // param rD
    OrSec,     // orsec rD <path of 0/1 digits>
    Proj,      // proj rD rS 0|1
    Ilv,       // ilv rD rA rB
    Union,     // union rD rA rB
    Delta,     // delta rA rB          (FLAG)
    CmpOrc,    // cmporc {set}         (FLAG)
    DecChk,    // decchk rS            (FLAG)
    D0Eval,    // d0eval "formula" x=r1 y=r2   (FLAG)
    Derive,    // derive rD rS rI
    RootMem,   // rootmem rD rS
    DomSize,   // domsize rD rS
    LoopEl,    // loopel rX rS
    EndLoop,   // endloop
    MkEq,      // mkeq rD rS
    MkProg,    // mkprog rD <template> rA rB ...
    RunSub,    // runsub rD rP rO
    WriteOut,  // writeout rS
    Halt,      // halt 0|1|r
    Jmp,       // jmp label
    Brt,       // brt label
    Brf,       // brf label
    FlagNot,   // flagnot
    FlagSet,   // flagset 0|1
    Call,      // call label
    Ret,       // ret
    Label      // name:
};

struct MacroInstr {
    MacroOp op;
    int r1 = -1, r2 = -1, r3 = -1;
    int imm = 0;
    OrdSet literal;
    std::string name;                 // label / template / path / formula
    std::vector<std::pair<std::string, int>> bindings;  // d0eval env
    std::vector<int> regs;            // mkprog argument registers
    int target = -1;                  // resolved branch target
};

struct MacroProgram {
    std::vector<MacroInstr> instrs;
    std::string source;  // normalized assembly text

    bool operator==(const MacroProgram& o) const { return source == o.source; }
};

// --- program & template registries --------------------------------------

class ProgramRegistry {
public:
    static ProgramRegistry& instance() {
        static ProgramRegistry reg;
        return reg;
    }

    std::uint64_t intern(const std::string& text) {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = by_text_.find(text);
        if (it != by_text_.end()) return it->second;
        std::uint64_t id = texts_.size();
        texts_.push_back(text);
        by_text_[text] = id;
        return id;
    }

    std::string text_of(std::uint64_t id) {
        std::lock_guard<std::mutex> lk(mu_);
        if (id >= texts_.size())
            throw MalformedSerialization("unknown program Godel number " +
                                         std::to_string(id));
        return texts_[id];
    }

    bool has(std::uint64_t id) {
        std::lock_guard<std::mutex> lk(mu_);
        return id < texts_.size();
    }

    // Re-register a program text under a specific id (used when realizer
    // files built in another process are loaded; ids are re-interned).
    static std::uint64_t godel_number(const std::string& text) {
        return instance().intern(text);
    }

private:
    std::mutex mu_;
    std::vector<std::string> texts_;
    std::unordered_map<std::string, std::uint64_t> by_text_;
};

class TemplateRegistry {
public:
    static TemplateRegistry& instance() {
        static TemplateRegistry reg;
        reg.ensure_builtins();
        return reg;
    }

    void define(const std::string& name, const std::string& text) {
        std::lock_guard<std::mutex> lk(mu_);
        templates_[name] = text;
    }
    std::string get(const std::string& name) {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = templates_.find(name);
        if (it == templates_.end())
            throw MalformedOperand("unknown program template '" + name + "'");
        return it->second;
    }
    bool has(const std::string& name) {
        std::lock_guard<std::mutex> lk(mu_);
        return templates_.count(name) > 0;
    }

    // Instantiate: replace $0, $1, ... by the given OrdSet literals.
    static std::string instantiate(const std::string& tmpl,
                                   const std::vector<OrdSet>& args) {
        std::string out;
        for (std::size_t i = 0; i < tmpl.size();) {
            if (tmpl[i] == '$' && i + 1 < tmpl.size() &&
                std::isdigit(static_cast<unsigned char>(tmpl[i + 1]))) {
                std::size_t j = i + 1, k = 0;
                while (j < tmpl.size() && std::isdigit(static_cast<unsigned char>(tmpl[j]))) {
                    k = k * 10 + (tmpl[j] - '0');
                    ++j;
                }
                if (k >= args.size())
                    throw MalformedOperand("template hole $" + std::to_string(k) +
                                           " has no argument");
                out += args[k].str();
                i = j;
            } else {
                out += tmpl[i++];
            }
        }
        return out;
    }

private:
    std::mutex mu_;
    std::map<std::string, std::string> templates_;
    bool builtins_done_ = false;

    void ensure_builtins() {
        std::lock_guard<std::mutex> lk(mu_);
        if (builtins_done_) return;
        builtins_done_ = true;
        // EQ-constant: accept iff oracle == $0.
        templates_["eqconst"] = "cmporc $0\nhalt r";
        // EQ-candidate relative: accept iff oracle == ilv($0, <nothing>)?
        // (registered by higher layers as needed)
    }
};

// --- assembler ----------------------------------------------------------

namespace detail {

inline std::vector<std::string> macro_tokens(const std::string& line,
                                             std::size_t lineno) {
    std::vector<std::string> toks;
    std::size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '#') break;
        if (c == '{') {
            int depth = 0;
            std::size_t start = i;
            while (i < line.size()) {
                if (line[i] == '{') ++depth;
                if (line[i] == '}') {
                    --depth;
                    if (depth == 0) {
                        ++i;
                        break;
                    }
                }
                ++i;
            }
            if (depth != 0)
                throw ParseError("assembly: unbalanced '{'", lineno, start);
            toks.push_back(line.substr(start, i - start));
            continue;
        }
        if (c == '"') {
            std::size_t start = ++i;
            while (i < line.size() && line[i] != '"') ++i;
            if (i >= line.size())
                throw ParseError("assembly: unterminated string", lineno, start);
            toks.push_back("\"" + line.substr(start, i - start) + "\"");
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
               line[i] != '#')
            ++i;
        toks.push_back(line.substr(start, i - start));
    }
    return toks;
}

inline int parse_reg(const std::string& t, std::size_t lineno) {
    if (t.size() < 2 || t[0] != 'r' ||
        !std::isdigit(static_cast<unsigned char>(t[1])))
        throw ParseError("assembly: expected register, got '" + t + "'", lineno, 0);
    int n = std::stoi(t.substr(1));
    if (n < 0 || n > 15)
        throw ParseError("assembly: register out of range: " + t, lineno, 0);
    return n;
}

}  // namespace detail

inline MacroProgram assemble_macro(const std::string& text) {
    MacroProgram prog;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::map<std::string, int> labels;
    std::string normalized;
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = detail::macro_tokens(line, lineno);
        if (toks.empty()) continue;
        MacroInstr ins;
        const std::string& op = toks[0];
        auto need = [&](std::size_t n) {
            if (toks.size() != n)
                throw ParseError("assembly: '" + op + "' expects " +
                                     std::to_string(n - 1) + " operands",
                                 lineno, 0);
        };
        auto reg = [&](std::size_t i) { return detail::parse_reg(toks[i], lineno); };
        if (op.size() > 1 && op.back() == ':') {
            ins.op = MacroOp::Label;
            ins.name = op.substr(0, op.size() - 1);
            labels[ins.name] = static_cast<int>(prog.instrs.size());
        } else if (op == "load") {
            need(3);
            ins.op = MacroOp::Load;
            ins.r1 = reg(1);
            ins.literal = parse_ordset(toks[2]);
        } else if (op == "oracle") {
            need(2);
            ins.op = MacroOp::Oracle;
            ins.r1 = reg(1);
        } else if (op == "param") {
            need(2);
            ins.op = MacroOp::Param;
            ins.r1 = reg(1);
        } else if (op == "orsec") {
            need(3);
            ins.op = MacroOp::OrSec;
            ins.r1 = reg(1);
            ins.name = toks[2];
            for (char c : ins.name)
                if (c != '0' && c != '1')
                    throw ParseError("assembly: orsec path must be 0/1 digits", lineno, 0);
        } else if (op == "proj") {
            need(4);
            ins.op = MacroOp::Proj;
            ins.r1 = reg(1);
            ins.r2 = reg(2);
            ins.imm = std::stoi(toks[3]);
            if (ins.imm != 0 && ins.imm != 1)
                throw ParseError("assembly: proj side must be 0 or 1", lineno, 0);
        } else if (op == "ilv") {
            need(4);
            ins.op = MacroOp::Ilv;
            ins.r1 = reg(1);
            ins.r2 = reg(2);
            ins.r3 = reg(3);
        } else if (op == "union") {
            need(4);
            ins.op = MacroOp::Union;
            ins.r1 = reg(1);
            ins.r2 = reg(2);
            ins.r3 = reg(3);
        } else if (op == "delta") {
            need(3);
            ins.op = MacroOp::Delta;
            ins.r1 = reg(1);
            ins.r2 = reg(2);
        } else if (op == "cmporc") {
            need(2);
            ins.op = MacroOp::CmpOrc;
            ins.literal = parse_ordset(toks[1]);
        } else if (op == "decchk") {
            need(2);
            ins.op = MacroOp::DecChk;
            ins.r1 = reg(1);
        } else if (op == "d0eval") {
            if (toks.size() < 2 || toks[1].front() != '"')
                throw ParseError("assembly: d0eval expects a quoted formula", lineno, 0);
            ins.op = MacroOp::D0Eval;
            ins.name = toks[1].substr(1, toks[1].size() - 2);
            for (std::size_t i = 2; i < toks.size(); ++i) {
                auto eq = toks[i].find('=');
                if (eq == std::string::npos)
                    throw ParseError("assembly: d0eval binding must be var=reg", lineno, 0);
                ins.bindings.emplace_back(
                    toks[i].substr(0, eq),
                    detail::parse_reg(toks[i].substr(eq + 1), lineno));
            }
        } else if (op == "derive") {
            need(4);
            ins.op = MacroOp::Derive;
            ins.r1 = reg(1);
            ins.r2 = reg(2);
            ins.r3 = reg(3);
        } else if (op == "rootmem") {
            need(3);
            ins.op = MacroOp::RootMem;
            ins.r1 = reg(1);
            ins.r2 = reg(2);
        } else if (op == "domsize") {
            need(3);
            ins.op = MacroOp::DomSize;
            ins.r1 = reg(1);
            ins.r2 = reg(2);
        } else if (op == "loopel") {
            need(3);
            ins.op = MacroOp::LoopEl;
            ins.r1 = reg(1);
            ins.r2 = reg(2);
        } else if (op == "endloop") {
            need(1);
            ins.op = MacroOp::EndLoop;
        } else if (op == "mkeq") {
            need(3);
            ins.op = MacroOp::MkEq;
            ins.r1 = reg(1);
            ins.r2 = reg(2);
        } else if (op == "mkprog") {
            if (toks.size() < 3)
                throw ParseError("assembly: mkprog rD <template> [regs...]", lineno, 0);
            ins.op = MacroOp::MkProg;
            ins.r1 = reg(1);
            ins.name = toks[2];
            for (std::size_t i = 3; i < toks.size(); ++i)
                ins.regs.push_back(detail::parse_reg(toks[i], lineno));
        } else if (op == "runsub") {
            need(4);
            ins.op = MacroOp::RunSub;
            ins.r1 = reg(1);
            ins.r2 = reg(2);
            ins.r3 = reg(3);
        } else if (op == "writeout") {
            need(2);
            ins.op = MacroOp::WriteOut;
            ins.r1 = reg(1);
        } else if (op == "halt") {
            need(2);
            ins.op = MacroOp::Halt;
            if (toks[1] == "r")
                ins.imm = 2;
            else if (toks[1] == "0")
                ins.imm = 0;
            else if (toks[1] == "1")
                ins.imm = 1;
            else
                throw ParseError("assembly: halt operand must be 0, 1 or r", lineno, 0);
        } else if (op == "jmp" || op == "brt" || op == "brf" || op == "call") {
            need(2);
            ins.op = op == "jmp"   ? MacroOp::Jmp
                     : op == "brt" ? MacroOp::Brt
                     : op == "brf" ? MacroOp::Brf
                                   : MacroOp::Call;
            ins.name = toks[1];
        } else if (op == "ret") {
            need(1);
            ins.op = MacroOp::Ret;
        } else if (op == "flagnot") {
            need(1);
            ins.op = MacroOp::FlagNot;
        } else if (op == "flagset") {
            need(2);
            ins.op = MacroOp::FlagSet;
            ins.imm = std::stoi(toks[1]);
        } else {
            throw ParseError("assembly: unknown instruction '" + op + "'", lineno, 0);
        }
        prog.instrs.push_back(std::move(ins));
    }
    // Resolve labels and loop nesting.
    std::vector<int> loop_stack;
    for (std::size_t i = 0; i < prog.instrs.size(); ++i) {
        MacroInstr& ins = prog.instrs[i];
        if (ins.op == MacroOp::Jmp || ins.op == MacroOp::Brt ||
            ins.op == MacroOp::Brf || ins.op == MacroOp::Call) {
            auto it = labels.find(ins.name);
            if (it == labels.end())
                throw ParseError("assembly: undefined label '" + ins.name + "'", 0, 0);
            ins.target = it->second;
        } else if (ins.op == MacroOp::LoopEl) {
            loop_stack.push_back(static_cast<int>(i));
        } else if (ins.op == MacroOp::EndLoop) {
            if (loop_stack.empty())
                throw ParseError("assembly: endloop without loopel", 0, 0);
            int open = loop_stack.back();
            loop_stack.pop_back();
            ins.target = open;
            prog.instrs[open].target = static_cast<int>(i);
        }
    }
    if (!loop_stack.empty())
        throw ParseError("assembly: loopel without endloop", 0, 0);
    prog.source = text;
    return prog;
}

inline std::string disassemble(const MacroProgram& p) { return p.source; }

// --- execution ----------------------------------------------------------

struct MacroFuel {
    std::uint64_t remaining;
    void spend() {
        if (remaining == 0) throw FuelExhaustedError("macro fuel exhausted");
        --remaining;
    }
};

namespace detail {
inline RunResult macro_run_impl(const MacroProgram& p, const OrdSet& oracle,
                                const OrdSet& param, MacroFuel& fuel, int depth);
}

inline MacroProgram& parsed_program(std::uint64_t godel) {
    // Cache of parsed interned programs.
    static std::mutex mu;
    static std::map<std::uint64_t, std::unique_ptr<MacroProgram>> cache;
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(godel);
    if (it != cache.end()) return *it->second;
    std::string text = ProgramRegistry::instance().text_of(godel);
    auto prog = std::make_unique<MacroProgram>(assemble_macro(text));
    auto [pos, _] = cache.emplace(godel, std::move(prog));
    return *pos->second;
}

namespace detail {

struct LoopFrame {
    int open_pc;
    std::vector<Ordinal> elems;
    std::size_t idx;
};

inline RunResult macro_run_impl(const MacroProgram& p, const OrdSet& oracle,
                                const OrdSet& param, MacroFuel& fuel, int depth) {
    if (depth > 16) throw MalformedOperand("runsub nesting too deep");
    RunResult res;
    std::vector<OrdSet> regs(16);
    int flag = 0;
    std::vector<LoopFrame> loops;
    std::vector<int> callstack;
    OrdSet out;
    int pc = 0;
    auto as_code = [](const OrdSet& s) {
        SetCode c;
        c.code = s;
        c.domain = infer_domain(s);
        return c;
    };
    while (pc >= 0 && pc < static_cast<int>(p.instrs.size())) {
        try {
            fuel.spend();
        } catch (const FuelExhaustedError&) {
            res.status = RunStatus::FuelExhausted;
            res.output_set = out;
            return res;
        }
        const MacroInstr& ins = p.instrs[pc];
        ++res.steps;
        switch (ins.op) {
            case MacroOp::Label:
                break;
            case MacroOp::Load:
                regs[ins.r1] = ins.literal;
                break;
            case MacroOp::Oracle:
                regs[ins.r1] = oracle;
                break;
            case MacroOp::Param:
                regs[ins.r1] = param;
                break;
            case MacroOp::OrSec: {
                OrdSet s = oracle;
                for (char c : ins.name) s = project(s, c - '0');
                regs[ins.r1] = s;
                break;
            }
            case MacroOp::Proj:
                regs[ins.r1] = project(regs[ins.r2], ins.imm);
                break;
            case MacroOp::Ilv:
                regs[ins.r1] = interleave(regs[ins.r2], regs[ins.r3]);
                break;
            case MacroOp::Union:
                regs[ins.r1] = ord_union(regs[ins.r2], regs[ins.r3]);
                break;
            case MacroOp::Delta:
                flag = delta(regs[ins.r1], regs[ins.r2]);
                break;
            case MacroOp::CmpOrc:
                flag = delta(oracle, ins.literal);
                break;
            case MacroOp::DecChk:
                try {
                    decode(as_code(regs[ins.r1]));
                    flag = 1;
                } catch (const Error&) {
                    flag = 0;
                }
                break;
            case MacroOp::D0Eval: {
                FormulaPtr f = parse_formula(ins.name);
                std::map<std::string, SetCode> env;
                for (const auto& [v, r] : ins.bindings) env[v] = as_code(regs[r]);
                try {
                    flag = eval_bounded(f, env, fuel.remaining + 1) ? 1 : 0;
                } catch (const IllFormedCode& e) {
                    throw MalformedOperand(std::string("d0eval: ") + e.what());
                } catch (const OrdinalOverflow& e) {
                    throw MalformedOperand(std::string("d0eval: ") + e.what());
                }
                break;
            }
            case MacroOp::Derive: {
                const OrdSet& idx = regs[ins.r3];
                if (idx.size() != 1)
                    throw MalformedOperand("derive: index register must be a singleton");
                try {
                    regs[ins.r1] = derived_code(as_code(regs[ins.r2]),
                                                idx.elems().front())
                                       .code;
                } catch (const Error& e) {
                    throw MalformedOperand(std::string("derive: ") + e.what());
                }
                break;
            }
            case MacroOp::RootMem: {
                OrdSet s;
                try {
                    for (const Ordinal& i : root_member_indices(as_code(regs[ins.r2])))
                        s.insert(i);
                } catch (const Error& e) {
                    throw MalformedOperand(std::string("rootmem: ") + e.what());
                }
                regs[ins.r1] = s;
                break;
            }
            case MacroOp::DomSize: {
                OrdSet s;
                try {
                    s.insert(infer_domain(regs[ins.r2]));
                } catch (const Error& e) {
                    throw MalformedOperand(std::string("domsize: ") + e.what());
                }
                regs[ins.r1] = s;
                break;
            }
            case MacroOp::LoopEl: {
                LoopFrame fr;
                fr.open_pc = pc;
                fr.elems = regs[ins.r2].elems();
                fr.idx = 0;
                if (fr.elems.empty()) {
                    pc = ins.target;  // jump to endloop
                } else {
                    OrdSet sing;
                    sing.insert(fr.elems[0]);
                    regs[ins.r1] = sing;
                    loops.push_back(std::move(fr));
                }
                break;
            }
            case MacroOp::EndLoop: {
                if (!loops.empty() && loops.back().open_pc == ins.target) {
                    LoopFrame& fr = loops.back();
                    ++fr.idx;
                    if (fr.idx < fr.elems.size()) {
                        OrdSet sing;
                        sing.insert(fr.elems[fr.idx]);
                        regs[p.instrs[fr.open_pc].r1] = sing;
                        pc = fr.open_pc;
                    } else {
                        loops.pop_back();
                    }
                }
                break;
            }
            case MacroOp::MkEq: {
                std::string text = TemplateRegistry::instantiate(
                    TemplateRegistry::instance().get("eqconst"), {regs[ins.r2]});
                OrdSet g;
                g.insert(Ordinal::fin(ProgramRegistry::instance().intern(text)));
                regs[ins.r1] = g;
                break;
            }
            case MacroOp::MkProg: {
                std::vector<OrdSet> args;
                for (int r : ins.regs) args.push_back(regs[r]);
                std::string text = TemplateRegistry::instantiate(
                    TemplateRegistry::instance().get(ins.name), args);
                OrdSet g;
                g.insert(Ordinal::fin(ProgramRegistry::instance().intern(text)));
                regs[ins.r1] = g;
                break;
            }
            case MacroOp::RunSub: {
                const OrdSet& ser = regs[ins.r2];
                OrdSet tag = project(ser, 0);
                OrdSet payload = project(ser, 1);
                OrdSet gset = project(payload, 0);
                OrdSet subparam = project(payload, 1);
                OrdSet tag4;
                tag4.insert(Ordinal::fin(4));
                try {
                    if (tag != tag4 || gset.size() != 1 ||
                        !gset.elems().front().is_finite())
                        throw MalformedOperand("runsub: operand is not a serialized "
                                               "program-parameter realizer");
                    std::uint64_t g = gset.elems().front().as_nat();
                    MacroProgram& sub = parsed_program(g);
                    RunResult sr = macro_run_impl(sub, regs[ins.r3], subparam, fuel,
                                                  depth + 1);
                    if (sr.status != RunStatus::Halted) {
                        res.status = sr.status;
                        res.output_set = out;
                        return res;
                    }
                    flag = sr.output_bit;
                    regs[ins.r1] = sr.output_set;
                } catch (const MalformedOperand&) {
                    // A malformed subprogram operand rejects: the candidate
                    // under test is not a well-formed object.
                    flag = 0;
                    regs[ins.r1] = OrdSet{};
                } catch (const MalformedSerialization&) {
                    flag = 0;
                    regs[ins.r1] = OrdSet{};
                } catch (const ParseError&) {
                    flag = 0;
                    regs[ins.r1] = OrdSet{};
                }
                break;
            }
            case MacroOp::WriteOut:
                out = ord_union(out, regs[ins.r1]);
                break;
            case MacroOp::Halt:
                res.status = RunStatus::Halted;
                res.output_bit = ins.imm == 2 ? flag : ins.imm;
                res.output_set = out;
                return res;
            case MacroOp::Jmp:
                pc = ins.target;
                break;
            case MacroOp::Brt:
                if (flag) pc = ins.target;
                break;
            case MacroOp::Brf:
                if (!flag) pc = ins.target;
                break;
            case MacroOp::Call:
                callstack.push_back(pc);
                pc = ins.target;
                break;
            case MacroOp::Ret:
                if (callstack.empty())
                    throw MalformedOperand("ret without call");
                pc = callstack.back();
                callstack.pop_back();
                break;
            case MacroOp::FlagNot:
                flag = flag ? 0 : 1;
                break;
            case MacroOp::FlagSet:
                flag = ins.imm ? 1 : 0;
                break;
        }
        ++pc;
    }
    // Fell off the end: treat as a malformed program shape.
    throw MalformedOperand("macro program ran off the end without halt");
}

}  // namespace detail

inline RunResult macro_run(const MacroProgram& p, const OrdSet& oracle,
                           const OrdSet& param, std::uint64_t fuel) {
    MacroFuel f{fuel};
    return detail::macro_run_impl(p, oracle, param, f, 0);
}

// Convenience: run an interned program by Godel number.
inline RunResult macro_run(std::uint64_t godel, const OrdSet& oracle,
                           const OrdSet& param, std::uint64_t fuel) {
    return macro_run(parsed_program(godel), oracle, param, fuel);
}

// Serialized program-parameter value: ilv({4}, ilv({g}, param)), the same
// shape the realizer module uses for ProgParam nodes.
inline OrdSet progparam_ser(std::uint64_t godel, const OrdSet& param) {
    OrdSet tag, g;
    tag.insert(Ordinal::fin(4));
    g.insert(Ordinal::fin(godel));
    return interleave(tag, interleave(g, param));
}

}  // namespace rreal
