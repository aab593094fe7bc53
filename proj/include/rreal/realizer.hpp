#pragma once

// Realizer trees and their OrdSet serialization. A serialized realizer is
// ilv({tag}, payload) with tags: 0 empty, 1 leaf, 2 pair, 3 choice,
// 4 program-with-parameter. Program components travel as Godel numbers of
// interned program texts.

#include <cstdint>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "rreal/error.hpp"
#include "rreal/ordset.hpp"
#include "rreal/otm.hpp"

namespace rreal {

struct Realizer;
using RealizerPtr = std::shared_ptr<const Realizer>;

struct Realizer {
    enum Kind { Empty, Leaf, Pair, Choice, ProgParam } kind = Empty;
    OrdSet leaf;                 // Leaf
    RealizerPtr a, b;            // Pair children / Choice child (a)
    int choice = 0;              // Choice tag
    std::uint64_t godel = 0;     // ProgParam program
    OrdSet parameter;            // ProgParam parameter

    static RealizerPtr mkempty() {
        return std::make_shared<Realizer>();
    }
    static RealizerPtr mkleaf(OrdSet s) {
        auto r = std::make_shared<Realizer>();
        r->kind = Leaf;
        r->leaf = std::move(s);
        return r;
    }
    static RealizerPtr mkpair(RealizerPtr x, RealizerPtr y) {
        auto r = std::make_shared<Realizer>();
        r->kind = Pair;
        r->a = std::move(x);
        r->b = std::move(y);
        return r;
    }
    static RealizerPtr mkchoice(int i, RealizerPtr x) {
        auto r = std::make_shared<Realizer>();
        r->kind = Choice;
        r->choice = i;
        r->a = std::move(x);
        return r;
    }
    static RealizerPtr mkprog(std::uint64_t g, OrdSet param) {
        auto r = std::make_shared<Realizer>();
        r->kind = ProgParam;
        r->godel = g;
        r->parameter = std::move(param);
        return r;
    }
    static RealizerPtr mkprog_text(const std::string& text, OrdSet param = {}) {
        return mkprog(ProgramRegistry::instance().intern(text), std::move(param));
    }
};

inline OrdSet serialize(const RealizerPtr& r) {
    OrdSet tag, payload;
    switch (r->kind) {
        case Realizer::Empty:
            tag.insert(Ordinal::fin(0));
            break;
        case Realizer::Leaf:
            tag.insert(Ordinal::fin(1));
            payload = r->leaf;
            break;
        case Realizer::Pair:
            tag.insert(Ordinal::fin(2));
            payload = interleave(serialize(r->a), serialize(r->b));
            break;
        case Realizer::Choice: {
            tag.insert(Ordinal::fin(3));
            OrdSet i;
            i.insert(Ordinal::fin(r->choice));
            payload = interleave(i, serialize(r->a));
            break;
        }
        case Realizer::ProgParam: {
            tag.insert(Ordinal::fin(4));
            OrdSet g;
            g.insert(Ordinal::fin(r->godel));
            payload = interleave(g, r->parameter);
            break;
        }
    }
    return interleave(tag, payload);
}

inline RealizerPtr deserialize(const OrdSet& s, int depth = 0) {
    if (depth > 64) throw MalformedSerialization("realizer nesting too deep");
    OrdSet tag = project(s, 0);
    OrdSet payload = project(s, 1);
    if (tag.size() != 1 || !tag.elems().front().is_finite())
        throw MalformedSerialization("bad realizer tag in " + s.str());
    std::uint64_t t = tag.elems().front().as_nat();
    switch (t) {
        case 0:
            if (!payload.empty())
                throw MalformedSerialization("empty realizer with payload");
            return Realizer::mkempty();
        case 1:
            return Realizer::mkleaf(payload);
        case 2:
            return Realizer::mkpair(deserialize(project(payload, 0), depth + 1),
                                    deserialize(project(payload, 1), depth + 1));
        case 3: {
            OrdSet i = project(payload, 0);
            if (i.size() != 1 || !i.elems().front().is_finite())
                throw MalformedSerialization("bad choice tag");
            std::uint64_t c = i.elems().front().as_nat();
            if (c > 1) throw MalformedSerialization("choice tag out of range");
            return Realizer::mkchoice(static_cast<int>(c),
                                      deserialize(project(payload, 1), depth + 1));
        }
        case 4: {
            OrdSet g = project(payload, 0);
            if (g.size() != 1 || !g.elems().front().is_finite())
                throw MalformedSerialization("bad program Godel number");
            std::uint64_t id = g.elems().front().as_nat();
            if (!ProgramRegistry::instance().has(id))
                throw MalformedSerialization("unknown program Godel number " +
                                             std::to_string(id));
            return Realizer::mkprog(id, project(payload, 1));
        }
        default:
            throw MalformedSerialization("unknown realizer tag " + std::to_string(t));
    }
}

inline bool realizer_eq(const RealizerPtr& x, const RealizerPtr& y) {
    return serialize(x) == serialize(y);
}

// --- textual tree format ------------------------------------------------
//
// One node per line, children indented two spaces deeper:
//   empty
//   leaf <ordset>
//   pair
//   choice <i>
//   progparam <ordset-parameter>
//     <following indented '|'-prefixed lines carry the program text>

inline std::string realizer_to_text(const RealizerPtr& r, int indent = 0) {
    std::string pad(indent * 2, ' ');
    switch (r->kind) {
        case Realizer::Empty:
            return pad + "empty\n";
        case Realizer::Leaf:
            return pad + "leaf " + r->leaf.str() + "\n";
        case Realizer::Pair:
            return pad + "pair\n" + realizer_to_text(r->a, indent + 1) +
                   realizer_to_text(r->b, indent + 1);
        case Realizer::Choice:
            return pad + "choice " + std::to_string(r->choice) + "\n" +
                   realizer_to_text(r->a, indent + 1);
        case Realizer::ProgParam: {
            std::string out = pad + "progparam " + r->parameter.str() + "\n";
            std::istringstream prog(ProgramRegistry::instance().text_of(r->godel));
            std::string line;
            while (std::getline(prog, line))
                out += pad + "  |" + line + "\n";
            return out;
        }
    }
    return pad + "?\n";
}

namespace detail {

inline RealizerPtr realizer_from_lines(const std::vector<std::string>& lines,
                                       std::size_t& idx, int indent) {
    if (idx >= lines.size())
        throw ParseError("realizer: unexpected end of input", idx + 1, 0);
    const std::string& line = lines[idx];
    std::size_t pad = line.find_first_not_of(' ');
    if (pad == std::string::npos || static_cast<int>(pad) != indent * 2)
        throw ParseError("realizer: bad indentation", idx + 1, 0);
    std::string body = line.substr(pad);
    ++idx;
    if (body == "empty") return Realizer::mkempty();
    if (body.rfind("leaf ", 0) == 0)
        return Realizer::mkleaf(parse_ordset(body.substr(5)));
    if (body == "pair") {
        RealizerPtr a = realizer_from_lines(lines, idx, indent + 1);
        RealizerPtr b = realizer_from_lines(lines, idx, indent + 1);
        return Realizer::mkpair(a, b);
    }
    if (body.rfind("choice ", 0) == 0) {
        int i = std::stoi(body.substr(7));
        return Realizer::mkchoice(i, realizer_from_lines(lines, idx, indent + 1));
    }
    if (body.rfind("progparam ", 0) == 0) {
        OrdSet param = parse_ordset(body.substr(10));
        std::string prog;
        std::string prefix(indent * 2 + 2, ' ');
        prefix += "|";
        while (idx < lines.size() && lines[idx].rfind(prefix, 0) == 0) {
            prog += lines[idx].substr(prefix.size());
            prog += "\n";
            ++idx;
        }
        return Realizer::mkprog_text(prog, std::move(param));
    }
    throw ParseError("realizer: unrecognized node '" + body + "'", idx, 0);
}

}  // namespace detail

inline RealizerPtr realizer_from_text(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty() && line.find_first_not_of(" \t") != std::string::npos)
            lines.push_back(line);
    std::size_t idx = 0;
    RealizerPtr r = detail::realizer_from_lines(lines, idx, 0);
    if (idx != lines.size())
        throw ParseError("realizer: trailing lines", idx + 1, 0);
    return r;
}

}  // namespace rreal
