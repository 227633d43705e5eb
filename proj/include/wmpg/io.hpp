/*
 * Copyright 2026 The wmpg authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef WMPG_IO_HPP
#define WMPG_IO_HPP

#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "wmpg/game.hpp"
#include "wmpg/strategy.hpp"

namespace wmpg {
namespace detail {

// Tokenizes one line, tracking the column of each token for diagnostics.
inline std::vector<std::pair<std::string, int>> tokens_of(const std::string& line) {
    std::vector<std::pair<std::string, int>> toks;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        if (i >= line.size() || line[i] == '#') break;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r' && line[j] != '#') ++j;
        toks.emplace_back(line.substr(i, j - i), static_cast<int>(i) + 1);
        i = j;
    }
    return toks;
}

}  // namespace detail

/// Reads the line-oriented game format:
///   game <name>
///   vertex <id> <max|min|rand>
///   edge <src> <dst> payoff <rational> [prob <rational>]
/// '#' starts a comment. Syntax problems raise parse_error with line/column;
/// structural problems (deadlock, bad distribution, prob on a non-random
/// vertex) raise validation_error.
inline StochasticGame parse_game(std::istream& is) {
    StochasticGame g;
    bool named = false;
    // Edges are collected first so vertices may be declared in any order
    // relative to each other, but all vertex lines must precede their use.
    std::string line;
    int lineno = 0;
    struct PendingEdge { int line; std::string src, dst; Rat payoff; bool has_prob; Rat prob; };
    std::vector<PendingEdge> edges;
    while (std::getline(is, line)) {
        ++lineno;
        auto toks = detail::tokens_of(line);
        if (toks.empty()) continue;
        const std::string& kw = toks[0].first;
        auto need = [&](std::size_t n, const char* what) {
            if (toks.size() < n)
                throw parse_error(std::string("expected ") + what, lineno,
                                  toks.back().second + static_cast<int>(toks.back().first.size()));
        };
        if (kw == "game") {
            need(2, "game name");
            if (named) throw parse_error("duplicate game line", lineno, toks[0].second);
            g.name = toks[1].first;
            named = true;
        } else if (kw == "vertex") {
            need(3, "vertex <id> <max|min|rand>");
            Owner o;
            const std::string& os = toks[2].first;
            if (os == "max") o = Owner::Max;
            else if (os == "min") o = Owner::Min;
            else if (os == "rand") o = Owner::Random;
            else throw parse_error("unknown owner '" + os + "'", lineno, toks[2].second);
            try {
                g.add_vertex(toks[1].first, o);
            } catch (const validation_error& e) {
                throw parse_error(e.what(), lineno, toks[1].second);
            }
        } else if (kw == "edge") {
            need(5, "edge <src> <dst> payoff <rational>");
            if (toks[3].first != "payoff")
                throw parse_error("expected 'payoff'", lineno, toks[3].second);
            auto payoff = try_parse_rational(toks[4].first);
            if (!payoff) throw parse_error("malformed rational '" + toks[4].first + "'", lineno, toks[4].second);
            PendingEdge pe{lineno, toks[1].first, toks[2].first, *payoff, false, Rat(0)};
            if (toks.size() > 5) {
                if (toks[5].first != "prob")
                    throw parse_error("expected 'prob'", lineno, toks[5].second);
                need(7, "prob <rational>");
                auto prob = try_parse_rational(toks[6].first);
                if (!prob) throw parse_error("malformed rational '" + toks[6].first + "'", lineno, toks[6].second);
                pe.has_prob = true;
                pe.prob = *prob;
                if (toks.size() > 7) throw parse_error("trailing tokens", lineno, toks[7].second);
            }
            edges.push_back(std::move(pe));
        } else {
            throw parse_error("unknown directive '" + kw + "'", lineno, toks[0].second);
        }
    }
    if (!named) throw parse_error("missing 'game' line", lineno == 0 ? 1 : lineno, 1);
    for (const PendingEdge& pe : edges) {
        int u = g.index_of(pe.src), v = g.index_of(pe.dst);
        if (u < 0) throw parse_error("unknown vertex '" + pe.src + "'", pe.line, 1);
        if (v < 0) throw parse_error("unknown vertex '" + pe.dst + "'", pe.line, 1);
        if (pe.has_prob && g.owner(u) != Owner::Random)
            throw validation_error("probability on edge from non-random vertex " + pe.src);
        if (!pe.has_prob && g.owner(u) == Owner::Random)
            throw validation_error("missing probability on edge from random vertex " + pe.src);
        g.add_edge(u, v, pe.payoff, pe.prob);
    }
    g.finalize();
    return g;
}

inline StochasticGame parse_game(const std::string& text) {
    std::istringstream is(text);
    return parse_game(is);
}

/// Canonical form: vertices in index order, edges in (src, dst) index order.
/// parse_game(serialize_game(g)) reproduces g exactly.
inline std::string serialize_game(const StochasticGame& g) {
    std::ostringstream os;
    os << "game " << (g.name.empty() ? "unnamed" : g.name) << "\n";
    for (int v = 0; v < g.size(); ++v)
        os << "vertex " << g.ids[v] << " " << owner_str(g.owner(v)) << "\n";
    for (int u = 0; u < g.size(); ++u)
        for (const HalfEdge& e : g.out[static_cast<std::size_t>(u)]) {
            os << "edge " << g.ids[u] << " " << g.ids[e.to] << " payoff " << rat_str(e.payoff);
            if (g.owner(u) == Owner::Random) os << " prob " << rat_str(e.prob);
            os << "\n";
        }
    return os.str();
}

/// Machine format:
///   strategy <max|min> states <n> init <s0>
///   t <state> <vertex> -> <state> out <vertex|->
/// Every (state, vertex) pair must be listed exactly once.
inline std::string serialize_machine(const StochasticGame& g, const StrategyMachine& m) {
    std::ostringstream os;
    os << "strategy " << (m.player == Owner::Max ? "max" : "min") << " states " << m.states
       << " init " << m.initial << "\n";
    for (int q = 0; q < m.states; ++q)
        for (int v = 0; v < g.size(); ++v) {
            os << "t " << q << " " << g.ids[v] << " -> " << m.next[static_cast<std::size_t>(q)][static_cast<std::size_t>(v)]
               << " out ";
            int o = m.out[static_cast<std::size_t>(q)][static_cast<std::size_t>(v)];
            os << (o < 0 ? std::string("-") : g.ids[o]) << "\n";
        }
    return os.str();
}

/// Reads one or more strategy blocks (a profile file holds two). Solve
/// reports are accepted directly: their value and provenance lines are
/// skipped.
inline std::vector<StrategyMachine> parse_machines(const StochasticGame& g, std::istream& is) {
    std::vector<StrategyMachine> ms;
    std::string line;
    int lineno = 0;
    StrategyMachine* cur = nullptr;
    std::vector<std::vector<char>> seen;
    auto finish = [&]() {
        if (!cur) return;
        for (int q = 0; q < cur->states; ++q)
            for (int v = 0; v < g.size(); ++v)
                if (!seen[static_cast<std::size_t>(q)][static_cast<std::size_t>(v)])
                    throw validation_error("strategy block missing transition for state " +
                                           std::to_string(q) + ", vertex " + g.ids[v]);
        cur->check(g);
        cur = nullptr;
    };
    while (std::getline(is, line)) {
        ++lineno;
        auto toks = detail::tokens_of(line);
        if (toks.empty()) continue;
        if (toks[0].first == "value" || toks[0].first == "provenance") continue;
        if (toks[0].first == "strategy") {
            finish();
            if (toks.size() < 6 || toks[2].first != "states" || toks[4].first != "init")
                throw parse_error("expected 'strategy <player> states <n> init <s0>'", lineno, toks[0].second);
            Owner pl;
            if (toks[1].first == "max") pl = Owner::Max;
            else if (toks[1].first == "min") pl = Owner::Min;
            else throw parse_error("strategy player must be max or min", lineno, toks[1].second);
            int n = std::stoi(toks[3].first), init = std::stoi(toks[5].first);
            if (n <= 0 || init < 0 || init >= n)
                throw parse_error("bad state count or initial state", lineno, toks[3].second);
            ms.push_back(StrategyMachine::blank(pl, n, init, g.size()));
            cur = &ms.back();
            seen.assign(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(g.size()), 0));
        } else if (toks[0].first == "t") {
            if (!cur) throw parse_error("transition before strategy header", lineno, toks[0].second);
            if (toks.size() != 7 || toks[3].first != "->" || toks[5].first != "out")
                throw parse_error("expected 't <state> <vertex> -> <state> out <vertex|->'", lineno, toks[0].second);
            int q = std::stoi(toks[1].first);
            int v = g.index_of(toks[2].first);
            if (v < 0) throw parse_error("unknown vertex '" + toks[2].first + "'", lineno, toks[2].second);
            int q2 = std::stoi(toks[4].first);
            if (q < 0 || q >= cur->states || q2 < 0 || q2 >= cur->states)
                throw parse_error("state out of range", lineno, toks[1].second);
            int o = -1;
            if (toks[6].first != "-") {
                o = g.index_of(toks[6].first);
                if (o < 0) throw parse_error("unknown vertex '" + toks[6].first + "'", lineno, toks[6].second);
            }
            if (seen[static_cast<std::size_t>(q)][static_cast<std::size_t>(v)])
                throw parse_error("duplicate transition", lineno, toks[1].second);
            seen[static_cast<std::size_t>(q)][static_cast<std::size_t>(v)] = 1;
            cur->next[static_cast<std::size_t>(q)][static_cast<std::size_t>(v)] = q2;
            cur->out[static_cast<std::size_t>(q)][static_cast<std::size_t>(v)] = o;
        } else {
            throw parse_error("unknown directive '" + toks[0].first + "'", lineno, toks[0].second);
        }
    }
    finish();
    if (ms.empty()) throw validation_error("no strategy blocks found");
    return ms;
}

/// Certificate files are lines `value <vertex> <rational>`, one per vertex.
inline std::vector<Rat> parse_certificate(const StochasticGame& g, std::istream& is) {
    std::vector<Rat> vals(static_cast<std::size_t>(g.size()));
    std::vector<char> seen(static_cast<std::size_t>(g.size()), 0);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto toks = detail::tokens_of(line);
        if (toks.empty()) continue;
        if (toks[0].first != "value" || toks.size() != 3)
            throw parse_error("expected 'value <vertex> <rational>'", lineno, toks[0].second);
        int v = g.index_of(toks[1].first);
        if (v < 0) throw parse_error("unknown vertex '" + toks[1].first + "'", lineno, toks[1].second);
        auto r = try_parse_rational(toks[2].first);
        if (!r) throw parse_error("malformed rational '" + toks[2].first + "'", lineno, toks[2].second);
        if (seen[static_cast<std::size_t>(v)]) throw parse_error("duplicate value for " + toks[1].first, lineno, toks[1].second);
        seen[static_cast<std::size_t>(v)] = 1;
        vals[static_cast<std::size_t>(v)] = *r;
    }
    for (int v = 0; v < g.size(); ++v)
        if (!seen[static_cast<std::size_t>(v)]) throw validation_error("certificate missing value for " + g.ids[v]);
    return vals;
}

inline std::string serialize_certificate(const StochasticGame& g, const std::vector<Rat>& vals) {
    std::ostringstream os;
    for (int v = 0; v < g.size(); ++v)
        os << "value " << g.ids[v] << " " << rat_str(vals[static_cast<std::size_t>(v)]) << "\n";
    return os.str();
}

}  // namespace wmpg

#endif
