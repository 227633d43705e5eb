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

#ifndef WMPG_GAME_HPP
#define WMPG_GAME_HPP

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "wmpg/rational.hpp"

namespace wmpg {

enum class Owner { Max, Min, Random };

inline const char* owner_str(Owner o) {
    switch (o) {
        case Owner::Max: return "max";
        case Owner::Min: return "min";
        default: return "rand";
    }
}

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised by the game-file reader: carries 1-based line and column.
struct parse_error : error {
    int line, column;
    parse_error(const std::string& msg, int l, int c)
        : error("parse error at " + std::to_string(l) + ":" + std::to_string(c) + ": " + msg),
          line(l), column(c) {}
};

struct validation_error : error {
    using error::error;
};

struct HalfEdge {
    int to;
    Rat payoff;
    Rat prob;  // meaningful only when the source is a Random vertex
};

/// A two-player turn-based stochastic game: a finite deadlock-free digraph
/// whose vertices are owned by Max, Min, or Random, rational payoffs on
/// edges, and a full-support probability distribution on the out-edges of
/// every Random vertex. Immutable after finalize(); all adjacency lists are
/// sorted by target index so iteration order is deterministic everywhere.
struct StochasticGame {
    std::string name;
    std::vector<std::string> ids;
    std::vector<Owner> owners;
    std::vector<std::vector<HalfEdge>> out;

    int size() const { return static_cast<int>(ids.size()); }

    int index_of(const std::string& id) const {
        auto it = index_.find(id);
        return it == index_.end() ? -1 : it->second;
    }

    Owner owner(int v) const { return owners.at(static_cast<std::size_t>(v)); }

    const HalfEdge* find_edge(int u, int v) const {
        for (const HalfEdge& e : out[static_cast<std::size_t>(u)])
            if (e.to == v) return &e;
        return nullptr;
    }

    bool has_edge(int u, int v) const { return find_edge(u, v) != nullptr; }

    Rat payoff(int u, int v) const {
        const HalfEdge* e = find_edge(u, v);
        if (!e) throw error("no edge " + ids[u] + " -> " + ids[v]);
        return e->payoff;
    }

    Rat prob(int u, int v) const {
        if (owner(u) != Owner::Random) throw error("prob queried on non-random vertex " + ids[u]);
        return payoff_edge(u, v).prob;
    }

    std::vector<int> successors(int u) const {
        std::vector<int> r;
        for (const HalfEdge& e : out[static_cast<std::size_t>(u)]) r.push_back(e.to);
        return r;
    }

    int edge_count() const {
        int n = 0;
        for (const auto& a : out) n += static_cast<int>(a.size());
        return n;
    }

    int add_vertex(const std::string& id, Owner o) {
        if (index_.count(id)) throw validation_error("duplicate vertex id '" + id + "'");
        int idx = size();
        index_[id] = idx;
        ids.push_back(id);
        owners.push_back(o);
        out.emplace_back();
        return idx;
    }

    void add_edge(int u, int v, Rat payoff, Rat prob = Rat(0)) {
        if (u < 0 || u >= size() || v < 0 || v >= size()) throw error("edge endpoint out of range");
        if (find_edge(u, v)) throw validation_error("duplicate edge " + ids[u] + " -> " + ids[v]);
        out[static_cast<std::size_t>(u)].push_back(HalfEdge{v, std::move(payoff), std::move(prob)});
    }

    /// Sorts adjacency and checks the structural invariants: no deadlocks,
    /// full-support distributions summing to exactly 1 at Random vertices,
    /// no probabilities elsewhere.
    void finalize() {
        for (int u = 0; u < size(); ++u) {
            auto& a = out[static_cast<std::size_t>(u)];
            std::sort(a.begin(), a.end(), [](const HalfEdge& x, const HalfEdge& y) { return x.to < y.to; });
            if (a.empty()) throw validation_error("deadlock at vertex " + ids[u]);
            if (owner(u) == Owner::Random) {
                Rat sum(0);
                for (const HalfEdge& e : a) {
                    if (e.prob <= 0)
                        throw validation_error("nonpositive probability on edge " + ids[u] + " -> " + ids[e.to]);
                    sum += e.prob;
                }
                if (sum != 1)
                    throw validation_error("distribution at " + ids[u] + " sums to " + rat_str(sum));
            } else {
                for (const HalfEdge& e : a)
                    if (e.prob != 0)
                        throw validation_error("probability on edge from non-random vertex " + ids[u]);
            }
        }
    }

  private:
    const HalfEdge& payoff_edge(int u, int v) const {
        const HalfEdge* e = find_edge(u, v);
        if (!e) throw error("no edge " + ids[u] + " -> " + ids[v]);
        return *e;
    }

    std::map<std::string, int> index_;
};

/// A subset of vertices intended to induce a subgame of `parent`.
struct SubgameSelection {
    const StochasticGame* parent = nullptr;
    std::vector<int> kept;  // sorted, unique

    /// Throws unless every kept vertex has a kept successor and every kept
    /// Random vertex keeps all of its successors.
    void check() const {
        if (!parent) throw error("selection without parent");
        std::vector<char> in(static_cast<std::size_t>(parent->size()), 0);
        for (int v : kept) {
            if (v < 0 || v >= parent->size()) throw error("selection vertex out of range");
            in[static_cast<std::size_t>(v)] = 1;
        }
        for (int v : kept) {
            bool any = false;
            for (const HalfEdge& e : parent->out[static_cast<std::size_t>(v)]) {
                if (in[static_cast<std::size_t>(e.to)]) any = true;
                else if (parent->owner(v) == Owner::Random)
                    throw validation_error("kept random vertex " + parent->ids[v] +
                                           " has dropped successor " + parent->ids[e.to]);
            }
            if (!any)
                throw validation_error("kept vertex " + parent->ids[v] + " has no kept successor");
        }
    }
};

/// The induced subgame: vertex ids survive, indices are re-packed densely.
inline StochasticGame restrict_game(const StochasticGame& g, const SubgameSelection& sel) {
    sel.check();
    StochasticGame h;
    h.name = g.name;
    std::vector<int> keep = sel.kept;
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    std::vector<int> to_new(static_cast<std::size_t>(g.size()), -1);
    for (int v : keep) to_new[static_cast<std::size_t>(v)] = h.add_vertex(g.ids[v], g.owner(v));
    for (int v : keep)
        for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)])
            if (to_new[static_cast<std::size_t>(e.to)] >= 0)
                h.add_edge(to_new[static_cast<std::size_t>(v)], to_new[static_cast<std::size_t>(e.to)],
                           e.payoff, e.prob);
    h.finalize();
    return h;
}

inline StochasticGame restrict_game(const StochasticGame& g, const std::vector<int>& kept) {
    return restrict_game(g, SubgameSelection{&g, kept});
}

/// Restriction of `g` to one value class: Random vertices with a successor
/// outside the class become absorbing (payoff-0 self-loop); Max/Min vertices
/// keep only in-class successors. A Max/Min vertex left without successors
/// means no value vector with this class can satisfy the Bellman condition.
inline StochasticGame class_restriction(const StochasticGame& g, const std::vector<int>& class_vertices) {
    if (class_vertices.empty()) throw error("class_restriction: empty class");
    std::vector<char> in(static_cast<std::size_t>(g.size()), 0);
    for (int v : class_vertices) in[static_cast<std::size_t>(v)] = 1;
    std::vector<int> keep = class_vertices;
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());

    StochasticGame h;
    h.name = g.name;
    std::vector<int> to_new(static_cast<std::size_t>(g.size()), -1);
    for (int v : keep) to_new[static_cast<std::size_t>(v)] = h.add_vertex(g.ids[v], g.owner(v));
    for (int v : keep) {
        int nv = to_new[static_cast<std::size_t>(v)];
        if (g.owner(v) == Owner::Random) {
            bool boundary = false;
            for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)])
                if (!in[static_cast<std::size_t>(e.to)]) boundary = true;
            if (boundary) {
                h.add_edge(nv, nv, Rat(0), Rat(1));
                continue;
            }
        }
        bool any = false;
        for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)])
            if (in[static_cast<std::size_t>(e.to)]) {
                h.add_edge(nv, to_new[static_cast<std::size_t>(e.to)], e.payoff, e.prob);
                any = true;
            }
        if (!any)
            throw validation_error("class restriction deadlocks at " + g.ids[v] +
                                   ": no in-class successor");
    }
    h.finalize();
    return h;
}

/// Finite stem + nonempty repeated cycle; the standard finite presentation
/// of an ultimately periodic play.
struct Lasso {
    std::vector<int> stem;
    std::vector<int> cycle;

    void check(const StochasticGame& g) const {
        if (cycle.empty()) throw error("lasso with empty cycle");
        auto edge = [&](int u, int v) {
            if (!g.has_edge(u, v))
                throw validation_error("lasso uses missing edge " + g.ids[u] + " -> " + g.ids[v]);
        };
        for (std::size_t i = 0; i + 1 < stem.size(); ++i) edge(stem[i], stem[i + 1]);
        if (!stem.empty()) edge(stem.back(), cycle.front());
        for (std::size_t i = 0; i + 1 < cycle.size(); ++i) edge(cycle[i], cycle[i + 1]);
        edge(cycle.back(), cycle.front());
    }

    /// Edge payoffs around one period of the cycle.
    std::vector<Rat> cycle_payoffs(const StochasticGame& g) const {
        std::vector<Rat> p;
        for (std::size_t i = 0; i < cycle.size(); ++i)
            p.push_back(g.payoff(cycle[i], cycle[(i + 1) % cycle.size()]));
        return p;
    }
};

}  // namespace wmpg

#endif
