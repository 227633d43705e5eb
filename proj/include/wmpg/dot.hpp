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

#ifndef WMPG_DOT_HPP
#define WMPG_DOT_HPP

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wmpg/game.hpp"
#include "wmpg/verifier.hpp"

namespace wmpg {

/// Graphviz rendering: Max vertices are circles, Min vertices boxes, Random
/// vertices diamonds; edge labels carry the payoff (red) and, out of Random
/// vertices, the probability (blue). With a value vector, classes become
/// clusters labelled by their value.
inline std::string export_dot(const StochasticGame& g, const std::optional<std::vector<Rat>>& values = std::nullopt) {
    std::ostringstream os;
    os << "digraph \"" << (g.name.empty() ? "game" : g.name) << "\" {\n";
    os << "  rankdir=LR;\n";
    auto shape = [&](int v) {
        switch (g.owner(v)) {
            case Owner::Max: return "circle";
            case Owner::Min: return "box";
            default: return "diamond";
        }
    };
    if (values) {
        ValueClassDecomposition d = decompose(g, *values);
        for (std::size_t k = 0; k < d.classes.size(); ++k) {
            os << "  subgraph cluster_" << k << " {\n";
            os << "    label=\"value " << rat_str(d.classes[k].value) << "\";\n";
            for (int v : d.classes[k].vertices)
                os << "    \"" << g.ids[v] << "\" [shape=" << shape(v) << "];\n";
            os << "  }\n";
        }
    } else {
        for (int v = 0; v < g.size(); ++v)
            os << "  \"" << g.ids[v] << "\" [shape=" << shape(v) << "];\n";
    }
    for (int u = 0; u < g.size(); ++u)
        for (const HalfEdge& e : g.out[static_cast<std::size_t>(u)]) {
            os << "  \"" << g.ids[u] << "\" -> \"" << g.ids[e.to] << "\" [label=<"
               << "<font color=\"red\">" << rat_str(e.payoff) << "</font>";
            if (g.owner(u) == Owner::Random)
                os << " <font color=\"blue\">" << rat_str(e.prob) << "</font>";
            os << ">];\n";
        }
    os << "}\n";
    return os.str();
}

}  // namespace wmpg

#endif
