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

#ifndef WMPG_BOUNDARY_HPP
#define WMPG_BOUNDARY_HPP

#include <optional>
#include <vector>

#include "wmpg/game.hpp"
#include "wmpg/linalg.hpp"

namespace wmpg {

/// The linear system tying boundary-class values to the known values of the
/// classes without boundary vertices: one representative boundary vertex
/// per boundary class, rows are its one-step class-reach distributions, and
/// (I - Q_B) lambda_B = Q_C lambda_C determines the unknowns uniquely.
struct BoundaryLinearSystem {
    std::vector<int> boundary_class;      // indices (into the caller's class list) with boundary vertices
    std::vector<int> no_boundary_class;   // the rest
    std::vector<int> representative;      // per boundary class, base vertex index
    Matrix q_b;                           // m x m
    Matrix q_c;                           // m x (k - m)
    std::vector<Rat> rhs_values;          // values of the no-boundary classes
    std::vector<Rat> solution;            // per boundary class
    Int alpha = 1;                        // lcm of the denominators of all p_{i,j}
    Int det_alpha_ib = 0;                 // det(alpha (I - Q_B)), an integer
};

/// `classes` partitions the vertices; `known` holds the value of every class
/// without boundary vertices (nullopt marks a boundary class whose value is
/// to be solved for). The solution is independent of the representative
/// choice; the lowest-index boundary vertex is used.
inline BoundaryLinearSystem solve_boundary_system(const StochasticGame& g,
                                                  const std::vector<std::vector<int>>& classes,
                                                  const std::vector<std::optional<Rat>>& known) {
    if (classes.size() != known.size()) throw error("solve_boundary_system: shape mismatch");
    std::vector<int> class_of(static_cast<std::size_t>(g.size()), -1);
    for (std::size_t k = 0; k < classes.size(); ++k)
        for (int v : classes[k]) class_of[static_cast<std::size_t>(v)] = static_cast<int>(k);
    for (int v = 0; v < g.size(); ++v)
        if (class_of[static_cast<std::size_t>(v)] < 0) throw error("solve_boundary_system: partition not total");

    BoundaryLinearSystem sys;
    for (std::size_t k = 0; k < classes.size(); ++k) {
        int rep = -1;
        for (int v : classes[k]) {
            if (g.owner(v) != Owner::Random) continue;
            bool outside = false;
            for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)])
                if (class_of[static_cast<std::size_t>(e.to)] != static_cast<int>(k)) outside = true;
            if (outside && (rep < 0 || v < rep)) rep = v;
        }
        if (known[k]) {
            if (rep >= 0)
                throw error("solve_boundary_system: class " + std::to_string(k) +
                            " has boundary vertices but a fixed value");
            sys.no_boundary_class.push_back(static_cast<int>(k));
        } else {
            if (rep < 0)
                throw error("solve_boundary_system: class " + std::to_string(k) +
                            " has no boundary vertex to represent it");
            sys.boundary_class.push_back(static_cast<int>(k));
            sys.representative.push_back(rep);
        }
    }
    std::size_t m = sys.boundary_class.size();
    std::size_t c = sys.no_boundary_class.size();
    sys.q_b.assign(m, std::vector<Rat>(m, Rat(0)));
    sys.q_c.assign(m, std::vector<Rat>(c, Rat(0)));
    for (std::size_t i = 0; i < m; ++i) {
        int u = sys.representative[i];
        for (const HalfEdge& e : g.out[static_cast<std::size_t>(u)]) {
            int kj = class_of[static_cast<std::size_t>(e.to)];
            auto bpos = std::find(sys.boundary_class.begin(), sys.boundary_class.end(), kj);
            if (bpos != sys.boundary_class.end()) {
                sys.q_b[i][static_cast<std::size_t>(bpos - sys.boundary_class.begin())] += e.prob;
            } else {
                auto cpos = std::find(sys.no_boundary_class.begin(), sys.no_boundary_class.end(), kj);
                sys.q_c[i][static_cast<std::size_t>(cpos - sys.no_boundary_class.begin())] += e.prob;
            }
        }
    }
    for (int k : sys.no_boundary_class) sys.rhs_values.push_back(*known[static_cast<std::size_t>(k)]);

    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) sys.alpha = int_lcm(sys.alpha, den(sys.q_b[i][j]));
        for (std::size_t j = 0; j < c; ++j) sys.alpha = int_lcm(sys.alpha, den(sys.q_c[i][j]));
    }

    if (m == 0) return sys;  // nothing to solve

    Matrix lhs(m, std::vector<Rat>(m, Rat(0)));
    std::vector<Rat> rhs(m, Rat(0));
    Matrix scaled(m, std::vector<Rat>(m, Rat(0)));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            lhs[i][j] = (i == j ? Rat(1) : Rat(0)) - sys.q_b[i][j];
            scaled[i][j] = Rat(sys.alpha) * lhs[i][j];
        }
        for (std::size_t j = 0; j < c; ++j) rhs[i] += sys.q_c[i][j] * sys.rhs_values[j];
    }
    Rat det = determinant(scaled);
    if (den(det) != 1) throw error("solve_boundary_system: non-integer scaled determinant");
    sys.det_alpha_ib = num(det);
    auto x = gauss_solve(lhs, rhs);
    if (!x || sys.det_alpha_ib == 0)
        throw error("solve_boundary_system: singular system; the partition is not a value-class partition");
    sys.solution = *x;
    return sys;
}

}  // namespace wmpg

#endif
