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

#ifndef WMPG_BOUNDS_HPP
#define WMPG_BOUNDS_HPP

#include "wmpg/game.hpp"
#include "wmpg/window.hpp"

namespace wmpg {

/// Exact denominator and payoff bounds for the expected-value machinery.
/// no_boundary_bound caps the denominators of class values without boundary
/// vertices (q_W^l * l for FWMP, q_W^|V| * |V| for BWMP); global_bound is
/// 2^|V| * q^(|V|^3) * no_boundary_bound^|V| and caps every vertex value;
/// granularity (1/global_bound)^2 separates distinct representable values.
/// tight_bound is a much smaller, still valid cap on achievable play-value
/// denominators (lcm of payoff denominators times lcm(1..horizon)), handy
/// for fixtures where the worst-case bound is astronomically large.
struct DenominatorBounds {
    Int no_boundary_bound;
    Int global_bound;
    Rat granularity;
    Int payoff_bound;            // K: smallest integer with |payoff| <= K everywhere
    Int max_payoff_denominator;  // q_W
    Int max_prob_denominator;    // q
    Int tight_bound;
};

inline DenominatorBounds compute_bounds(const StochasticGame& g, ObjectiveKind kind, int window_length = 1) {
    if (kind == ObjectiveKind::Fwmp && window_length < 1) throw error("window length must be >= 1");
    DenominatorBounds b;
    b.max_payoff_denominator = 1;
    b.max_prob_denominator = 1;
    b.payoff_bound = 0;
    Int payoff_den_lcm = 1;
    for (int v = 0; v < g.size(); ++v)
        for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)]) {
            Int d = den(e.payoff);
            if (d > b.max_payoff_denominator) b.max_payoff_denominator = d;
            payoff_den_lcm = int_lcm(payoff_den_lcm, d);
            Rat a = rat_abs(e.payoff);
            Int k = num(a) / den(a);
            if (Rat(k) < a) ++k;
            if (k > b.payoff_bound) b.payoff_bound = k;
            if (g.owner(v) == Owner::Random) {
                Int pd = den(e.prob);
                if (pd > b.max_prob_denominator) b.max_prob_denominator = pd;
            }
        }
    unsigned long nv = static_cast<unsigned long>(g.size());
    unsigned long horizon = kind == ObjectiveKind::Fwmp ? static_cast<unsigned long>(window_length) : nv;
    b.no_boundary_bound = int_pow(b.max_payoff_denominator, horizon) * Int(horizon);
    b.global_bound = int_pow(Int(2), nv) * int_pow(b.max_prob_denominator, nv * nv * nv) *
                     int_pow(b.no_boundary_bound, nv);
    b.granularity = Rat(Int(1), b.global_bound * b.global_bound);
    Int fact_lcm = 1;
    for (unsigned long j = 2; j <= horizon; ++j) fact_lcm = int_lcm(fact_lcm, Int(j));
    b.tight_bound = payoff_den_lcm * fact_lcm;
    return b;
}

}  // namespace wmpg

#endif
