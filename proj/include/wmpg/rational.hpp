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

#ifndef WMPG_RATIONAL_HPP
#define WMPG_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wmpg {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline Int int_gcd(Int a, Int b) { return boost::multiprecision::gcd(a, b); }
inline Int int_lcm(Int a, Int b) { return boost::multiprecision::lcm(a, b); }

inline Int int_pow(Int base, unsigned long exp) {
    Int r = 1;
    while (exp) {
        if (exp & 1) r *= base;
        base *= base;
        exp >>= 1;
    }
    return r;
}

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

/// Parses "p/q" or a plain integer, with optional sign. Returns nullopt on
/// malformed input or zero denominator.
inline std::optional<Rat> try_parse_rational(const std::string& s) {
    if (s.empty()) return std::nullopt;
    auto is_int = [](const std::string& t) {
        if (t.empty()) return false;
        std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
        if (i == t.size()) return false;
        for (; i < t.size(); ++i)
            if (t[i] < '0' || t[i] > '9') return false;
        return true;
    };
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            if (!is_int(s)) return std::nullopt;
            return Rat(Int(s));
        }
        std::string p = s.substr(0, slash), q = s.substr(slash + 1);
        if (!is_int(p) || !is_int(q)) return std::nullopt;
        Int qi(q);
        if (qi == 0) return std::nullopt;
        return Rat(Int(p), qi);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

inline Rat parse_rational(const std::string& s) {
    auto r = try_parse_rational(s);
    if (!r) throw std::invalid_argument("malformed rational: '" + s + "'");
    return *r;
}

/// Lowest-terms "p/q", or just "p" for integers.
inline std::string rat_str(const Rat& r) {
    std::string s = num(r).str();
    if (den(r) != 1) s += "/" + den(r).str();
    return s;
}

inline Rat rat_floor(const Rat& r) {
    Int q = num(r) / den(r);
    if (num(r) < 0 && q * den(r) != num(r)) --q;
    return Rat(q);
}

/// Best rational approximation of x with denominator <= maxden, via the
/// Stern-Brocot walk. Exact identity when den(x) <= maxden already. Ties
/// cannot occur (best approximations are unique below the bound).
inline Rat best_approximation(const Rat& x, const Int& maxden) {
    if (maxden < 1) throw std::invalid_argument("best_approximation: bound < 1");
    if (den(x) <= maxden) return x;
    // Continued-fraction convergents and the final semiconvergent.
    Int p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    Int n = num(x), d = den(x);
    while (true) {
        Int a = n / d;
        if (n < 0 && a * d != n) --a;  // floor division
        Int p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > maxden) {
            // Largest k with q0 + k*q1 <= maxden gives the best semiconvergent.
            Int k = (maxden - q0) / q1;
            Rat semi(p0 + k * p1, q0 + k * q1);
            Rat conv(p1, q1);
            return rat_abs(semi - x) < rat_abs(conv - x) ? semi : conv;
        }
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        Int r = n - a * d;
        n = d; d = r;
        if (d == 0) return Rat(p1, q1);
    }
}

/// Smallest element of the sorted set strictly above x, if any.
inline std::optional<Rat> next_above(const std::vector<Rat>& sorted_set, const Rat& x) {
    for (const Rat& v : sorted_set)
        if (v > x) return v;
    return std::nullopt;
}

}  // namespace wmpg

#endif
