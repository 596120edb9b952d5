#pragma once

// Test-side oracles, independent of the implementation paths they check:
// direct AST membership, scanning deciders, LP value by vertex
// enumeration, and the exact integral transportation maximum by dynamic
// programming.

#include <cstdint>
#include <optional>
#include <vector>

#include "chargebounds/bounds.hpp"
#include "chargebounds/lp.hpp"
#include "chargebounds/setexpr.hpp"

namespace oracles {

// Membership of x in the set denoted by the raw expression tree.
bool eval_membership(const chargebounds::SetExpr& expr, std::int64_t x);

// Alive bits by scanning representatives s and s + N!_p for membership;
// exact for class-only expressions whose moduli divide the primorial.
std::vector<bool> scan_alive(const chargebounds::SetExpr& expr, const chargebounds::Level& level);

// Scans the first `count` elements of the class for a prime; nullopt when
// none was found in that range.
std::optional<std::int64_t> scan_class_for_prime(const chargebounds::ResidueClass& c,
                                                 std::int64_t count);

// Scans for a composite element (>= 4, not prime).
std::optional<std::int64_t> scan_class_for_composite(const chargebounds::ResidueClass& c,
                                                     std::int64_t count);

struct EnumResult {
    chargebounds::LpStatus status;
    chargebounds::Rational value; // meaningful when status == Optimal
};

// LP value by enumerating basic feasible points: every maximal linearly
// independent selection of tight rows (equalities, >= rows at equality,
// nonnegativity bounds at zero). Intended for small problems with
// nonnegative variables, where the feasible region is pointed and a
// bounded optimum is attained at such a point; unboundedness is detected
// by enumerating the recession directions of the same selections.
EnumResult enumerate_lp(const chargebounds::LpProblem& problem);

// Exact maximum of the alive mass over all integer path multisets with
// uniform per-coordinate marginals. Levels 1..3.
std::int64_t transportation_max(const chargebounds::Level& level, const std::vector<bool>& alive);

} // namespace oracles
