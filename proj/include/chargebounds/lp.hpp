#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "chargebounds/rational.hpp"

namespace chargebounds {

enum class RowSense { GreaterEqual, Equal };
enum class VarSign { Free, NonNegative };

// minimize objective . x subject to the rows; every coefficient exact.
struct LpProblem {
    std::vector<Rational> objective;
    std::vector<std::vector<std::pair<std::int32_t, Rational>>> rows; // sparse, column index + coefficient
    std::vector<RowSense> senses;
    std::vector<Rational> rhs;
    std::vector<VarSign> signs;

    std::size_t num_vars() const { return objective.size(); }
    std::size_t num_rows() const { return rows.size(); }
};

struct LpLimits {
    std::size_t max_nonzeros = 1000000;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

// When status == Optimal the primal/dual pair is exactly feasible with
// equal objectives and certificate_ok is true; solve() verifies this
// before returning.
struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    Rational value = 0;
    std::vector<Rational> primal;
    std::vector<Rational> dual;
    bool certificate_ok = false;
};

// Exact rational simplex with Bland's anti-cycling rule and lowest-index
// tie-breaking. Internally solves whichever of the problem or its dual has
// the smaller basis, but always reports both vectors in the original
// problem's terms.
LpSolution solve(const LpProblem& problem, const LpLimits& limits = {});

// Independent exact re-check of a claimed optimal solution: primal
// feasibility, dual feasibility (sign conditions per row sense and reduced
// costs per variable sign), and objective equality. Never throws on a bad
// certificate; just returns false.
bool verify_certificate(const LpProblem& problem, const LpSolution& solution);

} // namespace chargebounds
