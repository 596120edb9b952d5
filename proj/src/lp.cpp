#include "chargebounds/lp.hpp"

#include <algorithm>
#include <cstddef>

#include "chargebounds/errors.hpp"

namespace chargebounds {

namespace {

void validate(const LpProblem& p, const LpLimits& limits) {
    if (p.senses.size() != p.num_rows() || p.rhs.size() != p.num_rows()) {
        throw InvalidArgument("inconsistent LP row data");
    }
    if (p.signs.size() != p.num_vars()) {
        throw InvalidArgument("inconsistent LP variable data");
    }
    std::size_t nonzeros = 0;
    for (const auto& row : p.rows) {
        nonzeros += row.size();
        for (const auto& [col, coef] : row) {
            (void)coef;
            if (col < 0 || static_cast<std::size_t>(col) >= p.num_vars()) {
                throw InvalidArgument("LP entry column out of range");
            }
        }
    }
    if (nonzeros > limits.max_nonzeros) {
        throw ResourceError("LP exceeds the nonzero budget");
    }
}

// ---- standard computational form: min c.x, A x = b, x >= 0 -------------
//
// Free variables are split, >= rows get a surplus column, rows are scaled
// to b >= 0, and one artificial column per row provides the phase-1 basis.

struct StandardForm {
    std::size_t nv = 0;                      // structural columns (pre-artificial)
    std::size_t m = 0;                       // rows
    std::vector<std::vector<Rational>> tab;  // m rows of nv + m + 1 (rhs last)
    std::vector<Rational> cost;              // nv + m entries, artificials 0
    std::vector<std::size_t> basis;          // per row, column index
    // mapping back
    std::vector<std::pair<std::int32_t, std::int32_t>> var_map; // original var -> (pos col, neg col or -1)
    std::vector<bool> row_negated;
};

StandardForm build_standard(const LpProblem& p) {
    StandardForm sf;
    const std::size_t n = p.num_vars();
    sf.m = p.num_rows();
    sf.var_map.resize(n);
    std::size_t col = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (p.signs[j] == VarSign::NonNegative) {
            sf.var_map[j] = {static_cast<std::int32_t>(col), -1};
            col += 1;
        } else {
            sf.var_map[j] = {static_cast<std::int32_t>(col), static_cast<std::int32_t>(col + 1)};
            col += 2;
        }
    }
    std::size_t surplus_base = col;
    for (std::size_t i = 0; i < sf.m; ++i) {
        if (p.senses[i] == RowSense::GreaterEqual) ++col;
    }
    sf.nv = col;
    sf.cost.assign(sf.nv + sf.m, Rational(0));
    for (std::size_t j = 0; j < n; ++j) {
        sf.cost[static_cast<std::size_t>(sf.var_map[j].first)] = p.objective[j];
        if (sf.var_map[j].second >= 0) {
            sf.cost[static_cast<std::size_t>(sf.var_map[j].second)] = -p.objective[j];
        }
    }
    sf.tab.assign(sf.m, std::vector<Rational>(sf.nv + sf.m + 1, Rational(0)));
    sf.row_negated.assign(sf.m, false);
    std::size_t surplus = surplus_base;
    for (std::size_t i = 0; i < sf.m; ++i) {
        auto& row = sf.tab[i];
        for (const auto& [j, coef] : p.rows[i]) {
            row[static_cast<std::size_t>(sf.var_map[j].first)] += coef;
            if (sf.var_map[j].second >= 0) {
                row[static_cast<std::size_t>(sf.var_map[j].second)] -= coef;
            }
        }
        if (p.senses[i] == RowSense::GreaterEqual) {
            row[surplus++] = -1;
        }
        row.back() = p.rhs[i];
        if (row.back() < 0) {
            sf.row_negated[i] = true;
            for (auto& v : row) v = -v;
        }
        row[sf.nv + i] = 1; // artificial
    }
    sf.basis.resize(sf.m);
    for (std::size_t i = 0; i < sf.m; ++i) sf.basis[i] = sf.nv + i;
    return sf;
}

void pivot(StandardForm& sf, std::size_t prow, std::size_t pcol) {
    auto& target = sf.tab[prow];
    const Rational inv = Rational(1) / target[pcol];
    for (auto& v : target) v *= inv;
    for (std::size_t i = 0; i < sf.m; ++i) {
        if (i == prow) continue;
        auto& row = sf.tab[i];
        if (row[pcol] == 0) continue;
        const Rational factor = row[pcol];
        for (std::size_t j = 0; j < row.size(); ++j) {
            row[j] -= factor * target[j];
        }
    }
    sf.basis[prow] = pcol;
}

// Bland's rule on the given cost vector over the allowed column range.
// Returns true at optimality, false when unbounded.
bool run_simplex(StandardForm& sf, const std::vector<Rational>& cost, bool allow_artificials) {
    const std::size_t limit = allow_artificials ? sf.nv + sf.m : sf.nv;
    std::vector<bool> in_basis(sf.nv + sf.m, false);
    for (std::size_t b : sf.basis) in_basis[b] = true;
    for (;;) {
        // y = c_B B^{-1} accumulated through the tableau's basic costs.
        std::size_t entering = sf.nv + sf.m;
        for (std::size_t j = 0; j < limit; ++j) {
            if (in_basis[j]) continue;
            Rational reduced = cost[j];
            for (std::size_t i = 0; i < sf.m; ++i) {
                if (cost[sf.basis[i]] != 0 && sf.tab[i][j] != 0) {
                    reduced -= cost[sf.basis[i]] * sf.tab[i][j];
                }
            }
            if (reduced < 0) {
                entering = j;
                break;
            }
        }
        if (entering == sf.nv + sf.m) return true;
        std::size_t leaving = sf.m;
        Rational best_ratio;
        for (std::size_t i = 0; i < sf.m; ++i) {
            if (sf.tab[i][entering] > 0) {
                Rational ratio = sf.tab[i].back() / sf.tab[i][entering];
                if (leaving == sf.m || ratio < best_ratio ||
                    (ratio == best_ratio && sf.basis[i] < sf.basis[leaving])) {
                    best_ratio = ratio;
                    leaving = i;
                }
            }
        }
        if (leaving == sf.m) return false;
        in_basis[sf.basis[leaving]] = false;
        in_basis[entering] = true;
        pivot(sf, leaving, entering);
    }
}

struct CoreSolution {
    LpStatus status = LpStatus::Infeasible;
    std::vector<Rational> x; // structural columns
    std::vector<Rational> y; // per row, for the b >= 0 scaled system
};

CoreSolution solve_standard(StandardForm& sf) {
    CoreSolution out;
    std::vector<Rational> phase1(sf.nv + sf.m, Rational(0));
    for (std::size_t i = 0; i < sf.m; ++i) phase1[sf.nv + i] = 1;
    run_simplex(sf, phase1, true);
    Rational infeas = 0;
    for (std::size_t i = 0; i < sf.m; ++i) {
        infeas += phase1[sf.basis[i]] * sf.tab[i].back();
    }
    if (infeas != 0) {
        out.status = LpStatus::Infeasible;
        return out;
    }
    if (!run_simplex(sf, sf.cost, false)) {
        out.status = LpStatus::Unbounded;
        return out;
    }
    out.status = LpStatus::Optimal;
    out.x.assign(sf.nv, Rational(0));
    for (std::size_t i = 0; i < sf.m; ++i) {
        if (sf.basis[i] < sf.nv) out.x[sf.basis[i]] = sf.tab[i].back();
    }
    // The artificial block of the tableau is B^{-1}, so y = c_B B^{-1}
    // reads off column-wise.
    out.y.assign(sf.m, Rational(0));
    for (std::size_t i = 0; i < sf.m; ++i) {
        if (sf.cost[sf.basis[i]] == 0) continue;
        for (std::size_t k = 0; k < sf.m; ++k) {
            out.y[k] += sf.cost[sf.basis[i]] * sf.tab[i][sf.nv + k];
        }
    }
    return out;
}

LpSolution solve_direct(const LpProblem& p) {
    StandardForm sf = build_standard(p);
    CoreSolution core = solve_standard(sf);
    LpSolution sol;
    sol.status = core.status;
    if (core.status != LpStatus::Optimal) return sol;
    sol.primal.assign(p.num_vars(), Rational(0));
    for (std::size_t j = 0; j < p.num_vars(); ++j) {
        sol.primal[j] = core.x[static_cast<std::size_t>(sf.var_map[j].first)];
        if (sf.var_map[j].second >= 0) {
            sol.primal[j] -= core.x[static_cast<std::size_t>(sf.var_map[j].second)];
        }
    }
    sol.dual.assign(p.num_rows(), Rational(0));
    for (std::size_t i = 0; i < p.num_rows(); ++i) {
        sol.dual[i] = sf.row_negated[i] ? -core.y[i] : core.y[i];
    }
    sol.value = 0;
    for (std::size_t j = 0; j < p.num_vars(); ++j) {
        if (sol.primal[j] != 0) sol.value += p.objective[j] * sol.primal[j];
    }
    return sol;
}

// Dual of (min c.x, rows >=/=, vars free/nonneg) as another LpProblem:
//   variables y_i (nonneg for >= rows, free for = rows), objective -b.y,
//   one row per original variable:  A^T_j y = c_j (free x_j),
//   -A^T_j y >= -c_j (nonneg x_j).
LpProblem dualize(const LpProblem& p) {
    LpProblem d;
    const std::size_t m = p.num_rows();
    const std::size_t n = p.num_vars();
    d.objective.resize(m);
    d.signs.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        d.objective[i] = -p.rhs[i];
        d.signs[i] = p.senses[i] == RowSense::GreaterEqual ? VarSign::NonNegative : VarSign::Free;
    }
    d.rows.assign(n, {});
    d.senses.resize(n);
    d.rhs.resize(n);
    for (std::size_t i = 0; i < m; ++i) {
        for (const auto& [j, coef] : p.rows[i]) {
            d.rows[static_cast<std::size_t>(j)].push_back(
                {static_cast<std::int32_t>(i),
                 p.signs[static_cast<std::size_t>(j)] == VarSign::Free ? coef : -coef});
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (p.signs[j] == VarSign::Free) {
            d.senses[j] = RowSense::Equal;
            d.rhs[j] = p.objective[j];
        } else {
            d.senses[j] = RowSense::GreaterEqual;
            d.rhs[j] = -p.objective[j];
        }
    }
    return d;
}

} // namespace

bool verify_certificate(const LpProblem& p, const LpSolution& sol) {
    if (sol.status != LpStatus::Optimal) return false;
    if (sol.primal.size() != p.num_vars() || sol.dual.size() != p.num_rows()) return false;
    // Primal feasibility.
    for (std::size_t j = 0; j < p.num_vars(); ++j) {
        if (p.signs[j] == VarSign::NonNegative && sol.primal[j] < 0) return false;
    }
    for (std::size_t i = 0; i < p.num_rows(); ++i) {
        Rational lhs = 0;
        for (const auto& [j, coef] : p.rows[i]) lhs += coef * sol.primal[static_cast<std::size_t>(j)];
        if (p.senses[i] == RowSense::Equal ? lhs != p.rhs[i] : lhs < p.rhs[i]) return false;
    }
    // Dual feasibility: sign per sense, reduced cost per variable sign.
    for (std::size_t i = 0; i < p.num_rows(); ++i) {
        if (p.senses[i] == RowSense::GreaterEqual && sol.dual[i] < 0) return false;
    }
    std::vector<Rational> aty(p.num_vars(), Rational(0));
    for (std::size_t i = 0; i < p.num_rows(); ++i) {
        if (sol.dual[i] == 0) continue;
        for (const auto& [j, coef] : p.rows[i]) aty[static_cast<std::size_t>(j)] += coef * sol.dual[i];
    }
    for (std::size_t j = 0; j < p.num_vars(); ++j) {
        const Rational reduced = p.objective[j] - aty[j];
        if (p.signs[j] == VarSign::Free ? reduced != 0 : reduced < 0) return false;
    }
    // Objective equality.
    Rational cx = 0;
    for (std::size_t j = 0; j < p.num_vars(); ++j) {
        if (sol.primal[j] != 0) cx += p.objective[j] * sol.primal[j];
    }
    Rational by = 0;
    for (std::size_t i = 0; i < p.num_rows(); ++i) {
        if (sol.dual[i] != 0) by += p.rhs[i] * sol.dual[i];
    }
    if (cx != by || cx != sol.value) return false;
    return true;
}

LpSolution solve(const LpProblem& p, const LpLimits& limits) {
    validate(p, limits);
    LpSolution sol;
    // Basis dimension is the row count of whichever orientation we pivot
    // on; pick the smaller one.
    if (p.num_rows() <= p.num_vars()) {
        sol = solve_direct(p);
    } else {
        const LpProblem d = dualize(p);
        LpSolution dsol = solve_direct(d);
        if (dsol.status == LpStatus::Unbounded) {
            sol.status = LpStatus::Infeasible;
            return sol;
        }
        if (dsol.status == LpStatus::Infeasible) {
            // Dual infeasible: original is unbounded or infeasible; decide
            // with a direct phase-1 on the original.
            LpSolution direct = solve_direct(p);
            sol.status = direct.status == LpStatus::Infeasible ? LpStatus::Infeasible
                                                               : LpStatus::Unbounded;
            return sol;
        }
        sol.status = LpStatus::Optimal;
        sol.dual = dsol.primal; // y
        sol.primal.assign(p.num_vars(), Rational(0));
        for (std::size_t j = 0; j < p.num_vars(); ++j) {
            sol.primal[j] = p.signs[j] == VarSign::Free ? -dsol.dual[j] : dsol.dual[j];
        }
        sol.value = -dsol.value;
    }
    if (sol.status == LpStatus::Optimal) {
        sol.certificate_ok = verify_certificate(p, sol);
        if (!sol.certificate_ok) {
            throw Error("internal: simplex produced an invalid optimality certificate");
        }
    }
    return sol;
}

} // namespace chargebounds
