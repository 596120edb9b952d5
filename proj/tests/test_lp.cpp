#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chargebounds/bounds.hpp"
#include "chargebounds/errors.hpp"
#include "chargebounds/lp.hpp"
#include "chargebounds/setexpr.hpp"
#include "oracles.hpp"

using namespace chargebounds;

namespace {

LpProblem simple(std::vector<Rational> objective,
                 std::vector<std::vector<std::pair<std::int32_t, Rational>>> rows,
                 std::vector<RowSense> senses, std::vector<Rational> rhs,
                 std::vector<VarSign> signs) {
    LpProblem p;
    p.objective = std::move(objective);
    p.rows = std::move(rows);
    p.senses = std::move(senses);
    p.rhs = std::move(rhs);
    p.signs = std::move(signs);
    return p;
}

// Deterministic xorshift for reproducible random LPs.
struct Rng {
    std::uint64_t s = 0x9e3779b97f4a7c15ULL;
    std::uint64_t next() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return s;
    }
    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }
};

} // namespace

TEST_CASE("minimize x subject to x >= 1") {
    auto p = simple({Rational(1)}, {{{0, Rational(1)}}}, {RowSense::GreaterEqual}, {Rational(1)},
                    {VarSign::NonNegative});
    const LpSolution s = solve(p);
    CHECK(s.status == LpStatus::Optimal);
    CHECK(s.value == Rational(1));
    CHECK(s.certificate_ok);
    CHECK(verify_certificate(p, s));
}

TEST_CASE("mass goes to the cheaper variable") {
    auto p = simple({Rational(1), Rational(1, 2)}, {{{0, Rational(1)}, {1, Rational(1)}}},
                    {RowSense::GreaterEqual}, {Rational(1)},
                    {VarSign::NonNegative, VarSign::NonNegative});
    const LpSolution s = solve(p);
    CHECK(s.status == LpStatus::Optimal);
    CHECK(s.value == Rational(1, 2));
    CHECK(s.primal[1] == Rational(1));
}

TEST_CASE("level-2 primes covering LP has value 5/6") {
    const Level level = make_level(2);
    const AliveVector alive = alive_vector(*parse("primes"), level);
    const LpProblem p = build_lp(alive, pr_family(level));
    const LpSolution s = solve(p);
    CHECK(s.status == LpStatus::Optimal);
    CHECK(s.value == Rational(5, 6));
    // independent route: vertex enumeration over the same 6-row system
    // (free variables make the region non-pointed, so enumerate the dual
    // instead: it is the transportation LP with nonnegative variables).
    CHECK(oracles::transportation_max(level, std::vector<bool>(alive.bits.begin(), alive.bits.end())) == 5);
}

TEST_CASE("statuses") {
    // x >= 1 and -x >= 0 cannot both hold for x >= 0
    auto infeasible = simple({Rational(1)}, {{{0, Rational(1)}}, {{0, Rational(-1)}}},
                             {RowSense::GreaterEqual, RowSense::GreaterEqual},
                             {Rational(1), Rational(0)}, {VarSign::NonNegative});
    CHECK(solve(infeasible).status == LpStatus::Infeasible);

    auto unbounded = simple({Rational(-1)}, {}, {}, {}, {VarSign::NonNegative});
    CHECK(solve(unbounded).status == LpStatus::Unbounded);

    // free variable with an equality pins it; negative cost elsewhere
    auto free_unbounded = simple({Rational(0), Rational(-1)}, {{{0, Rational(1)}}},
                                 {RowSense::Equal}, {Rational(3)},
                                 {VarSign::Free, VarSign::NonNegative});
    CHECK(solve(free_unbounded).status == LpStatus::Unbounded);
}

TEST_CASE("verify_certificate rejects perturbed solutions") {
    auto p = simple({Rational(1), Rational(1, 2)}, {{{0, Rational(1)}, {1, Rational(1)}}},
                    {RowSense::GreaterEqual}, {Rational(1)},
                    {VarSign::NonNegative, VarSign::NonNegative});
    const LpSolution good = solve(p);
    CHECK(verify_certificate(p, good));

    LpSolution primal_off = good;
    primal_off.primal[1] -= Rational(1, 1000000000);
    CHECK_FALSE(verify_certificate(p, primal_off));

    LpSolution dual_flipped = good;
    dual_flipped.dual[0] = -dual_flipped.dual[0];
    CHECK_FALSE(verify_certificate(p, dual_flipped));

    LpSolution wrong_status = good;
    wrong_status.status = LpStatus::Unbounded;
    CHECK_FALSE(verify_certificate(p, wrong_status));
}

TEST_CASE("200 random small LPs match vertex enumeration") {
    Rng rng;
    int optimal_seen = 0, infeasible_seen = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t nvars = static_cast<std::size_t>(rng.range(1, 6));
        const std::size_t nrows = static_cast<std::size_t>(rng.range(1, 8));
        LpProblem p;
        for (std::size_t j = 0; j < nvars; ++j) {
            // nonnegative costs over nonnegative variables keep the
            // problems bounded; statuses split optimal/infeasible
            p.objective.push_back(Rational(rng.range(0, 9), rng.range(1, 9)));
            p.signs.push_back(VarSign::NonNegative);
        }
        for (std::size_t i = 0; i < nrows; ++i) {
            std::vector<std::pair<std::int32_t, Rational>> row;
            for (std::size_t j = 0; j < nvars; ++j) {
                if (rng.range(0, 2) == 0) continue;
                const Rational coef(rng.range(-9, 9), rng.range(1, 9));
                if (coef != 0) row.push_back({static_cast<std::int32_t>(j), coef});
            }
            p.rows.push_back(std::move(row));
            p.senses.push_back(rng.range(0, 4) == 0 ? RowSense::Equal : RowSense::GreaterEqual);
            p.rhs.push_back(Rational(rng.range(-9, 9), rng.range(1, 9)));
        }
        const LpSolution s = solve(p);
        const oracles::EnumResult e = oracles::enumerate_lp(p);
        CAPTURE(trial);
        REQUIRE(s.status == e.status);
        if (s.status == LpStatus::Optimal) {
            ++optimal_seen;
            CHECK(s.value == e.value);
            CHECK(s.certificate_ok);
            CHECK(verify_certificate(p, s));
        } else if (s.status == LpStatus::Infeasible) {
            ++infeasible_seen;
        }
    }
    // the generator must exercise both interesting statuses
    CHECK(optimal_seen > 50);
    CHECK(infeasible_seen > 10);
}

TEST_CASE("tall problems route through the dual orientation") {
    // 30 rows, 2 vars: x + y >= k/10 for k = 1..30, minimize x + 2y
    LpProblem p;
    p.objective = {Rational(1), Rational(2)};
    p.signs = {VarSign::NonNegative, VarSign::NonNegative};
    for (int k = 1; k <= 30; ++k) {
        p.rows.push_back({{0, Rational(1)}, {1, Rational(1)}});
        p.senses.push_back(RowSense::GreaterEqual);
        p.rhs.push_back(Rational(k, 10));
    }
    const LpSolution s = solve(p);
    CHECK(s.status == LpStatus::Optimal);
    CHECK(s.value == Rational(3)); // x = 3, y = 0
    CHECK(s.dual.size() == 30);
    const oracles::EnumResult e = oracles::enumerate_lp(p);
    CHECK(e.status == LpStatus::Optimal);
    CHECK(e.value == s.value);
}

TEST_CASE("determinism: identical problems give identical solutions") {
    const Level level = make_level(3);
    const AliveVector alive = alive_vector(*parse("primes"), level);
    const LpProblem p = build_lp(alive, pr_family(level));
    const LpSolution a = solve(p);
    const LpSolution b = solve(p);
    CHECK(a.value == b.value);
    CHECK(a.primal == b.primal);
    CHECK(a.dual == b.dual);
}

TEST_CASE("nonzero budget") {
    LpLimits limits;
    limits.max_nonzeros = 3;
    auto p = simple({Rational(1), Rational(1)},
                    {{{0, Rational(1)}, {1, Rational(1)}}, {{0, Rational(1)}, {1, Rational(1)}}},
                    {RowSense::GreaterEqual, RowSense::GreaterEqual}, {Rational(1), Rational(2)},
                    {VarSign::NonNegative, VarSign::NonNegative});
    CHECK_THROWS_AS(solve(p, limits), ResourceError);
}
