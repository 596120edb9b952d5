#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chargebounds/lp.hpp"
#include "chargebounds/paths.hpp"
#include "chargebounds/setexpr.hpp"

namespace chargebounds {

// Moduli whose uniform residue classes constrain the charge. Modulus 1
// (total mass) is always present; every modulus must divide the primorial
// of the level it is used at.
struct ConstraintFamily {
    std::vector<std::int64_t> moduli; // sorted, distinct, contains 1
};

ConstraintFamily pr_family(const Level& level);
ConstraintFamily custom_family(std::vector<std::int64_t> moduli);

// The truncated covering LP: a free variable per (modulus, residue), cost
// 1/m, and one >= row per class mod N!_p whose right-hand side is the
// alive bit.
LpProblem build_lp(const AliveVector& alive, const ConstraintFamily& family);

struct UpperBound {
    Rational value;
    LpSolution solution; // verified optimal
};

// Exact LP optimum over the truncated family; an upper bound for the sup
// over the full class.
UpperBound upper_sup(const AliveVector& alive, const ConstraintFamily& family,
                     const LpLimits& limits = {});

enum class WitnessRoute { Donation, Product, DifferenceOfProducts, DualMeasure };

struct LowerBound {
    Rational value;
    std::int64_t count = 0; // value * N!_p
    WitnessRoute route = WitnessRoute::Donation;
    PathMultiset witness;   // uniform-marginal multiset attaining `count`
};

struct BoundsOptions {
    int max_level = 4;
    std::optional<std::vector<std::int64_t>> family; // nullopt -> PR
    std::int64_t lp_row_cap = 30030;                 // levels above run witness-only
    int level_cap = kDefaultLevelCap;
    DonationOptions donation;
    ExprLimits expr;
};

// Best combinatorial witness for the set at this level: greedy donation,
// plus the product and difference-of-products bounds when the normal form
// matches one of the recognized shapes.
LowerBound lower_sup(const NormalForm& nf, const AliveVector& alive, const Level& level,
                     const BoundsOptions& options = {});

struct LevelBounds {
    int level = 0;
    std::int64_t primorial = 0;
    bool family_applies = true;            // custom moduli may not divide N!_p
    bool lp_computed = false;              // false in witness-only mode
    std::optional<Rational> upper_sup;     // LP side
    std::optional<Rational> lower_inf;     // 1 - upper_sup(complement)
    std::optional<Rational> lower_sup;     // witness side
    std::optional<Rational> upper_inf;     // 1 - lower_sup(complement)
    std::optional<UpperBound> upper_detail;
    std::optional<UpperBound> upper_detail_complement;
    std::optional<LowerBound> lower_detail;
    std::optional<LowerBound> lower_detail_complement;
};

struct BoundsReport {
    std::string expression;
    std::vector<std::int64_t> family_moduli; // empty means PR
    std::vector<LevelBounds> levels;
};

// Per level, sup and inf brackets for the expression, the inf side through
// the complement. Validates weak duality and the monotone-truncation
// invariant before returning.
BoundsReport bounds_report(const SetExpr& expr, const BoundsOptions& options = {});

} // namespace chargebounds
