#include "chargebounds/bounds.hpp"

#include <algorithm>
#include <numeric>

#include "chargebounds/errors.hpp"

namespace chargebounds {

ConstraintFamily pr_family(const Level& level) {
    ConstraintFamily f;
    f.moduli.push_back(1);
    f.moduli.insert(f.moduli.end(), level.primes.begin(), level.primes.end());
    return f;
}

ConstraintFamily custom_family(std::vector<std::int64_t> moduli) {
    for (std::int64_t m : moduli) {
        if (m < 1) throw InvalidArgument("family moduli must be positive");
    }
    moduli.push_back(1);
    std::sort(moduli.begin(), moduli.end());
    moduli.erase(std::unique(moduli.begin(), moduli.end()), moduli.end());
    return ConstraintFamily{std::move(moduli)};
}

LpProblem build_lp(const AliveVector& alive, const ConstraintFamily& family) {
    const std::int64_t np = alive.level.primorial;
    LpProblem p;
    std::vector<std::int64_t> offset(family.moduli.size());
    std::int64_t vars = 0;
    for (std::size_t k = 0; k < family.moduli.size(); ++k) {
        const std::int64_t m = family.moduli[k];
        if (np % m != 0) {
            throw InvalidArgument("family modulus " + std::to_string(m) +
                                  " does not divide the primorial " + std::to_string(np));
        }
        offset[k] = vars;
        vars += m;
    }
    p.objective.reserve(static_cast<std::size_t>(vars));
    p.signs.assign(static_cast<std::size_t>(vars), VarSign::Free);
    for (std::int64_t m : family.moduli) {
        for (std::int64_t j = 0; j < m; ++j) {
            p.objective.push_back(Rational(1, static_cast<unsigned long>(m)));
        }
    }
    p.rows.resize(static_cast<std::size_t>(np));
    p.senses.assign(static_cast<std::size_t>(np), RowSense::GreaterEqual);
    p.rhs.resize(static_cast<std::size_t>(np));
    for (std::int64_t s = 0; s < np; ++s) {
        auto& row = p.rows[static_cast<std::size_t>(s)];
        row.reserve(family.moduli.size());
        for (std::size_t k = 0; k < family.moduli.size(); ++k) {
            row.push_back({static_cast<std::int32_t>(offset[k] + s % family.moduli[k]), Rational(1)});
        }
        p.rhs[static_cast<std::size_t>(s)] = alive.bits[static_cast<std::size_t>(s)] ? 1 : 0;
    }
    return p;
}

UpperBound upper_sup(const AliveVector& alive, const ConstraintFamily& family,
                     const LpLimits& limits) {
    const LpProblem problem = build_lp(alive, family);
    LpSolution sol = solve(problem, limits);
    if (sol.status != LpStatus::Optimal) {
        throw Error("internal: the covering LP is always feasible and bounded");
    }
    return UpperBound{sol.value, std::move(sol)};
}

namespace {

// Recognized normal-form shapes for the combinatorial lower bounds. Only
// the three instantiations the theory works out are matched; anything else
// falls back to greedy donation alone.
struct ProductShape {
    bool matched = false;
    std::vector<std::vector<std::int32_t>> include; // I_n per coordinate
};

struct DifferenceShape {
    bool matched = false;
    ProductSpec spec;
};

bool single_primes_atom(const NormalForm& nf) {
    return nf.atoms.size() == 1 && nf.atoms[0].part == Atom::PrimePart::Primes &&
           nf.atoms[0].cls.modulus == 1;
}

const Atom* single_class_atom(const NormalForm& nf) {
    if (nf.atoms.size() == 1 && nf.atoms[0].part == Atom::PrimePart::None) return &nf.atoms[0];
    return nullptr;
}

// Atoms forming all residues mod m except exactly one; returns that class.
std::optional<ResidueClass> complement_of_class(const NormalForm& nf) {
    if (nf.atoms.empty()) return std::nullopt;
    const std::int64_t m = nf.atoms[0].cls.modulus;
    if (m < 2 || static_cast<std::int64_t>(nf.atoms.size()) != m - 1) return std::nullopt;
    std::vector<bool> present(static_cast<std::size_t>(m), false);
    for (const Atom& a : nf.atoms) {
        if (a.part != Atom::PrimePart::None || a.cls.modulus != m) return std::nullopt;
        present[static_cast<std::size_t>(a.cls.shift)] = true;
    }
    std::int64_t missing = -1;
    for (std::int64_t r = 0; r < m; ++r) {
        if (!present[static_cast<std::size_t>(r)]) {
            if (missing >= 0) return std::nullopt;
            missing = r;
        }
    }
    if (missing < 0) return std::nullopt;
    return ResidueClass{missing, m};
}

std::vector<std::int32_t> full_range(std::int64_t p) {
    std::vector<std::int32_t> v(static_cast<std::size_t>(p));
    std::iota(v.begin(), v.end(), 0);
    return v;
}

ProductShape detect_product(const NormalForm& nf, const Level& level) {
    ProductShape shape;
    if (single_primes_atom(nf)) {
        // Tuples with no zero coordinate index classes whose shift is
        // coprime to the primorial, and those contain primes.
        shape.matched = true;
        for (std::int64_t p : level.primes) {
            std::vector<std::int32_t> in;
            for (std::int64_t v = 1; v < p; ++v) in.push_back(static_cast<std::int32_t>(v));
            shape.include.push_back(std::move(in));
        }
        return shape;
    }
    if (const Atom* atom = single_class_atom(nf)) {
        shape.matched = true;
        for (std::int64_t p : level.primes) {
            if (atom->cls.modulus % p == 0) {
                shape.include.push_back({static_cast<std::int32_t>(atom->cls.shift % p)});
            } else {
                shape.include.push_back(full_range(p));
            }
        }
        return shape;
    }
    if (auto cls = complement_of_class(nf)) {
        // When no class mod N!_p sits inside the removed class, the full
        // product is contained in the alive set.
        if (level.primorial % cls->modulus != 0) {
            shape.matched = true;
            for (std::int64_t p : level.primes) shape.include.push_back(full_range(p));
        }
        return shape;
    }
    return shape;
}

// Exactly two prime factors counted with multiplicity.
bool two_prime_factors(std::int64_t m, std::int64_t& f1, std::int64_t& f2) {
    std::int64_t rest = m;
    std::vector<std::int64_t> factors;
    for (std::int64_t d = 2; d * d <= rest; ++d) {
        while (rest % d == 0) {
            factors.push_back(d);
            rest /= d;
            if (factors.size() > 2) return false;
        }
    }
    if (rest > 1) factors.push_back(rest);
    if (factors.size() != 2) return false;
    f1 = factors[0];
    f2 = factors[1];
    return true;
}

DifferenceShape detect_difference(const NormalForm& nf, const Level& level) {
    DifferenceShape shape;
    auto cls = complement_of_class(nf);
    if (!cls || level.primorial % cls->modulus != 0) return shape;
    std::int64_t f1 = 0, f2 = 0;
    if (!two_prime_factors(cls->modulus, f1, f2) || f1 == f2) return shape;
    shape.matched = true;
    shape.spec.level = level;
    for (std::int64_t p : level.primes) {
        shape.spec.include.push_back(full_range(p));
        if (p == f1 || p == f2) {
            shape.spec.exclude.push_back({static_cast<std::int32_t>(cls->shift % p)});
        } else {
            shape.spec.exclude.push_back(full_range(p));
        }
    }
    return shape;
}

void consider(std::optional<LowerBound>& best, LowerBound candidate) {
    if (!best || candidate.count > best->count) best = std::move(candidate);
}

} // namespace

LowerBound lower_sup(const NormalForm& nf, const AliveVector& alive, const Level& level,
                     const BoundsOptions& options) {
    std::optional<LowerBound> best;

    {
        LowerBound cand;
        cand.route = WitnessRoute::Donation;
        cand.witness = donate_greedy(level, alive, options.donation);
        cand.count = witness_count(cand.witness, alive);
        consider(best, std::move(cand));
    }

    if (const ProductShape shape = detect_product(nf, level); shape.matched) {
        std::vector<CoordinatePartition> parts;
        for (int n = 0; n < level.n; ++n) {
            CoordinatePartition part;
            part.b = shape.include[static_cast<std::size_t>(n)];
            std::vector<bool> in_b(static_cast<std::size_t>(level.primes[static_cast<std::size_t>(n)]),
                                   false);
            for (std::int32_t v : part.b) in_b[static_cast<std::size_t>(v)] = true;
            for (std::int64_t v = 0; v < level.primes[static_cast<std::size_t>(n)]; ++v) {
                if (!in_b[static_cast<std::size_t>(v)]) part.a.push_back(static_cast<std::int32_t>(v));
            }
            parts.push_back(std::move(part));
        }
        LowerBound cand;
        cand.route = WitnessRoute::Product;
        ProductWitness w = intersect_products_witness(level, parts);
        cand.witness = std::move(w.multiset);
        cand.count = witness_count(cand.witness, alive);
        consider(best, std::move(cand));
    }

    if (const DifferenceShape shape = detect_difference(nf, level);
        shape.matched && check_thin_count(shape.spec)) {
        // Donations over the difference-of-products region; counted against
        // the true alive vector, so the bound stays honest even if the
        // region is a strict subset of it.
        AliveVector region;
        region.level = level;
        region.bits.assign(static_cast<std::size_t>(level.primorial), false);
        region.alive_count = 0;
        for (std::int64_t s = 0; s < level.primorial; ++s) {
            bool excluded = true;
            for (int n = 0; n < level.n && excluded; ++n) {
                const std::int64_t p = level.primes[static_cast<std::size_t>(n)];
                const auto& exc = shape.spec.exclude[static_cast<std::size_t>(n)];
                excluded = std::find(exc.begin(), exc.end(),
                                     static_cast<std::int32_t>(s % p)) != exc.end();
            }
            if (!excluded) {
                region.bits[static_cast<std::size_t>(s)] = true;
                region.alive_count++;
            }
        }
        LowerBound cand;
        cand.route = WitnessRoute::DifferenceOfProducts;
        cand.witness = donate_greedy(level, region, options.donation);
        cand.count = witness_count(cand.witness, alive);
        consider(best, std::move(cand));
    }

    LowerBound result = std::move(*best);
    result.value = Rational(static_cast<long>(result.count),
                            static_cast<unsigned long>(level.primorial));
    result.value.canonicalize();
    return result;
}

BoundsReport bounds_report(const SetExpr& expr, const BoundsOptions& options) {
    if (options.max_level < 1) throw InvalidArgument("max level must be at least 1");
    BoundsReport report;
    report.expression = to_text(expr);
    if (options.family) report.family_moduli = *options.family;

    const NormalForm nf = normalize(expr, options.expr);
    const NormalForm nf_comp = normalize(*expr_complement(std::make_shared<SetExpr>(expr)), options.expr);

    for (int n = 1; n <= options.max_level; ++n) {
        const Level level = make_level(n, options.level_cap);
        LevelBounds lb;
        lb.level = n;
        lb.primorial = level.primorial;

        ConstraintFamily family;
        if (options.family) {
            family = custom_family(*options.family);
            lb.family_applies = std::all_of(family.moduli.begin(), family.moduli.end(),
                                            [&](std::int64_t m) { return level.primorial % m == 0; });
        } else {
            family = pr_family(level);
        }
        if (!lb.family_applies) {
            report.levels.push_back(std::move(lb));
            continue;
        }

        const AliveVector alive = alive_vector(nf, level);
        const AliveVector alive_comp = alive_vector(nf_comp, level);
        lb.lp_computed = level.primorial <= options.lp_row_cap;

        if (lb.lp_computed) {
            UpperBound ub = upper_sup(alive, family);
            UpperBound ubc = upper_sup(alive_comp, family);
            lb.upper_sup = ub.value;
            lb.lower_inf = Rational(1) - ubc.value;
            lb.upper_detail = std::move(ub);
            lb.upper_detail_complement = std::move(ubc);
        }

        if (options.family) {
            // Combinatorial witnesses live in the prime-marginal world; for
            // a custom family the truncated sup is the LP value itself.
            if (lb.lp_computed) {
                LowerBound lo;
                lo.route = WitnessRoute::DualMeasure;
                lo.value = *lb.upper_sup;
                lb.lower_sup = lo.value;
                lb.lower_detail = std::move(lo);
                LowerBound loc;
                loc.route = WitnessRoute::DualMeasure;
                loc.value = Rational(1) - *lb.lower_inf;
                lb.upper_inf = Rational(1) - loc.value;
                lb.lower_detail_complement = std::move(loc);
            }
        } else {
            LowerBound lo = lower_sup(nf, alive, level, options);
            LowerBound loc = lower_sup(nf_comp, alive_comp, level, options);
            lb.lower_sup = lo.value;
            lb.upper_inf = Rational(1) - loc.value;
            lb.lower_detail = std::move(lo);
            lb.lower_detail_complement = std::move(loc);
        }

        // Report invariants; a violation is a library bug, not bad input.
        if (lb.lower_sup && lb.upper_sup && *lb.lower_sup > *lb.upper_sup) {
            throw Error("internal: weak duality violated");
        }
        if (lb.lower_inf && lb.upper_inf && *lb.lower_inf > *lb.upper_inf) {
            throw Error("internal: inf bracket inverted");
        }
        for (auto it = report.levels.rbegin(); it != report.levels.rend(); ++it) {
            if (it->upper_sup && lb.upper_sup) {
                if (*lb.upper_sup > *it->upper_sup) {
                    throw Error("internal: upper_sup increased with the level");
                }
                break;
            }
        }
        report.levels.push_back(std::move(lb));
    }
    return report;
}

} // namespace chargebounds
