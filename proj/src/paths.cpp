#include "chargebounds/paths.hpp"

#include <algorithm>
#include <numeric>

#include "chargebounds/errors.hpp"

namespace chargebounds {

namespace {

std::int64_t shift_of(const Level& level, const CrtTuple& t) { return crt_shift(level, t); }

// Shift of the tuple equal to s except coordinate `coord` set to `value`.
inline std::int64_t with_coord(const Level& level, std::int64_t s, int coord, std::int64_t value) {
    const std::int64_t p = level.primes[static_cast<std::size_t>(coord)];
    const std::int64_t cur = s % p;
    const std::int64_t np = level.primorial;
    std::int64_t r = (s + (value - cur) * level.crt_basis[static_cast<std::size_t>(coord)]) % np;
    if (r < 0) r += np;
    return r;
}

// Enumerates all shifts in tuple-lexicographic order, invoking fn(shift).
// Coordinates marked fixed keep the provided value.
template <typename Fn>
void for_each_lex(const Level& level, int fixed_coord, std::int64_t fixed_value, Fn&& fn) {
    const int n = level.n;
    CrtTuple t(static_cast<std::size_t>(n), 0);
    if (fixed_coord >= 0) t[static_cast<std::size_t>(fixed_coord)] = static_cast<std::int32_t>(fixed_value);
    std::int64_t s = 0;
    for (int i = 0; i < n; ++i) s = (s + t[static_cast<std::size_t>(i)] * level.crt_basis[static_cast<std::size_t>(i)]) % level.primorial;
    for (;;) {
        if (!fn(s, t)) return;
        int i = n - 1;
        for (; i >= 0; --i) {
            if (i == fixed_coord) continue;
            const std::int64_t p = level.primes[static_cast<std::size_t>(i)];
            if (t[static_cast<std::size_t>(i)] + 1 < p) {
                t[static_cast<std::size_t>(i)]++;
                s = (s + level.crt_basis[static_cast<std::size_t>(i)]) % level.primorial;
                break;
            }
            s = (s - (p - 1) * level.crt_basis[static_cast<std::size_t>(i)]) % level.primorial;
            if (s < 0) s += level.primorial;
            t[static_cast<std::size_t>(i)] = 0;
        }
        if (i < 0) return;
    }
}

void check_same_level(const PathMultiset& J, const Level& level) {
    if (J.level.primorial != level.primorial || J.level.n != level.n) {
        throw InvalidArgument("path multiset level mismatch");
    }
}

} // namespace

std::int32_t PathMultiset::multiplicity(const CrtTuple& t) const {
    return counts[static_cast<std::size_t>(shift_of(level, t))];
}

PathMultiset full_product(const Level& level) {
    PathMultiset J;
    J.level = level;
    J.counts.assign(static_cast<std::size_t>(level.primorial), 1);
    J.cardinality = level.primorial;
    return J;
}

std::vector<std::int64_t> projection(const PathMultiset& J, int coord) {
    if (coord < 0 || coord >= J.level.n) throw InvalidArgument("projection coordinate out of range");
    const std::int64_t p = J.level.primes[static_cast<std::size_t>(coord)];
    std::vector<std::int64_t> proj(static_cast<std::size_t>(p), 0);
    for (std::int64_t s = 0; s < J.level.primorial; ++s) {
        proj[static_cast<std::size_t>(s % p)] += J.counts[static_cast<std::size_t>(s)];
    }
    return proj;
}

bool has_uniform_marginals(const PathMultiset& J) {
    for (int n = 0; n < J.level.n; ++n) {
        const std::int64_t expect = J.level.primorial / J.level.primes[static_cast<std::size_t>(n)];
        for (std::int64_t v : projection(J, n)) {
            if (v != expect) return false;
        }
    }
    return true;
}

PathMultiset exchange(PathMultiset J, const CrtTuple& j, const CrtTuple& k, int coord) {
    if (coord < 0 || coord >= J.level.n) throw InvalidArgument("exchange coordinate out of range");
    const std::int64_t sj = shift_of(J.level, j);
    const std::int64_t sk = shift_of(J.level, k);
    if (sj == sk) {
        if (J.counts[static_cast<std::size_t>(sj)] < 2) {
            throw InvalidArgument("exchange needs multiplicity at least 2 for equal paths");
        }
        return J; // swapping equals is the identity
    }
    if (J.counts[static_cast<std::size_t>(sj)] < 1 || J.counts[static_cast<std::size_t>(sk)] < 1) {
        throw InvalidArgument("exchange path not present in the multiset");
    }
    const std::int64_t sj2 = with_coord(J.level, sj, coord, k[static_cast<std::size_t>(coord)]);
    const std::int64_t sk2 = with_coord(J.level, sk, coord, j[static_cast<std::size_t>(coord)]);
    J.counts[static_cast<std::size_t>(sj)]--;
    J.counts[static_cast<std::size_t>(sk)]--;
    J.counts[static_cast<std::size_t>(sj2)]++;
    J.counts[static_cast<std::size_t>(sk2)]++;
    return J;
}

PathMultiset redirect(PathMultiset J, int i, int j, const std::vector<std::int32_t>& a_i,
                      const std::vector<std::int32_t>& a_j) {
    if (i < 0 || i >= J.level.n || j < 0 || j >= J.level.n) {
        throw InvalidArgument("redirect coordinate out of range");
    }
    if (i == j) return J;
    const std::int64_t pi = J.level.primes[static_cast<std::size_t>(i)];
    const std::int64_t pj = J.level.primes[static_cast<std::size_t>(j)];
    std::vector<bool> in_ai(static_cast<std::size_t>(pi), false);
    std::vector<bool> in_aj(static_cast<std::size_t>(pj), false);
    for (std::int32_t v : a_i) in_ai.at(static_cast<std::size_t>(v)) = true;
    for (std::int32_t v : a_j) in_aj.at(static_cast<std::size_t>(v)) = true;

    const std::vector<std::int64_t> proj_i = projection(J, i);
    const std::vector<std::int64_t> proj_j = projection(J, j);
    std::int64_t card_i = 0, card_j = 0;
    for (std::int64_t v = 0; v < pi; ++v) {
        if (in_ai[static_cast<std::size_t>(v)]) card_i += proj_i[static_cast<std::size_t>(v)];
    }
    for (std::int64_t v = 0; v < pj; ++v) {
        if (in_aj[static_cast<std::size_t>(v)]) card_j += proj_j[static_cast<std::size_t>(v)];
    }
    if (card_i > card_j) {
        throw InvalidArgument("redirect donor shortage: card(proj_i n A_i) = " +
                              std::to_string(card_i) + " exceeds card(proj_j n A_j) = " +
                              std::to_string(card_j));
    }

    // Recipients (i in A_i, j not in A_j) and donors (j in A_j, i not in
    // A_i) in lexicographic order. Exchanging coordinate j turns a
    // recipient/donor pair into two paths that are neither, so one pass
    // over lists collected up front suffices.
    std::vector<std::pair<std::int64_t, std::int32_t>> recips, donors;
    for_each_lex(J.level, -1, 0, [&](std::int64_t s, const CrtTuple&) {
        const std::int32_t c = J.counts[static_cast<std::size_t>(s)];
        if (c > 0) {
            const bool ai = in_ai[static_cast<std::size_t>(s % pi)];
            const bool aj = in_aj[static_cast<std::size_t>(s % pj)];
            if (ai && !aj) recips.push_back({s, c});
            if (aj && !ai) donors.push_back({s, c});
        }
        return true;
    });
    std::size_t di = 0;
    for (auto& [rs, rc] : recips) {
        while (rc > 0) {
            if (di >= donors.size()) throw Error("internal: redirect ran out of donors");
            auto& [ds, dc] = donors[di];
            if (dc == 0) {
                ++di;
                continue;
            }
            const std::int32_t batch = std::min(rc, dc);
            const std::int64_t rs2 = with_coord(J.level, rs, j, ds % pj);
            const std::int64_t ds2 = with_coord(J.level, ds, j, rs % pj);
            J.counts[static_cast<std::size_t>(rs)] -= batch;
            J.counts[static_cast<std::size_t>(ds)] -= batch;
            J.counts[static_cast<std::size_t>(rs2)] += batch;
            J.counts[static_cast<std::size_t>(ds2)] += batch;
            rc -= batch;
            dc -= batch;
        }
    }
    return J;
}

ProductWitness intersect_products_witness(const Level& level,
                                          const std::vector<CoordinatePartition>& parts) {
    if (static_cast<int>(parts.size()) != level.n) {
        throw InvalidArgument("one partition per coordinate required");
    }
    std::vector<std::vector<bool>> in_b(static_cast<std::size_t>(level.n));
    for (int n = 0; n < level.n; ++n) {
        const std::int64_t p = level.primes[static_cast<std::size_t>(n)];
        std::vector<bool> seen(static_cast<std::size_t>(p), false);
        auto mark = [&](const std::vector<std::int32_t>& vals) {
            for (std::int32_t v : vals) {
                if (v < 0 || v >= p) throw InvalidArgument("partition value out of range");
                if (seen[static_cast<std::size_t>(v)]) {
                    throw InvalidArgument("partition sets overlap");
                }
                seen[static_cast<std::size_t>(v)] = true;
            }
        };
        mark(parts[static_cast<std::size_t>(n)].a);
        mark(parts[static_cast<std::size_t>(n)].b);
        if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
            throw InvalidArgument("partition does not cover the coordinate range");
        }
        in_b[static_cast<std::size_t>(n)].assign(static_cast<std::size_t>(p), false);
        for (std::int32_t v : parts[static_cast<std::size_t>(n)].b) {
            in_b[static_cast<std::size_t>(n)][static_cast<std::size_t>(v)] = true;
        }
    }

    // n* minimizes the kept marginal mass |b_n| * N!_p / p_n (ties toward
    // the smallest coordinate); an empty b_n is minimal with count 0.
    int nstar = 0;
    std::int64_t best_mass = -1;
    for (int n = 0; n < level.n; ++n) {
        const std::int64_t mass = static_cast<std::int64_t>(parts[static_cast<std::size_t>(n)].b.size()) *
                                  (level.primorial / level.primes[static_cast<std::size_t>(n)]);
        if (best_mass < 0 || mass < best_mass) {
            best_mass = mass;
            nstar = n;
        }
    }

    PathMultiset J = full_product(level);
    // Redirect so that a path through b_{n*} at n* passes through b_n at
    // every n. Exchanges happen at coordinate n, never at n*, so the
    // property established for one coordinate survives the others.
    for (int n = 0; n < level.n; ++n) {
        if (n == nstar) continue;
        J = redirect(std::move(J), nstar, n, parts[static_cast<std::size_t>(nstar)].b,
                     parts[static_cast<std::size_t>(n)].b);
    }

    ProductWitness out;
    out.pivot_coord = nstar;
    out.b_count = 0;
    for (std::int64_t s = 0; s < level.primorial; ++s) {
        if (J.counts[static_cast<std::size_t>(s)] == 0) continue;
        bool inside = true;
        for (int n = 0; n < level.n && inside; ++n) {
            inside = in_b[static_cast<std::size_t>(n)]
                         [static_cast<std::size_t>(s % level.primes[static_cast<std::size_t>(n)])];
        }
        if (inside) out.b_count += J.counts[static_cast<std::size_t>(s)];
    }
    const std::int64_t expect =
        (level.primorial / level.primes[static_cast<std::size_t>(nstar)]) *
        static_cast<std::int64_t>(parts[static_cast<std::size_t>(nstar)].b.size());
    if (out.b_count != expect) {
        throw Error("internal: intersect_products_witness missed the target count");
    }
    out.multiset = std::move(J);
    return out;
}

bool check_thin_count(const ProductSpec& spec) {
    const int n = spec.level.n;
    if (static_cast<int>(spec.include.size()) != n || static_cast<int>(spec.exclude.size()) != n) {
        throw InvalidArgument("product spec must cover every coordinate");
    }
    std::vector<std::int64_t> isz(static_cast<std::size_t>(n)), ksz(static_cast<std::size_t>(n)),
        hsz(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const std::int64_t p = spec.level.primes[static_cast<std::size_t>(i)];
        std::vector<bool> inc(static_cast<std::size_t>(p), false), exc(static_cast<std::size_t>(p), false);
        for (std::int32_t v : spec.include[static_cast<std::size_t>(i)]) {
            if (v < 0 || v >= p) throw InvalidArgument("include value out of range");
            inc[static_cast<std::size_t>(v)] = true;
        }
        for (std::int32_t v : spec.exclude[static_cast<std::size_t>(i)]) {
            if (v < 0 || v >= p) throw InvalidArgument("exclude value out of range");
            exc[static_cast<std::size_t>(v)] = true;
        }
        for (std::int64_t v = 0; v < p; ++v) {
            isz[static_cast<std::size_t>(i)] += inc[static_cast<std::size_t>(v)];
            ksz[static_cast<std::size_t>(i)] += exc[static_cast<std::size_t>(v)];
            hsz[static_cast<std::size_t>(i)] +=
                inc[static_cast<std::size_t>(v)] && !exc[static_cast<std::size_t>(v)];
        }
    }
    std::vector<int> star;
    for (int i = 0; i < n; ++i) {
        if (hsz[static_cast<std::size_t>(i)] > 0) star.push_back(i);
    }
    const int nstar = static_cast<int>(star.size());
    BigInt rhs = 1;
    for (int i = 0; i < n; ++i) rhs *= ksz[static_cast<std::size_t>(i)];

    BigInt rest = 1; // coordinates outside inds_* always contribute I_n
    for (int i = 0; i < n; ++i) {
        if (hsz[static_cast<std::size_t>(i)] == 0) rest *= isz[static_cast<std::size_t>(i)];
    }
    BigInt lhs = 0;
    for (std::uint32_t mask = 0; mask < (1u << nstar); ++mask) {
        const int m = __builtin_popcount(mask);
        if (m > nstar - 2) continue;
        BigInt term = rest * (nstar - 1 - m);
        for (int bit = 0; bit < nstar; ++bit) {
            const std::size_t coord = static_cast<std::size_t>(star[static_cast<std::size_t>(bit)]);
            term *= (mask >> bit) & 1 ? ksz[coord] : hsz[coord];
        }
        lhs += term;
    }
    return lhs >= rhs;
}

std::int64_t witness_count(const PathMultiset& J, const AliveVector& alive) {
    check_same_level(J, alive.level);
    std::int64_t total = 0;
    for (std::int64_t s = 0; s < J.level.primorial; ++s) {
        if (alive.bits[static_cast<std::size_t>(s)]) total += J.counts[static_cast<std::size_t>(s)];
    }
    return total;
}

namespace {

// Donation engine state: counts indexed by shift, alive bitmap, and the
// running alive mass. All scans are lexicographic over tuples, so runs are
// reproducible.
struct Donation {
    const Level& level;
    const std::vector<bool>& alive;
    std::vector<std::int32_t>& counts;
    std::int64_t alive_mass = 0;

    bool alive_at(std::int64_t s) const { return alive[static_cast<std::size_t>(s)]; }
    std::int32_t& cnt(std::int64_t s) { return counts[static_cast<std::size_t>(s)]; }

    void apply(std::int64_t t, std::int64_t u, std::int64_t t2, std::int64_t u2) {
        cnt(t)--;
        cnt(u)--;
        cnt(t2)++;
        cnt(u2)++;
        alive_mass += static_cast<int>(alive_at(t2)) + static_cast<int>(alive_at(u2)) -
                      static_cast<int>(alive_at(t)) - static_cast<int>(alive_at(u));
    }

    // A partner for an exchange at (coord, value): present, and if alive it
    // must stay alive after receiving old_value at coord.
    std::int64_t find_partner(int coord, std::int64_t value, std::int64_t old_value) {
        std::int64_t found = -1;
        for_each_lex(level, coord, value, [&](std::int64_t s, const CrtTuple&) {
            if (cnt(s) > 0) {
                if (!alive_at(s) || alive_at(with_coord(level, s, coord, old_value))) {
                    found = s;
                    return false;
                }
            }
            return true;
        });
        return found;
    }

    // First enlivening, preserving exchange for the dead path t, in
    // (coordinate, value, partner) scan order. Returns whether one applied.
    bool donate_for(std::int64_t t) {
        for (int n = 0; n < level.n; ++n) {
            const std::int64_t p = level.primes[static_cast<std::size_t>(n)];
            const std::int64_t cur = t % p;
            for (std::int64_t c = 0; c < p; ++c) {
                if (c == cur) continue;
                const std::int64_t t2 = with_coord(level, t, n, c);
                if (!alive_at(t2)) continue;
                const std::int64_t u = find_partner(n, c, cur);
                if (u >= 0) {
                    apply(t, u, t2, with_coord(level, u, n, cur));
                    return true;
                }
            }
        }
        return false;
    }

    bool donation_exists_for(std::int64_t t) {
        for (int n = 0; n < level.n; ++n) {
            const std::int64_t p = level.primes[static_cast<std::size_t>(n)];
            const std::int64_t cur = t % p;
            for (std::int64_t c = 0; c < p; ++c) {
                if (c == cur) continue;
                if (!alive_at(with_coord(level, t, n, c))) continue;
                if (find_partner(n, c, cur) >= 0) return true;
            }
        }
        return false;
    }

    bool donation_pass() {
        bool progress = false;
        for_each_lex(level, -1, 0, [&](std::int64_t s, const CrtTuple&) {
            if (!alive_at(s)) {
                while (cnt(s) > 0 && donate_for(s)) progress = true;
            }
            return true;
        });
        return progress;
    }

    // Plateau escape: relocate one dead unit by a preserving exchange so
    // that the relocated unit admits a donation, then let donation passes
    // resume. Only the first partner per (coordinate, value) is tried.
    bool plateau_step() {
        bool moved = false;
        for_each_lex(level, -1, 0, [&](std::int64_t t, const CrtTuple&) {
            if (alive_at(t) || cnt(t) == 0) return true;
            for (int n = 0; n < level.n && !moved; ++n) {
                const std::int64_t p = level.primes[static_cast<std::size_t>(n)];
                const std::int64_t cur = t % p;
                for (std::int64_t c = 0; c < p && !moved; ++c) {
                    if (c == cur) continue;
                    const std::int64_t t2 = with_coord(level, t, n, c);
                    const std::int64_t u = find_partner(n, c, cur);
                    if (u < 0) continue;
                    const std::int64_t u2 = with_coord(level, u, n, cur);
                    apply(t, u, t2, u2);
                    if (alive_at(t2) || donation_exists_for(t2)) {
                        moved = true;
                    } else {
                        apply(t2, u2, t, u); // revert
                    }
                }
            }
            return !moved;
        });
        return moved;
    }
};

} // namespace

PathMultiset donate_greedy(const Level& level, const AliveVector& alive,
                           const DonationOptions& options) {
    if (alive.level.primorial != level.primorial) {
        throw InvalidArgument("alive vector level mismatch");
    }
    PathMultiset J = full_product(level);
    Donation engine{level, alive.bits, J.counts};
    for (std::int64_t s = 0; s < level.primorial; ++s) {
        if (alive.bits[static_cast<std::size_t>(s)]) engine.alive_mass++;
    }
    const bool lookahead = level.primorial <= options.lookahead_primorial_cap;
    for (;;) {
        if (engine.donation_pass()) continue;
        if (lookahead && engine.plateau_step()) continue;
        break;
    }
    return J;
}

} // namespace chargebounds
