#include <algorithm>
#include <numeric>

#include "chargebounds/errors.hpp"
#include "chargebounds/setexpr.hpp"

namespace chargebounds {

namespace {

// CRT merge of (s1 mod m1) and (s2 mod m2) over int64 with 128-bit
// intermediates; caller guarantees lcm(m1,m2) <= kLcmBudget.
struct Merged {
    bool empty = true;
    std::int64_t shift = 0;
    std::int64_t modulus = 1;
};

std::int64_t egcd(std::int64_t a, std::int64_t b, std::int64_t& x, std::int64_t& y) {
    if (b == 0) {
        x = 1;
        y = 0;
        return a;
    }
    std::int64_t x1, y1;
    const std::int64_t g = egcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

Merged crt_merge(std::int64_t s1, std::int64_t m1, std::int64_t s2, std::int64_t m2) {
    std::int64_t p, q;
    const std::int64_t g = egcd(m1, m2, p, q);
    const std::int64_t diff = s2 - s1;
    Merged out;
    if (diff % g != 0) return out;
    const std::int64_t lcm = m1 / g * m2;
    __int128 t = (__int128)(m1) * p % lcm;
    t = t * ((diff / g) % lcm) % lcm;
    __int128 merged = ((__int128)s1 + t) % lcm;
    if (merged < 0) merged += lcm;
    out.empty = false;
    out.shift = static_cast<std::int64_t>(merged);
    out.modulus = lcm;
    return out;
}

} // namespace

bool alive_bit(const NormalForm& nf, std::int64_t s, const Level& level) {
    const std::int64_t np = level.primorial;
    if (s < 0 || s >= np) throw InvalidArgument("shift out of range for alive_bit");
    for (std::int64_t x : nf.plus) {
        if (((x - s) % np + np) % np == 0) return true;
    }
    for (const Atom& a : nf.atoms) {
        const std::int64_t m = a.cls.modulus;
        if ((__int128)(np / std::gcd(np, m)) * m > kLcmBudget) {
            throw ResourceError("atom modulus exceeds the lcm budget against the primorial");
        }
        const Merged red = crt_merge(s, np, a.cls.shift, m);
        if (red.empty) continue;
        switch (a.part) {
        case Atom::PrimePart::None:
            // Infinite class; a finite minus set cannot exhaust it.
            return true;
        case Atom::PrimePart::NotPrimes:
            // Infinitely many non-primes in any residue class.
            return true;
        case Atom::PrimePart::Primes: {
            const ResidueClass reduced{red.shift, red.modulus};
            if (!class_contains_prime(reduced)) break;
            const std::int64_t s0 = least_positive_element(reduced);
            if (std::gcd(s0, red.modulus) == 1) return true; // infinitely many primes
            // gcd > 1 with prime shift: s0 is the unique prime of the class.
            if (!std::binary_search(nf.minus.begin(), nf.minus.end(), s0)) return true;
            break;
        }
        }
    }
    return false;
}

AliveVector alive_vector(const NormalForm& nf, const Level& level) {
    AliveVector av;
    av.level = level;
    av.bits.resize(static_cast<std::size_t>(level.primorial));
    av.alive_count = 0;
    for (std::int64_t s = 0; s < level.primorial; ++s) {
        const bool b = alive_bit(nf, s, level);
        av.bits[static_cast<std::size_t>(s)] = b;
        av.alive_count += b;
    }
    return av;
}

AliveVector alive_vector(const SetExpr& expr, const Level& level, const ExprLimits& limits) {
    return alive_vector(normalize(expr, limits), level);
}

} // namespace chargebounds
