#include "chargebounds/numtheory.hpp"

#include <numeric>
#include <stdexcept>

#include "chargebounds/errors.hpp"

namespace chargebounds {

bool is_prime(std::int64_t v) {
    if (v < 2) return false;
    if (v < 4) return true;
    if (v % 2 == 0) return false;
    for (std::int64_t d = 3; d * d <= v; d += 2) {
        if (v % d == 0) return false;
    }
    return true;
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
    return std::gcd(a, b);
}

Level make_level(int n, int cap) {
    if (n < 1) throw InvalidArgument("level must be at least 1");
    if (n > cap) {
        throw ResourceError("level " + std::to_string(n) + " exceeds the level cap " +
                            std::to_string(cap));
    }
    Level level;
    level.n = n;
    std::int64_t candidate = 2;
    while (static_cast<int>(level.primes.size()) < n) {
        if (is_prime(candidate)) level.primes.push_back(candidate);
        ++candidate;
    }
    level.primorial = 1;
    for (std::int64_t p : level.primes) level.primorial *= p;
    // e_i = (N/p_i) * ((N/p_i)^-1 mod p_i); N!_p stays below 2^24 at the
    // cap, so plain int64 arithmetic cannot overflow here.
    level.crt_basis.resize(n);
    for (int i = 0; i < n; ++i) {
        const std::int64_t p = level.primes[i];
        const std::int64_t m = level.primorial / p;
        std::int64_t inv = 1;
        while ((m * inv) % p != 1) ++inv;
        level.crt_basis[i] = (m * inv) % level.primorial;
    }
    return level;
}

ResidueClass make_class(std::int64_t shift, std::int64_t modulus) {
    if (modulus < 1) throw InvalidArgument("modulus must be positive");
    ResidueClass c;
    c.modulus = modulus;
    c.shift = ((shift % modulus) + modulus) % modulus;
    return c;
}

std::int64_t crt_shift(const Level& level, const CrtTuple& coords) {
    if (static_cast<int>(coords.size()) != level.n) {
        throw InvalidArgument("tuple length does not match the level");
    }
    std::int64_t s = 0;
    for (int i = 0; i < level.n; ++i) {
        const std::int64_t c = coords[i];
        if (c < 0 || c >= level.primes[i]) {
            throw InvalidArgument("tuple coordinate out of range");
        }
        s = (s + c * level.crt_basis[i]) % level.primorial;
    }
    return s;
}

CrtTuple crt_invert(const Level& level, std::int64_t s) {
    const std::int64_t np = level.primorial;
    s = ((s % np) + np) % np;
    CrtTuple coords(level.n);
    for (int i = 0; i < level.n; ++i) {
        coords[i] = static_cast<std::int32_t>(s % level.primes[i]);
    }
    return coords;
}

bool classes_intersect(const ResidueClass& a, const ResidueClass& b) {
    const std::int64_t g = std::gcd(a.modulus, b.modulus);
    return ((a.shift - b.shift) % g + g) % g == 0;
}

std::optional<ResidueClass> intersect_classes(std::span<const ResidueClass> classes) {
    BigInt shift = 0;
    BigInt modulus = 1;
    for (const ResidueClass& c : classes) {
        // Merge (shift mod modulus) with (c.shift mod c.modulus).
        BigInt g, p, q;
        mpz_gcdext(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t(), modulus.get_mpz_t(),
                   BigInt(c.modulus).get_mpz_t());
        BigInt diff = BigInt(c.shift) - shift;
        if (diff % g != 0) return std::nullopt;
        BigInt lcm = modulus / g * c.modulus;
        if (lcm > kLcmBudget) {
            throw ResourceError("intersection modulus exceeds the lcm budget");
        }
        // shift + modulus * p * (diff/g) solves both congruences.
        BigInt merged = shift + modulus * p * (diff / g);
        merged %= lcm;
        if (merged < 0) merged += lcm;
        shift = merged;
        modulus = lcm;
    }
    ResidueClass out;
    out.shift = shift.get_si();
    out.modulus = modulus.get_si();
    return out;
}

std::int64_t least_positive_element(const ResidueClass& c) {
    return c.shift > 0 ? c.shift : c.modulus;
}

bool class_contains_prime(const ResidueClass& c) {
    if (c.modulus < 1) throw InvalidArgument("modulus must be positive");
    const std::int64_t s0 = least_positive_element(c);
    if (std::gcd(s0, c.modulus) == 1) return true; // Dirichlet
    return is_prime(s0);
}

bool class_contains_composite(const ResidueClass& c) {
    if (c.modulus < 1) throw InvalidArgument("modulus must be positive");
    return true;
}

} // namespace chargebounds
