#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "chargebounds/rational.hpp"

namespace chargebounds {

// Caps. The level cap keeps the primorial (and with it every dense
// per-shift structure) below ten million entries; the lcm budget bounds
// the modulus of any residue-class intersection.
inline constexpr int kDefaultLevelCap = 8;
inline constexpr std::int64_t kLcmBudget = 1000000000000000000LL; // 10^18

// Truncation level: the first n primes and their product N!_p.
// Residues are 0-based internally, [0, p) per coordinate; the paper-style
// representative p corresponds to 0 here.
struct Level {
    int n = 0;
    std::vector<std::int64_t> primes;    // strictly increasing, starting at 2
    std::int64_t primorial = 1;          // product of `primes`
    std::vector<std::int64_t> crt_basis; // e_i = 1 mod p_i, 0 mod p_k (k != i)
};

// A residue class shift mod modulus with 0 <= shift < modulus.
struct ResidueClass {
    std::int64_t shift = 0;
    std::int64_t modulus = 1;

    friend bool operator==(const ResidueClass&, const ResidueClass&) = default;
};

// One residue per level prime; coords[i] in [0, primes[i]).
using CrtTuple = std::vector<std::int32_t>;

Level make_level(int n, int cap = kDefaultLevelCap);

// Reduces shift into [0, modulus); modulus must be positive.
ResidueClass make_class(std::int64_t shift, std::int64_t modulus);

// The unique s in [0, N!_p) with s = coords[i] (mod p_i) for every i.
std::int64_t crt_shift(const Level& level, const CrtTuple& coords);

// Inverse of crt_shift; s is reduced mod N!_p first, so any integer works.
CrtTuple crt_invert(const Level& level, std::int64_t s);

// Whether two residue classes share an element (gcd compatibility).
bool classes_intersect(const ResidueClass& a, const ResidueClass& b);

// Exact intersection of finitely many classes: a class mod lcm of the
// moduli, or nullopt when empty. Throws ResourceError when the lcm
// exceeds kLcmBudget.
std::optional<ResidueClass> intersect_classes(std::span<const ResidueClass> classes);

// Decides whether the class contains a (positive) prime. With s0 the
// least positive element: true iff gcd(s0, m) == 1 (Dirichlet) or s0 is
// itself prime; in the latter gcd>1 case s0 is the only prime in the class.
bool class_contains_prime(const ResidueClass& c);

// Every residue class contains infinitely many non-primes, so this is
// constant true: if gcd(s0, m) > 1 all elements share that divisor and all
// but at most one are composite; if gcd(s0, m) == 1 the class meets
// 0 mod q for any prime q not dividing m infinitely often.
bool class_contains_composite(const ResidueClass& c);

// Least positive member of the class: shift, or modulus when shift == 0.
std::int64_t least_positive_element(const ResidueClass& c);

// Deterministic trial division.
bool is_prime(std::int64_t v);

std::int64_t gcd64(std::int64_t a, std::int64_t b);

} // namespace chargebounds
