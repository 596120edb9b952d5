#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "chargebounds/numtheory.hpp"

namespace chargebounds {

// Limits applied while parsing and normalizing expressions.
struct ExprLimits {
    std::size_t max_nodes = 100000;
    std::size_t max_depth = 200;
    std::size_t finite_set_limit = 10000;
    std::size_t atom_budget = 10000;
};

enum class NodeKind {
    Class,
    Primes,
    FiniteSet,
    AllIntegers,
    EmptySet,
    Complement,
    Union,
    Intersection,
    Difference,
};

// Immutable expression tree over subsets of the integers.
struct SetExpr;
using SetExprPtr = std::shared_ptr<const SetExpr>;

struct SetExpr {
    NodeKind kind;
    ResidueClass cls;                  // Class
    std::vector<std::int64_t> elems;   // FiniteSet: sorted, duplicate-free
    std::vector<SetExprPtr> children;  // Complement: 1; Union/Intersection/Difference: 2
};

SetExprPtr expr_class(const ResidueClass& c);
SetExprPtr expr_primes();
SetExprPtr expr_all();
SetExprPtr expr_empty();
SetExprPtr expr_finite(std::vector<std::int64_t> elems);
SetExprPtr expr_complement(SetExprPtr e);
SetExprPtr expr_union(SetExprPtr a, SetExprPtr b);
SetExprPtr expr_intersection(SetExprPtr a, SetExprPtr b);
SetExprPtr expr_difference(SetExprPtr a, SetExprPtr b);

// Grammar:  primes | all | empty | class(R,M) | {a,b,...} | !E | E & E |
//           E \ E | E | E | (E)     with precedence  ! > & \ > |
// Whitespace insignificant; R and finite-set members may be negative.
// Throws ParseError (with byte offset) on malformed text.
SetExprPtr parse(std::string_view text, const ExprLimits& limits = {});

// Renders an expression back to grammar text.
std::string to_text(const SetExpr& expr);

// One normalized alternative: a residue class, optionally intersected with
// the primes or their complement. AllIntegers is the class 0 mod 1.
struct Atom {
    enum class PrimePart { None, Primes, NotPrimes };
    ResidueClass cls{0, 1};
    PrimePart part = PrimePart::None;

    friend bool operator==(const Atom&, const Atom&) = default;
};

// S = ((union of atoms) \ minus) union plus, with plus disjoint from the
// atom union and minus contained in it. Atoms are sorted and deduplicated,
// so equal sets built the same way normalize identically.
struct NormalForm {
    std::vector<Atom> atoms;
    std::vector<std::int64_t> plus;   // sorted
    std::vector<std::int64_t> minus;  // sorted
};

NormalForm normalize(const SetExpr& expr, const ExprLimits& limits = {});

// Exact membership of a single integer in the normalized set.
bool nf_contains(const NormalForm& nf, std::int64_t x);

// Embeds a normal form back into expression space (used for idempotence
// checks and for re-rendering).
SetExprPtr nf_to_expr(const NormalForm& nf);

// bits[s] == true iff the class s mod N!_p intersects the set.
struct AliveVector {
    Level level;
    std::vector<bool> bits;
    std::int64_t alive_count = 0;
};

// Exact decision of (s mod N!_p) n S != empty for 0 <= s < N!_p.
bool alive_bit(const NormalForm& nf, std::int64_t s, const Level& level);

AliveVector alive_vector(const NormalForm& nf, const Level& level);
AliveVector alive_vector(const SetExpr& expr, const Level& level,
                         const ExprLimits& limits = {});

} // namespace chargebounds
