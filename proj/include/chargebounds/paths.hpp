#pragma once

#include <cstdint>
#include <vector>

#include "chargebounds/numtheory.hpp"
#include "chargebounds/setexpr.hpp"

namespace chargebounds {

// A multiset of CRT paths for a level, stored as a multiplicity per CRT
// shift (tuples and shifts are in bijection). With uniform per-coordinate
// projections (the marginal condition) it is an integral dual witness:
// counts[s]/N!_p is a charge-like measure on the classes mod N!_p.
struct PathMultiset {
    Level level;
    std::vector<std::int32_t> counts; // indexed by shift in [0, N!_p)
    std::int64_t cardinality = 0;

    std::int32_t multiplicity(const CrtTuple& t) const;
};

// Every tuple once: multiplicities all 1, cardinality N!_p.
PathMultiset full_product(const Level& level);

// Projection of the multiset onto one coordinate: multiplicity per value.
std::vector<std::int64_t> projection(const PathMultiset& J, int coord);

// Whether every coordinate's projection is uniform (value v of coordinate
// n appears exactly N!_p / p_n times).
bool has_uniform_marginals(const PathMultiset& J);

// Swap coordinate `coord` between one copy of j and one copy of k.
// Projections are unchanged. Throws InvalidArgument when a path is not
// present with enough multiplicity.
PathMultiset exchange(PathMultiset J, const CrtTuple& j, const CrtTuple& k, int coord);

// Re-pair paths so that every path whose i-th coordinate lies in a_i has
// its j-th coordinate in a_j, by donor/recipient exchanges of coordinate j.
// Requires card(proj_i(J) n a_i) <= card(proj_j(J) n a_j); throws
// InvalidArgument reporting both cardinalities otherwise.
PathMultiset redirect(PathMultiset J, int i, int j, const std::vector<std::int32_t>& a_i,
                      const std::vector<std::int32_t>& a_j);

// Per-coordinate partition of [0, p_n) into excluded (a) and kept (b).
struct CoordinatePartition {
    std::vector<std::int32_t> a;
    std::vector<std::int32_t> b;
};

struct ProductWitness {
    PathMultiset multiset;
    int pivot_coord = 0;       // n*
    std::int64_t b_count = 0;  // exact card(J n product of b-sets)
};

// Builds a uniform-marginal multiset meeting the product of the b-sets in
// exactly (N!_p / p_{n*}) * |b_{n*}| paths, where n* minimizes |b_n| / p_n
// (equivalently maximizes |a_n|/|b_n|; empty b_n wins with count 0; ties
// break toward the smallest coordinate).
ProductWitness intersect_products_witness(const Level& level,
                                          const std::vector<CoordinatePartition>& parts);

// Difference-of-products data: per coordinate the include set I_n and the
// subtracted set K_n; H_n = I_n \ K_n.
struct ProductSpec {
    Level level;
    std::vector<std::vector<std::int32_t>> include;  // I_n
    std::vector<std::vector<std::int32_t>> exclude;  // K_n
};

// Exact big-integer evaluation of the donation-count inequality
//   sum_{m=0}^{N*-2} (N*-1-m) sum_{|T|=m, T in N*} prod_T K prod_{N*\T} H prod_{rest} I
//   >= prod K_n,
// the sufficient condition for exhausting donations across a subtracted
// product block.
bool check_thin_count(const ProductSpec& spec);

struct DonationOptions {
    // Plateau-escape search (one preserving relocation followed by a
    // donation) is only attempted when N!_p stays within this cap.
    std::int64_t lookahead_primorial_cap = 2310;
};

// Local search from the full product: repeatedly applies enlivening,
// life-preserving exchanges (lexicographic scan over dead paths, then
// donor candidates) until none applies; the alive count never decreases.
PathMultiset donate_greedy(const Level& level, const AliveVector& alive,
                           const DonationOptions& options = {});

// Total multiplicity on alive shifts.
std::int64_t witness_count(const PathMultiset& J, const AliveVector& alive);

} // namespace chargebounds
