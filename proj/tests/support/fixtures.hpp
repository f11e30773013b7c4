#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fusion_ring.hpp"

namespace fixtures {

/* Build a ring from per-generator display matrices: the l-th matrix holds
   N_{lm}^n at row n, column m (the same layout the text dataset format
   uses).  All indices 0-based here. */
mink::FusionRing ring_from_display(
    std::string label, const std::vector<std::vector<std::vector<int>>>& mats);

/* Rank-4 commutative ring with duals (1, 2, 4, 3) and dimensions
   (1, (1+sqrt(13))/2, 1, 1); the inequality search excludes it. */
mink::FusionRing excluded_rank4();

/* Rank-7 ring with a multiplicity-3 entry and dimensions
   (1, 1, 1, 1, 2, 4, 4); the inequality search excludes it. */
mink::FusionRing excluded_rank7();

/* Categorifiable controls: the search must never certify these. */
mink::FusionRing fibonacci();            // x^2 = 1 + x
mink::FusionRing ising();                // s^2 = 1 + f, sf = fs = s, f^2 = 1
mink::FusionRing z_n(std::size_t n);     // cyclic group ring
mink::FusionRing s3_rep();               // 1, sgn, V with V^2 = 1 + sgn + V
mink::FusionRing rank2_family(int m);    // x^2 = 1 + m x
mink::FusionRing tambara_yamagami(std::size_t n); // Z/n plus one rho
mink::FusionRing su2_level(std::size_t k);        // rank k + 1

/* Rank-3 ring violating only associativity (x^2 = 1 + y, y^2 = 1,
   xy = yx = 0, every element self-dual); first witness at 0-based
   (i,j,k,n) = (1,1,2,0). */
mink::FusionRing bad_associativity();

/* Tensor product on basis pairs, index (i1, i2) -> i1 * rank2 + i2. */
mink::FusionRing tensor_product(const mink::FusionRing& r1,
                                const mink::FusionRing& r2);

/* Relabel the basis by perm (perm[0] must be 0). */
mink::FusionRing permuted(const mink::FusionRing& ring,
                          const std::vector<std::size_t>& perm);

/* Deterministic family of valid rings with rank <= max_rank, assembled
   from group rings, near-group rings, product and permutation
   constructions. */
std::vector<mink::FusionRing> random_valid_rings(std::size_t count,
                                                 std::size_t max_rank,
                                                 std::uint64_t seed);

/* Minimum side ratio over the full coarse grid: every weight vector in
   {0, a_step, 2 a_step, ..., 1}^rank crossed with 1/p in
   {invp_step, 2 invp_step, ..., 1} and every basis triple. */
double grid_min_ratio(const mink::FusionRing& ring, double a_step,
                      double invp_step);

} // namespace fixtures
