#pragma once

/*
  Checks that do not go through the engine: brute-force flag counts over
  F_q for type-A data, ranks of ad(x) for orbit dimensions, and the
  classical Kazhdan-Lusztig recursion for symmetric groups.
*/

#include <cstdint>
#include <string>
#include <vector>

#include "gic/engine.hpp"
#include "gic/type_a_builder.hpp"

namespace gic {

// Per factor, a square matrix over F_q; x(e_j) = sum_i x[i][j] e_i.
using FqMatrix = std::vector<std::vector<int>>;

struct FlagCountQuery {
  std::vector<GLFactor> factors;
  int n = 1;
  Word s;
  std::vector<FqMatrix> x;  // one per factor, in the weight-sorted basis
  int q = 2;                // prime
};

int oracle_max_dim();  // 6 unless GIC_MAX_DIM is set

// Weight of each basis vector of each factor: sorted weights with multiplicity.
std::vector<std::vector<int>> factor_basis_weights(const std::vector<GLFactor>& factors);

// Chains along the segments: e_lo -> e_{lo+n} -> ... (reversed for n < 0).
std::vector<FqMatrix> orbit_representative(const std::vector<GLFactor>& factors, const Multisegment& m, int n);
// g x g^-1 for a random g in the degree-0 Levi over F_q.
std::vector<FqMatrix> conjugate_representative(const std::vector<GLFactor>& factors, const std::vector<FqMatrix>& x,
                                               int q, std::uint64_t seed);
// rank of x^k : V_a -> V_{a+kn} over F_q equals the number of segments through a and a+kn
bool realizes_multisegment(const std::vector<GLFactor>& factors, const std::vector<FqMatrix>& x,
                           const Multisegment& m, int n, int q);

// Flags adapted to s (read from the bottom) with x F_k inside F_{k-1}.  Throws TooLarge.
std::uint64_t flag_point_count(const FlagCountQuery& q);

// dim L_0U_B + dim L_nU_B for the flag of s
int unipotent_shift(const Word& s, int n);

// e(v -> -1/sqrt q) times (-1)^{m+d} sqrt(q)^{m-d}; false unless every exponent has the
// right parity and the value is an integer
bool normalized_e_value(const LaurentPoly& e, int m, int d, int q, Int* out);

std::vector<Finding> check_e_against_counts(const RunResult& r, int q, std::uint64_t seed = 1);

// rank of [., x] : L_0G -> L_nG over Q
int orbit_dimension_oracle(const std::vector<GLFactor>& factors, const Multisegment& m, int n);
std::vector<Finding> check_orbit_dimensions(const RunResult& r);

// Classical KL polynomial P_{x,y} as a polynomial in q (exponent = power of q).
// Permutations of {0..m-1} in one-line notation, m <= 6.
LaurentPoly kl_polynomial(const std::vector<int>& x, const std::vector<int>& y);
bool bruhat_leq(const std::vector<int>& x, const std::vector<int>& y);
int perm_length(const std::vector<int>& w);

// Distinct consecutive weights 0..k-1, n = 1: a multisegment is a composition of k,
// sent to the longest element of the matching parabolic subgroup.
std::vector<int> composition_longest_element(const std::vector<int>& composition);
std::vector<Finding> kl_crosscheck(const RunResult& r);

}  // namespace gic
