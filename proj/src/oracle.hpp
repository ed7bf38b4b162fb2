#pragma once

#include <cstddef>
#include <vector>

#include "exponents.hpp"
#include "measure.hpp"
#include "wce_op.hpp"

namespace wce {

// Exact operator norm of T restricted to one block (a rank-one operator):
// ||u chi_A||_{p'} * ||w chi_A||_q / mu(A), by sharpness of the Hoelder
// inequality. Independently recomputes what the atom-series term claims,
// straight from cell data; the two must agree to rounding.
double block_norm(const Weight& u, const Weight& w, const Block& block, const Exponents& exps,
                  const AtomicSpace& space);

// Two-sided bracket for ||T||_{p->q} on a finite purely atomic space.
//   formula: sup_i block_norm_i when p <= q, (sum_i block_norm_i^r)^{1/r}
//            when q < p (disjoint-block aggregation) -- an exact value,
//            used as the upper side of the bracket;
//   ascent:  best ||T f||_q over unit-ball f found by maximizing the
//            Rayleigh ratio (random restarts plus per-block extremal warm
//            starts), evaluated through apply/lp_norm -- a certified lower
//            bound.
struct NormBracket {
  double formula = 0.0;
  double ascent = 0.0;
};

NormBracket operator_norm(const Weight& u, const Weight& w, const SubAlgebra& alg,
                          const Exponents& exps, const AtomicSpace& space);

// Nuclear norm at p = q = 2: sum of the singular values of the matrix of T
// in the orthonormal basis chi_x / sqrt(mass(x)). For disjoint blocks this
// equals the sum of the block norms.
double trace_norm_hilbert(const Weight& u, const Weight& w, const SubAlgebra& alg,
                          const AtomicSpace& space);

// Extremal input concentrated on one block, scaled so that its image norm
// has the closed form ||T f_i||_q = ||T||^{-p'/p} * term_i^{p'} and
// ||f_i||_p = (term_i/||T||)^{p'/p} <= 1. Blocks where the series term
// vanishes are skipped. Requires p > 1 and p != q.
struct PietschTestFunction {
  std::size_t block_index;
  Weight values;  // table over every cell of the space (zero off the block)
};

std::vector<PietschTestFunction> pietsch_test_functions(const Weight& u, const Weight& w,
                                                        const SubAlgebra& alg,
                                                        const Exponents& exps,
                                                        const AtomicSpace& space,
                                                        double operator_norm_value);

// Max over blocks of the relative residual between ||T f_i||_q computed via
// apply/lp_norm and the closed form above, with ||T|| taken from the
// aggregation formula. Fails with ZeroOperator when ||T|| = 0.
double pietsch_identity_check(const Weight& u, const Weight& w, const SubAlgebra& alg,
                              const Exponents& exps, const AtomicSpace& space);

}  // namespace wce
