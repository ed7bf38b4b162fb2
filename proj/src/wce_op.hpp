#pragma once

#include <optional>
#include <vector>

#include "condexp.hpp"
#include "exponents.hpp"
#include "measure.hpp"

namespace wce {

// Norms of the rank-one factors of T = sum_i phi_i (x) g_i, where
// phi_i(f) = integral of (u chi_{A_i}) f and g_i = w chi_{A_i} / mu(A_i).
//
//   phi_norm = (E(|u|^p')(A_i))^{1/p'} * mu(A_i)^{1/p'}   (p > 1)
//            = ess-sup of |u| on A_i                      (p = 1)
//   g_norm   = (E(|w|^q)(A_i))^{1/q} * mu(A_i)^{1/q - 1}
//
// phi_norm carries the mu(A_i)^{1/p'} mass factor: it is the honest dual
// norm ||u chi_{A_i}||_{p'}, and only with that factor does the product
// phi_norm * g_norm reproduce the atom-series term.
struct RankOneFactor {
  std::size_t block_index = 0;
  double phi_norm = 0.0;
  double g_norm = 0.0;
  double product = 0.0;
};

// Per-atom ingredients of the nuclearity series.
//   eu   = E(|u|^p')(A_i)  (ess-sup of |u| on A_i when p = 1)
//   ew   = E(|w|^q)(A_i)
//   d    = eu^{1/p'} * ew^{1/q}   (with the 1/inf = 0 convention at p = 1)
//   term = d * mu(A_i)^{+-1/r}
struct AtomStats {
  std::size_t block_index = 0;
  double mass = 0.0;
  double eu = 0.0;
  double ew = 0.0;
  double d = 0.0;
  double term = 0.0;
};

// T f = w * E(u f). The result is an explicit table over every cell.
Weight apply(const Weight& u, const Weight& w, const SubAlgebra& alg, const Weight& f,
             const AtomicSpace& space);

std::vector<AtomStats> atom_stats(const Weight& u, const Weight& w, const SubAlgebra& alg,
                                  const Exponents& exps, const AtomicSpace& space);

std::vector<RankOneFactor> factor_norms(const Weight& u, const Weight& w, const SubAlgebra& alg,
                                        const Exponents& exps, const AtomicSpace& space);

// Sum over blocks of phi_norm * g_norm: an upper bound for the nuclear norm
// of T on the truncation.
double nuclear_bound(const Weight& u, const Weight& w, const SubAlgebra& alg,
                     const Exponents& exps, const AtomicSpace& space);

// Extra conditional moments consumed by the compactness criteria, which use
// exponent patterns different from the nuclearity series.
//   ew_q     = E(|w|^q)(A_i)
//   eu_p     = E(|u|^p)(A_i)
//   eu_pconj = E(|u|^p')(A_i)  (ess-sup when p = 1)
//   eu_qconj = E(|u|^q')(A_i)  (ess-sup when q = 1; unused in that case)
struct CompactBlockStats {
  std::size_t block_index = 0;
  double mass = 0.0;
  double ew_q = 0.0;
  double eu_p = 0.0;
  double eu_pconj = 0.0;
  double eu_qconj = 0.0;
};

// Per-cell data for the p = 1 sufficiency route, which runs over the atoms
// of the finer algebra (the cells themselves):
//   value = |u(c)|^{q'} * (|w(c)|^q)^{q'/q} / mass(c)
struct SigmaCellStats {
  std::int64_t cell_id = 0;
  double mass = 0.0;
  double value = 0.0;
};

std::vector<CompactBlockStats> compact_block_stats(const Weight& u, const Weight& w,
                                                   const SubAlgebra& alg, const Exponents& exps,
                                                   const AtomicSpace& space);

// Requires q > 1 (q' finite).
std::vector<SigmaCellStats> sigma_cell_stats(const Weight& u, const Weight& w,
                                             const Exponents& exps, const AtomicSpace& space);

}  // namespace wce
