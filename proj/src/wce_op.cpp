#include "wce_op.hpp"

#include <algorithm>
#include <cmath>

#include "kahan.hpp"

namespace wce {

namespace {

// E(|g|^e)(block): mass-weighted average of |g|^e over the block.
double block_moment(const Weight& g, double e, const Block& b, const AtomicSpace& space) {
  KahanSum s;
  for (std::size_t i : b.cell_indices) {
    const Cell& c = space.cell_at(i);
    s.add(std::pow(std::abs(g.eval(c.id)), e) * c.mass);
  }
  return s.value() / b.mass;
}

double block_sup(const Weight& g, const Block& b, const AtomicSpace& space) {
  double m = 0.0;
  for (std::size_t i : b.cell_indices) {
    m = std::max(m, std::abs(g.eval(space.cell_at(i).id)));
  }
  return m;
}

}  // namespace

Weight apply(const Weight& u, const Weight& w, const SubAlgebra& alg, const Weight& f,
             const AtomicSpace& space) {
  const Weight uf =
      Weight::table(space, [&](const Cell& c) { return u.eval(c.id) * f.eval(c.id); });
  const Weight averaged = cond_exp(uf, alg, space);
  return Weight::table(space,
                       [&](const Cell& c) { return w.eval(c.id) * averaged.eval(c.id); });
}

std::vector<AtomStats> atom_stats(const Weight& u, const Weight& w, const SubAlgebra& alg,
                                  const Exponents& exps, const AtomicSpace& space) {
  std::vector<AtomStats> out;
  const auto blocks = alg.blocks();
  out.reserve(blocks.size());
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    const Block& b = blocks[bi];
    AtomStats st;
    st.block_index = bi;
    st.mass = b.mass;
    st.eu = (exps.p > 1.0) ? block_moment(u, exps.p_conj, b, space) : block_sup(u, b, space);
    st.ew = block_moment(w, exps.q, b, space);
    const double du = (exps.p > 1.0) ? std::pow(st.eu, 1.0 / exps.p_conj) : st.eu;
    st.d = du * std::pow(st.ew, 1.0 / exps.q);
    st.term = st.d * std::pow(st.mass, exps.mass_exponent());
    out.push_back(st);
  }
  return out;
}

std::vector<RankOneFactor> factor_norms(const Weight& u, const Weight& w, const SubAlgebra& alg,
                                        const Exponents& exps, const AtomicSpace& space) {
  std::vector<RankOneFactor> out;
  const auto blocks = alg.blocks();
  out.reserve(blocks.size());
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    const Block& b = blocks[bi];
    RankOneFactor fac;
    fac.block_index = bi;
    if (exps.p > 1.0) {
      const double eu = block_moment(u, exps.p_conj, b, space);
      fac.phi_norm = std::pow(eu, 1.0 / exps.p_conj) * std::pow(b.mass, 1.0 / exps.p_conj);
    } else {
      fac.phi_norm = block_sup(u, b, space);
    }
    const double ew = block_moment(w, exps.q, b, space);
    fac.g_norm = std::pow(ew, 1.0 / exps.q) * std::pow(b.mass, 1.0 / exps.q - 1.0);
    fac.product = fac.phi_norm * fac.g_norm;
    out.push_back(fac);
  }
  return out;
}

double nuclear_bound(const Weight& u, const Weight& w, const SubAlgebra& alg,
                     const Exponents& exps, const AtomicSpace& space) {
  KahanSum s;
  for (const RankOneFactor& fac : factor_norms(u, w, alg, exps, space)) {
    s.add(fac.product);
  }
  return s.value();
}

std::vector<CompactBlockStats> compact_block_stats(const Weight& u, const Weight& w,
                                                   const SubAlgebra& alg, const Exponents& exps,
                                                   const AtomicSpace& space) {
  std::vector<CompactBlockStats> out;
  const auto blocks = alg.blocks();
  out.reserve(blocks.size());
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    const Block& b = blocks[bi];
    CompactBlockStats st;
    st.block_index = bi;
    st.mass = b.mass;
    st.ew_q = block_moment(w, exps.q, b, space);
    st.eu_p = block_moment(u, exps.p, b, space);
    st.eu_pconj =
        (exps.p > 1.0) ? block_moment(u, exps.p_conj, b, space) : block_sup(u, b, space);
    st.eu_qconj =
        (exps.q > 1.0) ? block_moment(u, exps.q_conj, b, space) : block_sup(u, b, space);
    out.push_back(st);
  }
  return out;
}

std::vector<SigmaCellStats> sigma_cell_stats(const Weight& u, const Weight& w,
                                             const Exponents& exps, const AtomicSpace& space) {
  if (!(exps.q > 1.0)) {
    fail(ErrorCode::InvalidExponent, "cell-level stats need q > 1 (finite q')");
  }
  std::vector<SigmaCellStats> out;
  out.reserve(space.cell_count());
  for (const Cell& c : space.cells()) {
    SigmaCellStats st;
    st.cell_id = c.id;
    st.mass = c.mass;
    const double uu = std::pow(std::abs(u.eval(c.id)), exps.q_conj);
    const double ww = std::pow(std::pow(std::abs(w.eval(c.id)), exps.q), exps.q_conj / exps.q);
    st.value = uu * ww / c.mass;
    out.push_back(st);
  }
  return out;
}

}  // namespace wce
