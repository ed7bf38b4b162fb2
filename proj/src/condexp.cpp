#include "condexp.hpp"

#include "kahan.hpp"

namespace wce {

Weight cond_exp(const Weight& f, const SubAlgebra& alg, const AtomicSpace& space) {
  std::vector<std::pair<std::int64_t, double>> out;
  out.reserve(space.cell_count());
  std::vector<double> values;
  for (const Block& b : alg.blocks()) {
    values.clear();
    values.reserve(b.cell_indices.size());
    bool constant = true;
    for (std::size_t i : b.cell_indices) {
      const double v = f.eval(space.cell_at(i).id);
      if (!values.empty() && v != values.front()) {
        constant = false;
      }
      values.push_back(v);
    }
    double avg;
    if (constant) {
      // Constant data short-circuits the averaging, so repeated application
      // reproduces the block values exactly.
      avg = values.front();
    } else {
      KahanSum num;
      for (std::size_t k = 0; k < values.size(); ++k) {
        num.add(values[k] * space.cell_at(b.cell_indices[k]).mass);
      }
      avg = num.value() / b.mass;
    }
    for (std::size_t i : b.cell_indices) {
      out.emplace_back(space.cell_at(i).id, avg);
    }
  }
  return Weight::table(std::move(out));
}

std::vector<std::size_t> support_cover(const Weight& f, const SubAlgebra& alg,
                                       const AtomicSpace& space) {
  std::vector<std::size_t> cover;
  const auto blocks = alg.blocks();
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    for (std::size_t i : blocks[bi].cell_indices) {
      if (f.eval(space.cell_at(i).id) != 0.0) {
        cover.push_back(bi);
        break;
      }
    }
  }
  return cover;
}

}  // namespace wce
