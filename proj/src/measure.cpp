#include "measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kahan.hpp"

namespace wce {

namespace {

void check_exponent(double p) {
  // p may be +infinity (sup norm); otherwise it must be a finite real >= 1.
  if (std::isnan(p) || p < 1.0) {
    fail(ErrorCode::InvalidExponent, "norm exponent must be >= 1 (or infinity)");
  }
}

double checked_value(const Weight& f, const Cell& c) {
  const double v = f.eval(c.id);
  if (!std::isfinite(v)) {
    fail(ErrorCode::Eval, "weight is not finite at cell " + std::to_string(c.id));
  }
  return v;
}

}  // namespace

AtomicSpace::AtomicSpace(std::vector<Cell> cells) : cells_(std::move(cells)) {
  if (cells_.empty()) {
    fail(ErrorCode::BadArgument, "a space needs at least one cell");
  }
  index_.reserve(cells_.size());
  KahanSum total;
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    const Cell& c = cells_[i];
    if (!std::isfinite(c.mass) || !(c.mass > 0.0)) {
      fail(ErrorCode::BadArgument,
           "cell " + std::to_string(c.id) + ": mass must be positive and finite");
    }
    if (!index_.emplace(c.id, i).second) {
      fail(ErrorCode::BadArgument, "duplicate cell id " + std::to_string(c.id));
    }
    total.add(c.mass);
  }
  total_mass_ = total.value();
}

std::size_t AtomicSpace::index_of(std::int64_t id) const {
  auto it = index_.find(id);
  if (it == index_.end()) {
    fail(ErrorCode::UnknownCell, "unknown cell id " + std::to_string(id));
  }
  return it->second;
}

SubAlgebra::SubAlgebra(const AtomicSpace& space, std::vector<std::vector<std::int64_t>> block_cell_ids,
                       std::vector<NonAtomicPanel> panels)
    : panels_(std::move(panels)) {
  const std::size_t n = space.cell_count();
  owner_.assign(n, static_cast<std::size_t>(-1));
  blocks_.reserve(block_cell_ids.size());
  for (std::size_t bi = 0; bi < block_cell_ids.size(); ++bi) {
    const auto& ids = block_cell_ids[bi];
    if (ids.empty()) {
      fail(ErrorCode::BadArgument, "block " + std::to_string(bi) + " is empty");
    }
    Block b;
    b.cell_indices.reserve(ids.size());
    for (std::int64_t id : ids) {
      const std::size_t idx = space.index_of(id);
      if (owner_[idx] != static_cast<std::size_t>(-1)) {
        fail(ErrorCode::BadArgument,
             "cell " + std::to_string(id) + " appears in more than one block");
      }
      owner_[idx] = bi;
      b.cell_indices.push_back(idx);
    }
    std::sort(b.cell_indices.begin(), b.cell_indices.end());
    b.cell_ids.reserve(b.cell_indices.size());
    KahanSum mass;
    for (std::size_t idx : b.cell_indices) {
      b.cell_ids.push_back(space.cell_at(idx).id);
      mass.add(space.cell_at(idx).mass);
    }
    b.mass = mass.value();
    blocks_.push_back(std::move(b));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (owner_[i] == static_cast<std::size_t>(-1)) {
      fail(ErrorCode::BadArgument,
           "cell " + std::to_string(space.cell_at(i).id) + " is not covered by any block");
    }
  }
}

Weight Weight::table(std::vector<std::pair<std::int64_t, double>> entries) {
  Weight w;
  w.kind_ = Kind::Table;
  w.table_.reserve(entries.size());
  for (const auto& [id, value] : entries) {
    if (!std::isfinite(value)) {
      fail(ErrorCode::BadArgument,
           "table value for cell " + std::to_string(id) + " is not finite");
    }
    if (!w.table_.emplace(id, value).second) {
      fail(ErrorCode::BadArgument, "duplicate table entry for cell " + std::to_string(id));
    }
  }
  return w;
}

Weight Weight::table(const AtomicSpace& space, const std::function<double(const Cell&)>& fn) {
  Weight w;
  w.kind_ = Kind::Table;
  w.table_.reserve(space.cell_count());
  for (const Cell& c : space.cells()) {
    const double value = fn(c);
    if (!std::isfinite(value)) {
      fail(ErrorCode::Eval, "derived value is not finite at cell " + std::to_string(c.id));
    }
    w.table_.emplace(c.id, value);
  }
  return w;
}

Weight Weight::expr(std::string_view formula) {
  Weight w;
  w.kind_ = Kind::Expr;
  w.program_ = ExprProgram::parse(formula);
  return w;
}

double Weight::eval(std::int64_t cell_id) const {
  if (kind_ == Kind::Table) {
    auto it = table_.find(cell_id);
    if (it == table_.end()) {
      fail(ErrorCode::UnknownCell, "no table value for cell " + std::to_string(cell_id));
    }
    return it->second;
  }
  const double v = program_.eval(static_cast<double>(cell_id));
  if (!std::isfinite(v)) {
    fail(ErrorCode::Eval, "expression '" + program_.source() + "' is not finite at cell " +
                              std::to_string(cell_id));
  }
  return v;
}

double integrate(const Weight& f, const AtomicSpace& space) {
  KahanSum s;
  for (const Cell& c : space.cells()) {
    s.add(checked_value(f, c) * c.mass);
  }
  return s.value();
}

double integrate(const Weight& f, const AtomicSpace& space, std::span<const std::int64_t> cell_ids) {
  std::vector<std::size_t> idx;
  idx.reserve(cell_ids.size());
  for (std::int64_t id : cell_ids) {
    idx.push_back(space.index_of(id));
  }
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  KahanSum s;
  for (std::size_t i : idx) {
    const Cell& c = space.cell_at(i);
    s.add(checked_value(f, c) * c.mass);
  }
  return s.value();
}

double integrate(const Weight& f, const AtomicSpace& space, const Block& block) {
  KahanSum s;
  for (std::size_t i : block.cell_indices) {
    const Cell& c = space.cell_at(i);
    s.add(checked_value(f, c) * c.mass);
  }
  return s.value();
}

namespace {

template <typename Range>
double lp_norm_over(const Weight& f, double p, const AtomicSpace& space, const Range& indices) {
  check_exponent(p);
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t i : indices) {
      m = std::max(m, std::abs(checked_value(f, space.cell_at(i))));
    }
    return m;
  }
  // Max-normalized so that large exponents (conjugates of p near 1) cannot
  // overflow: every ratio is <= 1 and the scale is restored at the end.
  double scale = 0.0;
  for (std::size_t i : indices) {
    scale = std::max(scale, std::abs(checked_value(f, space.cell_at(i))));
  }
  if (scale == 0.0) {
    return 0.0;
  }
  KahanSum s;
  for (std::size_t i : indices) {
    const Cell& c = space.cell_at(i);
    s.add(std::pow(std::abs(checked_value(f, c)) / scale, p) * c.mass);
  }
  return scale * std::pow(s.value(), 1.0 / p);
}

struct AllIndices {
  std::size_t n;
  struct Iter {
    std::size_t i;
    std::size_t operator*() const { return i; }
    Iter& operator++() { ++i; return *this; }
    bool operator!=(const Iter& o) const { return i != o.i; }
  };
  Iter begin() const { return {0}; }
  Iter end() const { return {n}; }
};

}  // namespace

double lp_norm(const Weight& f, double p, const AtomicSpace& space) {
  return lp_norm_over(f, p, space, AllIndices{space.cell_count()});
}

double lp_norm(const Weight& f, double p, const AtomicSpace& space, const Block& block) {
  return lp_norm_over(f, p, space, block.cell_indices);
}

}  // namespace wce
