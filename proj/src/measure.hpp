#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "expr.hpp"

namespace wce {

// An atom of the underlying measure: strictly positive mass attached to an
// integer id. The id doubles as the index variable for Expr weights.
struct Cell {
  std::int64_t id;
  double mass;
};

// Purely atomic sigma-finite measure space given by an explicit cell list.
// Cell order is part of the value: every sum in the library runs in this
// order, which pins down floating-point results exactly.
class AtomicSpace {
 public:
  explicit AtomicSpace(std::vector<Cell> cells);

  std::span<const Cell> cells() const noexcept { return cells_; }
  std::size_t cell_count() const noexcept { return cells_.size(); }
  double total_mass() const noexcept { return total_mass_; }

  bool has_cell(std::int64_t id) const noexcept { return index_.count(id) != 0; }
  std::size_t index_of(std::int64_t id) const;  // throws Error(UnknownCell)
  const Cell& cell_at(std::size_t index) const noexcept { return cells_[index]; }

 private:
  std::vector<Cell> cells_;
  std::unordered_map<std::int64_t, std::size_t> index_;
  double total_mass_ = 0.0;
};

// Atom of the coarser sub-algebra: a nonempty union of cells. `cell_indices`
// is kept sorted by space order so block sums are deterministic.
struct Block {
  std::vector<std::int64_t> cell_ids;
  std::vector<std::size_t> cell_indices;
  double mass = 0.0;
};

// Declarative stand-in for a non-atomic region of the underlying space.
// Only the support structure of the two weights on it is representable.
struct NonAtomicPanel {
  std::string id;
  bool u_support_positive = false;
  bool w_support_positive = false;
};

// Sub-sigma-algebra generated by a partition of the cells into blocks,
// together with the non-atomic panels of the decomposition.
class SubAlgebra {
 public:
  SubAlgebra(const AtomicSpace& space, std::vector<std::vector<std::int64_t>> block_cell_ids,
             std::vector<NonAtomicPanel> panels = {});

  std::span<const Block> blocks() const noexcept { return blocks_; }
  std::size_t block_count() const noexcept { return blocks_.size(); }
  std::span<const NonAtomicPanel> panels() const noexcept { return panels_; }
  std::size_t block_of_index(std::size_t cell_index) const noexcept { return owner_[cell_index]; }

 private:
  std::vector<Block> blocks_;
  std::vector<NonAtomicPanel> panels_;
  std::vector<std::size_t> owner_;
};

// Measurable function on the cells. Either an explicit table (must cover
// every cell it is evaluated on) or a closed-form expression in the cell id.
class Weight {
 public:
  enum class Kind { Table, Expr };

  // Explicit table; ids must be unique and values finite.
  static Weight table(std::vector<std::pair<std::int64_t, double>> entries);
  // Table derived by evaluating `fn` on every cell of `space`.
  static Weight table(const AtomicSpace& space, const std::function<double(const Cell&)>& fn);
  static Weight expr(std::string_view formula);

  Kind kind() const noexcept { return kind_; }
  const std::string& formula() const noexcept { return program_.source(); }

  // Table: Error(UnknownCell) when the id is absent.
  // Expr: Error(Eval) when the value is not finite.
  double eval(std::int64_t cell_id) const;

 private:
  Weight() = default;

  Kind kind_ = Kind::Table;
  std::unordered_map<std::int64_t, double> table_;
  ExprProgram program_;
};

// Integral of f over the whole space / an id set / a block, summed in cell
// order with compensated accumulation.
double integrate(const Weight& f, const AtomicSpace& space);
double integrate(const Weight& f, const AtomicSpace& space, std::span<const std::int64_t> cell_ids);
double integrate(const Weight& f, const AtomicSpace& space, const Block& block);

// L^p(mu) norm, 1 <= p <= infinity. The block overloads give the norm of
// f restricted to the block (f * chi_block).
double lp_norm(const Weight& f, double p, const AtomicSpace& space);
double lp_norm(const Weight& f, double p, const AtomicSpace& space, const Block& block);

}  // namespace wce
