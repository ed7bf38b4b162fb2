#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "criteria.hpp"
#include "exponents.hpp"
#include "measure.hpp"
#include "wce_op.hpp"

namespace wce {

// Below this block size the power sums are evaluated exactly by compensated
// summation; above it an Euler-Maclaurin expansion with two correction terms
// is used (the blocks involved start at k >= cutoff^2/2, which makes the
// truncation error negligible next to double rounding).
inline constexpr std::int64_t kPowerSumExactCutoff = 2048;

// sum_{j=0}^{n-1} (k+j)^e for k > 0.
double power_sum(double k, std::int64_t n, double e);

// sum_{j=0}^{n-1} (2(k+j))^e for k > 0.
double even_power_sum(double k, std::int64_t n, double e);

// Countable family of atoms A_1, A_2, ... described by closed-form
// conditional moments instead of explicit cell lists, so partial sums over
// millions of atoms stay cheap. Indices are 1-based.
class AtomFamily {
 public:
  virtual ~AtomFamily() = default;

  virtual double mass(std::int64_t i) const = 0;
  // E(|u|^a)(A_i) and E(|w|^a)(A_i): mass-weighted conditional moments.
  virtual double moment_u(std::int64_t i, double a) const = 0;
  virtual double moment_w(std::int64_t i, double a) const = 0;
  // ess-sup of |u| on A_i (used when p = 1).
  virtual double sup_u(std::int64_t i) const = 0;

  // Certified upper bound on sum_{i>count} term_i (or a divergence marker).
  // Families without tail knowledge return nullopt, which caps verdicts at
  // Inconclusive.
  virtual std::optional<TailBound> tail_bound(std::int64_t count,
                                              const Exponents& exps) const {
    (void)count;
    (void)exps;
    return std::nullopt;
  }

  // Caller statements for the compactness criteria (limits / series beyond
  // any truncation). Default: no claims.
  virtual CompactnessTail compactness_tail(const Exponents& exps) const {
    (void)exps;
    return {};
  }
};

// Built-in example family on the positive integers with counting measure,
// weights u(x) = x and w(x) = 1/x^3. Odd sub-family: singletons {2k-1}.
// Even sub-family: A_n holds the n consecutive even numbers starting at
// 2*k_n with k_n = n(n-1)/2 + 1, so the A_n partition the even integers.
// Every series term of the odd sub-family equals (2k-1)^{-2} in all
// regimes; the even terms decay like n^{-4} times the mass factor.

class ExampleOddFamily final : public AtomFamily {
 public:
  double mass(std::int64_t i) const override;
  double moment_u(std::int64_t i, double a) const override;
  double moment_w(std::int64_t i, double a) const override;
  double sup_u(std::int64_t i) const override;
  std::optional<TailBound> tail_bound(std::int64_t count, const Exponents& exps) const override;
  CompactnessTail compactness_tail(const Exponents& exps) const override;
};

class ExampleEvenFamily final : public AtomFamily {
 public:
  double mass(std::int64_t i) const override;
  double moment_u(std::int64_t i, double a) const override;
  double moment_w(std::int64_t i, double a) const override;
  double sup_u(std::int64_t i) const override;
  std::optional<TailBound> tail_bound(std::int64_t count, const Exponents& exps) const override;
  CompactnessTail compactness_tail(const Exponents& exps) const override;
};

// Odd and even atoms interleaved: merged index i covers odd atom (i+1)/2
// when i is odd and even atom i/2 when i is even.
class ExampleMergedFamily final : public AtomFamily {
 public:
  double mass(std::int64_t i) const override;
  double moment_u(std::int64_t i, double a) const override;
  double moment_w(std::int64_t i, double a) const override;
  double sup_u(std::int64_t i) const override;
  std::optional<TailBound> tail_bound(std::int64_t count, const Exponents& exps) const override;
  CompactnessTail compactness_tail(const Exponents& exps) const override;

 private:
  ExampleOddFamily odd_;
  ExampleEvenFamily even_;
};

// k_n, the index of the first even-block element divided by 2.
std::int64_t even_block_start(std::int64_t n);

// Integral-test tail bounds for the example family: odd part
// sum_{k>count} (2k-1)^{-2} <= 1/(2(2*count-1)); even part via the
// per-atom bound below, summed by integral test. `example_tail_bound`
// bounds the merged series after `count` merged atoms.
double odd_tail_bound(std::int64_t count);
double even_tail_bound(std::int64_t count, const Exponents& exps);
double example_tail_bound(std::int64_t count, const Exponents& exps);

// Closed-form bound term_n <= (1/(2 k_n^2)) * n^{+-1/r} for the even
// sub-family (|u| <= 4 k_n and |w| <= (2 k_n)^{-3} on the block).
double even_term_bound(std::int64_t n, const Exponents& exps);

// Shared compactness claims of the example family (all three views have the
// same asymptotics). The verbatim q < p series is only claimed convergent
// when its odd-part exponent is < -1; otherwise no claim is made.
CompactnessTail example_compactness_tail(const Exponents& exps);

// One series row: per-atom term and compensated running sum.
struct SeriesRow {
  std::int64_t index = 0;
  double term = 0.0;
  double partial = 0.0;
};

// Atoms 1..count mapped through the same stat formulas as atom_stats /
// compact_block_stats (block_index = family index - 1). Generator output is
// validated: masses must be positive, moments finite and nonnegative.
std::vector<AtomStats> family_atom_stats(const AtomFamily& family, const Exponents& exps,
                                         std::int64_t count);
std::vector<CompactBlockStats> family_compact_stats(const AtomFamily& family,
                                                    const Exponents& exps, std::int64_t count);

// Series terms and running partial sums for atoms 1..count. Requires
// count >= 1 and a regime with p != q.
std::vector<SeriesRow> partial_sums(const AtomFamily& family, const Exponents& exps,
                                    std::int64_t count);

// Cell-level stats (p = 1 sufficiency route) for the cells of the first
// `atom_count` merged example atoms; every value is id^{-2q'}.
std::vector<SigmaCellStats> example_sigma_cells(std::int64_t atom_count, const Exponents& exps);

// Least-squares slope of log(term) against log(index) over rows with
// lo <= index <= hi and term > 0. Needs at least 8 usable rows. Heuristic
// evidence only; never feeds a verdict.
double decay_fit(std::span<const SeriesRow> rows, std::int64_t lo, std::int64_t hi);

// Explicit truncation of the merged example family: a concrete space, a
// block per atom (in merged order), and the weights as expressions.
struct Materialized {
  AtomicSpace space;
  SubAlgebra alg;
  Weight u;
  Weight w;
};

Materialized materialize_example(std::int64_t atom_count);

}  // namespace wce
