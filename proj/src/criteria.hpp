#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "exponents.hpp"
#include "wce_op.hpp"

namespace wce {

enum class Status { Nuclear, NotNuclear, Compact, NotCompact, Zero, Inconclusive };

const char* status_name(Status s) noexcept;

// Flags attached to verdicts / reports. Kept as a bitmask so the C API can
// pass them through unchanged.
enum VerdictFlag : unsigned {
  kFlagVerbatimTypoSuspected = 1u << 0,  // q<p compactness series evaluated with exponents as stated, suspected misprint
  kFlagHeuristicTail = 1u << 1,          // log-log decay fit attached as heuristic evidence only
  kFlagQ1Boundary = 1u << 2,             // q = 1 admitted into the nuclearity series criterion
  kFlagNonAtomicPart = 1u << 3,          // verdict forced by joint support on a non-atomic panel
  kFlagFiniteTruncationExact = 1u << 4,  // caller declared the truncation complete (tail = 0)
  kFlagImpliedByNuclear = 1u << 5,       // compactness upgraded because nuclearity was certified
  kFlagZeroOnTruncation = 1u << 6,       // every criterion value vanishes on the truncation
};

const char* flag_name(unsigned single_flag) noexcept;
std::vector<std::string> flag_names(unsigned flags);

struct Verdict {
  Status status = Status::Inconclusive;
  double partial_sum = 0.0;  // series evidence, or the last limit-expression value
  std::int64_t terms_used = 0;
  std::optional<double> tail_bound;  // certified tail (series verdicts only)
  std::optional<double> total;       // partial_sum + tail_bound
  unsigned flags = 0;
  std::vector<std::string> notes;
};

// Caller statement about everything beyond the truncated atom list.
// `divergent` marks the series as known to diverge; otherwise `value` is a
// finite upper bound for the remaining terms (0 = the truncation is exact).
struct TailBound {
  double value = 0.0;
  bool divergent = false;
};

// Caller statements consumed by the compactness criteria. A truncation can
// never certify a limit or a series by itself; these assertions (or
// completeness of the atom list) supply the missing tail knowledge.
struct CompactnessTail {
  bool complete = false;
  std::optional<bool> series_converges;       // series-type conditions
  std::optional<bool> limit_vanishes;         // block-level limit conditions
  std::optional<bool> sigma_limit_vanishes;   // cell-level limit (p = 1 sufficiency)
};

// Which characterization applies. Auto derives the case from the exponents.
enum class CompactnessMode {
  Auto,
  SeriesQBelowP,   // 1 < q < p : series condition (evaluated verbatim, flagged)
  LimitPBelowQ,    // 1 < p < q : vanishing-limit condition
  QIsOne,          // q = 1 < p : series condition
  PIsOne,          // p = 1 < q : necessary (block) and sufficient (cell) conditions
};

struct CompactnessInput {
  std::vector<CompactBlockStats> blocks;
  std::optional<std::vector<SigmaCellStats>> sigma_cells;  // p = 1 sufficiency data
};

// True iff no panel carries both weights: at panel resolution this is the
// statement (E|u|^p')^{1/p'} (E|w|^q)^{1/q} = 0 a.e. on the non-atomic part.
bool nonatomic_condition(std::span<const NonAtomicPanel> panels);
bool nonatomic_condition(const SubAlgebra& alg);

// Nuclearity via the atom series sum_i eu^{1/p'} ew^{1/q} mu^{+-1/r}:
//  - NotNuclear when the non-atomic condition fails or the caller marks the
//    tail divergent;
//  - Nuclear when a finite tail bound is supplied (total = S_N + tail), or
//    when every term vanishes on the truncation (zero operator);
//  - Inconclusive otherwise (evidence: S_N, terms_used).
// Requires p != q; q = 1 is admitted and flagged.
Verdict nuclearity_verdict(std::span<const AtomStats> stats, const Exponents& exps,
                           bool nonatomic_ok, std::optional<TailBound> tail);

Verdict compactness_verdict(const CompactnessInput& input, const Exponents& exps,
                            bool nonatomic_ok, CompactnessMode mode = CompactnessMode::Auto,
                            const CompactnessTail& tail = {});

// False exactly on the contradictory pair (Nuclear, NotCompact).
bool consistency_check(const Verdict& nuclear, const Verdict& compact) noexcept;

}  // namespace wce
