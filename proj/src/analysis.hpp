#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "asymptotic.hpp"
#include "criteria.hpp"
#include "exponents.hpp"
#include "measure.hpp"
#include "oracle.hpp"
#include "wce_op.hpp"

namespace wce {

// Cross-checks computed on demand: the operator-norm bracket, the nuclear
// bound of the truncation, the worst relative gap between block norms and
// series terms, and (p > 1) the test-function identity residual.
struct OracleReport {
  double formula = 0.0;
  double ascent = 0.0;
  double nuclear_bound = 0.0;
  double max_block_residual = 0.0;
  std::optional<double> pietsch_residual;
};

struct AnalysisOptions {
  double p = 2.0;
  double q = 3.0;
  // Caller statement about the series tail beyond the given atoms; nullopt
  // means unknown (verdicts cap at Inconclusive unless the data vanishes).
  std::optional<TailBound> tail;
  // Caller statements consumed by the compactness criteria.
  CompactnessTail compact_tail;
  bool run_oracle = false;
};

struct AnalysisResult {
  Exponents exps;
  std::vector<AtomStats> stats;
  std::vector<RankOneFactor> factors;
  double nuclear_bound = 0.0;
  Verdict nuclearity;
  Verdict compactness;
  bool consistent = true;
  std::optional<OracleReport> oracle;
};

// Full pipeline on an explicit space: stats, factor norms, both verdicts
// (with the nuclear => compact upgrade), the consistency check, and the
// oracle suite when requested.
AnalysisResult analyze_space(const AtomicSpace& space, const SubAlgebra& alg, const Weight& u,
                             const Weight& w, const AnalysisOptions& options);

// Summary of one sub-series of the built-in example.
struct SubSeries {
  std::string name;
  std::int64_t terms = 0;
  double partial_sum = 0.0;
  double tail_bound = 0.0;
};

// Stat rows retained in example results (the full series is summarized by
// the partial sums and tail bounds; reports stay bounded).
inline constexpr std::int64_t kExampleReportRows = 200;
// Atoms materialized for the example oracle run.
inline constexpr std::int64_t kExampleOracleAtoms = 60;

struct ExampleResult {
  Exponents exps;
  std::int64_t terms = 0;
  std::vector<AtomStats> stats;  // first kExampleReportRows rows
  Verdict nuclearity;
  Verdict compactness;
  bool consistent = true;
  SubSeries odd;
  SubSeries even;
  // Least-squares log-log slope of the even terms over indices [20, 200];
  // heuristic evidence only.
  std::optional<double> decay_slope;
  std::optional<OracleReport> oracle;  // run on a materialized truncation
};

// Pipeline for the built-in example family over its first `terms` merged
// atoms. The family supplies certified tail bounds and limit/series
// statements; options.tail / options.compact_tail override them when set.
ExampleResult analyze_example(const AnalysisOptions& options, std::int64_t terms);

}  // namespace wce
