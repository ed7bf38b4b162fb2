#include "analysis.hpp"

#include <algorithm>
#include <cmath>

namespace wce {

namespace {

OracleReport run_oracle_checks(const Weight& u, const Weight& w, const SubAlgebra& alg,
                               const Exponents& exps, const AtomicSpace& space,
                               const std::vector<AtomStats>& stats) {
  OracleReport r;
  const NormBracket nb = operator_norm(u, w, alg, exps, space);
  r.formula = nb.formula;
  r.ascent = nb.ascent;
  r.nuclear_bound = nuclear_bound(u, w, alg, exps, space);
  const auto blocks = alg.blocks();
  double worst = 0.0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const double bn = block_norm(u, w, blocks[b], exps, space);
    const double denom = std::max(std::abs(stats[b].term), 1e-300);
    worst = std::max(worst, std::abs(bn - stats[b].term) / denom);
  }
  r.max_block_residual = worst;
  if (exps.p > 1.0 && exps.regime != Regime::Equal && r.formula > 0.0) {
    r.pietsch_residual = pietsch_identity_check(u, w, alg, exps, space);
  }
  return r;
}

void upgrade_compactness(const Verdict& nuclearity, Verdict& compactness) {
  if (nuclearity.status == Status::Nuclear && compactness.status == Status::Inconclusive) {
    compactness.status = Status::Compact;
    compactness.flags |= kFlagImpliedByNuclear;
    compactness.notes.emplace_back("upgraded: certified nuclearity implies compactness");
  }
}

}  // namespace

AnalysisResult analyze_space(const AtomicSpace& space, const SubAlgebra& alg, const Weight& u,
                             const Weight& w, const AnalysisOptions& options) {
  AnalysisResult res;
  res.exps = Exponents::make(options.p, options.q);
  res.stats = atom_stats(u, w, alg, res.exps, space);
  res.factors = factor_norms(u, w, alg, res.exps, space);
  res.nuclear_bound = nuclear_bound(u, w, alg, res.exps, space);

  const bool nonatomic_ok = nonatomic_condition(alg);
  res.nuclearity = nuclearity_verdict(res.stats, res.exps, nonatomic_ok, options.tail);

  CompactnessInput input;
  input.blocks = compact_block_stats(u, w, alg, res.exps, space);
  if (res.exps.p == 1.0 && res.exps.q > 1.0) {
    input.sigma_cells = sigma_cell_stats(u, w, res.exps, space);
  }
  res.compactness = compactness_verdict(input, res.exps, nonatomic_ok, CompactnessMode::Auto,
                                        options.compact_tail);
  upgrade_compactness(res.nuclearity, res.compactness);
  res.consistent = consistency_check(res.nuclearity, res.compactness);

  if (options.run_oracle) {
    res.oracle = run_oracle_checks(u, w, alg, res.exps, space, res.stats);
  }
  return res;
}

ExampleResult analyze_example(const AnalysisOptions& options, std::int64_t terms) {
  if (terms < 1) {
    fail(ErrorCode::BadArgument, "example analysis needs at least one atom");
  }
  ExampleResult res;
  res.exps = Exponents::make(options.p, options.q);
  res.terms = terms;

  const ExampleMergedFamily merged;
  const ExampleOddFamily odd;
  const ExampleEvenFamily even;

  const std::vector<AtomStats> stats = family_atom_stats(merged, res.exps, terms);
  std::optional<TailBound> tail = options.tail;
  if (!tail) {
    tail = merged.tail_bound(terms, res.exps);
  }
  res.nuclearity = nuclearity_verdict(stats, res.exps, /*nonatomic_ok=*/true, tail);

  CompactnessInput input;
  input.blocks = family_compact_stats(merged, res.exps, terms);
  if (res.exps.p == 1.0 && res.exps.q > 1.0) {
    input.sigma_cells =
        example_sigma_cells(std::min<std::int64_t>(terms, kExampleReportRows), res.exps);
  }
  // Family statements fill whatever the caller left open.
  const CompactnessTail family_tail = merged.compactness_tail(res.exps);
  CompactnessTail ct = options.compact_tail;
  if (!ct.series_converges) {
    ct.series_converges = family_tail.series_converges;
  }
  if (!ct.limit_vanishes) {
    ct.limit_vanishes = family_tail.limit_vanishes;
  }
  if (!ct.sigma_limit_vanishes) {
    ct.sigma_limit_vanishes = family_tail.sigma_limit_vanishes;
  }
  res.compactness =
      compactness_verdict(input, res.exps, /*nonatomic_ok=*/true, CompactnessMode::Auto, ct);
  upgrade_compactness(res.nuclearity, res.compactness);
  res.consistent = consistency_check(res.nuclearity, res.compactness);

  const std::int64_t odd_count = (terms + 1) / 2;
  const std::int64_t even_count = terms / 2;
  {
    const std::vector<SeriesRow> rows = partial_sums(odd, res.exps, odd_count);
    res.odd = SubSeries{"odd", odd_count, rows.back().partial, odd_tail_bound(odd_count)};
  }
  if (even_count >= 1) {
    const std::vector<SeriesRow> rows = partial_sums(even, res.exps, even_count);
    res.even = SubSeries{"even", even_count, rows.back().partial,
                         even_tail_bound(even_count, res.exps)};
    try {
      res.decay_slope = decay_fit(rows, 20, 200);
    } catch (const Error&) {
      // window not populated enough: no slope attached
    }
  } else {
    res.even = SubSeries{"even", 0, 0.0, even_tail_bound(0, res.exps)};
  }
  if (res.decay_slope) {
    res.nuclearity.flags |= kFlagHeuristicTail;
    res.nuclearity.notes.emplace_back(
        "log-log decay slope attached as heuristic evidence only");
  }

  res.stats.assign(stats.begin(),
                   stats.begin() + std::min<std::int64_t>(terms, kExampleReportRows));

  if (options.run_oracle) {
    const std::int64_t m = std::min<std::int64_t>(terms, kExampleOracleAtoms);
    const Materialized mat = materialize_example(m);
    const std::vector<AtomStats> mstats = atom_stats(mat.u, mat.w, mat.alg, res.exps, mat.space);
    res.oracle = run_oracle_checks(mat.u, mat.w, mat.alg, res.exps, mat.space, mstats);
  }
  return res;
}

}  // namespace wce
