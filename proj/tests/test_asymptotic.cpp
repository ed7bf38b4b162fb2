#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "analysis.hpp"
#include "asymptotic.hpp"
#include "errors.hpp"
#include "exponents.hpp"
#include "kahan.hpp"
#include "testutil.hpp"
#include "wce_op.hpp"

using wce::AtomStats;
using wce::ErrorCode;
using wce::ExampleEvenFamily;
using wce::ExampleMergedFamily;
using wce::ExampleOddFamily;
using wce::Exponents;
using wce::SeriesRow;
using wce::Status;
using wcetest::rel_err;
using wcetest::thrown_code;

namespace {

double loop_power_sum(double k, std::int64_t n, double e) {
  wce::KahanSum s;
  for (std::int64_t j = 0; j < n; ++j) {
    s.add(std::pow(k + static_cast<double>(j), e));
  }
  return s.value();
}

}  // namespace

TEST_CASE("power sum: exact path matches a direct loop") {
  CHECK(rel_err(wce::power_sum(2.5, 100, -2.7), loop_power_sum(2.5, 100, -2.7)) < 1e-15);
  CHECK(rel_err(wce::power_sum(7.0, 1, 3.0), 343.0) < 1e-15);
  CHECK(wce::power_sum(3.0, 0, 2.0) == 0.0);
  CHECK(thrown_code([] { (void)wce::power_sum(0.0, 5, 2.0); }) == ErrorCode::BadArgument);
  CHECK(thrown_code([] { (void)wce::power_sum(-1.0, 5, 2.0); }) == ErrorCode::BadArgument);
}

TEST_CASE("power sum: Euler-Maclaurin path agrees with compensated summation") {
  // bases of the size the even blocks actually produce on this path
  const double k = 2.0e6 + 7.0;
  const std::int64_t n = 5000;
  for (const double e : {-4.5, -9.0, 2.0, 1.5, -1.0, -2.0}) {
    CAPTURE(e);
    CHECK(rel_err(wce::power_sum(k, n, e), loop_power_sum(k, n, e)) < 1e-12);
  }
}

TEST_CASE("even power sum") {
  CHECK(rel_err(wce::even_power_sum(2.0, 2, 2.0), 16.0 + 36.0) < 1e-15);
  const double k = 3.0e6 + 1.0;
  const std::int64_t n = 4000;
  wce::KahanSum s;
  for (std::int64_t j = 0; j < n; ++j) {
    s.add(std::pow(2.0 * (k + static_cast<double>(j)), -6.0));
  }
  CHECK(rel_err(wce::even_power_sum(k, n, -6.0), s.value()) < 1e-12);
}

TEST_CASE("even block starts partition the even integers") {
  CHECK(wce::even_block_start(1) == 1);
  CHECK(wce::even_block_start(2) == 2);
  CHECK(wce::even_block_start(3) == 4);
  CHECK(wce::even_block_start(4) == 7);
  for (std::int64_t n = 1; n < 200; ++n) {
    CHECK(wce::even_block_start(n + 1) == wce::even_block_start(n) + n);
  }
  CHECK(thrown_code([] { (void)wce::even_block_start(0); }) == ErrorCode::BadArgument);
}

TEST_CASE("odd family terms are (2k-1)^{-2} in every regime") {
  const ExampleOddFamily odd;
  for (const auto& [p, q] : std::vector<std::pair<double, double>>{
           {2.0, 3.0}, {3.0, 2.0}, {1.0, 2.0}, {2.0, 1.0}, {1.5, 4.0}}) {
    const Exponents e = Exponents::make(p, q);
    const auto stats = wce::family_atom_stats(odd, e, 6);
    for (std::size_t i = 0; i < stats.size(); ++i) {
      const double m = 2.0 * static_cast<double>(i + 1) - 1.0;
      CAPTURE(p);
      CAPTURE(q);
      CHECK(rel_err(stats[i].term, 1.0 / (m * m)) < 1e-12);
    }
  }
}

TEST_CASE("even family reproduces the two-cell worked example") {
  const ExampleEvenFamily even;
  CHECK(rel_err(even.moment_u(2, 2.0), 26.0) < 1e-14);
  CHECK(rel_err(even.moment_w(2, 3.0), (std::pow(4.0, -9.0) + std::pow(6.0, -9.0)) / 2.0) <
        1e-14);
  CHECK(even.mass(2) == doctest::Approx(2.0));
  CHECK(even.sup_u(2) == doctest::Approx(6.0));
  const Exponents e = Exponents::make(2.0, 3.0);
  const auto stats = wce::family_atom_stats(even, e, 2);
  const double d = std::sqrt(26.0) * std::pow(even.moment_w(2, 3.0), 1.0 / 3.0);
  CHECK(rel_err(stats[1].term, d * std::pow(2.0, -1.0 / 6.0)) < 1e-13);
}

TEST_CASE("merged family interleaves the two sub-families") {
  const ExampleMergedFamily merged;
  const ExampleOddFamily odd;
  const ExampleEvenFamily even;
  const Exponents e = Exponents::make(3.0, 2.0);
  const auto m = wce::family_atom_stats(merged, e, 10);
  const auto o = wce::family_atom_stats(odd, e, 5);
  const auto ev = wce::family_atom_stats(even, e, 5);
  for (std::size_t i = 1; i <= 10; ++i) {
    const AtomStats& got = m[i - 1];
    const AtomStats& want = (i % 2 == 1) ? o[(i + 1) / 2 - 1] : ev[i / 2 - 1];
    CHECK(rel_err(got.term, want.term) < 1e-15);
    CHECK(rel_err(got.mass, want.mass) < 1e-15);
  }
}

TEST_CASE("generator agrees with the materialized truncation") {
  const ExampleMergedFamily merged;
  const wce::Materialized mat = wce::materialize_example(40);
  for (const auto& [p, q] : std::vector<std::pair<double, double>>{
           {2.0, 3.0}, {3.0, 2.0}, {1.0, 2.0}, {2.0, 1.0}}) {
    const Exponents e = Exponents::make(p, q);
    const auto fam = wce::family_atom_stats(merged, e, 40);
    const auto mat_stats = wce::atom_stats(mat.u, mat.w, mat.alg, e, mat.space);
    REQUIRE(fam.size() == mat_stats.size());
    for (std::size_t i = 0; i < fam.size(); ++i) {
      CAPTURE(i);
      CHECK(rel_err(fam[i].mass, mat_stats[i].mass) < 1e-12);
      CHECK(rel_err(fam[i].eu, mat_stats[i].eu) < 1e-12);
      CHECK(rel_err(fam[i].ew, mat_stats[i].ew) < 1e-12);
      CHECK(rel_err(fam[i].term, mat_stats[i].term) < 1e-12);
    }
  }
}

TEST_CASE("tail bounds dominate observed continuation of the series") {
  const ExampleMergedFamily merged;
  for (const auto& [p, q] : std::vector<std::pair<double, double>>{
           {2.0, 3.0}, {3.0, 2.0}, {1.5, 1.2}, {4.0, 1.3}, {1.0, 3.0}, {3.0, 1.0}}) {
    const Exponents e = Exponents::make(p, q);
    for (const std::int64_t n : {5LL, 50LL, 500LL}) {
      const auto rows = wce::partial_sums(merged, e, 4 * n);
      const double continuation =
          rows[static_cast<std::size_t>(4 * n - 1)].partial -
          rows[static_cast<std::size_t>(n - 1)].partial;
      CAPTURE(p);
      CAPTURE(q);
      CAPTURE(n);
      CHECK(continuation <= wce::example_tail_bound(n, e));
    }
  }
}

TEST_CASE("per-term bound holds for the even sub-family") {
  const ExampleEvenFamily even;
  for (const auto& [p, q] :
       std::vector<std::pair<double, double>>{{2.0, 3.0}, {3.0, 2.0}}) {
    const Exponents e = Exponents::make(p, q);
    const auto stats = wce::family_atom_stats(even, e, 2000);
    for (std::size_t i = 0; i < stats.size(); ++i) {
      const std::int64_t n = static_cast<std::int64_t>(i) + 1;
      CHECK(stats[i].term <=
            wce::even_term_bound(n, e) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("partial sums validate their inputs") {
  const ExampleOddFamily odd;
  CHECK(thrown_code([&] { (void)wce::partial_sums(odd, Exponents::make(2.0, 3.0), 0); }) ==
        ErrorCode::BadArgument);
  CHECK(thrown_code([&] { (void)wce::partial_sums(odd, Exponents::make(2.0, 2.0), 5); }) ==
        ErrorCode::RegimeUnsupported);
  const auto rows = wce::partial_sums(odd, Exponents::make(2.0, 3.0), 50);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].partial >= rows[i - 1].partial);
    CHECK(rows[i].index == static_cast<std::int64_t>(i) + 1);
  }
}

TEST_CASE("sigma cells of the example") {
  const Exponents e = Exponents::make(1.0, 2.0);  // q' = 2
  const auto cells = wce::example_sigma_cells(4, e);
  // atoms: {1}, {2}, {3}, {4,6}
  REQUIRE(cells.size() == 5);
  CHECK(cells[0].cell_id == 1);
  CHECK(cells[1].cell_id == 2);
  CHECK(cells[2].cell_id == 3);
  CHECK(cells[3].cell_id == 4);
  CHECK(cells[4].cell_id == 6);
  for (const auto& c : cells) {
    CHECK(rel_err(c.value, std::pow(static_cast<double>(c.cell_id), -4.0)) < 1e-14);
    CHECK(c.mass == 1.0);
  }
  CHECK(thrown_code([&] { (void)wce::example_sigma_cells(4, Exponents::make(1.0, 1.0)); }) ==
        ErrorCode::InvalidExponent);
}

TEST_CASE("decay fit recovers exact power laws") {
  std::vector<SeriesRow> rows;
  for (std::int64_t i = 1; i <= 300; ++i) {
    rows.push_back(SeriesRow{i, 7.0 * std::pow(static_cast<double>(i), -3.5), 0.0});
  }
  CHECK(rel_err(wce::decay_fit(rows, 20, 200), -3.5) < 1e-9);
  // rows outside the window must not influence the fit
  rows[0].term = 1e9;
  CHECK(rel_err(wce::decay_fit(rows, 20, 200), -3.5) < 1e-9);
  std::vector<SeriesRow> few(rows.begin(), rows.begin() + 5);
  CHECK(thrown_code([&] { (void)wce::decay_fit(few, 1, 300); }) == ErrorCode::InsufficientData);
}

TEST_CASE("family compactness claims per exponent range") {
  CHECK(*wce::example_compactness_tail(Exponents::make(2.0, 1.0)).series_converges);
  const auto p1 = wce::example_compactness_tail(Exponents::make(1.0, 2.0));
  CHECK(*p1.limit_vanishes);
  CHECK(*p1.sigma_limit_vanishes);
  CHECK(*wce::example_compactness_tail(Exponents::make(2.0, 3.0)).limit_vanishes);
  CHECK(*wce::example_compactness_tail(Exponents::make(3.0, 2.0)).series_converges);
  // verbatim series diverges here; the family declines to make any claim
  const auto far = wce::example_compactness_tail(Exponents::make(10.0, 1.1));
  CHECK_FALSE(far.series_converges.has_value());
  CHECK_FALSE(wce::example_compactness_tail(Exponents::make(2.0, 2.0))
                  .series_converges.has_value());
}

TEST_CASE("analyze_space end to end on a complete finite problem") {
  wce::AtomicSpace s({{1, 1.0}, {2, 2.0}, {3, 1.5}});
  wce::SubAlgebra alg(s, {{1, 2}, {3}});
  wce::Weight u = wce::Weight::table({{1, 1.0}, {2, -2.0}, {3, 0.5}});
  wce::Weight w = wce::Weight::table({{1, 0.5}, {2, 1.0}, {3, 2.0}});
  wce::AnalysisOptions opt;
  opt.p = 2.0;
  opt.q = 3.0;
  opt.tail = wce::TailBound{0.0, false};
  opt.compact_tail.complete = true;
  opt.run_oracle = true;
  const wce::AnalysisResult res = wce::analyze_space(s, alg, u, w, opt);
  CHECK(res.nuclearity.status == Status::Nuclear);
  CHECK(res.compactness.status == Status::Compact);
  CHECK(res.consistent);
  CHECK(res.stats.size() == 2);
  CHECK(res.factors.size() == 2);
  CHECK(res.nuclear_bound > 0.0);
  REQUIRE(res.oracle.has_value());
  CHECK(res.oracle->max_block_residual < 1e-12);
  CHECK(res.oracle->formula >= res.oracle->ascent * (1.0 - 1e-9));
  REQUIRE(res.oracle->pietsch_residual.has_value());
  CHECK(*res.oracle->pietsch_residual < 1e-10);
}

TEST_CASE("analyze_space flags joint support on a panel") {
  wce::AtomicSpace s({{1, 1.0}});
  wce::SubAlgebra alg(s, {{1}}, {{"cont", true, true}});
  wce::Weight u = wce::Weight::table({{1, 1.0}});
  wce::Weight w = wce::Weight::table({{1, 1.0}});
  wce::AnalysisOptions opt;
  opt.p = 2.0;
  opt.q = 3.0;
  const wce::AnalysisResult res = wce::analyze_space(s, alg, u, w, opt);
  CHECK(res.nuclearity.status == Status::NotNuclear);
  CHECK(res.compactness.status == Status::NotCompact);
  CHECK((res.nuclearity.flags & wce::kFlagNonAtomicPart) != 0);
  CHECK(res.consistent);
}

TEST_CASE("analyze_example across the exponent cases") {
  wce::AnalysisOptions opt;
  SUBCASE("1 < p < q") {
    opt.p = 2.0;
    opt.q = 3.0;
    const auto res = wce::analyze_example(opt, 2000);
    CHECK(res.nuclearity.status == Status::Nuclear);
    CHECK(res.compactness.status == Status::Compact);
    CHECK(res.consistent);
    CHECK(res.stats.size() == 200);
    CHECK(res.odd.terms == 1000);
    CHECK(res.even.terms == 1000);
    REQUIRE(res.decay_slope.has_value());
    CHECK((res.nuclearity.flags & wce::kFlagHeuristicTail) != 0);
    REQUIRE(res.nuclearity.tail_bound.has_value());
    CHECK(*res.nuclearity.tail_bound > 0.0);
  }
  SUBCASE("1 < q < p") {
    opt.p = 3.0;
    opt.q = 2.0;
    const auto res = wce::analyze_example(opt, 2000);
    CHECK(res.nuclearity.status == Status::Nuclear);
    CHECK(res.compactness.status == Status::Compact);
    CHECK((res.compactness.flags & wce::kFlagVerbatimTypoSuspected) != 0);
    CHECK(res.consistent);
  }
  SUBCASE("p = 1") {
    opt.p = 1.0;
    opt.q = 2.0;
    const auto res = wce::analyze_example(opt, 600);
    CHECK(res.nuclearity.status == Status::Nuclear);
    CHECK(res.compactness.status == Status::Compact);
    CHECK(res.consistent);
  }
  SUBCASE("q = 1") {
    opt.p = 2.0;
    opt.q = 1.0;
    const auto res = wce::analyze_example(opt, 600);
    CHECK(res.nuclearity.status == Status::Nuclear);
    CHECK((res.nuclearity.flags & wce::kFlagQ1Boundary) != 0);
    CHECK(res.compactness.status == Status::Compact);
    CHECK(res.consistent);
  }
  SUBCASE("divergent verbatim series never contradicts nuclearity") {
    opt.p = 10.0;
    opt.q = 1.1;
    const auto res = wce::analyze_example(opt, 600);
    CHECK(res.nuclearity.status == Status::Nuclear);
    CHECK(res.compactness.status == Status::Compact);
    CHECK((res.compactness.flags & wce::kFlagImpliedByNuclear) != 0);
    CHECK(res.consistent);
  }
  SUBCASE("single atom") {
    opt.p = 2.0;
    opt.q = 3.0;
    const auto res = wce::analyze_example(opt, 1);
    CHECK(res.odd.terms == 1);
    CHECK(res.even.terms == 0);
    CHECK(res.nuclearity.status == Status::Nuclear);
    CHECK_FALSE(res.decay_slope.has_value());
  }
  SUBCASE("caller tail statement overrides the family bound") {
    opt.p = 2.0;
    opt.q = 3.0;
    opt.tail = wce::TailBound{0.0, true};
    const auto res = wce::analyze_example(opt, 100);
    CHECK(res.nuclearity.status == Status::NotNuclear);
    CHECK(res.consistent);
  }
  SUBCASE("oracle on the materialized truncation") {
    opt.p = 2.0;
    opt.q = 3.0;
    opt.run_oracle = true;
    const auto res = wce::analyze_example(opt, 300);
    REQUIRE(res.oracle.has_value());
    CHECK(res.oracle->max_block_residual < 1e-11);
    CHECK(res.oracle->formula > 0.0);
    CHECK(res.oracle->ascent <= res.oracle->formula * (1.0 + 1e-9));
    CHECK(res.oracle->ascent >= res.oracle->formula * (1.0 - 1e-3));
  }
  SUBCASE("rejects a nonpositive atom count") {
    CHECK(thrown_code([&] { (void)wce::analyze_example(opt, 0); }) == ErrorCode::BadArgument);
  }
}

TEST_CASE("example nuclearity brackets pi^2/8 through the odd sub-series") {
  wce::AnalysisOptions opt;
  opt.p = 2.0;
  opt.q = 3.0;
  const auto res = wce::analyze_example(opt, 20000);  // odd N = 10000
  const double target = 9.8696044010893586188 / 8.0;  // pi^2 / 8
  CHECK(res.odd.partial_sum <= target);
  CHECK(res.odd.partial_sum + res.odd.tail_bound >= target);
}
