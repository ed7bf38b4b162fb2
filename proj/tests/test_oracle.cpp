#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "errors.hpp"
#include "exponents.hpp"
#include "kahan.hpp"
#include "measure.hpp"
#include "oracle.hpp"
#include "testutil.hpp"
#include "wce_op.hpp"

using wce::AtomicSpace;
using wce::ErrorCode;
using wce::Exponents;
using wce::SubAlgebra;
using wce::Weight;
using wcetest::GenOptions;
using wcetest::random_exponents;
using wcetest::random_problem;
using wcetest::RegimePick;
using wcetest::rel_err;
using wcetest::thrown_code;

TEST_CASE("block norm matches a hand computation") {
  AtomicSpace s({{1, 1.0}, {2, 3.0}});
  SubAlgebra alg(s, {{1, 2}});
  Weight u = Weight::table({{1, 2.0}, {2, -1.0}});
  Weight w = Weight::table({{1, 0.5}, {2, 1.5}});
  const Exponents e = Exponents::make(2.0, 3.0);
  // ||u chi||_2 = sqrt(4*1 + 1*3), ||w chi||_3 = (0.125*1 + 3.375*3)^(1/3)
  const double want =
      std::sqrt(7.0) * std::cbrt(0.125 + 3.375 * 3.0) / 4.0;
  CHECK(rel_err(wce::block_norm(u, w, alg.blocks()[0], e, s), want) < 1e-14);
}

TEST_CASE("block norm equals the series term on random data") {
  std::mt19937 rng(90210U);
  for (int iter = 0; iter < 400; ++iter) {
    const auto prob = random_problem(rng, GenOptions{});
    const Exponents e = random_exponents(rng, RegimePick::Any);
    const auto stats = wce::atom_stats(prob.u, prob.w, prob.alg, e, prob.space);
    for (std::size_t b = 0; b < prob.alg.block_count(); ++b) {
      const double bn = wce::block_norm(prob.u, prob.w, prob.alg.blocks()[b], e, prob.space);
      CAPTURE(iter);
      CAPTURE(b);
      CHECK(rel_err(bn, stats[b].term) < 1e-12);
    }
  }
}

TEST_CASE("operator norm on a single block is the block norm") {
  AtomicSpace s({{1, 1.0}, {2, 3.0}});
  SubAlgebra alg(s, {{1, 2}});
  Weight u = Weight::table({{1, 2.0}, {2, -1.0}});
  Weight w = Weight::table({{1, 0.5}, {2, 1.5}});
  for (const auto& [p, q] :
       std::vector<std::pair<double, double>>{{2.0, 3.0}, {3.0, 2.0}, {1.0, 2.0}}) {
    const Exponents e = Exponents::make(p, q);
    const double bn = wce::block_norm(u, w, alg.blocks()[0], e, s);
    const auto nb = wce::operator_norm(u, w, alg, e, s);
    CAPTURE(p);
    CAPTURE(q);
    CHECK(rel_err(nb.formula, bn) < 1e-13);
    CHECK(nb.ascent <= nb.formula * (1.0 + 1e-10));
    CHECK(nb.ascent >= nb.formula * (1.0 - 1e-7));
  }
}

TEST_CASE("formula side aggregates block norms by regime") {
  std::mt19937 rng(5551212);
  GenOptions gen;
  gen.allow_zero_values = false;
  for (int iter = 0; iter < 60; ++iter) {
    const auto prob = random_problem(rng, gen);
    {
      const Exponents e = random_exponents(rng, RegimePick::Larger);
      double sup = 0.0;
      for (const auto& blk : prob.alg.blocks()) {
        sup = std::max(sup, wce::block_norm(prob.u, prob.w, blk, e, prob.space));
      }
      const auto nb = wce::operator_norm(prob.u, prob.w, prob.alg, e, prob.space);
      CHECK(rel_err(nb.formula, sup) < 1e-12);
    }
    {
      const Exponents e = random_exponents(rng, RegimePick::Smaller);
      wce::KahanSum pow_sum;
      for (const auto& blk : prob.alg.blocks()) {
        pow_sum.add(std::pow(wce::block_norm(prob.u, prob.w, blk, e, prob.space), e.r));
      }
      const double want = std::pow(pow_sum.value(), e.inv_r);
      const auto nb = wce::operator_norm(prob.u, prob.w, prob.alg, e, prob.space);
      CHECK(rel_err(nb.formula, want) < 1e-11);
    }
  }
}

TEST_CASE("ascent certifies the formula value from below") {
  std::mt19937 rng(777);
  GenOptions gen;
  gen.max_blocks = 8;
  gen.max_cells = 5;
  gen.allow_zero_values = false;
  for (int iter = 0; iter < 40; ++iter) {
    const auto prob = random_problem(rng, gen);
    for (const RegimePick pick : {RegimePick::Smaller, RegimePick::Larger}) {
      const Exponents e = random_exponents(rng, pick);
      const auto nb = wce::operator_norm(prob.u, prob.w, prob.alg, e, prob.space);
      CAPTURE(iter);
      CAPTURE(e.p);
      CAPTURE(e.q);
      CHECK(nb.ascent <= nb.formula * (1.0 + 1e-10));
      CHECK(nb.ascent >= nb.formula * (1.0 - 1e-6));
    }
  }
}

TEST_CASE("p = 1 norm via point masses") {
  // ||T||_{1->q} = sup_x |w-part| ... realized by a point mass; compare the
  // bracket against a direct enumeration of normalized point masses.
  AtomicSpace s({{1, 0.5}, {2, 2.0}, {3, 1.0}, {4, 0.25}});
  SubAlgebra alg(s, {{1, 2}, {3, 4}});
  Weight u = Weight::table({{1, 1.5}, {2, -0.5}, {3, 2.0}, {4, 1.0}});
  Weight w = Weight::table({{1, 0.75}, {2, 1.0}, {3, -0.25}, {4, 0.5}});
  const Exponents e = Exponents::make(1.0, 2.5);
  const auto nb = wce::operator_norm(u, w, alg, e, s);
  double best = 0.0;
  for (const auto& cell : s.cells()) {
    std::vector<std::pair<std::int64_t, double>> entries;
    for (const auto& c : s.cells()) {
      entries.push_back({c.id, c.id == cell.id ? 1.0 / c.mass : 0.0});
    }
    Weight g = Weight::table(entries);
    const double image = wce::lp_norm(wce::apply(u, w, alg, g, s), e.q, s);
    best = std::max(best, image);
  }
  CHECK(rel_err(nb.ascent, best) < 1e-12);
  CHECK(nb.ascent <= nb.formula * (1.0 + 1e-12));
  CHECK(nb.ascent >= nb.formula * (1.0 - 1e-12));
}

TEST_CASE("zero operator gives a zero bracket") {
  AtomicSpace s({{1, 1.0}, {2, 2.0}});
  SubAlgebra alg(s, {{1}, {2}});
  Weight u = Weight::table({{1, 0.0}, {2, 0.0}});
  Weight w = Weight::table({{1, 1.0}, {2, 1.0}});
  const auto nb = wce::operator_norm(u, w, alg, Exponents::make(2.0, 3.0), s);
  CHECK(nb.formula == 0.0);
  CHECK(nb.ascent == 0.0);
}

TEST_CASE("Hilbert-space trace norm equals the nuclear bound") {
  AtomicSpace s({{1, 1.0}, {2, 3.0}, {3, 0.5}});
  SubAlgebra alg(s, {{1, 2}, {3}});
  Weight u = Weight::table({{1, 2.0}, {2, -1.0}, {3, 1.0}});
  Weight w = Weight::table({{1, 0.5}, {2, 1.5}, {3, -2.0}});
  const Exponents e = Exponents::make(2.0, 2.0);
  const double tn = wce::trace_norm_hilbert(u, w, alg, s);
  const double nbound = wce::nuclear_bound(u, w, alg, e, s);
  CHECK(rel_err(tn, nbound) < 1e-12);

  std::mt19937 rng(321);
  GenOptions gen;
  gen.max_blocks = 6;
  gen.max_cells = 6;
  for (int iter = 0; iter < 80; ++iter) {
    const auto prob = random_problem(rng, gen);
    const double t = wce::trace_norm_hilbert(prob.u, prob.w, prob.alg, prob.space);
    const double nb = wce::nuclear_bound(prob.u, prob.w, prob.alg, e, prob.space);
    CAPTURE(iter);
    CHECK(rel_err(t, nb) < 1e-10);
  }
}

TEST_CASE("trace norm refuses oversized dense problems") {
  std::vector<wce::Cell> cells;
  std::vector<std::int64_t> ids;
  for (std::int64_t i = 1; i <= 513; ++i) {
    cells.push_back({i, 1.0});
    ids.push_back(i);
  }
  AtomicSpace s(cells);
  SubAlgebra alg(s, {ids});
  Weight u = Weight::expr("1");
  Weight w = Weight::expr("1");
  CHECK(thrown_code([&] { (void)wce::trace_norm_hilbert(u, w, alg, s); }) ==
        ErrorCode::BadArgument);
}

TEST_CASE("test functions sit in the unit ball and satisfy the norm identity") {
  std::mt19937 rng(846);
  GenOptions gen;
  gen.allow_zero_values = false;
  for (int iter = 0; iter < 40; ++iter) {
    const auto prob = random_problem(rng, gen);
    for (const RegimePick pick : {RegimePick::Smaller, RegimePick::Larger}) {
      const Exponents e = random_exponents(rng, pick);
      const auto stats = wce::atom_stats(prob.u, prob.w, prob.alg, e, prob.space);
      const auto nb = wce::operator_norm(prob.u, prob.w, prob.alg, e, prob.space);
      REQUIRE(nb.formula > 0.0);
      const auto fns =
          wce::pietsch_test_functions(prob.u, prob.w, prob.alg, e, prob.space, nb.formula);
      REQUIRE(fns.size() == prob.alg.block_count());
      for (const auto& tf : fns) {
        const double fnorm = wce::lp_norm(tf.values, e.p, prob.space);
        const double want_fnorm =
            std::pow(stats[tf.block_index].term / nb.formula, e.p_conj / e.p);
        CHECK(fnorm <= 1.0 + 1e-10);
        CHECK(rel_err(fnorm, want_fnorm) < 1e-10);
        const double image =
            wce::lp_norm(wce::apply(prob.u, prob.w, prob.alg, tf.values, prob.space), e.q,
                         prob.space);
        const double want_image =
            std::pow(nb.formula, -e.p_conj / e.p) * std::pow(stats[tf.block_index].term, e.p_conj);
        CHECK(rel_err(image, want_image) < 1e-10);
      }
      CHECK(wce::pietsch_identity_check(prob.u, prob.w, prob.alg, e, prob.space) < 1e-10);
    }
  }
}

TEST_CASE("test functions skip blocks with a vanishing term") {
  AtomicSpace s({{1, 1.0}, {2, 2.0}, {3, 1.0}});
  SubAlgebra alg(s, {{1}, {2}, {3}});
  Weight u = Weight::table({{1, 1.0}, {2, 0.0}, {3, 2.0}});
  Weight w = Weight::table({{1, 1.0}, {2, 1.0}, {3, 0.5}});
  const Exponents e = Exponents::make(3.0, 2.0);
  const auto nb = wce::operator_norm(u, w, alg, e, s);
  const auto fns = wce::pietsch_test_functions(u, w, alg, e, s, nb.formula);
  REQUIRE(fns.size() == 2);
  CHECK(fns[0].block_index == 0);
  CHECK(fns[1].block_index == 2);
}

TEST_CASE("test functions reject p = 1 and the zero operator") {
  AtomicSpace s({{1, 1.0}});
  SubAlgebra alg(s, {{1}});
  Weight one = Weight::table({{1, 1.0}});
  Weight zero = Weight::table({{1, 0.0}});
  CHECK(thrown_code([&] {
          (void)wce::pietsch_test_functions(one, one, alg, Exponents::make(1.0, 2.0), s, 1.0);
        }) == ErrorCode::InvalidExponent);
  CHECK(thrown_code([&] {
          (void)wce::pietsch_identity_check(zero, one, alg, Exponents::make(2.0, 3.0), s);
        }) == ErrorCode::ZeroOperator);
}
