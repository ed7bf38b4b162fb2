#include "asymptotic.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "kahan.hpp"

namespace wce {

namespace {

// (k+delta)^e - k^e without cancellation for delta << k.
double diff_pow(double k, double delta, double e) {
  return std::pow(k, e) * std::expm1(e * std::log1p(delta / k));
}

// sum_{m >= start} m^{-beta} <= start^{-beta} + start^{1-beta}/(beta-1)
// (first term plus integral test), valid for start >= 1, beta > 1.
double zeta_tail(double start, double beta) {
  return std::pow(start, -beta) + std::pow(start, 1.0 - beta) / (beta - 1.0);
}

}  // namespace

double power_sum(double k, std::int64_t n, double e) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    fail(ErrorCode::BadArgument, "power_sum needs a positive finite base k");
  }
  if (n <= 0) {
    return 0.0;
  }
  if (n <= kPowerSumExactCutoff) {
    KahanSum s;
    for (std::int64_t j = 0; j < n; ++j) {
      s.add(std::pow(k + static_cast<double>(j), e));
    }
    return s.value();
  }
  // Euler-Maclaurin with the B_2 and B_4 corrections. The blocks that reach
  // this path have k ~ n^2/2 >= 2e6, so e/k is tiny and the first omitted
  // term is far below double rounding.
  const double d = static_cast<double>(n - 1);
  const double integral =
      (e == -1.0) ? std::log1p(d / k) : diff_pow(k, d, e + 1.0) / (e + 1.0);
  const double ends = 0.5 * (std::pow(k, e) + std::pow(k + d, e));
  const double c2 = (e / 12.0) * diff_pow(k, d, e - 1.0);
  const double c4 = (e * (e - 1.0) * (e - 2.0) / 720.0) * diff_pow(k, d, e - 3.0);
  return integral + ends + c2 - c4;
}

double even_power_sum(double k, std::int64_t n, double e) {
  if (n > 0 && n <= kPowerSumExactCutoff) {
    if (!(k > 0.0) || !std::isfinite(k)) {
      fail(ErrorCode::BadArgument, "even_power_sum needs a positive finite base k");
    }
    KahanSum s;
    for (std::int64_t j = 0; j < n; ++j) {
      s.add(std::pow(2.0 * (k + static_cast<double>(j)), e));
    }
    return s.value();
  }
  return std::pow(2.0, e) * power_sum(k, n, e);
}

// ---------------------------------------------------------------------------
// Example family
// ---------------------------------------------------------------------------

namespace {

double odd_point(std::int64_t i) { return 2.0 * static_cast<double>(i) - 1.0; }

}  // namespace

std::int64_t even_block_start(std::int64_t n) {
  if (n < 1) {
    fail(ErrorCode::BadArgument, "even block index must be >= 1");
  }
  return n * (n - 1) / 2 + 1;
}

double ExampleOddFamily::mass(std::int64_t) const { return 1.0; }
double ExampleOddFamily::moment_u(std::int64_t i, double a) const {
  return std::pow(odd_point(i), a);
}
double ExampleOddFamily::moment_w(std::int64_t i, double a) const {
  return std::pow(odd_point(i), -3.0 * a);
}
double ExampleOddFamily::sup_u(std::int64_t i) const { return odd_point(i); }
std::optional<TailBound> ExampleOddFamily::tail_bound(std::int64_t count,
                                                      const Exponents&) const {
  return TailBound{odd_tail_bound(count), false};
}
CompactnessTail ExampleOddFamily::compactness_tail(const Exponents& exps) const {
  return example_compactness_tail(exps);
}

double ExampleEvenFamily::mass(std::int64_t i) const { return static_cast<double>(i); }
double ExampleEvenFamily::moment_u(std::int64_t i, double a) const {
  return even_power_sum(static_cast<double>(even_block_start(i)), i, a) /
         static_cast<double>(i);
}
double ExampleEvenFamily::moment_w(std::int64_t i, double a) const {
  return even_power_sum(static_cast<double>(even_block_start(i)), i, -3.0 * a) /
         static_cast<double>(i);
}
double ExampleEvenFamily::sup_u(std::int64_t i) const {
  return 2.0 * static_cast<double>(even_block_start(i) + i - 1);
}
std::optional<TailBound> ExampleEvenFamily::tail_bound(std::int64_t count,
                                                       const Exponents& exps) const {
  return TailBound{even_tail_bound(count, exps), false};
}
CompactnessTail ExampleEvenFamily::compactness_tail(const Exponents& exps) const {
  return example_compactness_tail(exps);
}

namespace {

// Merged index -> (family, sub-index): odd positions walk the odd atoms,
// even positions the even atoms.
struct MergedRef {
  bool odd;
  std::int64_t index;
};

MergedRef merged_ref(std::int64_t i) {
  if (i % 2 == 1) {
    return {true, (i + 1) / 2};
  }
  return {false, i / 2};
}

}  // namespace

double ExampleMergedFamily::mass(std::int64_t i) const {
  const MergedRef r = merged_ref(i);
  return r.odd ? odd_.mass(r.index) : even_.mass(r.index);
}
double ExampleMergedFamily::moment_u(std::int64_t i, double a) const {
  const MergedRef r = merged_ref(i);
  return r.odd ? odd_.moment_u(r.index, a) : even_.moment_u(r.index, a);
}
double ExampleMergedFamily::moment_w(std::int64_t i, double a) const {
  const MergedRef r = merged_ref(i);
  return r.odd ? odd_.moment_w(r.index, a) : even_.moment_w(r.index, a);
}
double ExampleMergedFamily::sup_u(std::int64_t i) const {
  const MergedRef r = merged_ref(i);
  return r.odd ? odd_.sup_u(r.index) : even_.sup_u(r.index);
}
std::optional<TailBound> ExampleMergedFamily::tail_bound(std::int64_t count,
                                                         const Exponents& exps) const {
  return TailBound{example_tail_bound(count, exps), false};
}
CompactnessTail ExampleMergedFamily::compactness_tail(const Exponents& exps) const {
  return example_compactness_tail(exps);
}

double odd_tail_bound(std::int64_t count) {
  if (count < 0) {
    fail(ErrorCode::BadArgument, "tail bounds need a nonnegative count");
  }
  if (count == 0) {
    return 1.0 + 0.5;  // term_1 = 1 plus the integral tail beyond it
  }
  return 1.0 / (2.0 * (2.0 * static_cast<double>(count) - 1.0));
}

double even_tail_bound(std::int64_t count, const Exponents& exps) {
  if (count < 0) {
    fail(ErrorCode::BadArgument, "tail bounds need a nonnegative count");
  }
  if (count == 0) {
    return 0.5 + even_tail_bound(1, exps);  // term_1 <= 1/2 (mass factor is 1)
  }
  const double start = static_cast<double>(count);
  if (exps.regime == Regime::Larger) {
    // term_n <= (1/(2 k_n^2)) n^{-1/r} <= 2 (n-1)^{-4}, via k_n >= (n-1)^2/2.
    return 2.0 * zeta_tail(start, 4.0);
  }
  // term_n <= (1/(2 k_n^2)) n^{1/r} <= 4 (n-1)^{1/r-4}, via n <= 2(n-1) for
  // n >= 2 and 1/r < 1.
  return 4.0 * zeta_tail(start, 4.0 - exps.inv_r);
}

double example_tail_bound(std::int64_t count, const Exponents& exps) {
  if (count < 0) {
    fail(ErrorCode::BadArgument, "tail bounds need a nonnegative count");
  }
  // Merged positions 1..count hold ceil(count/2) odd and floor(count/2)
  // even atoms.
  return odd_tail_bound((count + 1) / 2) + even_tail_bound(count / 2, exps);
}

double even_term_bound(std::int64_t n, const Exponents& exps) {
  const double k = static_cast<double>(even_block_start(n));
  return 1.0 / (2.0 * k * k) * std::pow(static_cast<double>(n), exps.mass_exponent());
}

CompactnessTail example_compactness_tail(const Exponents& exps) {
  CompactnessTail t;
  if (exps.regime == Regime::Equal) {
    return t;
  }
  if (exps.q == 1.0) {
    // q = 1 < p: odd criterion values are (2k-1)^{-2p'}, even ones decay
    // like n^{1-4p'}; both series converge for every p' > 1.
    t.series_converges = true;
  } else if (exps.p == 1.0) {
    // p = 1 < q: block values decay like (2k-1)^{-2q'} resp. n^{-4q'-1},
    // cell values are id^{-2q'}; all vanish.
    t.limit_vanishes = true;
    t.sigma_limit_vanishes = true;
  } else if (exps.regime == Regime::Smaller) {
    // 1 < q < p, series with the exponents taken verbatim: the odd values
    // are powers m^{-3qa+pb}; the even exponent is twice that plus one, so
    // the odd exponent decides. A divergent verbatim series is *not*
    // claimed (the exponent pattern is suspected to carry a misprint, and
    // such a claim would contradict certified nuclearity).
    const double denom = exps.q_conj - exps.p_conj;
    const double a = exps.p_conj * exps.q_conj / denom;
    const double b = exps.q_conj / denom;
    const double odd_exponent = -3.0 * exps.q * a + exps.p * b;
    if (odd_exponent < -1.0) {
      t.series_converges = true;
    }
  } else {
    // 1 < p < q: block limit values decay like (2k-1)^{-2p'} resp.
    // n^{-4p'-(p'-q')/q'}; the limit vanishes.
    t.limit_vanishes = true;
  }
  return t;
}

// ---------------------------------------------------------------------------
// Series evaluation over a family
// ---------------------------------------------------------------------------

namespace {

void check_generated(double x, const char* what, std::int64_t i, bool strictly_positive) {
  if (!std::isfinite(x) || x < 0.0 || (strictly_positive && x == 0.0)) {
    fail(ErrorCode::Generator, std::string("family ") + what + " at index " +
                                   std::to_string(i) + " is invalid");
  }
}

}  // namespace

std::vector<AtomStats> family_atom_stats(const AtomFamily& family, const Exponents& exps,
                                         std::int64_t count) {
  if (count < 0) {
    fail(ErrorCode::BadArgument, "atom count must be nonnegative");
  }
  std::vector<AtomStats> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 1; i <= count; ++i) {
    AtomStats st;
    st.block_index = static_cast<std::size_t>(i - 1);
    st.mass = family.mass(i);
    check_generated(st.mass, "mass", i, true);
    st.eu = (exps.p > 1.0) ? family.moment_u(i, exps.p_conj) : family.sup_u(i);
    st.ew = family.moment_w(i, exps.q);
    check_generated(st.eu, "u-moment", i, false);
    check_generated(st.ew, "w-moment", i, false);
    const double du = (exps.p > 1.0) ? std::pow(st.eu, 1.0 / exps.p_conj) : st.eu;
    st.d = du * std::pow(st.ew, 1.0 / exps.q);
    st.term = st.d * std::pow(st.mass, exps.mass_exponent());
    out.push_back(st);
  }
  return out;
}

std::vector<CompactBlockStats> family_compact_stats(const AtomFamily& family,
                                                    const Exponents& exps,
                                                    std::int64_t count) {
  if (count < 0) {
    fail(ErrorCode::BadArgument, "atom count must be nonnegative");
  }
  std::vector<CompactBlockStats> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 1; i <= count; ++i) {
    CompactBlockStats st;
    st.block_index = static_cast<std::size_t>(i - 1);
    st.mass = family.mass(i);
    check_generated(st.mass, "mass", i, true);
    st.ew_q = family.moment_w(i, exps.q);
    st.eu_p = family.moment_u(i, exps.p);
    st.eu_pconj = (exps.p > 1.0) ? family.moment_u(i, exps.p_conj) : family.sup_u(i);
    st.eu_qconj = (exps.q > 1.0) ? family.moment_u(i, exps.q_conj) : family.sup_u(i);
    check_generated(st.ew_q, "w-moment", i, false);
    check_generated(st.eu_p, "u-moment", i, false);
    check_generated(st.eu_pconj, "u-moment", i, false);
    check_generated(st.eu_qconj, "u-moment", i, false);
    out.push_back(st);
  }
  return out;
}

std::vector<SeriesRow> partial_sums(const AtomFamily& family, const Exponents& exps,
                                    std::int64_t count) {
  if (count < 1) {
    fail(ErrorCode::BadArgument, "partial sums need at least one atom");
  }
  if (exps.regime == Regime::Equal) {
    fail(ErrorCode::RegimeUnsupported, "the series criterion needs p != q");
  }
  const std::vector<AtomStats> stats = family_atom_stats(family, exps, count);
  std::vector<SeriesRow> rows;
  rows.reserve(stats.size());
  KahanSum sum;
  for (const AtomStats& st : stats) {
    sum.add(st.term);
    rows.push_back(SeriesRow{static_cast<std::int64_t>(st.block_index) + 1, st.term,
                             sum.value()});
  }
  return rows;
}

std::vector<SigmaCellStats> example_sigma_cells(std::int64_t atom_count,
                                                const Exponents& exps) {
  if (!(exps.q > 1.0)) {
    fail(ErrorCode::InvalidExponent, "cell-level stats need q > 1 (finite q')");
  }
  if (atom_count < 0) {
    fail(ErrorCode::BadArgument, "atom count must be nonnegative");
  }
  std::vector<SigmaCellStats> out;
  auto push = [&](std::int64_t id) {
    // |u|^{q'} (|w|^q)^{q'/q} / mass at a unit-mass cell id: id^{-2q'}.
    out.push_back(SigmaCellStats{id, 1.0,
                                 std::pow(static_cast<double>(id), -2.0 * exps.q_conj)});
  };
  for (std::int64_t i = 1; i <= atom_count; ++i) {
    const MergedRef r = merged_ref(i);
    if (r.odd) {
      push(2 * r.index - 1);
    } else {
      const std::int64_t k = even_block_start(r.index);
      for (std::int64_t j = 0; j < r.index; ++j) {
        push(2 * (k + j));
      }
    }
  }
  return out;
}

double decay_fit(std::span<const SeriesRow> rows, std::int64_t lo, std::int64_t hi) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const SeriesRow& r : rows) {
    if (r.index < lo || r.index > hi || !(r.term > 0.0)) {
      continue;
    }
    xs.push_back(std::log(static_cast<double>(r.index)));
    ys.push_back(std::log(r.term));
  }
  if (xs.size() < 8) {
    fail(ErrorCode::InsufficientData,
         "decay fit needs at least 8 strictly positive terms in the window");
  }
  KahanSum sx;
  KahanSum sy;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx.add(xs[i]);
    sy.add(ys[i]);
  }
  const double mx = sx.value() / static_cast<double>(xs.size());
  const double my = sy.value() / static_cast<double>(xs.size());
  KahanSum sxx;
  KahanSum sxy;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx.add((xs[i] - mx) * (xs[i] - mx));
    sxy.add((xs[i] - mx) * (ys[i] - my));
  }
  if (sxx.value() == 0.0) {
    fail(ErrorCode::InsufficientData, "decay fit window is degenerate");
  }
  return sxy.value() / sxx.value();
}

Materialized materialize_example(std::int64_t atom_count) {
  if (atom_count < 1) {
    fail(ErrorCode::BadArgument, "materialization needs at least one atom");
  }
  std::vector<Cell> cells;
  std::vector<std::vector<std::int64_t>> blocks;
  blocks.reserve(static_cast<std::size_t>(atom_count));
  for (std::int64_t i = 1; i <= atom_count; ++i) {
    const MergedRef r = merged_ref(i);
    std::vector<std::int64_t> ids;
    if (r.odd) {
      ids.push_back(2 * r.index - 1);
    } else {
      const std::int64_t k = even_block_start(r.index);
      for (std::int64_t j = 0; j < r.index; ++j) {
        ids.push_back(2 * (k + j));
      }
    }
    for (std::int64_t id : ids) {
      cells.push_back(Cell{id, 1.0});
    }
    blocks.push_back(std::move(ids));
  }
  AtomicSpace space(std::move(cells));
  SubAlgebra alg(space, std::move(blocks));
  return Materialized{std::move(space), std::move(alg), Weight::expr("n"),
                      Weight::expr("1/n^3")};
}

}  // namespace wce
