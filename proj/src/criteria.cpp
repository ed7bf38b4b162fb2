#include "criteria.hpp"

#include <cmath>
#include <limits>

#include "kahan.hpp"

namespace wce {

const char* status_name(Status s) noexcept {
  switch (s) {
    case Status::Nuclear: return "nuclear";
    case Status::NotNuclear: return "not-nuclear";
    case Status::Compact: return "compact";
    case Status::NotCompact: return "not-compact";
    case Status::Zero: return "zero";
    case Status::Inconclusive: return "inconclusive";
  }
  return "?";
}

const char* flag_name(unsigned single_flag) noexcept {
  switch (single_flag) {
    case kFlagVerbatimTypoSuspected: return "verbatim-typo-suspected";
    case kFlagHeuristicTail: return "heuristic-tail";
    case kFlagQ1Boundary: return "q1-boundary";
    case kFlagNonAtomicPart: return "non-atomic-part";
    case kFlagFiniteTruncationExact: return "finite-truncation-exact";
    case kFlagImpliedByNuclear: return "implied-by-nuclear";
    case kFlagZeroOnTruncation: return "zero-on-truncation";
  }
  return "?";
}

std::vector<std::string> flag_names(unsigned flags) {
  std::vector<std::string> out;
  for (unsigned bit = 1; bit != 0 && bit <= flags; bit <<= 1) {
    if (flags & bit) {
      out.emplace_back(flag_name(bit));
    }
  }
  return out;
}

bool nonatomic_condition(std::span<const NonAtomicPanel> panels) {
  for (const NonAtomicPanel& p : panels) {
    if (p.u_support_positive && p.w_support_positive) {
      return false;
    }
  }
  return true;
}

bool nonatomic_condition(const SubAlgebra& alg) { return nonatomic_condition(alg.panels()); }

Verdict nuclearity_verdict(std::span<const AtomStats> stats, const Exponents& exps,
                           bool nonatomic_ok, std::optional<TailBound> tail) {
  if (exps.regime == Regime::Equal) {
    fail(ErrorCode::RegimeUnsupported, "the series criterion needs p != q");
  }
  KahanSum sum;
  bool all_zero = true;
  for (const AtomStats& st : stats) {
    if (!std::isfinite(st.term) || st.term < 0.0) {
      fail(ErrorCode::NonFiniteData, "series term at block " +
                                         std::to_string(st.block_index) +
                                         " is not a finite nonnegative real");
    }
    sum.add(st.term);
    all_zero = all_zero && st.term == 0.0;
  }

  Verdict v;
  v.partial_sum = sum.value();
  v.terms_used = static_cast<std::int64_t>(stats.size());
  if (exps.q == 1.0) {
    v.flags |= kFlagQ1Boundary;
    v.notes.emplace_back("q = 1 admitted into the series criterion (boundary case)");
  }

  if (!nonatomic_ok) {
    v.status = Status::NotNuclear;
    v.flags |= kFlagNonAtomicPart;
    v.notes.emplace_back("u and w are jointly supported on a non-atomic panel");
    return v;
  }
  if (tail && tail->divergent) {
    v.status = Status::NotNuclear;
    v.notes.emplace_back("caller marked the series tail divergent");
    return v;
  }
  if (tail) {
    if (!std::isfinite(tail->value) || tail->value < 0.0) {
      fail(ErrorCode::BadArgument, "tail bound must be a finite nonnegative real");
    }
    v.status = Status::Nuclear;
    v.tail_bound = tail->value;
    v.total = v.partial_sum + tail->value;
    if (tail->value == 0.0) {
      v.flags |= kFlagFiniteTruncationExact;
      v.notes.emplace_back("truncation declared exact (tail bound 0)");
    } else {
      v.notes.emplace_back("series certified by the caller tail bound");
    }
    return v;
  }
  if (all_zero) {
    v.status = Status::Nuclear;
    v.flags |= kFlagZeroOnTruncation;
    v.notes.emplace_back("every series term vanishes on the truncation (zero operator)");
    return v;
  }
  v.status = Status::Inconclusive;
  v.notes.emplace_back("no tail bound supplied; a finite truncation cannot certify convergence");
  return v;
}

namespace {

// x^a * y^b * z^c evaluated in log space so that extreme conditional
// moments (x huge, y tiny) cannot overflow in an intermediate power. a and
// b are positive in every criterion, so a vanishing moment zeroes the
// value; z (the mass) is strictly positive.
double pow_product(double x, double a, double y, double b, double z, double c) {
  if (x == 0.0 || y == 0.0) {
    return 0.0;
  }
  return std::exp(a * std::log(x) + b * std::log(y) + c * std::log(z));
}

CompactnessMode resolve_mode(const Exponents& e, CompactnessMode mode) {
  CompactnessMode autodetected;
  if (e.regime == Regime::Equal) {
    fail(ErrorCode::RegimeUnsupported, "the compactness criteria need p != q");
  } else if (e.q == 1.0) {
    autodetected = CompactnessMode::QIsOne;
  } else if (e.p == 1.0) {
    autodetected = CompactnessMode::PIsOne;
  } else if (e.regime == Regime::Smaller) {
    autodetected = CompactnessMode::SeriesQBelowP;
  } else {
    autodetected = CompactnessMode::LimitPBelowQ;
  }
  if (mode == CompactnessMode::Auto) {
    return autodetected;
  }
  if (mode != autodetected) {
    fail(ErrorCode::BadArgument, "compactness mode does not match the exponent ranges");
  }
  return mode;
}

void finish_series(Verdict& v, bool nonatomic_ok, bool all_zero, const CompactnessTail& tail) {
  if (!nonatomic_ok) {
    v.status = Status::NotCompact;
    v.flags |= kFlagNonAtomicPart;
    v.notes.emplace_back("u and w are jointly supported on a non-atomic panel");
    return;
  }
  if (all_zero) {
    v.status = Status::Compact;
    v.flags |= kFlagZeroOnTruncation;
    v.notes.emplace_back("every criterion value vanishes on the truncation (zero operator)");
    return;
  }
  if (tail.complete) {
    v.status = Status::Compact;
    v.flags |= kFlagFiniteTruncationExact;
    v.notes.emplace_back("finitely many atoms: the operator has finite rank");
    return;
  }
  if (tail.series_converges.has_value()) {
    v.status = *tail.series_converges ? Status::Compact : Status::NotCompact;
    v.notes.emplace_back(*tail.series_converges
                             ? "series certified convergent by the caller"
                             : "series marked divergent by the caller");
    return;
  }
  v.status = Status::Inconclusive;
  v.notes.emplace_back("series behavior not certifiable from a truncation alone");
}

void finish_limit(Verdict& v, bool nonatomic_ok, bool all_zero, const CompactnessTail& tail) {
  if (!nonatomic_ok) {
    v.status = Status::NotCompact;
    v.flags |= kFlagNonAtomicPart;
    v.notes.emplace_back("u and w are jointly supported on a non-atomic panel");
    return;
  }
  if (all_zero) {
    v.status = Status::Compact;
    v.flags |= kFlagZeroOnTruncation;
    v.notes.emplace_back("every criterion value vanishes on the truncation (zero operator)");
    return;
  }
  if (tail.complete) {
    v.status = Status::Compact;
    v.flags |= kFlagFiniteTruncationExact;
    v.notes.emplace_back("finitely many atoms: the limit condition is vacuous");
    return;
  }
  if (tail.limit_vanishes.has_value()) {
    v.status = *tail.limit_vanishes ? Status::Compact : Status::NotCompact;
    v.notes.emplace_back(*tail.limit_vanishes ? "vanishing limit certified by the caller"
                                              : "caller states the limit does not vanish");
    return;
  }
  v.status = Status::Inconclusive;
  v.notes.emplace_back("limit behavior not certifiable from a truncation alone");
}

}  // namespace

Verdict compactness_verdict(const CompactnessInput& input, const Exponents& exps,
                            bool nonatomic_ok, CompactnessMode mode,
                            const CompactnessTail& tail) {
  const CompactnessMode m = resolve_mode(exps, mode);
  const auto& blocks = input.blocks;
  Verdict v;
  v.terms_used = static_cast<std::int64_t>(blocks.size());

  // The exponent patterns here (in particular p'q'/(q'-p') for nearby
  // exponent pairs) can push healthy finite data past the top of the double
  // range. The verdict itself is claim-driven, so overflowed values are
  // saturated and noted instead of failing the whole analysis.
  bool saturated = false;
  auto check_value = [&saturated](double x, std::size_t bi) {
    if (std::isinf(x) && x > 0.0) {
      saturated = true;
      return std::numeric_limits<double>::max();
    }
    if (!std::isfinite(x) || x < 0.0) {
      fail(ErrorCode::NonFiniteData, "criterion value at block " + std::to_string(bi) +
                                         " is not a finite nonnegative real");
    }
    return x;
  };
  auto note_saturation = [&saturated](Verdict& verdict) {
    if (saturated) {
      verdict.notes.emplace_back(
          "criterion values exceeded the double range and are reported saturated");
    }
  };

  switch (m) {
    case CompactnessMode::SeriesQBelowP: {
      // sum_i (E|w|^q)^{p'q'/(q'-p')} (E|u|^p)^{q'/(q'-p')} mu(A_i),
      // exponents evaluated verbatim; the pattern is suspected to carry a
      // misprint (it disagrees with the q = 1 series), hence the flag.
      const double denom = exps.q_conj - exps.p_conj;
      const double a = exps.p_conj * exps.q_conj / denom;
      const double b = exps.q_conj / denom;
      KahanSum sum;
      bool all_zero = true;
      for (const CompactBlockStats& st : blocks) {
        const double t = check_value(pow_product(st.ew_q, a, st.eu_p, b, st.mass, 1.0),
                                     st.block_index);
        sum.add(t);
        all_zero = all_zero && t == 0.0;
      }
      v.partial_sum = std::min(sum.value(), std::numeric_limits<double>::max());
      note_saturation(v);
      v.flags |= kFlagVerbatimTypoSuspected;
      v.notes.emplace_back("series criterion for 1<q<p, exponents evaluated verbatim");
      finish_series(v, nonatomic_ok, all_zero, tail);
      return v;
    }
    case CompactnessMode::QIsOne: {
      // sum_i E(|u|^p')(A_i) (E|w|)^{p'}(A_i) mu(A_i)
      KahanSum sum;
      bool all_zero = true;
      for (const CompactBlockStats& st : blocks) {
        const double t = check_value(
            pow_product(st.eu_pconj, 1.0, st.ew_q, exps.p_conj, st.mass, 1.0), st.block_index);
        sum.add(t);
        all_zero = all_zero && t == 0.0;
      }
      v.partial_sum = std::min(sum.value(), std::numeric_limits<double>::max());
      note_saturation(v);
      v.notes.emplace_back("series criterion for q=1<p");
      finish_series(v, nonatomic_ok, all_zero, tail);
      return v;
    }
    case CompactnessMode::LimitPBelowQ: {
      // E(|u|^p')(A_i) (E|w|^q)^{p'/q}(A_i) / mu(A_i)^{(p'-q')/q'} -> 0
      const double me = (exps.p_conj - exps.q_conj) / exps.q_conj;
      double last = 0.0;
      bool all_zero = true;
      for (const CompactBlockStats& st : blocks) {
        const double t = check_value(
            pow_product(st.eu_pconj, 1.0, st.ew_q, exps.p_conj / exps.q, st.mass, -me),
            st.block_index);
        last = t;
        all_zero = all_zero && t == 0.0;
      }
      v.partial_sum = last;
      note_saturation(v);
      v.notes.emplace_back("vanishing-limit criterion for 1<p<q (evidence: last block value)");
      finish_limit(v, nonatomic_ok, all_zero, tail);
      return v;
    }
    case CompactnessMode::PIsOne: {
      // Necessary conditions run over the coarse blocks, sufficient
      // conditions over the cells; the two are reported separately and
      // never merged into a single equivalence.
      double last_block = 0.0;
      bool blocks_zero = true;
      for (const CompactBlockStats& st : blocks) {
        const double t = check_value(
            pow_product(st.eu_qconj, 1.0, st.ew_q, exps.q_conj / exps.q, st.mass, -1.0),
            st.block_index);
        last_block = t;
        blocks_zero = blocks_zero && t == 0.0;
      }
      v.partial_sum = last_block;
      v.notes.emplace_back("p=1: necessary (block-level) limit evidence, last value " +
                           std::to_string(last_block));
      bool cells_zero = true;
      if (input.sigma_cells) {
        double last_cell = 0.0;
        for (const SigmaCellStats& st : *input.sigma_cells) {
          if (std::isinf(st.value) && st.value > 0.0) {
            saturated = true;
          } else if (!std::isfinite(st.value) || st.value < 0.0) {
            fail(ErrorCode::NonFiniteData, "cell-level criterion value at cell " +
                                               std::to_string(st.cell_id) +
                                               " is not a finite nonnegative real");
          }
          last_cell = std::min(st.value, std::numeric_limits<double>::max());
          cells_zero = cells_zero && st.value == 0.0;
        }
        v.notes.emplace_back("p=1: sufficient (cell-level) limit evidence, last value " +
                             std::to_string(last_cell));
      } else {
        v.notes.emplace_back("p=1: cell-level data not supplied");
        cells_zero = false;
      }
      note_saturation(v);

      if (!nonatomic_ok) {
        v.status = Status::NotCompact;
        v.flags |= kFlagNonAtomicPart;
        v.notes.emplace_back("u and w are jointly supported on a non-atomic panel");
        return v;
      }
      if (blocks_zero && (cells_zero || !input.sigma_cells)) {
        v.status = Status::Compact;
        v.flags |= kFlagZeroOnTruncation;
        v.notes.emplace_back("every criterion value vanishes on the truncation (zero operator)");
        return v;
      }
      if (tail.complete) {
        v.status = Status::Compact;
        v.flags |= kFlagFiniteTruncationExact;
        v.notes.emplace_back("finitely many atoms: the sufficient conditions are vacuous");
        return v;
      }
      if (tail.sigma_limit_vanishes.has_value() && *tail.sigma_limit_vanishes) {
        v.status = Status::Compact;
        v.notes.emplace_back("cell-level vanishing limit certified by the caller (sufficient)");
        return v;
      }
      if (tail.limit_vanishes.has_value() && !*tail.limit_vanishes) {
        v.status = Status::NotCompact;
        v.notes.emplace_back("block-level limit does not vanish (necessary condition fails)");
        return v;
      }
      v.status = Status::Inconclusive;
      if (tail.limit_vanishes.has_value() && *tail.limit_vanishes) {
        v.notes.emplace_back(
            "necessary conditions hold; sufficiency not established at block resolution");
      } else {
        v.notes.emplace_back("limit behavior not certifiable from a truncation alone");
      }
      return v;
    }
    case CompactnessMode::Auto:
      break;  // unreachable
  }
  fail(ErrorCode::BadArgument, "unresolved compactness mode");
}

bool consistency_check(const Verdict& nuclear, const Verdict& compact) noexcept {
  return !(nuclear.status == Status::Nuclear && compact.status == Status::NotCompact);
}

}  // namespace wce
