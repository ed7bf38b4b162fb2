#pragma once

#include <cmath>
#include <limits>

#include "errors.hpp"

namespace wce {

// Which side of p the target exponent q falls on. The atom-series mass
// exponent flips sign between the two mixed regimes; the Equal regime is
// representable but excluded from the series criteria.
enum class Regime { Smaller, Larger, Equal };  // q < p, p < q, p == q

inline const char* regime_name(Regime r) noexcept {
  switch (r) {
    case Regime::Smaller: return "smaller";
    case Regime::Larger: return "larger";
    case Regime::Equal: return "equal";
  }
  return "?";
}

// Exponent bookkeeping for an L^p -> L^q operator: Hoelder conjugates
// (1/p + 1/p' = 1, with 1/inf = 0) and the bridging exponent r defined by
// 1/r = |1/p - 1/q| (r = inf when p = q).
struct Exponents {
  double p = 0.0;
  double q = 0.0;
  double p_conj = 0.0;
  double q_conj = 0.0;
  double r = 0.0;
  double inv_r = 0.0;
  Regime regime = Regime::Equal;

  static Exponents make(double p, double q) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (!std::isfinite(p) || !(p >= 1.0)) {
      fail(ErrorCode::InvalidExponent, "p must be a finite real >= 1");
    }
    if (!std::isfinite(q) || !(q >= 1.0)) {
      fail(ErrorCode::InvalidExponent, "q must be a finite real >= 1");
    }
    Exponents e;
    e.p = p;
    e.q = q;
    e.p_conj = (p == 1.0) ? inf : p / (p - 1.0);
    e.q_conj = (q == 1.0) ? inf : q / (q - 1.0);
    e.inv_r = std::abs(1.0 / p - 1.0 / q);
    e.r = (e.inv_r == 0.0) ? inf : 1.0 / e.inv_r;
    e.regime = (q < p) ? Regime::Smaller : (p < q) ? Regime::Larger : Regime::Equal;
    return e;
  }

  // Signed exponent of the atom mass in the series term: +1/r when q < p,
  // -1/r when p < q, 0 when p = q.
  double mass_exponent() const noexcept {
    switch (regime) {
      case Regime::Smaller: return inv_r;
      case Regime::Larger: return -inv_r;
      case Regime::Equal: return 0.0;
    }
    return 0.0;
  }
};

}  // namespace wce
