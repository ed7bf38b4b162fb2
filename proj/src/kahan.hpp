#pragma once

#include <cmath>

namespace wce {

// Neumaier-compensated accumulator. Every series and integral in the
// library folds its addends through one of these, always in a fixed
// (cell order / block order / index order) sequence, so results are
// reproducible across runs and platforms.
class KahanSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace wce
