#pragma once

#include <cmath>

namespace divbound {

/// Neumaier's variant of Kahan summation. Terms are consumed strictly in
/// call order, so a given sequence always produces the same bits.
class CompensatedSum {
 public:
  CompensatedSum& operator+=(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

template <typename Range>
double compensated_sum(const Range& values) {
  CompensatedSum acc;
  for (double v : values) acc += v;
  return acc.value();
}

}  // namespace divbound
