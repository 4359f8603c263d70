#pragma once

#include <algorithm>
#include <cmath>

// Cancellation-free building blocks shared by the measures, the type-s
// families and the generating functions. Every divergence in the library
// is a sum of terms that vanish to second order at ratio 1; evaluating
// those terms through the helpers below keeps full relative accuracy even
// when the two distributions nearly coincide.
namespace divbound::detail {

/// (e^{a L} - 1) / a, equal to L at a == 0.
inline double expm1_over(double a, double log_y) noexcept {
  return a == 0.0 ? log_y : std::expm1(a * log_y) / a;
}

/// y^a computed as exp(a ln y).
inline double pow_from_log(double a, double log_y) noexcept {
  return std::exp(a * log_y);
}

/// [y^s - 1 - s(y - 1)] / (s(s - 1)) from y, ln y and y - 1.
///
/// s == 0 and s == 1 fall out of the two rearrangements below as the exact
/// limits y - 1 - ln y and y ln y - y + 1. Near y = 1 the Taylor series in
/// ln y is summed instead; its k-th coefficient is 1 + s + ... + s^(k-2),
/// which has no singularity in s.
inline double power_defect(double s, double y, double log_y,
                           double y_minus_1) noexcept {
  const double scale = std::max({1.0, std::abs(s), std::abs(s - 1.0)});
  if (std::abs(log_y) * scale < 0.1) {
    double coeff = 1.0;                     // 1 + s + ... + s^(k-2)
    double power = 0.5 * log_y * log_y;     // L^k / k!
    double reach = scale * scale;           // bounds |coeff| / (k - 1)
    double sum = 0.0;
    for (int k = 2; k < 60; ++k) {
      sum += coeff * power;
      // |coeff| <= (k - 1) scale^(k-2), so this bounds every later term.
      if (std::abs(power) * reach * k <= 1e-18 * std::abs(sum)) break;
      coeff = 1.0 + s * coeff;
      power *= log_y / (k + 1);
      reach *= scale;
    }
    return sum;
  }
  if (std::abs(s) < std::abs(s - 1.0)) {
    return (expm1_over(s, log_y) - y_minus_1) / (s - 1.0);
  }
  return (y * expm1_over(s - 1.0, log_y) - y_minus_1) / s;
}

/// y = a / b together with y - 1 and ln y, each to full relative accuracy.
struct Ratio {
  double y;
  double y_minus_1;
  double log_y;
};

inline Ratio ratio_of(double a, double b) noexcept {
  const double y = a / b;
  const double ym1 = (a - b) / b;
  return {y, ym1, std::abs(ym1) < 0.5 ? std::log1p(ym1) : std::log(y)};
}

/// ((a + b) / 2) / b, with the offset taken as (a - b) / 2b so the rounding
/// of the midpoint does not leak into it.
inline Ratio midpoint_ratio(double a, double b) noexcept {
  const double y = 0.5 * (a + b) / b;
  const double ym1 = 0.5 * (a - b) / b;
  return {y, ym1, std::abs(ym1) < 0.5 ? std::log1p(ym1) : std::log(y)};
}

inline double power_defect(double s, const Ratio& ratio) noexcept {
  return power_defect(s, ratio.y, ratio.log_y, ratio.y_minus_1);
}

}  // namespace divbound::detail
