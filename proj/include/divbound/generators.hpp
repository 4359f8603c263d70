#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>

#include "divbound/error.hpp"
#include "divbound/kernels.hpp"
#include "divbound/simplex.hpp"
#include "divbound/summation.hpp"

// Csiszar f-divergences C_f(P||Q) = sum q f(p/q) over the five convex,
// normalized generating functions of the type-s families. With
// u = (x+1)/(2x) and v = (x+1)/2:
//
//   phi_s(x) = [x^s - 1 - s(x-1)] / (s(s-1))       -> Phi_s(P||Q)
//   psi_s(x) = x phi_s(u)                          -> Omega_s(P||Q)
//   ups_s(x) = phi_s(v)                            -> Omega_s(Q||P)
//   xi_s(x)  = (x-1)(v^(s-1) - 1) / (s-1)          -> zeta_s(P||Q)
//   vs_s(x)  = (1-x)(u^(s-1) - 1) / (s-1)          -> zeta_s(Q||P)
namespace divbound {

enum class GeneratorKind { PhiGen, PsiGen, UpsilonGen, XiGen, VarsigmaGen };

struct GeneratorSpec {
  GeneratorKind gen = GeneratorKind::PhiGen;
  double s = 0.0;

  friend bool operator==(const GeneratorSpec&, const GeneratorSpec&) = default;
};

struct GeneratorValue {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

inline constexpr std::array kAllGeneratorKinds{
    GeneratorKind::PhiGen, GeneratorKind::PsiGen, GeneratorKind::UpsilonGen,
    GeneratorKind::XiGen, GeneratorKind::VarsigmaGen};

constexpr std::string_view to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::PhiGen: return "phi";
    case GeneratorKind::PsiGen: return "psi";
    case GeneratorKind::UpsilonGen: return "upsilon";
    case GeneratorKind::XiGen: return "xi";
    case GeneratorKind::VarsigmaGen: return "varsigma";
  }
  return "?";
}

/// Where d2 >= 0 is guaranteed for every x > 0.
constexpr bool convexity_guaranteed(GeneratorSpec spec) {
  if (spec.gen == GeneratorKind::XiGen || spec.gen == GeneratorKind::VarsigmaGen) {
    return spec.s >= 0.0 && spec.s <= 4.0;
  }
  return true;
}

namespace detail {

inline Ratio ratio_from(double y, double y_minus_1) noexcept {
  return {y, y_minus_1,
          std::abs(y_minus_1) < 0.5 ? std::log1p(y_minus_1) : std::log(y)};
}

/// phi_s and phi_s' at y.
inline double phi_value(double s, const Ratio& y) noexcept {
  return power_defect(s, y);
}
inline double phi_d1(double s, const Ratio& y) noexcept {
  return expm1_over(s - 1.0, y.log_y);
}

/// Value and derivatives at x, given x - 1 separately so callers that know
/// the offset exactly (p/q from two masses) keep it.
inline GeneratorValue gen_eval(GeneratorSpec spec, const Ratio& x) noexcept {
  const double s = spec.s;
  const double lx = x.log_y;
  GeneratorValue out;
  switch (spec.gen) {
    case GeneratorKind::PhiGen: {
      out.value = phi_value(s, x);
      out.d1 = phi_d1(s, x);
      out.d2 = pow_from_log(s - 2.0, lx);
      break;
    }
    case GeneratorKind::PsiGen: {
      const Ratio v = ratio_from(0.5 * (x.y + 1.0), 0.5 * x.y_minus_1);
      const Ratio u{v.y / x.y, -0.5 * x.y_minus_1 / x.y, v.log_y - lx};
      out.value = x.y * phi_value(s, u);
      out.d1 = phi_value(s, u) - phi_d1(s, u) / (2.0 * x.y);
      out.d2 = pow_from_log(s - 2.0, u.log_y) / (4.0 * x.y * x.y * x.y);
      break;
    }
    case GeneratorKind::UpsilonGen: {
      const Ratio v = ratio_from(0.5 * (x.y + 1.0), 0.5 * x.y_minus_1);
      out.value = phi_value(s, v);
      out.d1 = 0.5 * phi_d1(s, v);
      out.d2 = 0.25 * pow_from_log(s - 2.0, v.log_y);
      break;
    }
    case GeneratorKind::XiGen: {
      const Ratio v = ratio_from(0.5 * (x.y + 1.0), 0.5 * x.y_minus_1);
      const double e = expm1_over(s - 1.0, v.log_y);
      out.value = x.y_minus_1 * e;
      out.d1 = e + 0.5 * x.y_minus_1 * pow_from_log(s - 2.0, v.log_y);
      out.d2 = 0.25 * pow_from_log(s - 3.0, v.log_y) * (s * x.y + 4.0 - s);
      break;
    }
    case GeneratorKind::VarsigmaGen: {
      const Ratio v = ratio_from(0.5 * (x.y + 1.0), 0.5 * x.y_minus_1);
      const double lu = v.log_y - lx;
      const double e = expm1_over(s - 1.0, lu);
      const double x2 = x.y * x.y;
      out.value = -x.y_minus_1 * e;
      out.d1 = -e + x.y_minus_1 * pow_from_log(s - 2.0, lu) / (2.0 * x2);
      out.d2 = pow_from_log(s - 3.0, lu) * ((4.0 - s) * x.y + s) / (4.0 * x2 * x2);
      break;
    }
  }
  return out;
}

inline void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw Error(ErrorCode::NonPositiveArgument,
                std::string(what) + " must be positive and finite, got " +
                    std::to_string(x));
  }
}

}  // namespace detail

inline GeneratorValue gen_eval(GeneratorSpec spec, double x) {
  detail::require_positive(x, "x");
  return detail::gen_eval(spec, detail::ratio_from(x, x - 1.0));
}

/// Second derivative only; the hot path of the bound engine.
inline double gen_d2(GeneratorSpec spec, double x) {
  detail::require_positive(x, "x");
  const double s = spec.s;
  switch (spec.gen) {
    case GeneratorKind::PhiGen:
      return std::exp((s - 2.0) * std::log(x));
    case GeneratorKind::PsiGen:
      return std::exp((s - 2.0) * std::log((x + 1.0) / (2.0 * x))) / (4.0 * x * x * x);
    case GeneratorKind::UpsilonGen:
      return 0.25 * std::exp((s - 2.0) * std::log(0.5 * (x + 1.0)));
    case GeneratorKind::XiGen:
      return 0.25 * std::exp((s - 3.0) * std::log(0.5 * (x + 1.0))) * (s * x + 4.0 - s);
    case GeneratorKind::VarsigmaGen:
      return std::exp((s - 3.0) * std::log((x + 1.0) / (2.0 * x))) *
             ((4.0 - s) * x + s) / (4.0 * x * x * x * x);
  }
  return 0.0;
}

/// C_f(P||Q) = sum q_i f(p_i / q_i).
inline double csiszar(GeneratorSpec spec, const Distribution& p,
                      const Distribution& q) {
  require_same_length(p, q);
  CompensatedSum acc;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto x = detail::ratio_of(p[i], q[i]);
    acc += q[i] * detail::gen_eval(spec, x).value;
  }
  return acc.value();
}

struct ConvexityScan {
  bool convex = true;  // min d2 >= -1e-12
  double min_d2 = 0.0;
  double argmin = 0.0;
};

/// d2 on `grid` log-spaced points over [r, R].
inline ConvexityScan convexity_scan(GeneratorSpec spec, double r, double R,
                                    int grid) {
  detail::require_positive(r, "r");
  detail::require_positive(R, "R");
  if (r > R) {
    throw Error(ErrorCode::NonPositiveArgument, "interval needs r <= R");
  }
  if (grid < 2) {
    throw Error(ErrorCode::ConfigInvalid, "convexity scan needs grid >= 2");
  }
  const double lr = std::log(r);
  const double step = (std::log(R) - lr) / (grid - 1);
  ConvexityScan out{true, gen_d2(spec, r), r};
  for (int k = 1; k < grid; ++k) {
    const double x = k == grid - 1 ? R : std::exp(lr + step * k);
    const double d2 = gen_d2(spec, x);
    if (d2 < out.min_d2) {
      out.min_d2 = d2;
      out.argmin = x;
    }
  }
  out.convex = out.min_d2 >= -1e-12;
  return out;
}

}  // namespace divbound
