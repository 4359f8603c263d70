#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "divbound/error.hpp"
#include "divbound/generators.hpp"
#include "divbound/simplex.hpp"

// Two-sided inequalities between type-s measures. If f2 is convex and
// m <= f1''/f2'' <= M on [r, R], then m C_f2 <= C_f1 <= M C_f2 for every pair
// whose likelihood ratios lie in [r, R]. The ten families below fix (f1, f2);
// each has one or two printed branches giving m and M in closed form when
// the curvature ratio g is monotone.
namespace divbound {

enum class InequalityFamily {
  I_OmegaPhi,
  II_OmegaAdjPhi,
  III_ZetaPhi,
  IV_ZetaAdjPhi,
  V_OmegaAdjOmega,
  VI_ZetaOmega,
  VII_ZetaAdjOmega,
  VIII_ZetaOmegaAdj,
  IX_ZetaAdjOmegaAdj,
  X_ZetaAdjZeta,
};

inline constexpr std::array kAllInequalityFamilies{
    InequalityFamily::I_OmegaPhi,        InequalityFamily::II_OmegaAdjPhi,
    InequalityFamily::III_ZetaPhi,       InequalityFamily::IV_ZetaAdjPhi,
    InequalityFamily::V_OmegaAdjOmega,   InequalityFamily::VI_ZetaOmega,
    InequalityFamily::VII_ZetaAdjOmega,  InequalityFamily::VIII_ZetaOmegaAdj,
    InequalityFamily::IX_ZetaAdjOmegaAdj, InequalityFamily::X_ZetaAdjZeta,
};

struct FamilyInfo {
  std::string_view roman;
  GeneratorKind numerator;    // f1, parameter s
  GeneratorKind denominator;  // f2, parameter t
  std::string_view relation;  // "<numerator measure> vs <denominator measure>"
};

constexpr FamilyInfo family_info(InequalityFamily f) {
  using G = GeneratorKind;
  switch (f) {
    case InequalityFamily::I_OmegaPhi:
      return {"I", G::PsiGen, G::PhiGen, "Ω_s(P||Q) vs Φ_t(P||Q)"};
    case InequalityFamily::II_OmegaAdjPhi:
      return {"II", G::UpsilonGen, G::PhiGen, "Ω_s(Q||P) vs Φ_t(P||Q)"};
    case InequalityFamily::III_ZetaPhi:
      return {"III", G::XiGen, G::PhiGen, "ζ_s(P||Q) vs Φ_t(P||Q)"};
    case InequalityFamily::IV_ZetaAdjPhi:
      return {"IV", G::VarsigmaGen, G::PhiGen, "ζ_s(Q||P) vs Φ_t(P||Q)"};
    case InequalityFamily::V_OmegaAdjOmega:
      return {"V", G::UpsilonGen, G::PsiGen, "Ω_s(Q||P) vs Ω_t(P||Q)"};
    case InequalityFamily::VI_ZetaOmega:
      return {"VI", G::XiGen, G::PsiGen, "ζ_s(P||Q) vs Ω_t(P||Q)"};
    case InequalityFamily::VII_ZetaAdjOmega:
      return {"VII", G::VarsigmaGen, G::PsiGen, "ζ_s(Q||P) vs Ω_t(P||Q)"};
    case InequalityFamily::VIII_ZetaOmegaAdj:
      return {"VIII", G::XiGen, G::UpsilonGen, "ζ_s(P||Q) vs Ω_t(Q||P)"};
    case InequalityFamily::IX_ZetaAdjOmegaAdj:
      return {"IX", G::VarsigmaGen, G::UpsilonGen, "ζ_s(Q||P) vs Ω_t(Q||P)"};
    case InequalityFamily::X_ZetaAdjZeta:
      return {"X", G::VarsigmaGen, G::XiGen, "ζ_s(Q||P) vs ζ_t(P||Q)"};
  }
  return {"?", G::PhiGen, G::PhiGen, "?"};
}

constexpr std::string_view to_string(InequalityFamily f) {
  return family_info(f).roman;
}

/// Accepts the roman numeral, case-insensitive ("II", "ii").
inline InequalityFamily parse_inequality_family(std::string_view text) {
  std::string upper(text);
  for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (auto f : kAllInequalityFamilies) {
    if (family_info(f).roman == upper) return f;
  }
  throw Error(ErrorCode::UnknownName,
              "unknown inequality family '" + std::string(text) +
                  "' (expected I..X)");
}

inline GeneratorSpec numerator_spec(InequalityFamily f, double s) {
  return {family_info(f).numerator, s};
}
inline GeneratorSpec denominator_spec(InequalityFamily f, double t) {
  return {family_info(f).denominator, t};
}

namespace detail {

/// The closed-form endpoint coefficient of each family, written exactly as
/// the inequalities print it. Kept separate from the d2 quotient so that
/// agreement between the two is a real check.
inline double printed_coefficient(InequalityFamily f, double s, double t,
                                  double x) {
  using std::pow;
  const double v = (x + 1.0) / 2.0;
  const double u = (x + 1.0) / (2.0 * x);
  switch (f) {
    case InequalityFamily::I_OmegaPhi:
      return 1.0 / (4.0 * pow(x, t + 1.0)) * pow(u, s - 2.0);
    case InequalityFamily::II_OmegaAdjPhi:
      return 1.0 / (4.0 * pow(x, t - 2.0)) * pow(v, s - 2.0);
    case InequalityFamily::III_ZetaPhi:
      return pow(v, s - 3.0) * ((s * x + 4.0 - s) / (4.0 * pow(x, t - 2.0)));
    case InequalityFamily::IV_ZetaAdjPhi:
      return pow(u, s - 3.0) * (((4.0 - s) * x + s) / (4.0 * pow(x, t + 2.0)));
    case InequalityFamily::V_OmegaAdjOmega:
      return pow(x, t + 1.0) * pow(v, s - t);
    case InequalityFamily::VI_ZetaOmega:
      return pow(x, t + 1.0) * pow(v, s - t - 1.0) * (s * x + 4.0 - s);
    case InequalityFamily::VII_ZetaAdjOmega:
      return pow(u, s - t - 1.0) * (((4.0 - s) * x + s) / x);
    case InequalityFamily::VIII_ZetaOmegaAdj:
      return pow(v, s - t - 1.0) * (s * x + 4.0 - s);
    case InequalityFamily::IX_ZetaAdjOmegaAdj:
      return 1.0 / pow(x, s + 1.0) * pow(v, s - t - 1.0) * ((4.0 - s) * x + s);
    case InequalityFamily::X_ZetaAdjZeta:
      return 1.0 / pow(x, s + 1.0) * pow(v, s - t) *
             (((4.0 - s) * x + s) / (t * x + 4.0 - t));
  }
  return 0.0;
}

}  // namespace detail

/// One printed inequality: a region in (s, t) and the direction of g on it.
/// `label` is the equation number the catalog shows.
struct Branch {
  int label;
  InequalityFamily family;
  bool increasing;  // true: m = g(r), M = g(R)
  std::string_view region;
  bool (*in_region)(double s, double t);
  bool upper_misprint = false;  // upper factor printed as (4 - s)R + s
};

inline constexpr std::array<Branch, 17> kBranches{{
    {32, InequalityFamily::I_OmegaPhi, true, "s + t <= 1, t <= -1",
     [](double s, double t) { return s + t <= 1.0 && t <= -1.0; }},
    {33, InequalityFamily::I_OmegaPhi, false, "s + t >= 1, t >= -1",
     [](double s, double t) { return s + t >= 1.0 && t >= -1.0; }},
    {34, InequalityFamily::II_OmegaAdjPhi, true, "s >= t, t <= 2",
     [](double s, double t) { return s >= t && t <= 2.0; }},
    {35, InequalityFamily::II_OmegaAdjPhi, false, "s <= t, t >= 2",
     [](double s, double t) { return s <= t && t >= 2.0; }},
    {36, InequalityFamily::III_ZetaPhi, true, "0 <= s <= 4, t <= 2, s >= t + 1",
     [](double s, double t) {
       return s >= 0.0 && s <= 4.0 && t <= 2.0 && s >= t + 1.0;
     }},
    {37, InequalityFamily::III_ZetaPhi, false, "0 <= s <= 4, t >= 2, s <= t + 1",
     [](double s, double t) {
       return s >= 0.0 && s <= 4.0 && t >= 2.0 && s <= t + 1.0;
     }},
    {38, InequalityFamily::IV_ZetaAdjPhi, true, "0 <= s <= 4, t <= -1, s + t <= 1",
     [](double s, double t) {
       return s >= 0.0 && s <= 4.0 && t <= -1.0 && s + t <= 1.0;
     }},
    {39, InequalityFamily::IV_ZetaAdjPhi, false, "0 <= s <= 4, t >= -1, s + t >= 2",
     [](double s, double t) {
       return s >= 0.0 && s <= 4.0 && t >= -1.0 && s + t >= 2.0;
     }},
    {40, InequalityFamily::V_OmegaAdjOmega, true, "s >= -1, t >= -1",
     [](double s, double t) { return s >= -1.0 && t >= -1.0; }},
    {41, InequalityFamily::V_OmegaAdjOmega, false, "s <= -1, t <= -1",
     [](double s, double t) { return s <= -1.0 && t <= -1.0; }},
    {42, InequalityFamily::VI_ZetaOmega, true, "0 <= s <= 4, t >= -1",
     [](double s, double t) { return s >= 0.0 && s <= 4.0 && t >= -1.0; }},
    {43, InequalityFamily::VII_ZetaAdjOmega, true,
     "0 <= s <= 4, t >= s, t(4 - s) >= 6s - s^2 - 4",
     [](double s, double t) {
       return s >= 0.0 && s <= 4.0 && t >= s &&
              t * (4.0 - s) >= 6.0 * s - s * s - 4.0;
     }},
    {44, InequalityFamily::VII_ZetaAdjOmega, false,
     "0 <= s <= 4, t <= s, t(4 - s) <= 6s - s^2 - 4",
     [](double s, double t) {
       return s >= 0.0 && s <= 4.0 && t <= s &&
              t * (4.0 - s) <= 6.0 * s - s * s - 4.0;
     }},
    {45, InequalityFamily::VIII_ZetaOmegaAdj, true,
     "0 <= s <= 4, s >= t, s(t - s + 6) >= 4(1 + t)",
     [](double s, double t) {
       return s >= 0.0 && s <= 4.0 && s >= t &&
              s * (t - s + 6.0) >= 4.0 * (1.0 + t);
     }},
    {46, InequalityFamily::VIII_ZetaOmegaAdj, false,
     "0 <= s <= 4, s <= t, s(t - s + 6) <= 4(1 + t)",
     [](double s, double t) {
       return s >= 0.0 && s <= 4.0 && s <= t &&
              s * (t - s + 6.0) <= 4.0 * (1.0 + t);
     }},
    {47, InequalityFamily::IX_ZetaAdjOmegaAdj, false, "0 <= s <= 4, t >= -1",
     [](double s, double t) { return s >= 0.0 && s <= 4.0 && t >= -1.0; }, true},
    {48, InequalityFamily::X_ZetaAdjZeta, false, "2 <= s <= 4, 2 <= t <= 4",
     [](double s, double t) {
       return s >= 2.0 && s <= 4.0 && t >= 2.0 && t <= 4.0;
     }},
}};

inline const Branch* find_branch(int label) {
  for (const auto& b : kBranches) {
    if (b.label == label) return &b;
  }
  return nullptr;
}

/// Branches of `family` whose region contains (s, t), in catalog order.
inline std::vector<const Branch*> in_region_branches(InequalityFamily family,
                                                     double s, double t) {
  std::vector<const Branch*> out;
  for (const auto& b : kBranches) {
    if (b.family == family && b.in_region(s, t)) out.push_back(&b);
  }
  return out;
}

inline bool region_ok(InequalityFamily family, double s, double t) {
  return !in_region_branches(family, s, t).empty();
}

struct PrintedBounds {
  double m;
  double M;
};

/// m and M exactly as the branch prints them.
inline PrintedBounds printed_bounds(const Branch& b, double s, double t,
                                    double r, double R) {
  const double at_r = detail::printed_coefficient(b.family, s, t, r);
  const double at_R = detail::printed_coefficient(b.family, s, t, R);
  if (b.upper_misprint) {
    // Reproduced literally; the numeric cross-check flags it.
    const double upper = 1.0 / std::pow(r, s + 1.0) *
                         std::pow((r + 1.0) / 2.0, s - t - 1.0) *
                         ((4.0 - s) * R + s);
    return {at_R, upper};
  }
  return b.increasing ? PrintedBounds{at_r, at_R} : PrintedBounds{at_R, at_r};
}

/// f1''(x) / f2''(x).
inline double g_ratio(GeneratorSpec num, GeneratorSpec den, double x) {
  detail::require_positive(x, "x");
  const double d = gen_d2(den, x);
  if (!(d > 0.0)) {
    throw Error(ErrorCode::DegenerateDenominator,
                "denominator curvature is " + std::to_string(d) + " at x = " +
                    std::to_string(x));
  }
  return gen_d2(num, x) / d;
}

struct NumericBounds {
  double m;
  double M;
  double argmin;
  double argmax;
};

inline constexpr int kNumericGridPoints = 4097;
inline constexpr double kRefineWidth = 1e-12;

namespace detail {

inline void require_interval(double r, double R) {
  require_positive(r, "r");
  require_positive(R, "R");
  if (r > R) {
    throw Error(ErrorCode::NonPositiveArgument,
                "interval needs r <= R, got [" + std::to_string(r) + ", " +
                    std::to_string(R) + "]");
  }
}

/// Golden-section search for the minimum of h over [a, b].
template <typename H>
std::pair<double, double> golden_min(H h, double a, double b) {
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double hc = h(c);
  double hd = h(d);
  while (b - a > kRefineWidth) {
    if (hc <= hd) {
      b = d;
      d = c;
      hd = hc;
      c = b - kInvPhi * (b - a);
      hc = h(c);
    } else {
      a = c;
      c = d;
      hc = hd;
      d = a + kInvPhi * (b - a);
      hd = h(d);
    }
  }
  return hc <= hd ? std::pair{c, hc} : std::pair{d, hd};
}

}  // namespace detail

/// inf and sup of g over [r, R]: a log-spaced grid, then golden-section
/// refinement (in ln x) around the best grid cell of each.
inline NumericBounds numeric_mM(GeneratorSpec num, GeneratorSpec den, double r,
                                double R) {
  detail::require_interval(r, R);
  const double lr = std::log(r);
  const double lR = std::log(R);
  const int n = kNumericGridPoints;
  const double step = (lR - lr) / (n - 1);
  auto at = [&](int k) { return k == 0 ? r : (k == n - 1 ? R : std::exp(lr + step * k)); };

  int kmin = 0;
  int kmax = 0;
  double gmin = g_ratio(num, den, r);
  double gmax = gmin;
  if (r == R) return {gmin, gmin, r, r};
  for (int k = 1; k < n; ++k) {
    const double g = g_ratio(num, den, at(k));
    if (g < gmin) {
      gmin = g;
      kmin = k;
    }
    if (g > gmax) {
      gmax = g;
      kmax = k;
    }
  }
  NumericBounds out{gmin, gmax, at(kmin), at(kmax)};
  auto refine = [&](int k, double sign, double& best, double& where) {
    if (k == 0 || k == n - 1) return;  // endpoint extremum: the grid value is exact
    const double a = lr + step * (k - 1);
    const double b = lr + step * (k + 1);
    const auto [y, h] = detail::golden_min(
        [&](double ly) { return sign * g_ratio(num, den, std::exp(ly)); }, a, b);
    if (sign * h < sign * best) {
      best = sign * h;
      where = std::exp(y);
    }
  };
  refine(kmin, 1.0, out.m, out.argmin);
  refine(kmax, -1.0, out.M, out.argmax);
  return out;
}

enum class CertificateSource { ClosedForm, Numeric };

constexpr std::string_view to_string(CertificateSource s) {
  return s == CertificateSource::ClosedForm ? "ClosedForm" : "Numeric";
}

struct BoundCertificate {
  InequalityFamily family;
  double s;
  double t;
  double r;
  double R;
  double m;
  double M;
  CertificateSource source;
  bool region_ok;
  std::optional<std::string> erratum;
  int branch = 0;  // label of the printed branch used, 0 when numeric
};

/// Grid points where no in-region printed branch survives the numeric
/// cross-check. Recomputed and compared against a committed fixture by the
/// acceptance suite.
struct ErratumEntry {
  InequalityFamily family;
  double s;
  double t;
  std::string_view reason;
};

inline constexpr std::string_view kErratumWrongDirection =
    "printed direction of monotonicity fails at this boundary point; numeric bounds shipped";
inline constexpr std::string_view kErratumUpperMisprint =
    "printed upper coefficient uses (4 - s)R + s where (4 - s)r + s is needed; numeric bounds shipped";

inline const std::vector<ErratumEntry>& errata_registry() {
  static const std::vector<ErratumEntry> table = [] {
    std::vector<ErratumEntry> out;
    out.push_back({InequalityFamily::III_ZetaPhi, 4.0, 3.0, kErratumWrongDirection});
    for (double s : {0.0, 0.5, 1.0, 1.5, 2.0, 3.0}) {
      for (double t : {-1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0}) {
        out.push_back({InequalityFamily::IX_ZetaAdjOmegaAdj, s, t, kErratumUpperMisprint});
      }
    }
    return out;
  }();
  return table;
}

inline const ErratumEntry* find_erratum(InequalityFamily family, double s,
                                        double t) {
  for (const auto& e : errata_registry()) {
    if (e.family == family && e.s == s && e.t == t) return &e;
  }
  return nullptr;
}

enum class CrossCheck {
  Always,    // compare every printed branch with numeric_mM
  Registry,  // trust printed values unless registered as erratum or branches disagree
};

struct ClosedFormOptions {
  bool strict = false;  // RegionViolation instead of a numeric fallback
  CrossCheck cross_check = CrossCheck::Always;
  double rel_tol = 1e-6;
};

inline bool bounds_agree(double a, double b, double rel_tol) {
  return std::abs(a - b) <= rel_tol * std::max(std::abs(b), 1e-300);
}

inline BoundCertificate numeric_certificate(InequalityFamily family, double s,
                                            double t, double r, double R) {
  const auto nb = numeric_mM(numerator_spec(family, s), denominator_spec(family, t), r, R);
  return {family, s, t, r, R, nb.m, nb.M, CertificateSource::Numeric,
          region_ok(family, s, t), std::nullopt, 0};
}

inline BoundCertificate closed_form_mM(InequalityFamily family, double s,
                                       double t, double r, double R,
                                       ClosedFormOptions opt = {}) {
  detail::require_interval(r, R);
  const auto branches = in_region_branches(family, s, t);
  if (branches.empty()) {
    if (opt.strict) {
      throw Error(ErrorCode::RegionViolation,
                  "(s, t) = (" + std::to_string(s) + ", " + std::to_string(t) +
                      ") lies outside every printed region of family " +
                      std::string(to_string(family)));
    }
    return numeric_certificate(family, s, t, r, R);
  }

  if (opt.cross_check == CrossCheck::Registry) {
    const auto* e = find_erratum(family, s, t);
    const auto first = printed_bounds(*branches.front(), s, t, r, R);
    bool consistent = e == nullptr;
    for (std::size_t i = 1; consistent && i < branches.size(); ++i) {
      const auto other = printed_bounds(*branches[i], s, t, r, R);
      consistent = bounds_agree(other.m, first.m, opt.rel_tol) &&
                   bounds_agree(other.M, first.M, opt.rel_tol);
    }
    if (consistent) {
      return {family, s, t, r, R, first.m, first.M, CertificateSource::ClosedForm,
              true, std::nullopt, branches.front()->label};
    }
    if (e != nullptr) {
      auto cert = numeric_certificate(family, s, t, r, R);
      cert.erratum = std::string(e->reason);
      return cert;
    }
    // Conflicting printed branches: let the numeric oracle pick.
  }

  const auto nb = numeric_mM(numerator_spec(family, s), denominator_spec(family, t), r, R);
  for (const auto* b : branches) {
    const auto pb = printed_bounds(*b, s, t, r, R);
    if (bounds_agree(pb.m, nb.m, opt.rel_tol) && bounds_agree(pb.M, nb.M, opt.rel_tol)) {
      return {family, s, t, r, R, pb.m, pb.M, CertificateSource::ClosedForm,
              true, std::nullopt, b->label};
    }
  }
  const auto* e = find_erratum(family, s, t);
  std::string reason = e != nullptr
                           ? std::string(e->reason)
                           : "printed closed form disagrees with the numeric oracle; numeric bounds shipped";
  return {family, s, t, r, R, nb.m, nb.M, CertificateSource::Numeric, true,
          std::move(reason), 0};
}

struct SandwichReport {
  BoundCertificate certificate;
  double lhs;   // m C_f2
  double mid;   // C_f1
  double rhs;   // M C_f2
  double slack_low;
  double slack_high;
  bool pass;
};

inline constexpr double kSandwichTolerance = 1e-10;

/// Evaluates m C_f2 <= C_f1 <= M C_f2 from already computed divergences.
inline SandwichReport sandwich_from(const BoundCertificate& cert, double c_f1,
                                    double c_f2) {
  SandwichReport rep{cert, cert.m * c_f2, c_f1, cert.M * c_f2, 0.0, 0.0, false};
  rep.slack_low = rep.mid - rep.lhs;
  rep.slack_high = rep.rhs - rep.mid;
  const double floor = -kSandwichTolerance * std::max(1.0, std::abs(rep.mid));
  rep.pass = rep.slack_low >= floor && rep.slack_high >= floor;
  return rep;
}

inline SandwichReport sandwich_check(InequalityFamily family, double s,
                                     double t, const Distribution& p,
                                     const Distribution& q,
                                     ClosedFormOptions opt = {}) {
  const auto rb = ratio_bounds(p, q);
  const auto cert = closed_form_mM(family, s, t, rb.r, rb.R, opt);
  return sandwich_from(cert, csiszar(numerator_spec(family, s), p, q),
                       csiszar(denominator_spec(family, t), p, q));
}

}  // namespace divbound
