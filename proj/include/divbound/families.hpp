#pragma once

#include <array>
#include <string>
#include <string_view>

#include "divbound/error.hpp"
#include "divbound/kernels.hpp"
#include "divbound/measures.hpp"
#include "divbound/simplex.hpp"

// The type-s families. Each is written as a normalized sum so the limit
// cases s = 0 and s = 1 are reached exactly when s compares equal to them
// and every term is nonnegative wherever the generator is convex.
namespace divbound {

enum class FamilyKind { Phi, Omega, OmegaAdjoint, Zeta, ZetaAdjoint };

struct FamilyId {
  FamilyKind family = FamilyKind::Phi;
  double s = 0.0;

  friend bool operator==(const FamilyId&, const FamilyId&) = default;
};

inline constexpr std::array kAllFamilyKinds{
    FamilyKind::Phi, FamilyKind::Omega, FamilyKind::OmegaAdjoint,
    FamilyKind::Zeta, FamilyKind::ZetaAdjoint};

constexpr std::string_view cli_name(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Phi: return "phi";
    case FamilyKind::Omega: return "omega";
    case FamilyKind::OmegaAdjoint: return "omega-adj";
    case FamilyKind::Zeta: return "zeta";
    case FamilyKind::ZetaAdjoint: return "zeta-adj";
  }
  return "?";
}

inline FamilyKind parse_family_kind(std::string_view name) {
  for (auto kind : kAllFamilyKinds) {
    if (cli_name(kind) == name) return kind;
  }
  throw Error(ErrorCode::UnknownName,
              "unknown family '" + std::string(name) + "'");
}

/// Zeta generators are convex only for 0 <= s <= 4; Phi and Omega always.
constexpr bool is_convex(FamilyId id) {
  if (id.family == FamilyKind::Zeta || id.family == FamilyKind::ZetaAdjoint) {
    return id.s >= 0.0 && id.s <= 4.0;
  }
  return true;
}

/// Phi_s(P||Q) = [sum p^s q^(1-s) - 1] / (s(s-1)); K(Q||P) at s=0, K(P||Q) at s=1.
inline double phi_s(double s, const Distribution& p, const Distribution& q) {
  return detail::sum_terms(p, q, [s](double a, double b) {
    return b * detail::power_defect(s, detail::ratio_of(a, b));
  });
}

/// Omega_s(P||Q) = [sum p ((p+q)/2p)^s - 1] / (s(s-1)); F at s=0, G at s=1.
/// `adjoint` evaluates Omega_s(Q||P).
inline double omega_s(double s, const Distribution& p, const Distribution& q,
                      bool adjoint = false) {
  const Distribution& a = adjoint ? q : p;
  const Distribution& b = adjoint ? p : q;
  return detail::sum_terms(a, b, [s](double x, double y) {
    return x * detail::power_defect(s, detail::midpoint_ratio(y, x));
  });
}

/// zeta_s(P||Q) = sum (p-q) ((p+q)/2q)^(s-1) / (s-1); D(P||Q) at s=1.
inline double zeta_s(double s, const Distribution& p, const Distribution& q,
                     bool adjoint = false) {
  const Distribution& a = adjoint ? q : p;
  const Distribution& b = adjoint ? p : q;
  return detail::sum_terms(a, b, [s](double x, double y) {
    return (x - y) *
           detail::expm1_over(s - 1.0, detail::midpoint_ratio(x, y).log_y);
  });
}

inline double family_value(FamilyId id, const Distribution& p,
                           const Distribution& q) {
  switch (id.family) {
    case FamilyKind::Phi: return phi_s(id.s, p, q);
    case FamilyKind::Omega: return omega_s(id.s, p, q, false);
    case FamilyKind::OmegaAdjoint: return omega_s(id.s, p, q, true);
    case FamilyKind::Zeta: return zeta_s(id.s, p, q, false);
    case FamilyKind::ZetaAdjoint: return zeta_s(id.s, p, q, true);
  }
  return 0.0;
}

struct FamilyResult {
  double value = 0.0;
  bool convex = true;  // false: outside the range where nonnegativity is guaranteed
};

inline FamilyResult evaluate_family(FamilyId id, const Distribution& p,
                                    const Distribution& q) {
  return {family_value(id, p, q), is_convex(id)};
}

}  // namespace divbound
