#pragma once

#include <cmath>
#include <optional>
#include <string_view>
#include <vector>

#include "divbound/bounds.hpp"
#include "divbound/measures.hpp"

// Two-measure consequences of the inequality families. At a suitable (s, t)
// the sandwich m C_f2 <= C_f1 <= M C_f2 rearranges into r <= d <= R, where d
// is a ratio of classical measures. The check of an entry is sandwich_check
// at (family, s, t); `ratio` is for display and for the r <= d <= R check.
namespace divbound {

struct Substitution {
  int label;  // catalog label of the branch
  double s;
  double t;
};

struct Corollary {
  std::string_view name;
  InequalityFamily family;
  double s;
  double t;
  std::string_view display;
  double (*ratio)(const ClassicalValues&);
  std::vector<Substitution> cited;
  std::string_view note;  // empty when every cited substitution reproduces
  bool erratum = false;   // excluded from sandwich verification
};

inline const std::vector<Corollary>& corollary_table() {
  using F = InequalityFamily;
  using V = const ClassicalValues&;
  static const std::vector<Corollary> table{
      {"chi2-vs-hellinger", F::II_OmegaAdjPhi, 2, 0.5,
       "r <= ∛(χ²(P||Q)²) / (4 ∛(h(P||Q)²)) <= R",
       [](V m) { return std::cbrt(m.chi2 * m.chi2) / (4 * std::cbrt(m.hellinger * m.hellinger)); },
       {{34, 2, 0.5}, {36, 2, 0.5}}, ""},
      {"hellinger-vs-chi2-adj", F::I_OmegaPhi, 2, 0.5,
       "r <= 4 ∛(h(P||Q)²) / ∛(χ²(Q||P)²) <= R",
       [](V m) { return 4 * std::cbrt(m.hellinger * m.hellinger) / std::cbrt(m.chi2_qp * m.chi2_qp); },
       {{33, 2, 0.5}, {39, 2, 0.5}}, ""},
      {"chi2-ratio", F::I_OmegaPhi, 2, 2,
       "r <= ∛χ²(P||Q) / ∛χ²(Q||P) <= R",
       [](V m) { return std::cbrt(m.chi2) / std::cbrt(m.chi2_qp); },
       {{33, 2, 2}, {39, 2, 2}, {40, 2, 2}, {42, 2, 2}, {47, 2, 2}, {48, 2, 2}, {34, 2, -1}, {36, 2, -1}},
       "the IX substitution reproduces the ratio but its printed upper bound is misprinted"},
      {"chi2-over-2KL", F::II_OmegaAdjPhi, 2, 1,
       "r <= χ²(P||Q) / (2K(P||Q)) <= R",
       [](V m) { return m.chi2 / (2 * m.kl); },
       {{34, 2, 1}, {36, 2, 1}}, ""},
      {"2KL-adj-over-chi2-adj", F::I_OmegaPhi, 2, 0,
       "r <= 2K(Q||P) / χ²(Q||P) <= R",
       [](V m) { return 2 * m.kl_qp / m.chi2_qp; },
       {{33, 2, 0}, {39, 2, 0}}, ""},
      {"sqrt-2KL-over-chi2-adj", F::I_OmegaPhi, 2, 1,
       "r <= √(2K(P||Q)) / √χ²(Q||P) <= R",
       [](V m) { return std::sqrt(2 * m.kl) / std::sqrt(m.chi2_qp); },
       {{33, 2, 1}, {39, 2, 1}}, ""},
      {"sqrt-chi2-over-2KL-adj", F::II_OmegaAdjPhi, 2, 0,
       "r <= √χ²(P||Q) / √(2K(Q||P)) <= R",
       [](V m) { return std::sqrt(m.chi2) / std::sqrt(2 * m.kl_qp); },
       {{34, 2, 0}, {36, 2, 0}}, ""},
      {"F-ratio", F::V_OmegaAdjOmega, 0, 0,
       "r <= F(Q||P) / F(P||Q) <= R",
       [](V m) { return m.f_qp / m.f; },
       {{40, 0, 0}}, ""},
      {"G-ratio", F::V_OmegaAdjOmega, 1, 1,
       "r <= √G(Q||P) / √G(P||Q) <= R",
       [](V m) { return std::sqrt(m.g_qp) / std::sqrt(m.g); },
       {{40, 1, 1}}, ""},
      {"delta-vs-chi2", F::I_OmegaPhi, -1, 2,
       "r <= (∛(4χ²(P||Q)) - ∛Δ(P||Q)) / ∛Δ(P||Q) <= R",
       [](V m) { return (std::cbrt(4 * m.chi2) - std::cbrt(m.delta)) / std::cbrt(m.delta); },
       {{33, -1, 2}, {39, 0, 2}, {46, 0, 2}, {47, 0, 2}, {40, 2, -1}, {42, 2, -1}},
       "the IX substitution reproduces the ratio but its printed upper bound is misprinted"},
      {"delta-vs-chi2-adj", F::I_OmegaPhi, -1, -1,
       "r <= ∛Δ(P||Q) / (∛(4χ²(Q||P)) - ∛Δ(P||Q)) <= R",
       [](V m) { return std::cbrt(m.delta) / (std::cbrt(4 * m.chi2_qp) - std::cbrt(m.delta)); },
       {{32, -1, -1}, {34, -1, -1}, {36, 0, -1}, {40, -1, 2}, {42, 0, 2}, {44, 0, 2}, {44, 2, -1}, {47, 2, -1}},
       "VII at s = 0, t = 2 lies in the increasing region, not the cited decreasing one"},
      {"KL-adj-vs-G", F::I_OmegaPhi, 1, 0,
       "r <= (K(Q||P) - 2G(P||Q)) / (2G(P||Q)) <= R",
       [](V m) { return (m.kl_qp - 2 * m.g) / (2 * m.g); },
       {{33, 1, 0}}, ""},
      {"G-adj-vs-KL", F::II_OmegaAdjPhi, 1, 1,
       "r <= 2G(Q||P) / (K(P||Q) - 2G(Q||P)) <= R",
       [](V m) { return 2 * m.g_qp / (m.kl - 2 * m.g_qp); },
       {{34, 1, 1}}, ""},
      {"KL-vs-F", F::I_OmegaPhi, 0, 1,
       "r <= (√K(P||Q) - √F(P||Q)) / √F(P||Q) <= R",
       [](V m) { return (std::sqrt(m.kl) - std::sqrt(m.f)) / std::sqrt(m.f); },
       {{33, 0, 1}}, ""},
      {"F-adj-vs-KL-adj", F::II_OmegaAdjPhi, 0, 0,
       "r <= √F(Q||P) / (√K(Q||P) - √F(Q||P)) <= R",
       [](V m) { return std::sqrt(m.f_qp) / (std::sqrt(m.kl_qp) - std::sqrt(m.f_qp)); },
       {{34, 0, 0}}, ""},
      {"delta-vs-G", F::V_OmegaAdjOmega, -1, 1,
       "r <= √Δ(P||Q) / (4√G(P||Q) - √Δ(P||Q)) <= R",
       [](V m) { return std::sqrt(m.delta) / (4 * std::sqrt(m.g) - std::sqrt(m.delta)); },
       {{40, -1, 1}, {42, 0, 1}, {43, 0, 1}}, ""},
      {"G-adj-vs-delta", F::V_OmegaAdjOmega, 1, -1,
       "r <= (4√G(Q||P) - √Δ(P||Q)) / √Δ(P||Q) <= R",
       [](V m) { return (4 * std::sqrt(m.g_qp) - std::sqrt(m.delta)) / std::sqrt(m.delta); },
       {{40, 1, -1}, {46, 0, 1}, {47, 0, 1}},
       "the IX substitution reproduces the ratio but its printed upper bound is misprinted"},
      {"delta-vs-F", F::V_OmegaAdjOmega, -1, 0,
       "r <= Δ(P||Q) / (8F(P||Q) - Δ(P||Q)) <= R",
       [](V m) { return m.delta / (8 * m.f - m.delta); },
       {{40, -1, 0}, {42, 0, 0}, {44, 0, 0}},
       "VII at s = 0, t = 0 lies in the increasing region, not the cited decreasing one"},
      {"F-adj-vs-delta", F::V_OmegaAdjOmega, 0, -1,
       "r <= (8F(Q||P) - Δ(P||Q)) / Δ(P||Q) <= R",
       [](V m) { return (8 * m.f_qp - m.delta) / m.delta; },
       {{40, 0, -1}, {46, 0, 0}, {47, 0, 0}},
       "the IX substitution reproduces the ratio but its printed upper bound is misprinted"},
      {"G-adj-vs-D", F::VIII_ZetaOmegaAdj, 1, 1,
       "r <= (6G(Q||P) - D(P||Q)) / (D(P||Q) - 2G(Q||P)) <= R",
       [](V m) { return (6 * m.g_qp - m.d) / (m.d - 2 * m.g_qp); },
       {{46, 1, 1}}, ""},
      {"D-adj-vs-G", F::VII_ZetaAdjOmega, 1, 1,
       "r <= (D(Q||P) - 2G(P||Q)) / (6G(P||Q) - D(Q||P)) <= R",
       [](V m) { return (m.d_qp - 2 * m.g) / (6 * m.g - m.d_qp); },
       {{44, 1, 1}},
       "VII at s = 1, t = 1 lies in the increasing region, not the cited decreasing one"},
      {"G-vs-chi2-adj", F::I_OmegaPhi, 1, -1,
       "r <= 4G(P||Q) / (χ²(Q||P) - 4G(P||Q)) <= R",
       [](V m) { return 4 * m.g / (m.chi2_qp - 4 * m.g); },
       {{32, 1, -1}, {44, 2, 1}}, ""},
      {"F-vs-D-adj", F::VII_ZetaAdjOmega, 1, 0,
       "r <= F(P||Q) / (D(Q||P) - 3F(P||Q)) <= R",
       [](V m) { return m.f / (m.d_qp - 3 * m.f); },
       {{32, 1, 0}, {44, 2, 1}},
       "neither cited substitution reproduces this ratio; VII at s = 1, t = 0 does"},
      {"F-vs-chi2-adj", F::I_OmegaPhi, 0, -1,
       "r <= √(2F(P||Q)) / (√χ²(Q||P) - √(2F(P||Q))) <= R",
       [](V m) { return std::sqrt(2 * m.f) / (std::sqrt(m.chi2_qp) - std::sqrt(2 * m.f)); },
       {{32, 0, -1}, {44, 2, 0}}, ""},
      {"D-vs-F", F::VI_ZetaOmega, 1, 0,
       "r <= (√(4D(P||Q) + 9F(P||Q)) - 3√F(P||Q)) / (2√F(P||Q)) <= R",
       [](V m) { return (std::sqrt(4 * m.d + 9 * m.f) - 3 * std::sqrt(m.f)) / (2 * std::sqrt(m.f)); },
       {{42, 1, 0}}, ""},
      {"F-adj-vs-D-adj", F::IX_ZetaAdjOmegaAdj, 1, 0,
       "r <= 2√F(Q||P) / (√(4D(Q||P) + 9F(Q||P)) - 3√F(Q||P)) <= R",
       [](V m) { return 2 * std::sqrt(m.f_qp) / (std::sqrt(4 * m.d_qp + 9 * m.f_qp) - 3 * std::sqrt(m.f_qp)); },
       {{47, 1, 0}},
       "only substitution is the IX branch, whose printed upper bound is misprinted", true},
      {"F-adj-vs-G", F::V_OmegaAdjOmega, 0, 1,
       "r <= 2√F(Q||P) / (√(8G(P||Q) + F(Q||P)) - √F(Q||P)) <= R",
       [](V m) { return 2 * std::sqrt(m.f_qp) / (std::sqrt(8 * m.g + m.f_qp) - std::sqrt(m.f_qp)); },
       {{40, 0, 1}}, ""},
      {"G-adj-vs-F", F::V_OmegaAdjOmega, 1, 0,
       "r <= (√(8G(Q||P) + F(P||Q)) - √F(P||Q)) / (2√F(P||Q)) <= R",
       [](V m) { return (std::sqrt(8 * m.g_qp + m.f) - std::sqrt(m.f)) / (2 * std::sqrt(m.f)); },
       {{40, 1, 0}}, ""},
      {"G-adj-vs-KL-adj", F::II_OmegaAdjPhi, 1, 0,
       "r <= 2√G(Q||P) / (√(2K(Q||P) + G(Q||P)) - √G(Q||P)) <= R",
       [](V m) { return 2 * std::sqrt(m.g_qp) / (std::sqrt(2 * m.kl_qp + m.g_qp) - std::sqrt(m.g_qp)); },
       {{34, 1, 0}}, ""},
      {"KL-vs-G", F::I_OmegaPhi, 1, 1,
       "r <= (√(2K(P||Q) + G(P||Q)) - √G(P||Q)) / (2√G(P||Q)) <= R",
       [](V m) { return (std::sqrt(2 * m.kl + m.g) - std::sqrt(m.g)) / (2 * std::sqrt(m.g)); },
       {{33, 1, 1}}, ""},
      {"D-vs-delta", F::VI_ZetaOmega, 1, -1,
       "r <= (√(8D(P||Q) + Δ(P||Q)) - 2√Δ(P||Q)) / √Δ(P||Q) <= R",
       [](V m) { return (std::sqrt(8 * m.d + m.delta) - 2 * std::sqrt(m.delta)) / std::sqrt(m.delta); },
       {{42, 1, -1}}, ""},
      {"delta-vs-D-adj", F::VII_ZetaAdjOmega, 1, -1,
       "r <= √Δ(P||Q) / (√(8D(Q||P) + Δ(P||Q)) - 2√Δ(P||Q)) <= R",
       [](V m) { return std::sqrt(m.delta) / (std::sqrt(8 * m.d_qp + m.delta) - 2 * std::sqrt(m.delta)); },
       {{44, 1, -1}, {47, 1, -1}},
       "the IX substitution reproduces the ratio but its printed upper bound is misprinted"},
      {"chi2-vs-D", F::VIII_ZetaOmegaAdj, 1, 2,
       "r <= (5√χ²(P||Q) - √(16D(P||Q) + χ²(P||Q))) / (√(16D(P||Q) + χ²(P||Q)) - √χ²(P||Q)) <= R",
       [](V m) {
         const double a = std::sqrt(m.chi2);
         const double b = std::sqrt(16 * m.d + m.chi2);
         return (5 * a - b) / (b - a);
       },
       {{46, 1, 2}}, ""},
  };
  return table;
}

inline const Corollary* find_corollary(std::string_view name) {
  for (const auto& c : corollary_table()) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

}  // namespace divbound
