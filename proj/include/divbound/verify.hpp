#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "divbound/bounds.hpp"
#include "divbound/corollaries.hpp"
#include "divbound/error.hpp"
#include "divbound/families.hpp"
#include "divbound/generators.hpp"
#include "divbound/measures.hpp"
#include "divbound/simplex.hpp"

// Monte-Carlo verification. Each trial draws one Dirichlet pair from its own
// RNG stream, runs every selected check on it, and never stops on failure:
// violations are shrunk toward the uniform pair and kept as witnesses.
namespace divbound {

/// (s, t) values exercised by the verification subjects.
inline constexpr std::array<double, 10> kParameterGrid{-2, -1, -0.5, 0, 0.5, 1, 1.5, 2, 3, 4};

inline constexpr std::array<std::string_view, 7> kSubjects{
    "identities", "families", "csiszar", "nonnegativity", "corollaries", "theorem", "errata"};

struct VerifyConfig {
  std::uint64_t trials = 1000;
  std::size_t n_min = 2;
  std::size_t n_max = 10;
  std::vector<std::size_t> dims;  // when set, trial i uses dims[i % size]
  std::uint64_t seed = 0;
  double concentration = 1.0;
  double rel_tol = 1e-10;
  std::vector<std::string> subjects{"identities"};
  bool identical_pair = false;  // force P = Q
  unsigned threads = 1;         // does not affect the report
};

inline constexpr std::uint64_t kMaxTrials = 10'000'000;

enum class CheckKind { Equality, Inequality, Nonnegativity };

constexpr std::string_view to_string(CheckKind k) {
  switch (k) {
    case CheckKind::Equality: return "equality";
    case CheckKind::Inequality: return "inequality";
    case CheckKind::Nonnegativity: return "nonnegativity";
  }
  return "?";
}

struct Witness {
  std::uint64_t trial = 0;
  std::vector<double> p;
  std::vector<double> q;
  std::optional<double> s;
  std::optional<double> t;
};

/// For equality checks worst_slack is the largest relative residual; for
/// the others it is the smallest normalized slack (negative = violated).
struct CheckResult {
  std::string id;
  std::string subject;
  CheckKind kind = CheckKind::Equality;
  std::uint64_t attempts = 0;
  std::uint64_t passes = 0;
  double worst_slack = 0.0;
  double max_magnitude = 0.0;
  std::optional<Witness> witness;
};

struct VerificationReport {
  VerifyConfig config;
  std::vector<CheckResult> checks;

  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.passes == c.attempts; });
  }
};

inline std::vector<std::string> expand_subjects(const std::vector<std::string>& in) {
  std::vector<std::string> out;
  auto add = [&](std::string_view s) {
    if (std::find(out.begin(), out.end(), s) == out.end()) out.emplace_back(s);
  };
  for (const auto& s : in) {
    if (s == "all") {
      for (auto k : kSubjects) {
        if (k != "errata") add(k);
      }
    } else if (std::find(kSubjects.begin(), kSubjects.end(), s) != kSubjects.end()) {
      add(s);
    } else {
      throw Error(ErrorCode::ConfigInvalid, "unknown subject '" + s + "'");
    }
  }
  return out;
}

inline void validate_config(const VerifyConfig& c) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::ConfigInvalid, what); };
  if (c.trials < 1) fail("trials must be >= 1");
  if (c.trials > kMaxTrials) fail("trials must be <= 10^7");
  if (!(c.rel_tol > 0.0 && c.rel_tol < 1.0)) fail("rel_tol must lie in (0, 1)");
  if (!(c.concentration > 0.0) || !std::isfinite(c.concentration)) {
    fail("concentration must be positive");
  }
  if (c.dims.empty()) {
    if (c.n_min < 2 || c.n_min > c.n_max) fail("dimension range must satisfy 2 <= n_min <= n_max");
  }
  for (auto n : c.dims) {
    if (n < 2) fail("every dimension must be >= 2");
  }
  if (c.subjects.empty()) fail("no subjects selected");
  expand_subjects(c.subjects);
}

/// Plain min/max of g on `points` log-spaced nodes, endpoints included.
inline NumericBounds brute_force_mM(GeneratorSpec num, GeneratorSpec den,
                                    double r, double R, std::size_t points) {
  detail::require_interval(r, R);
  if (points < 2) throw Error(ErrorCode::ConfigInvalid, "brute force needs >= 2 points");
  NumericBounds out{g_ratio(num, den, r), 0.0, r, r};
  out.M = out.m;
  if (r == R) return out;
  const double lr = std::log(r);
  const double step = (std::log(R) - lr) / static_cast<double>(points - 1);
  for (std::size_t k = 1; k < points; ++k) {
    const double x = k == points - 1 ? R : std::exp(lr + step * static_cast<double>(k));
    const double g = g_ratio(num, den, x);
    if (g < out.m) {
      out.m = g;
      out.argmin = x;
    }
    if (g > out.M) {
      out.M = g;
      out.argmax = x;
    }
  }
  return out;
}

namespace detail {

inline double relative_residual(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

/// Lazily computed per-pair quantities shared by the checks of one trial.
class TrialContext {
 public:
  TrialContext(Distribution p, Distribution q) : p_(std::move(p)), q_(std::move(q)) {}

  const Distribution& p() const { return p_; }
  const Distribution& q() const { return q_; }

  const ClassicalValues& classical() {
    if (!classical_) classical_ = classical_values(p_, q_);
    return *classical_;
  }
  const RatioBounds& bounds() {
    if (!bounds_) bounds_ = ratio_bounds(p_, q_);
    return *bounds_;
  }
  /// csiszar(kind, kParameterGrid[index]).
  double csiszar_at(GeneratorKind kind, std::size_t index) {
    auto& slot = csiszar_[static_cast<std::size_t>(kind) * kParameterGrid.size() + index];
    if (!slot) slot = csiszar({kind, kParameterGrid[index]}, p_, q_);
    return *slot;
  }

 private:
  Distribution p_;
  Distribution q_;
  std::optional<ClassicalValues> classical_;
  std::optional<RatioBounds> bounds_;
  std::array<std::optional<double>, 5 * kParameterGrid.size()> csiszar_{};
};

struct Outcome {
  bool pass = true;
  double slack = 0.0;
  double magnitude = 0.0;
  std::optional<double> s;
  std::optional<double> t;
};

struct CheckDef {
  std::string id;
  std::string subject;
  CheckKind kind;
  std::function<Outcome(TrialContext&)> eval;
};

inline Outcome equality(double lhs, double rhs, double tol) {
  const double res = relative_residual(lhs, rhs);
  return {res <= tol, res, std::max(std::abs(lhs), std::abs(rhs)), {}, {}};
}

/// Folds several equality outcomes into the worst one.
inline void worst_equality(Outcome& acc, const Outcome& next) {
  const bool pass = acc.pass && next.pass;
  const double mag = std::max(acc.magnitude, next.magnitude);
  if (next.slack > acc.slack) acc = next;
  acc.pass = pass;
  acc.magnitude = mag;
}

inline void worst_inequality(Outcome& acc, const Outcome& next, bool first) {
  const bool pass = first ? next.pass : acc.pass && next.pass;
  const double mag = first ? next.magnitude : std::max(acc.magnitude, next.magnitude);
  if (first || next.slack < acc.slack) acc = next;
  acc.pass = pass;
  acc.magnitude = mag;
}

inline Outcome nonnegative(double v, double tol) {
  return {v >= -tol, v, std::abs(v), {}, {}};
}

/// Normalized sandwich slack, relative to the size of the bounded value.
inline Outcome sandwich_outcome(const SandwichReport& rep, double tol, double s,
                                double t) {
  const double scale = std::max({std::abs(rep.mid), std::abs(rep.lhs), std::abs(rep.rhs)});
  const double slack = scale == 0.0 ? 0.0 : std::min(rep.slack_low, rep.slack_high) / scale;
  return {slack >= -tol, slack, std::abs(rep.mid), s, t};
}

inline std::size_t grid_index(double v) {
  for (std::size_t i = 0; i < kParameterGrid.size(); ++i) {
    if (kParameterGrid[i] == v) return i;
  }
  return kParameterGrid.size();
}

inline void add_identity_checks(std::vector<CheckDef>& out, double tol) {
  auto add = [&](std::string id, std::function<Outcome(TrialContext&)> f) {
    out.push_back({std::move(id), "identities", CheckKind::Equality, std::move(f)});
  };
  add("J = K(P||Q) + K(Q||P)", [tol](TrialContext& c) {
    return equality(j_divergence(c.p(), c.q()),
                    kullback_leibler(c.p(), c.q()) + kullback_leibler(c.q(), c.p()), tol);
  });
  add("J = D(P||Q) + D(Q||P)", [tol](TrialContext& c) {
    return equality(j_divergence(c.p(), c.q()),
                    relative_j(c.p(), c.q()) + relative_j(c.q(), c.p()), tol);
  });
  add("J = 4[I + T]", [tol](TrialContext& c) {
    return equality(j_divergence(c.p(), c.q()),
                    4.0 * (jensen_shannon(c.p(), c.q()) + arithmetic_geometric(c.q(), c.p())), tol);
  });
  add("D(Q||P) = c[F(P||Q) + G(P||Q)]", [tol](TrialContext& c) {
    const auto& v = c.classical();
    return equality(v.d_qp, kRelativeJSplitConstant * (v.f + v.g), tol);
  });
  add("Psi = chi2(P||Q) + chi2(Q||P)", [tol](TrialContext& c) {
    const auto& v = c.classical();
    return equality(symmetric_chi_square(c.p(), c.q()), v.chi2 + v.chi2_qp, tol);
  });
  add("h = 1 - B", [tol](TrialContext& c) {
    // 1 - B cancels for close pairs, so the residual is taken on B's scale.
    const double b = bhattacharyya(c.p(), c.q());
    const double h = hellinger(c.p(), c.q());
    const double res = std::abs(h - (1.0 - b)) / b;
    return Outcome{res <= tol, res, b, {}, {}};
  });
  for (auto kind : {MeasureKind::Psi, MeasureKind::J, MeasureKind::JS_I, MeasureKind::AG_T,
                    MeasureKind::Triangular, MeasureKind::Bhattacharyya, MeasureKind::Hellinger}) {
    add("symmetric " + std::string(cli_name(kind)), [tol, kind](TrialContext& c) {
      return equality(evaluate({kind, Orientation::PQ}, c.p(), c.q()),
                      evaluate({kind, Orientation::QP}, c.p(), c.q()), tol);
    });
  }
}

inline void add_family_checks(std::vector<CheckDef>& out, double tol) {
  using K = FamilyKind;
  struct Case {
    const char* id;
    FamilyId family;
    double (*expected)(const ClassicalValues&);
  };
  static const Case cases[] = {
      {"Phi_-1 = chi2(Q||P)/2", {K::Phi, -1}, [](const ClassicalValues& v) { return 0.5 * v.chi2_qp; }},
      {"Phi_0 = K(Q||P)", {K::Phi, 0}, [](const ClassicalValues& v) { return v.kl_qp; }},
      {"Phi_1/2 = 4h", {K::Phi, 0.5}, [](const ClassicalValues& v) { return 4.0 * v.hellinger; }},
      {"Phi_1 = K(P||Q)", {K::Phi, 1}, [](const ClassicalValues& v) { return v.kl; }},
      {"Phi_2 = chi2(P||Q)/2", {K::Phi, 2}, [](const ClassicalValues& v) { return 0.5 * v.chi2; }},
      {"Omega_-1 = Delta/4", {K::Omega, -1}, [](const ClassicalValues& v) { return 0.25 * v.delta; }},
      {"Omega_-1(Q||P) = Delta/4", {K::OmegaAdjoint, -1}, [](const ClassicalValues& v) { return 0.25 * v.delta; }},
      {"Omega_0 = F(P||Q)", {K::Omega, 0}, [](const ClassicalValues& v) { return v.f; }},
      {"Omega_0(Q||P) = F(Q||P)", {K::OmegaAdjoint, 0}, [](const ClassicalValues& v) { return v.f_qp; }},
      {"Omega_1 = G(P||Q)", {K::Omega, 1}, [](const ClassicalValues& v) { return v.g; }},
      {"Omega_1(Q||P) = G(Q||P)", {K::OmegaAdjoint, 1}, [](const ClassicalValues& v) { return v.g_qp; }},
      {"Omega_2 = chi2(Q||P)/8", {K::Omega, 2}, [](const ClassicalValues& v) { return 0.125 * v.chi2_qp; }},
      {"Omega_2(Q||P) = chi2(P||Q)/8", {K::OmegaAdjoint, 2}, [](const ClassicalValues& v) { return 0.125 * v.chi2; }},
      {"zeta_0 = Delta", {K::Zeta, 0}, [](const ClassicalValues& v) { return v.delta; }},
      {"zeta_0(Q||P) = Delta", {K::ZetaAdjoint, 0}, [](const ClassicalValues& v) { return v.delta; }},
      {"zeta_1 = D(P||Q)", {K::Zeta, 1}, [](const ClassicalValues& v) { return v.d; }},
      {"zeta_1(Q||P) = D(Q||P)", {K::ZetaAdjoint, 1}, [](const ClassicalValues& v) { return v.d_qp; }},
      {"zeta_2 = chi2(P||Q)/2", {K::Zeta, 2}, [](const ClassicalValues& v) { return 0.5 * v.chi2; }},
      {"zeta_2(Q||P) = chi2(Q||P)/2", {K::ZetaAdjoint, 2}, [](const ClassicalValues& v) { return 0.5 * v.chi2_qp; }},
  };
  for (const auto& c : cases) {
    out.push_back({c.id, "families", CheckKind::Equality, [tol, &c](TrialContext& ctx) {
                     return equality(family_value(c.family, ctx.p(), ctx.q()),
                                     c.expected(ctx.classical()), tol);
                   }});
  }
  out.push_back({"Phi_s(P||Q) = Phi_1-s(Q||P)", "families", CheckKind::Equality,
                 [tol](TrialContext& ctx) {
                   Outcome acc;
                   for (double s : kParameterGrid) {
                     auto o = equality(phi_s(s, ctx.p(), ctx.q()), phi_s(1.0 - s, ctx.q(), ctx.p()), tol);
                     o.s = s;
                     worst_equality(acc, o);
                   }
                   return acc;
                 }});
  out.push_back({"Omega_s(Q||P) = Phi_s((P+Q)/2||Q)", "families", CheckKind::Equality,
                 [tol](TrialContext& ctx) {
                   std::vector<double> mid(ctx.p().size());
                   for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = 0.5 * (ctx.p()[i] + ctx.q()[i]);
                   const auto m = Distribution::validate(mid, {1e-9, 0.0});
                   Outcome acc;
                   for (double s : kParameterGrid) {
                     auto o = equality(omega_s(s, ctx.p(), ctx.q(), true), phi_s(s, m, ctx.q()), tol);
                     o.s = s;
                     worst_equality(acc, o);
                   }
                   return acc;
                 }});
}

inline FamilyId family_of(GeneratorKind g, double s) {
  switch (g) {
    case GeneratorKind::PhiGen: return {FamilyKind::Phi, s};
    case GeneratorKind::PsiGen: return {FamilyKind::Omega, s};
    case GeneratorKind::UpsilonGen: return {FamilyKind::OmegaAdjoint, s};
    case GeneratorKind::XiGen: return {FamilyKind::Zeta, s};
    case GeneratorKind::VarsigmaGen: return {FamilyKind::ZetaAdjoint, s};
  }
  return {FamilyKind::Phi, s};
}

inline void add_csiszar_checks(std::vector<CheckDef>& out, double tol) {
  const double t = std::min(tol, 1e-12);
  for (auto g : kAllGeneratorKinds) {
    out.push_back({"csiszar " + std::string(to_string(g)) + " = family", "csiszar",
                   CheckKind::Equality, [t, g](TrialContext& ctx) {
                     Outcome acc;
                     for (std::size_t i = 0; i < kParameterGrid.size(); ++i) {
                       auto o = equality(ctx.csiszar_at(g, i),
                                         family_value(family_of(g, kParameterGrid[i]), ctx.p(), ctx.q()), t);
                       o.s = kParameterGrid[i];
                       worst_equality(acc, o);
                     }
                     return acc;
                   }});
  }
  out.push_back({"csiszar psi(P,Q) = upsilon(Q,P)", "csiszar", CheckKind::Equality,
                 [t](TrialContext& ctx) {
                   Outcome acc;
                   for (std::size_t i = 0; i < kParameterGrid.size(); ++i) {
                     auto o = equality(ctx.csiszar_at(GeneratorKind::PsiGen, i),
                                       csiszar({GeneratorKind::UpsilonGen, kParameterGrid[i]}, ctx.q(), ctx.p()), t);
                     o.s = kParameterGrid[i];
                     worst_equality(acc, o);
                   }
                   return acc;
                 }});
}

inline void add_nonnegativity_checks(std::vector<CheckDef>& out) {
  constexpr double tol = 1e-15;
  for (auto kind : kAllMeasureKinds) {
    out.push_back({"nonnegative " + std::string(cli_name(kind)), "nonnegativity",
                   CheckKind::Nonnegativity, [kind](TrialContext& ctx) {
                     const double a = evaluate({kind, Orientation::PQ}, ctx.p(), ctx.q());
                     const double b = evaluate({kind, Orientation::QP}, ctx.p(), ctx.q());
                     auto o = nonnegative(std::min(a, b), tol);
                     o.magnitude = std::max(std::abs(a), std::abs(b));
                     return o;
                   }});
  }
  for (auto fk : kAllFamilyKinds) {
    out.push_back({"nonnegative " + std::string(cli_name(fk)), "nonnegativity",
                   CheckKind::Nonnegativity, [fk](TrialContext& ctx) {
                     Outcome acc;
                     bool first = true;
                     for (double s : kParameterGrid) {
                       if (!is_convex({fk, s})) continue;
                       auto o = nonnegative(family_value({fk, s}, ctx.p(), ctx.q()), tol);
                       o.s = s;
                       worst_inequality(acc, o, first);
                       first = false;
                     }
                     return acc;
                   }});
  }
}

inline void add_corollary_checks(std::vector<CheckDef>& out, double tol) {
  const double display_tol = std::max(tol, 1e-8);
  for (const auto& c : corollary_table()) {
    if (c.erratum) continue;
    const auto si = grid_index(c.s);
    const auto ti = grid_index(c.t);
    const auto fi = family_info(c.family);
    out.push_back({"corollary " + std::string(c.name), "corollaries", CheckKind::Inequality,
                   [tol, &c, si, ti, fi](TrialContext& ctx) {
                     const auto& rb = ctx.bounds();
                     const auto cert = closed_form_mM(c.family, c.s, c.t, rb.r, rb.R,
                                                      {false, CrossCheck::Registry, 1e-6});
                     const auto rep = sandwich_from(cert, ctx.csiszar_at(fi.numerator, si),
                                                    ctx.csiszar_at(fi.denominator, ti));
                     return sandwich_outcome(rep, tol, c.s, c.t);
                   }});
    out.push_back({"corollary " + std::string(c.name) + " ratio in [r, R]", "corollaries",
                   CheckKind::Inequality, [display_tol, &c](TrialContext& ctx) {
                     const auto& rb = ctx.bounds();
                     if (rb.r == rb.R) return Outcome{true, 0.0, 0.0, c.s, c.t};  // P = Q: ratio undefined
                     const double d = c.ratio(ctx.classical());
                     const double slack = std::min(d - rb.r, rb.R - d) / std::max(1.0, std::abs(d));
                     return Outcome{slack >= -display_tol, slack, std::abs(d), c.s, c.t};
                   }});
  }
}

struct GridPoint {
  double s;
  double t;
  std::size_t si;
  std::size_t ti;
};

inline std::vector<GridPoint> theorem_points(InequalityFamily f, bool errata) {
  std::vector<GridPoint> out;
  for (std::size_t i = 0; i < kParameterGrid.size(); ++i) {
    for (std::size_t j = 0; j < kParameterGrid.size(); ++j) {
      const double s = kParameterGrid[i];
      const double t = kParameterGrid[j];
      if (!region_ok(f, s, t)) continue;
      if ((find_erratum(f, s, t) != nullptr) == errata) out.push_back({s, t, i, j});
    }
  }
  return out;
}

inline void add_theorem_checks(std::vector<CheckDef>& out, double tol) {
  for (auto f : kAllInequalityFamilies) {
    auto points = theorem_points(f, false);
    const auto fi = family_info(f);
    out.push_back({"theorem " + std::string(fi.roman), "theorem", CheckKind::Inequality,
                   [tol, f, fi, points](TrialContext& ctx) {
                     const auto& rb = ctx.bounds();
                     Outcome acc;
                     bool first = true;
                     for (const auto& pt : points) {
                       const auto cert = closed_form_mM(f, pt.s, pt.t, rb.r, rb.R,
                                                        {false, CrossCheck::Registry, 1e-6});
                       const auto rep = sandwich_from(cert, ctx.csiszar_at(fi.numerator, pt.si),
                                                      ctx.csiszar_at(fi.denominator, pt.ti));
                       worst_inequality(acc, sandwich_outcome(rep, tol, pt.s, pt.t), first);
                       first = false;
                     }
                     return acc;
                   }});
  }
}

/// The printed bounds at registered erratum points, used as if trusted.
inline void add_errata_checks(std::vector<CheckDef>& out, double tol) {
  for (auto f : kAllInequalityFamilies) {
    auto points = theorem_points(f, true);
    if (points.empty()) continue;
    const auto fi = family_info(f);
    out.push_back({"printed bounds " + std::string(fi.roman) + " at erratum points", "errata",
                   CheckKind::Inequality, [tol, f, fi, points](TrialContext& ctx) {
                     const auto& rb = ctx.bounds();
                     Outcome acc;
                     bool first = true;
                     for (const auto& pt : points) {
                       const auto* b = in_region_branches(f, pt.s, pt.t).front();
                       const auto pb = printed_bounds(*b, pt.s, pt.t, rb.r, rb.R);
                       BoundCertificate cert{f, pt.s, pt.t, rb.r, rb.R, pb.m, pb.M,
                                             CertificateSource::ClosedForm, true, std::nullopt, b->label};
                       const auto rep = sandwich_from(cert, ctx.csiszar_at(fi.numerator, pt.si),
                                                      ctx.csiszar_at(fi.denominator, pt.ti));
                       worst_inequality(acc, sandwich_outcome(rep, tol, pt.s, pt.t), first);
                       first = false;
                     }
                     return acc;
                   }});
  }
}

inline std::vector<CheckDef> build_checks(const VerifyConfig& cfg) {
  std::vector<CheckDef> out;
  for (const auto& s : expand_subjects(cfg.subjects)) {
    if (s == "identities") add_identity_checks(out, cfg.rel_tol);
    if (s == "families") add_family_checks(out, cfg.rel_tol);
    if (s == "csiszar") add_csiszar_checks(out, cfg.rel_tol);
    if (s == "nonnegativity") add_nonnegativity_checks(out);
    if (s == "corollaries") add_corollary_checks(out, cfg.rel_tol);
    if (s == "theorem") add_theorem_checks(out, cfg.rel_tol);
    if (s == "errata") add_errata_checks(out, cfg.rel_tol);
  }
  return out;
}

inline std::pair<Distribution, Distribution> trial_pair(const VerifyConfig& cfg,
                                                        std::uint64_t trial) {
  const auto seed = stream_seed(cfg.seed, trial);
  std::size_t n = 0;
  if (!cfg.dims.empty()) {
    n = cfg.dims[trial % cfg.dims.size()];
  } else {
    std::mt19937_64 engine(stream_seed(seed, 0));
    n = std::uniform_int_distribution<std::size_t>(cfg.n_min, cfg.n_max)(engine);
  }
  auto pair = sample_pair(n, seed, cfg.concentration);
  if (cfg.identical_pair) pair.second = pair.first;
  return pair;
}

/// Halves P and Q toward uniform while the check keeps failing; returns
/// the last failing pair.
inline std::pair<Distribution, Distribution> shrink(const CheckDef& check,
                                                    Distribution p, Distribution q) {
  const double u = 1.0 / static_cast<double>(p.size());
  for (int step = 0; step < 60; ++step) {
    std::vector<double> np(p.size());
    std::vector<double> nq(q.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      np[i] = 0.5 * (p[i] + u);
      nq[i] = 0.5 * (q[i] + u);
    }
    auto cp = Distribution::validate(np);
    auto cq = Distribution::validate(nq);
    TrialContext ctx(cp, cq);
    if (check.eval(ctx).pass) break;
    p = std::move(cp);
    q = std::move(cq);
  }
  return {std::move(p), std::move(q)};
}

struct Accumulator {
  std::uint64_t attempts = 0;
  std::uint64_t passes = 0;
  double worst = 0.0;
  double magnitude = 0.0;
  std::optional<std::uint64_t> first_fail;
  Outcome fail_outcome;
};

inline void merge_into(Accumulator& a, const Accumulator& b, CheckKind kind) {
  if (b.attempts == 0) return;
  if (a.attempts == 0) {
    a = b;
    return;
  }
  a.worst = kind == CheckKind::Equality ? std::max(a.worst, b.worst) : std::min(a.worst, b.worst);
  a.magnitude = std::max(a.magnitude, b.magnitude);
  a.attempts += b.attempts;
  a.passes += b.passes;
  if (b.first_fail && (!a.first_fail || *b.first_fail < *a.first_fail)) {
    a.first_fail = b.first_fail;
    a.fail_outcome = b.fail_outcome;
  }
}

inline void run_range(const VerifyConfig& cfg, const std::vector<CheckDef>& checks,
                      std::uint64_t begin, std::uint64_t end, std::vector<Accumulator>& acc) {
  for (std::uint64_t trial = begin; trial < end; ++trial) {
    auto [p, q] = trial_pair(cfg, trial);
    TrialContext ctx(std::move(p), std::move(q));
    for (std::size_t k = 0; k < checks.size(); ++k) {
      const auto o = checks[k].eval(ctx);
      Accumulator one{1, o.pass ? 1u : 0u, o.slack, o.magnitude, std::nullopt, {}};
      if (!o.pass) {
        one.first_fail = trial;
        one.fail_outcome = o;
      }
      merge_into(acc[k], one, checks[k].kind);
    }
  }
}

}  // namespace detail

inline VerificationReport run(const VerifyConfig& cfg) {
  validate_config(cfg);
  const auto checks = detail::build_checks(cfg);
  const unsigned threads =
      static_cast<unsigned>(std::clamp<std::uint64_t>(cfg.threads == 0 ? 1 : cfg.threads, 1, cfg.trials));

  std::vector<std::vector<detail::Accumulator>> parts(
      threads, std::vector<detail::Accumulator>(checks.size()));
  const std::uint64_t chunk = (cfg.trials + threads - 1) / threads;
  if (threads == 1) {
    detail::run_range(cfg, checks, 0, cfg.trials, parts[0]);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          const std::uint64_t b = std::min<std::uint64_t>(cfg.trials, w * chunk);
          const std::uint64_t e = std::min<std::uint64_t>(cfg.trials, b + chunk);
          detail::run_range(cfg, checks, b, e, parts[w]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  VerificationReport report;
  report.config = cfg;
  report.config.subjects = expand_subjects(cfg.subjects);
  for (std::size_t k = 0; k < checks.size(); ++k) {
    detail::Accumulator total;
    for (const auto& part : parts) detail::merge_into(total, part[k], checks[k].kind);
    CheckResult res{checks[k].id, checks[k].subject, checks[k].kind, total.attempts,
                    total.passes, total.worst, total.magnitude, std::nullopt};
    if (total.first_fail) {
      auto [p, q] = detail::trial_pair(cfg, *total.first_fail);
      auto [sp, sq] = detail::shrink(checks[k], std::move(p), std::move(q));
      const auto m1 = sp.masses();
      const auto m2 = sq.masses();
      res.witness = Witness{*total.first_fail, {m1.begin(), m1.end()}, {m2.begin(), m2.end()},
                            total.fail_outcome.s, total.fail_outcome.t};
    }
    report.checks.push_back(std::move(res));
  }
  return report;
}

inline nlohmann::ordered_json to_json(const VerificationReport& r) {
  using nlohmann::ordered_json;
  ordered_json cfg;
  cfg["trials"] = r.config.trials;
  if (r.config.dims.empty()) {
    cfg["n_min"] = r.config.n_min;
    cfg["n_max"] = r.config.n_max;
  } else {
    cfg["dims"] = r.config.dims;
  }
  cfg["concentration"] = r.config.concentration;
  cfg["rel_tol"] = r.config.rel_tol;
  cfg["subjects"] = r.config.subjects;
  cfg["identical_pair"] = r.config.identical_pair;

  std::uint64_t failed = 0;
  ordered_json checks = ordered_json::array();
  for (const auto& c : r.checks) {
    ordered_json j;
    j["id"] = c.id;
    j["subject"] = c.subject;
    j["kind"] = std::string(to_string(c.kind));
    j["attempts"] = c.attempts;
    j["passes"] = c.passes;
    j["worst_slack"] = c.worst_slack;
    j["max_magnitude"] = c.max_magnitude;
    if (c.witness) {
      ordered_json w;
      w["trial"] = c.witness->trial;
      w["P"] = c.witness->p;
      w["Q"] = c.witness->q;
      if (c.witness->s) w["s"] = *c.witness->s;
      if (c.witness->t) w["t"] = *c.witness->t;
      j["witness"] = std::move(w);
      ++failed;
    }
    checks.push_back(std::move(j));
  }
  ordered_json out;
  out["seed"] = r.config.seed;
  out["config"] = std::move(cfg);
  out["summary"] = {{"checks", r.checks.size()}, {"failed", failed}};
  out["checks"] = std::move(checks);
  return out;
}

struct TightnessResult {
  double lower_slack;  // min over pairs of (C_f1 - m C_f2) / C_f2
  double upper_slack;  // min over pairs of (M C_f2 - C_f1) / C_f2
  std::uint64_t pairs;
};

/// How close sampled pairs come to the two sides of the sandwich.
inline TightnessResult tightness_scan(InequalityFamily family, double s, double t,
                                      std::uint64_t trials, std::uint64_t seed,
                                      std::size_t n = 3, double concentration = 1.0) {
  if (trials < 1) throw Error(ErrorCode::ConfigInvalid, "tightness scan needs trials >= 1");
  if (trials > kMaxTrials) throw Error(ErrorCode::ConfigInvalid, "trials must be <= 10^7");
  TightnessResult out{std::numeric_limits<double>::infinity(),
                      std::numeric_limits<double>::infinity(), 0};
  for (std::uint64_t i = 0; i < trials; ++i) {
    const auto [p, q] = sample_pair(n, stream_seed(seed, i), concentration);
    const auto rep = sandwich_check(family, s, t, p, q);
    const double c2 = csiszar(denominator_spec(family, t), p, q);
    if (!(c2 > 0.0)) continue;
    out.lower_slack = std::min(out.lower_slack, rep.slack_low / c2);
    out.upper_slack = std::min(out.upper_slack, rep.slack_high / c2);
    ++out.pairs;
  }
  return out;
}

struct ConstantCandidate {
  double value;
  double max_residual;  // relative, over all sampled pairs
  bool holds;
};

struct ConstantAdjudication {
  std::uint64_t trials;
  std::uint64_t seed;
  double fitted_min;  // D(Q||P) / [F(P||Q) + G(P||Q)] over the pairs
  double fitted_max;
  std::vector<ConstantCandidate> candidates;
  std::optional<double> confirmed;
};

/// Brute-force determination of c in D(Q||P) = c [F(P||Q) + G(P||Q)].
inline ConstantAdjudication adjudicate_split_constant(std::uint64_t trials, std::uint64_t seed,
                                                      std::vector<double> candidates,
                                                      double rel_tol = 1e-10) {
  if (trials < 1) throw Error(ErrorCode::ConfigInvalid, "adjudication needs trials >= 1");
  ConstantAdjudication out{trials, seed, std::numeric_limits<double>::infinity(),
                           -std::numeric_limits<double>::infinity(), {}, std::nullopt};
  for (double c : candidates) out.candidates.push_back({c, 0.0, true});
  for (std::uint64_t i = 0; i < trials; ++i) {
    const std::size_t n = 2 + static_cast<std::size_t>(i % 9);
    const auto [p, q] = sample_pair(n, stream_seed(seed, i), 1.0);
    const double lhs = relative_j(q, p);
    const double fg = relative_jensen_shannon(p, q) + relative_arithmetic_geometric(p, q);
    out.fitted_min = std::min(out.fitted_min, lhs / fg);
    out.fitted_max = std::max(out.fitted_max, lhs / fg);
    for (auto& cand : out.candidates) {
      cand.max_residual = std::max(cand.max_residual, detail::relative_residual(lhs, cand.value * fg));
    }
  }
  for (auto& cand : out.candidates) {
    cand.holds = cand.max_residual <= rel_tol;
    if (cand.holds && !out.confirmed) out.confirmed = cand.value;
  }
  return out;
}

}  // namespace divbound
