// One line per acceptance criterion. Exit status is nonzero if any fails.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "divbound/divbound.hpp"
#include "oracle.hpp"

using namespace divbound;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

nlohmann::json fixture(const std::string& name) {
  std::ifstream in(std::string(DIVBOUND_FIXTURES_DIR) + "/" + name);
  if (!in) throw std::runtime_error("missing fixture " + name);
  return nlohmann::json::parse(in);
}

std::string summarize(const VerificationReport& rep) {
  std::size_t failed = 0;
  double worst = 0.0;
  std::string first;
  for (const auto& c : rep.checks) {
    if (c.passes != c.attempts) {
      if (failed++ == 0) first = c.id;
    }
    if (c.kind == CheckKind::Equality) worst = std::max(worst, c.worst_slack);
  }
  std::ostringstream os;
  os << rep.checks.size() << " checks, " << failed << " failed";
  if (failed) os << " (first: " << first << ")";
  if (worst > 0) os << ", worst equality residual " << format_real(worst);
  return os.str();
}

VerifyConfig config(std::vector<std::string> subjects, std::uint64_t trials, double tol) {
  VerifyConfig c;
  c.trials = trials;
  c.subjects = std::move(subjects);
  c.rel_tol = tol;
  c.threads = 4;
  return c;
}

Verdict identities_suite() {
  auto c = config({"families"}, 10'000, 1e-10);
  c.dims = {2, 3, 5, 10};
  const auto rep = run(c);
  return {rep.all_passed(), summarize(rep)};
}

Verdict csiszar_engine() {
  const auto rep = run(config({"csiszar"}, 1'000, 1e-12));
  return {rep.all_passed(), summarize(rep)};
}

Verdict derivative_soundness() {
  const double svals[] = {-2, -1, 0, 0.5, 1, 2, 3, 4};
  double worst = 0.0;
  std::size_t checked = 0;
  for (auto g : kAllGeneratorKinds) {
    for (double s : svals) {
      for (int k = 0; k < 64; ++k) {
        const double x = std::exp(std::log(0.05) + k * (std::log(20.0) - std::log(0.05)) / 63);
        const long double fd = oracle::d2_fd(g, s, x);
        worst = std::max(worst, oracle::rel(gen_d2({g, s}, x), fd));
        worst = std::max(worst, oracle::rel(gen_eval({g, s}, x).d2, fd));
        ++checked;
      }
    }
  }
  return {worst <= 1e-5, std::to_string(checked) + " points, worst relative gap " + format_real(worst)};
}

// Log-spaced nodes for the plain-grid oracle.
constexpr std::size_t kPlainGridPoints = 8193;

struct PointResult {
  bool printed_ok = true;
  std::size_t oracle_disagree = 0;
  std::size_t bad_shipped = 0;
};

PointResult check_point(InequalityFamily f, double s, double t,
                        const std::vector<std::pair<double, double>>& intervals) {
  PointResult out;
  const auto num = numerator_spec(f, s), den = denominator_spec(f, t);
  for (const auto& [r, R] : intervals) {
    const auto nb = numeric_mM(num, den, r, R);
    const auto bf = brute_force_mM(num, den, r, R, kPlainGridPoints);
    if (!bounds_agree(nb.m, bf.m, 1e-6) || !bounds_agree(nb.M, bf.M, 1e-6)) ++out.oracle_disagree;
    bool ok = false;
    for (const auto* b : in_region_branches(f, s, t)) {
      const auto pb = printed_bounds(*b, s, t, r, R);
      ok = ok || (bounds_agree(pb.m, nb.m, 1e-6) && bounds_agree(pb.M, nb.M, 1e-6) &&
                  bounds_agree(pb.m, bf.m, 1e-6) && bounds_agree(pb.M, bf.M, 1e-6));
    }
    out.printed_ok = out.printed_ok && ok;
    const auto cert = closed_form_mM(f, s, t, r, R);
    if (!bounds_agree(cert.m, nb.m, 1e-6) || !bounds_agree(cert.M, nb.M, 1e-6) ||
        cert.erratum.has_value() == ok) {
      ++out.bad_shipped;
    }
  }
  return out;
}

Verdict bound_constants() {
  const auto fx = fixture("closed_form_errata.json");
  std::mt19937_64 rng(fx["interval_seed"].get<std::uint64_t>());
  std::uniform_real_distribution<double> u(std::log(0.05), std::log(20.0));
  std::vector<std::pair<double, double>> intervals;
  for (int i = 0; i < fx["intervals"].get<int>(); ++i) {
    double a = std::exp(u(rng)), b = std::exp(u(rng));
    if (a > b) std::swap(a, b);
    intervals.emplace_back(a, b);
  }
  using Key = std::tuple<std::string, double, double>;
  std::set<Key> failing, registry, committed;
  for (const auto& e : fx["failures"]) {
    committed.insert({e["family"].get<std::string>(), e["s"].get<double>(), e["t"].get<double>()});
  }
  std::vector<std::tuple<InequalityFamily, double, double>> points;
  for (auto f : kAllInequalityFamilies) {
    for (double s : kParameterGrid) {
      for (double t : kParameterGrid) {
        if (!region_ok(f, s, t)) continue;
        points.emplace_back(f, s, t);
        if (find_erratum(f, s, t) != nullptr) registry.insert({std::string(to_string(f)), s, t});
      }
    }
  }
  std::vector<PointResult> results(points.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const unsigned workers = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < points.size(); i = next++) {
        const auto& [f, s, t] = points[i];
        results[i] = check_point(f, s, t, intervals);
      }
    });
  }
  for (auto& th : pool) th.join();

  std::size_t oracle_disagree = 0, bad_shipped = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& [f, s, t] = points[i];
    if (!results[i].printed_ok) failing.insert({std::string(to_string(f)), s, t});
    oracle_disagree += results[i].oracle_disagree;
    bad_shipped += results[i].bad_shipped;
  }
  std::ostringstream os;
  os << points.size() << " in-region points x " << intervals.size() << " intervals; "
     << failing.size() << " failing points, fixture " << committed.size() << ", registry "
     << registry.size() << "; oracle disagreements " << oracle_disagree
     << ", wrong shipped certificates " << bad_shipped;
  return {failing == committed && failing == registry && oracle_disagree == 0 && bad_shipped == 0, os.str()};
}

Verdict sandwich_validity() {
  const auto rep = run(config({"corollaries", "theorem"}, 10'000, 1e-10));
  return {rep.all_passed(), summarize(rep)};
}

Verdict identity_adjudication() {
  const auto rep = run(config({"identities"}, 10'000, 1e-10));
  const auto fx = fixture("relj_constant.json");
  const auto adj = adjudicate_split_constant(fx["trials"].get<std::uint64_t>(), fx["seed"].get<std::uint64_t>(),
                                             fx["candidates"].get<std::vector<double>>(),
                                             fx["rel_tol"].get<double>());
  const double committed = fx["confirmed"].get<double>();
  const bool constant_ok = adj.confirmed && *adj.confirmed == committed && committed == kRelativeJSplitConstant;
  std::ostringstream os;
  os << summarize(rep) << "; constant fitted in [" << format_real(adj.fitted_min) << ", "
     << format_real(adj.fitted_max) << "], confirmed "
     << (adj.confirmed ? format_real(*adj.confirmed) : std::string("none")) << ", fixture "
     << format_real(committed);
  return {rep.all_passed() && constant_ok, os.str()};
}

Verdict convexity_and_nonnegativity() {
  std::size_t scans = 0, failed = 0;
  for (auto g : kAllGeneratorKinds) {
    const bool zeta = g == GeneratorKind::XiGen || g == GeneratorKind::VarsigmaGen;
    for (double s : kParameterGrid) {
      if (zeta && s < 0) continue;
      ++scans;
      failed += !convexity_scan({g, s}, 1e-3, 1e3, 2048).convex;
    }
  }
  const auto rep = run(config({"nonnegativity"}, 10'000, 1e-10));
  std::ostringstream os;
  os << scans << " convexity scans, " << failed << " non-convex; " << summarize(rep);
  return {failed == 0 && rep.all_passed(), os.str()};
}

Verdict determinism() {
  const char* argv[] = {"divbound", "verify", "--trials", "500", "--seed", "20261016",
                        "--subjects", "all", "--threads", "4"};
  std::ostringstream a, b, err;
  const int ca = cli::run_cli(10, argv, a, err);
  const int cb = cli::run_cli(10, argv, b, err);
  const bool same = a.str() == b.str();
  return {ca == 0 && cb == 0 && same && !a.str().empty(),
          std::to_string(a.str().size()) + " bytes, " + (same ? "identical" : "different")};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Verdict()>> criteria[] = {
      {"particular-case identities, 1e4 pairs, n in {2,3,5,10}", identities_suite},
      {"csiszar engine equals family values, 1e3 pairs", csiszar_engine},
      {"analytic d2 vs central differences", derivative_soundness},
      {"closed-form constants vs refined and plain-grid oracles", bound_constants},
      {"sandwich validity, corollaries and theorem grid, 1e4 pairs", sandwich_validity},
      {"identity adjudication and split constant", identity_adjudication},
      {"convexity and nonnegativity", convexity_and_nonnegativity},
      {"deterministic verify reports", determinism},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !v.pass;
    std::printf("criterion %d: %s  %s  [%s] (%.2f s)\n", index, v.pass ? "PASS" : "FAIL", name,
                v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
