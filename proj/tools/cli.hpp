#pragma once

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "divbound/divbound.hpp"

// divbound command line. Data goes to `out` in exactly the requested format;
// diagnostics go to `err`. Exit codes: 0 ok, 1 input or config error,
// 2 verification violation, 3 region violation under --strict-closed-form.
namespace divbound::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitViolation = 2;
inline constexpr int kExitRegion = 3;

using nlohmann::ordered_json;

namespace detail {

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string real(double v) { return format_real(v); }

inline std::uint64_t default_seed() {
  const char* env = std::getenv("DIVBOUND_SEED");
  if (env == nullptr || *env == '\0') return 0;
  std::uint64_t v = 0;
  const std::string_view text(env);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::ConfigInvalid,
                "DIVBOUND_SEED must be a non-negative integer, got '" + std::string(text) + "'");
  }
  return v;
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto t = divbound::detail::trim(item);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

struct PairInput {
  std::string p_path;
  std::string q_path;
  bool normalize = false;
};

inline std::pair<Distribution, Distribution> load_pair(const PairInput& in) {
  auto load = [&](const std::string& path, const char* which) {
    try {
      return load_distribution(path, in.normalize);
    } catch (const Error& e) {
      throw Error(e.code(), std::string(which) + " (" + path + "): " + e.what(), e.index());
    }
  };
  auto p = load(in.p_path, "P");
  auto q = load(in.q_path, "Q");
  require_same_length(p, q);
  return {std::move(p), std::move(q)};
}

struct ComputeRow {
  std::string name;
  std::optional<double> s;
  double value;
  std::optional<bool> convex;
};

inline int cmd_compute(const std::string& name, std::optional<double> s, const PairInput& in,
                       const std::string& format, std::ostream& out, std::ostream& err) {
  std::vector<ComputeRow> rows;
  const auto [p, q] = load_pair(in);
  if (name == "all") {
    if (s) throw Error(ErrorCode::ConfigInvalid, "--s applies to a family, not to 'all'");
    for (auto kind : kAllMeasureKinds) {
      for (auto o : {Orientation::PQ, Orientation::QP}) {
        if (o == Orientation::QP && is_symmetric(kind)) continue;
        rows.push_back({to_string(MeasureId{kind, o}), std::nullopt, evaluate({kind, o}, p, q), std::nullopt});
      }
    }
  } else if (name.find(':') == std::string::npos &&
             (name == "phi" || name == "omega" || name == "omega-adj" || name == "zeta" ||
              name == "zeta-adj")) {
    if (!s) throw Error(ErrorCode::ConfigInvalid, "family '" + name + "' needs --s");
    const FamilyId id{parse_family_kind(name), *s};
    const auto res = evaluate_family(id, p, q);
    if (!res.convex) {
      err << "warning: " << name << " with s = " << real(*s)
          << " is non-convex (outside 0 <= s <= 4); nonnegativity is not guaranteed\n";
    }
    rows.push_back({name, *s, res.value, res.convex});
  } else {
    if (s) throw Error(ErrorCode::ConfigInvalid, "--s applies to a family, not to measure '" + name + "'");
    const auto id = parse_measure_id(name);
    rows.push_back({to_string(id), std::nullopt, evaluate(id, p, q), std::nullopt});
  }

  if (format == "json") {
    ordered_json j = ordered_json::array();
    for (const auto& r : rows) {
      ordered_json e;
      e["name"] = r.name;
      if (r.s) e["s"] = *r.s;
      e["value"] = r.value;
      if (r.convex) e["convex"] = *r.convex;
      j.push_back(std::move(e));
    }
    out << (rows.size() == 1 ? j[0] : j).dump(2) << '\n';
  } else if (format == "csv") {
    out << "name,s,value\n";
    for (const auto& r : rows) {
      out << r.name << ',' << (r.s ? real(*r.s) : "") << ',' << real(r.value) << '\n';
    }
  } else if (rows.size() == 1) {
    out << real(rows[0].value) << '\n';
  } else {
    for (const auto& r : rows) out << r.name << ' ' << real(r.value) << '\n';
  }
  return kExitOk;
}

inline ordered_json certificate_json(const BoundCertificate& c) {
  ordered_json j;
  j["family"] = std::string(to_string(c.family));
  j["s"] = c.s;
  j["t"] = c.t;
  j["r"] = c.r;
  j["R"] = c.R;
  j["m"] = c.m;
  j["M"] = c.M;
  j["source"] = std::string(to_string(c.source));
  j["region_ok"] = c.region_ok;
  if (c.erratum) j["erratum"] = *c.erratum;
  return j;
}

struct BoundsArgs {
  std::string family;
  double s = 0.0;
  double t = 0.0;
  std::optional<double> r;
  std::optional<double> R;
  PairInput pair;
  bool strict = false;
};

inline int cmd_bounds(const BoundsArgs& a, const std::string& format, std::ostream& out,
                      std::ostream& err) {
  const auto family = parse_inequality_family(a.family);
  const bool have_pair = !a.pair.p_path.empty() || !a.pair.q_path.empty();
  const bool have_interval = a.r.has_value() || a.R.has_value();
  if (have_pair == have_interval) {
    throw Error(ErrorCode::ConfigInvalid, "give either --r and --R, or --p and --q");
  }
  if (have_interval && !(a.r && a.R)) throw Error(ErrorCode::ConfigInvalid, "--r and --R go together");
  if (have_pair && (a.pair.p_path.empty() || a.pair.q_path.empty())) {
    throw Error(ErrorCode::ConfigInvalid, "--p and --q go together");
  }
  const ClosedFormOptions opt{a.strict, CrossCheck::Always, 1e-6};
  std::optional<SandwichReport> sandwich;
  BoundCertificate cert{};
  if (have_pair) {
    const auto [p, q] = load_pair(a.pair);
    sandwich = sandwich_check(family, a.s, a.t, p, q, opt);
    cert = sandwich->certificate;
  } else {
    cert = closed_form_mM(family, a.s, a.t, *a.r, *a.R, opt);
  }
  if (!cert.region_ok) {
    err << "warning: (s, t) lies outside every printed region of family "
        << to_string(family) << "; numeric bounds returned\n";
  }
  if (cert.erratum) err << "warning: erratum: " << *cert.erratum << '\n';

  if (format == "json") {
    auto j = certificate_json(cert);
    if (sandwich) {
      j["sandwich"] = {{"lhs", sandwich->lhs},
                       {"mid", sandwich->mid},
                       {"rhs", sandwich->rhs},
                       {"slack_low", sandwich->slack_low},
                       {"slack_high", sandwich->slack_high},
                       {"pass", sandwich->pass}};
    }
    out << j.dump(2) << '\n';
  } else if (format == "csv") {
    out << "family,s,t,r,R,m,M,source,region_ok,erratum,lhs,mid,rhs,pass\n";
    out << to_string(family) << ',' << real(cert.s) << ',' << real(cert.t) << ','
        << real(cert.r) << ',' << real(cert.R) << ',' << real(cert.m) << ','
        << real(cert.M) << ',' << to_string(cert.source) << ','
        << (cert.region_ok ? "true" : "false") << ','
        << csv_field(cert.erratum.value_or("")) << ',';
    if (sandwich) {
      out << real(sandwich->lhs) << ',' << real(sandwich->mid) << ','
          << real(sandwich->rhs) << ',' << (sandwich->pass ? "true" : "false");
    } else {
      out << ",,,";
    }
    out << '\n';
  } else {
    out << "family " << to_string(family) << ": " << family_info(family).relation << '\n'
        << "s " << real(cert.s) << "\nt " << real(cert.t) << '\n'
        << "r " << real(cert.r) << "\nR " << real(cert.R) << '\n'
        << "m " << real(cert.m) << "\nM " << real(cert.M) << '\n'
        << "source " << to_string(cert.source) << '\n'
        << "region_ok " << (cert.region_ok ? "true" : "false") << '\n';
    if (cert.erratum) out << "erratum " << *cert.erratum << '\n';
    if (sandwich) {
      out << "m*C_f2 " << real(sandwich->lhs) << "\nC_f1 " << real(sandwich->mid)
          << "\nM*C_f2 " << real(sandwich->rhs) << "\npass "
          << (sandwich->pass ? "true" : "false") << '\n';
    }
  }
  return kExitOk;
}

inline int cmd_verify(const VerifyConfig& cfg, const std::string& format, std::ostream& out,
                      std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  const auto report = run(cfg);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (format == "json") {
    out << to_json(report).dump(2) << '\n';
  } else if (format == "csv") {
    out << "id,subject,kind,attempts,passes,worst_slack,max_magnitude,witness_trial\n";
    for (const auto& c : report.checks) {
      out << csv_field(c.id) << ',' << c.subject << ',' << to_string(c.kind) << ','
          << c.attempts << ',' << c.passes << ',' << real(c.worst_slack) << ','
          << real(c.max_magnitude) << ',' << (c.witness ? std::to_string(c.witness->trial) : "")
          << '\n';
    }
  } else {
    for (const auto& c : report.checks) {
      out << (c.passes == c.attempts ? "PASS " : "FAIL ") << c.id << "  " << c.passes << '/'
          << c.attempts << "  worst " << real(c.worst_slack) << '\n';
    }
  }
  std::size_t failed = 0;
  for (const auto& c : report.checks) failed += c.passes != c.attempts;
  std::ostringstream timing;
  timing.precision(3);
  timing << std::fixed << secs;
  err << "verify: " << cfg.trials << " trials, " << report.checks.size() << " checks, "
      << failed << " failed, " << timing.str() << " s\n";
  return failed == 0 ? kExitOk : kExitViolation;
}

inline ordered_json catalog_json() {
  ordered_json j;
  ordered_json measures = ordered_json::array();
  for (auto k : kAllMeasureKinds) {
    measures.push_back({{"name", std::string(cli_name(k))},
                        {"description", std::string(display_name(k))},
                        {"symmetric", is_symmetric(k)}});
  }
  j["measures"] = std::move(measures);

  ordered_json families = ordered_json::array();
  const std::pair<FamilyKind, const char*> fam[] = {
      {FamilyKind::Phi, "(12): Φ_s(P||Q), relative information of type s"},
      {FamilyKind::Omega, "(15): Ω_s(P||Q), unified relative JS and AG"},
      {FamilyKind::OmegaAdjoint, "(15): Ω_s(Q||P), adjoint"},
      {FamilyKind::Zeta, "(17): ζ_s(P||Q), relative J-divergence of type s (convex for 0 <= s <= 4)"},
      {FamilyKind::ZetaAdjoint, "(17): ζ_s(Q||P), adjoint (convex for 0 <= s <= 4)"},
  };
  for (const auto& [k, text] : fam) {
    families.push_back({{"name", std::string(cli_name(k))}, {"description", text}});
  }
  j["families"] = std::move(families);

  ordered_json ineq = ordered_json::array();
  for (const auto& b : kBranches) {
    const auto fi = family_info(b.family);
    ordered_json e;
    e["family"] = std::string(fi.roman);
    e["label"] = "(" + std::to_string(b.label) + "): " + std::string(fi.relation);
    e["region"] = std::string(b.region);
    e["monotone"] = b.increasing ? "increasing" : "decreasing";
    e["misprint"] = b.upper_misprint;
    ineq.push_back(std::move(e));
  }
  j["inequalities"] = std::move(ineq);

  ordered_json cors = ordered_json::array();
  for (const auto& c : corollary_table()) {
    ordered_json e;
    e["name"] = std::string(c.name);
    e["family"] = std::string(to_string(c.family));
    e["s"] = c.s;
    e["t"] = c.t;
    e["display"] = std::string(c.display);
    ordered_json cited = ordered_json::array();
    for (const auto& sub : c.cited) {
      cited.push_back("(" + std::to_string(sub.label) + ") s=" + format_real(sub.s) +
                      " t=" + format_real(sub.t));
    }
    e["cited"] = std::move(cited);
    if (!c.note.empty()) e["note"] = std::string(c.note);
    e["erratum"] = c.erratum;
    cors.push_back(std::move(e));
  }
  j["corollaries"] = std::move(cors);

  ordered_json errata = ordered_json::array();
  for (const auto& e : errata_registry()) {
    errata.push_back({{"family", std::string(to_string(e.family))},
                      {"s", e.s},
                      {"t", e.t},
                      {"reason", std::string(e.reason)}});
  }
  j["errata"] = std::move(errata);
  return j;
}

inline int cmd_catalog(const std::string& format, std::ostream& out) {
  const auto j = catalog_json();
  if (format == "json") {
    out << j.dump(2) << '\n';
    return kExitOk;
  }
  if (format == "csv") {
    out << "section,name,detail\n";
    for (const auto& m : j["measures"]) {
      out << "measure," << m["name"].get<std::string>() << ','
          << csv_field(m["description"].get<std::string>()) << '\n';
    }
    for (const auto& f : j["families"]) {
      out << "family," << f["name"].get<std::string>() << ','
          << csv_field(f["description"].get<std::string>()) << '\n';
    }
    for (const auto& i : j["inequalities"]) {
      out << "inequality," << i["family"].get<std::string>() << ','
          << csv_field(i["label"].get<std::string>() + " [" + i["region"].get<std::string>() + "]")
          << '\n';
    }
    for (const auto& c : j["corollaries"]) {
      out << "corollary," << c["name"].get<std::string>() << ','
          << csv_field(c["display"].get<std::string>()) << '\n';
    }
    return kExitOk;
  }
  out << "Measures (--p/--q; suffix :pq or :qp)\n";
  for (const auto& m : j["measures"]) {
    out << "  " << m["name"].get<std::string>() << "  " << m["description"].get<std::string>()
        << '\n';
  }
  out << "\nType-s families (--s)\n";
  for (const auto& f : j["families"]) {
    out << "  " << f["name"].get<std::string>() << "  " << f["description"].get<std::string>()
        << '\n';
  }
  out << "\nInequality families (bounds --family)\n";
  for (const auto& i : j["inequalities"]) {
    out << "  " << i["family"].get<std::string>() << "  " << i["label"].get<std::string>()
        << "  [" << i["region"].get<std::string>() << "]  " << i["monotone"].get<std::string>()
        << (i["misprint"].get<bool>() ? "  (printed upper bound flagged)" : "") << '\n';
  }
  out << "\nCorollaries\n";
  for (const auto& c : j["corollaries"]) {
    out << "  " << c["name"].get<std::string>() << "  " << c["family"].get<std::string>()
        << " s=" << format_real(c["s"].get<double>()) << " t=" << format_real(c["t"].get<double>())
        << "  " << c["display"].get<std::string>() << (c["erratum"].get<bool>() ? "  [erratum]" : "")
        << '\n';
    if (c.contains("note")) out << "      note: " << c["note"].get<std::string>() << '\n';
  }
  out << "\nErrata (numeric bounds shipped)\n";
  for (const auto& e : j["errata"]) {
    out << "  " << e["family"].get<std::string>() << " s=" << format_real(e["s"].get<double>())
        << " t=" << format_real(e["t"].get<double>()) << '\n';
  }
  return kExitOk;
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"divbound: divergence measures, type-s families and certified bounds"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "divbound 0.1.0");

  std::string format;
  auto fmt_check = CLI::IsMember({"json", "csv", "text"});

  auto* compute = app.add_subcommand("compute", "Evaluate a measure or a type-s family");
  std::string name;
  std::optional<double> s_opt;
  detail::PairInput pair;
  compute->add_option("name", name, "Measure (chi2, kl:qp, ...), family (phi, zeta-adj, ...) or 'all'")
      ->required();
  compute->add_option("--s", s_opt, "Family parameter s");
  compute->add_option("--p", pair.p_path, "File with P (JSON array or one value per line)")->required();
  compute->add_option("--q", pair.q_path, "File with Q")->required();
  compute->add_flag("--normalize", pair.normalize, "Rescale inputs to unit sum before validation");
  compute->add_option("--format", format, "json, csv or text")->check(fmt_check);

  auto* bounds = app.add_subcommand("bounds", "Certified constants m, M for an inequality family");
  detail::BoundsArgs ba;
  bounds->add_option("--family", ba.family, "I .. X")->required();
  bounds->add_option("--s", ba.s, "Numerator parameter")->required();
  bounds->add_option("--t", ba.t, "Denominator parameter")->required();
  bounds->add_option("--r", ba.r, "Lower likelihood-ratio bound");
  bounds->add_option("--R", ba.R, "Upper likelihood-ratio bound");
  bounds->add_option("--p", ba.pair.p_path, "File with P (interval taken from the pair)");
  bounds->add_option("--q", ba.pair.q_path, "File with Q");
  bounds->add_flag("--normalize", ba.pair.normalize, "Rescale inputs to unit sum before validation");
  bounds->add_flag("--strict-closed-form", ba.strict, "Fail with exit 3 outside every printed region");
  bounds->add_option("--format", format, "json, csv or text")->check(fmt_check);

  auto* verify = app.add_subcommand("verify", "Monte-Carlo verification of identities and bounds");
  VerifyConfig cfg;
  std::optional<std::uint64_t> seed;
  std::string subjects = "identities";
  std::string dims;
  verify->add_option("--trials", cfg.trials, "Number of sampled pairs")->capture_default_str();
  verify->add_option("--seed", seed, "Seed (default: DIVBOUND_SEED or 0)");
  verify->add_option("--subjects", subjects,
                     "Comma list: identities, families, csiszar, nonnegativity, corollaries, "
                     "theorem, errata, all")
      ->capture_default_str();
  verify->add_option("--dims", dims, "Comma list of dimensions, cycled by trial");
  verify->add_option("--n-min", cfg.n_min, "Smallest dimension")->capture_default_str();
  verify->add_option("--n-max", cfg.n_max, "Largest dimension")->capture_default_str();
  verify->add_option("--concentration", cfg.concentration, "Dirichlet concentration")
      ->capture_default_str();
  verify->add_option("--rel-tol", cfg.rel_tol, "Relative tolerance")->capture_default_str();
  verify->add_flag("--identical-pair", cfg.identical_pair, "Force P = Q");
  verify->add_option("--threads", cfg.threads, "Worker threads")->capture_default_str();
  verify->add_option("--format", format, "json, csv or text")->check(fmt_check);

  auto* catalog = app.add_subcommand("catalog", "List measures, families, inequalities, corollaries");
  catalog->add_option("--format", format, "json, csv or text")->check(fmt_check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitInput;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }

  try {
    if (compute->parsed()) {
      return detail::cmd_compute(name, s_opt, pair, format.empty() ? "text" : format, out, err);
    }
    if (bounds->parsed()) {
      return detail::cmd_bounds(ba, format.empty() ? "json" : format, out, err);
    }
    if (verify->parsed()) {
      cfg.seed = seed ? *seed : detail::default_seed();
      cfg.subjects = detail::split_list(subjects);
      for (const auto& d : detail::split_list(dims)) {
        const double v = parse_real(d);
        if (!(v >= 2.0) || v != static_cast<double>(static_cast<std::size_t>(v))) {
          throw Error(ErrorCode::ConfigInvalid, "dimension '" + d + "' is not an integer >= 2");
        }
        cfg.dims.push_back(static_cast<std::size_t>(v));
      }
      return detail::cmd_verify(cfg, format.empty() ? "json" : format, out, err);
    }
    return detail::cmd_catalog(format.empty() ? "text" : format, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::RegionViolation ? kExitRegion : kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

}  // namespace divbound::cli
