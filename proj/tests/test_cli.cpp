#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "divbound");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = divbound::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

const std::string kSamples = DIVBOUND_SAMPLES_DIR;
const std::string kP = kSamples + "/p.json";
const std::string kQ = kSamples + "/q.json";
const std::string kQcsv = kSamples + "/q.csv";

}  // namespace

TEST(Cli, ComputeText) {
  const auto r = cli({"compute", "chi2", "--p", kP, "--q", kQ});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "0.3333333333333333\n");
  EXPECT_TRUE(r.err.empty());
}

TEST(Cli, ComputeCsvInputMatchesJsonInput) {
  EXPECT_EQ(cli({"compute", "kl:qp", "--p", kP, "--q", kQ}).out,
            cli({"compute", "kl:qp", "--p", kP, "--q", kQcsv}).out);
}

TEST(Cli, ComputeFamilyJson) {
  const auto r = cli({"compute", "phi", "--s", "2", "--p", kP, "--q", kQ, "--format", "json"});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["name"], "phi");
  EXPECT_NEAR(j["value"].get<double>(), 1.0 / 6.0, 1e-15);
  EXPECT_TRUE(j["convex"].get<bool>());
}

TEST(Cli, NonConvexZetaWarns) {
  const auto r = cli({"compute", "zeta", "--s", "5", "--p", kP, "--q", kQ});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("non-convex"), std::string::npos);
}

TEST(Cli, ComputeAll) {
  const auto r = cli({"compute", "all", "--p", kP, "--q", kQ, "--format", "csv"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 18);
}

TEST(Cli, InputErrorsExitOne) {
  EXPECT_EQ(cli({"compute", "renyi", "--p", kP, "--q", kQ}).code, 1);
  EXPECT_EQ(cli({"compute", "phi", "--p", kP, "--q", kQ}).code, 1);
  EXPECT_EQ(cli({"compute", "kl", "--s", "1", "--p", kP, "--q", kQ}).code, 1);
  EXPECT_EQ(cli({"compute", "kl", "--p", "/nonexistent.json", "--q", kQ}).code, 1);
  EXPECT_EQ(cli({"compute", "kl", "--p", kP, "--q", kQ, "--format", "xml"}).code, 1);
  EXPECT_EQ(cli({}).code, 1);
  EXPECT_EQ(cli({"frobnicate"}).code, 1);
  EXPECT_EQ(cli({"bounds", "--family", "I", "--s", "0", "--t", "0"}).code, 1);
  EXPECT_EQ(cli({"verify", "--trials", "0"}).code, 1);
  EXPECT_EQ(cli({"verify", "--subjects", "bogus"}).code, 1);
}

TEST(Cli, HelpExitsZero) {
  const auto r = cli({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("compute"), std::string::npos);
}

TEST(Cli, BoundsFieldOrder) {
  const auto r = cli({"bounds", "--family", "I", "--s", "-2", "--t", "4", "--r", "0.5", "--R", "2"});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::ordered_json::parse(r.out);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"family", "s", "t", "r", "R", "m", "M", "source", "region_ok"}));
  EXPECT_EQ(j["source"], "ClosedForm");
}

TEST(Cli, BoundsFromPairIncludesSandwich) {
  const auto r = cli({"bounds", "--family", "II", "--s", "2", "--t", "1", "--p", kP, "--q", kQ});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["sandwich"]["pass"].get<bool>());
  EXPECT_DOUBLE_EQ(j["R"].get<double>(), 2.0);
}

TEST(Cli, BoundsErratum) {
  const auto r = cli({"bounds", "--family", "III", "--s", "4", "--t", "3", "--r", "0.5", "--R", "2"});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["source"], "Numeric");
  EXPECT_TRUE(j.contains("erratum"));
}

TEST(Cli, StrictRegionExitsThree) {
  const auto args = std::vector<std::string>{"bounds", "--family", "IV", "--s", "1", "--t", "0",
                                             "--r", "0.5", "--R", "2"};
  EXPECT_EQ(cli(args).code, 0);
  auto strict = args;
  strict.push_back("--strict-closed-form");
  EXPECT_EQ(cli(strict).code, 3);
}

TEST(Cli, VerifyExitCodes) {
  const auto ok = cli({"verify", "--trials", "20", "--subjects", "identities,families"});
  EXPECT_EQ(ok.code, 0);
  EXPECT_NE(ok.err.find("verify:"), std::string::npos);
  const auto j = nlohmann::json::parse(ok.out);
  EXPECT_EQ(j["summary"]["failed"], 0);
  EXPECT_EQ(cli({"verify", "--trials", "20", "--subjects", "errata"}).code, 2);
}

TEST(Cli, VerifySeedFromEnvironment) {
  const auto explicit_seed = cli({"verify", "--trials", "5", "--seed", "77"});
  ::setenv("DIVBOUND_SEED", "77", 1);
  const auto from_env = cli({"verify", "--trials", "5"});
  ::setenv("DIVBOUND_SEED", "not-a-number", 1);
  const auto bad = cli({"verify", "--trials", "5"});
  ::unsetenv("DIVBOUND_SEED");
  EXPECT_EQ(explicit_seed.out, from_env.out);
  EXPECT_EQ(nlohmann::json::parse(from_env.out)["seed"], 77);
  EXPECT_EQ(bad.code, 1);
}

TEST(Cli, VerifyIsByteIdentical) {
  const std::vector<std::string> args{"verify", "--trials", "200", "--seed", "5", "--subjects", "all",
                                      "--threads", "3"};
  EXPECT_EQ(cli(args).out, cli(args).out);
}

TEST(Cli, CatalogJsonIsStable) {
  const auto a = cli({"catalog", "--format", "json"});
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, cli({"catalog", "--format", "json"}).out);
  const auto j = nlohmann::json::parse(a.out);
  EXPECT_EQ(j["measures"].size(), 12u);
  EXPECT_EQ(j["families"].size(), 5u);
  EXPECT_EQ(j["inequalities"].size(), 17u);
  EXPECT_EQ(j["corollaries"].size(), 33u);
  EXPECT_EQ(j["inequalities"][2]["label"], "(34): Ω_s(Q||P) vs Φ_t(P||Q)");
}

TEST(Cli, CatalogText) {
  const auto r = cli({"catalog"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("(47)"), std::string::npos);
  EXPECT_NE(r.out.find("hellinger"), std::string::npos);
}
