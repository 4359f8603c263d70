#include <gtest/gtest.h>

#include "divbound/verify.hpp"

using namespace divbound;

namespace {

VerifyConfig small(std::vector<std::string> subjects, std::uint64_t trials = 50) {
  VerifyConfig c;
  c.trials = trials;
  c.subjects = std::move(subjects);
  return c;
}

ErrorCode code_of(const VerifyConfig& c) {
  try {
    run(c);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "config accepted";
  return ErrorCode::ParseError;
}

}  // namespace

TEST(Verify, SubjectExpansion) {
  const auto all = expand_subjects({"all"});
  EXPECT_EQ(all.size(), 6u);
  EXPECT_EQ(std::count(all.begin(), all.end(), "errata"), 0);
  EXPECT_EQ(expand_subjects({"theorem", "theorem"}).size(), 1u);
  EXPECT_THROW(expand_subjects({"nonsense"}), Error);
}

TEST(Verify, ConfigValidation) {
  auto c = small({"identities"});
  c.trials = 0;
  EXPECT_EQ(code_of(c), ErrorCode::ConfigInvalid);
  c = small({"identities"});
  c.n_min = 1;
  EXPECT_EQ(code_of(c), ErrorCode::ConfigInvalid);
  c = small({"identities"});
  c.n_min = 5;
  c.n_max = 3;
  EXPECT_EQ(code_of(c), ErrorCode::ConfigInvalid);
  c = small({"identities"});
  c.concentration = 0;
  EXPECT_EQ(code_of(c), ErrorCode::ConfigInvalid);
  c = small({"identities"});
  c.rel_tol = -1;
  EXPECT_EQ(code_of(c), ErrorCode::ConfigInvalid);
  c = small({"identities"});
  c.trials = kMaxTrials + 1;
  EXPECT_EQ(code_of(c), ErrorCode::ConfigInvalid);
  c = small({});
  EXPECT_EQ(code_of(c), ErrorCode::ConfigInvalid);
  c = small({"identities"});
  c.dims = {2, 1};
  EXPECT_EQ(code_of(c), ErrorCode::ConfigInvalid);
}

TEST(Verify, AllSubjectsPassOnSmallRun) {
  const auto rep = run(small({"all"}, 100));
  for (const auto& c : rep.checks) {
    EXPECT_EQ(c.passes, c.attempts) << c.id << " worst " << c.worst_slack;
    EXPECT_FALSE(c.witness.has_value()) << c.id;
  }
  EXPECT_TRUE(rep.all_passed());
}

TEST(Verify, IdenticalPairPasses) {
  auto c = small({"all"}, 20);
  c.identical_pair = true;
  EXPECT_TRUE(run(c).all_passed());
}

TEST(Verify, ThreadCountDoesNotChangeReport) {
  auto a = small({"identities", "families", "corollaries"}, 300);
  auto b = a;
  b.threads = 4;
  const auto ja = to_json(run(a));
  const auto jb = to_json(run(b));
  EXPECT_EQ(ja.dump(), jb.dump());
}

TEST(Verify, SeedChangesSamples) {
  auto a = small({"identities"}, 30);
  auto b = a;
  b.seed = 1;
  EXPECT_NE(to_json(run(a)).dump(), to_json(run(b)).dump());
}

TEST(Verify, ErrataSubjectReportsViolationWithWitness) {
  const auto rep = run(small({"errata"}, 30));
  EXPECT_FALSE(rep.all_passed());
  bool seen = false;
  for (const auto& c : rep.checks) {
    if (c.passes == c.attempts) continue;
    seen = true;
    ASSERT_TRUE(c.witness.has_value());
    EXPECT_LT(c.worst_slack, 0.0);
    EXPECT_FALSE(c.witness->p.empty());
    EXPECT_EQ(c.witness->p.size(), c.witness->q.size());
  }
  EXPECT_TRUE(seen);
}

TEST(Verify, DimsAreCycled) {
  auto c = small({"identities"}, 8);
  c.dims = {2, 3};
  const auto j = to_json(run(c));
  EXPECT_EQ(j["config"]["dims"], nlohmann::ordered_json({2, 3}));
}

TEST(Verify, JsonShape) {
  const auto j = to_json(run(small({"identities"}, 10)));
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"seed", "config", "summary", "checks"}));
  EXPECT_EQ(j["summary"]["failed"], 0);
  EXPECT_EQ(j["checks"].size(), j["summary"]["checks"].get<std::size_t>());
}

TEST(Verify, BruteForceErrors) {
  EXPECT_THROW(brute_force_mM({GeneratorKind::PhiGen, 1}, {GeneratorKind::PhiGen, 2}, 1, 2, 1), Error);
  EXPECT_THROW(brute_force_mM({GeneratorKind::PhiGen, 1}, {GeneratorKind::PhiGen, 2}, 2, 1, 10), Error);
}

TEST(Verify, TightnessScan) {
  const auto r = tightness_scan(InequalityFamily::I_OmegaPhi, 0.5, 1, 200, 3);
  EXPECT_EQ(r.pairs, 200u);
  EXPECT_GE(r.lower_slack, -1e-10);
  EXPECT_GE(r.upper_slack, -1e-10);
  EXPECT_THROW(tightness_scan(InequalityFamily::I_OmegaPhi, 0.5, 1, 0, 3), Error);
}

TEST(Verify, SplitConstantAdjudication) {
  const auto a = adjudicate_split_constant(500, 0, {0.5, 1.0, 2.0, 4.0});
  ASSERT_TRUE(a.confirmed.has_value());
  EXPECT_EQ(*a.confirmed, 2.0);
  EXPECT_NEAR(a.fitted_min, 2.0, 1e-10);
  EXPECT_NEAR(a.fitted_max, 2.0, 1e-10);
  for (const auto& c : a.candidates) EXPECT_EQ(c.holds, c.value == 2.0);
  EXPECT_THROW(adjudicate_split_constant(0, 0, {2.0}), Error);
}
