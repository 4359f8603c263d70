#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "divbound/bounds.hpp"
#include "divbound/corollaries.hpp"
#include "divbound/verify.hpp"

using namespace divbound;
using IF = InequalityFamily;

namespace {

Distribution dist(const std::vector<double>& v) { return Distribution::validate(v); }
const Distribution kP = dist({0.5, 0.5});
const Distribution kQ = dist({0.25, 0.75});

}  // namespace

TEST(Bounds, FamilyNames) {
  EXPECT_EQ(parse_inequality_family("vii"), IF::VII_ZetaAdjOmega);
  EXPECT_EQ(parse_inequality_family("X"), IF::X_ZetaAdjZeta);
  EXPECT_THROW(parse_inequality_family("XI"), Error);
  EXPECT_EQ(family_info(IF::II_OmegaAdjPhi).relation, "Ω_s(Q||P) vs Φ_t(P||Q)");
  EXPECT_EQ(numerator_spec(IF::IV_ZetaAdjPhi, 2).gen, GeneratorKind::VarsigmaGen);
  EXPECT_EQ(denominator_spec(IF::X_ZetaAdjZeta, 3).gen, GeneratorKind::XiGen);
}

TEST(Bounds, BranchTable) {
  ASSERT_EQ(kBranches.size(), 17u);
  std::set<int> labels;
  for (const auto& b : kBranches) labels.insert(b.label);
  EXPECT_EQ(*labels.begin(), 32);
  EXPECT_EQ(*labels.rbegin(), 48);
  EXPECT_EQ(labels.size(), 17u);
  ASSERT_NE(find_branch(47), nullptr);
  EXPECT_TRUE(find_branch(47)->upper_misprint);
  EXPECT_EQ(find_branch(31), nullptr);
}

TEST(Bounds, Regions) {
  EXPECT_TRUE(region_ok(IF::I_OmegaPhi, -2, 4));
  EXPECT_FALSE(region_ok(IF::IV_ZetaAdjPhi, 1, 0));
  EXPECT_FALSE(region_ok(IF::X_ZetaAdjZeta, 1, 3));
  EXPECT_TRUE(region_ok(IF::X_ZetaAdjZeta, 2, 3));
}

TEST(Bounds, GRatioDegenerate) {
  // xi_8'' changes sign at x = 1/2.
  try {
    g_ratio({GeneratorKind::PhiGen, 1}, {GeneratorKind::XiGen, 8}, 0.25);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateDenominator);
  }
  EXPECT_GT(g_ratio({GeneratorKind::PhiGen, 1}, {GeneratorKind::XiGen, 8}, 3.0), 0.0);
}

TEST(Bounds, NumericMatchesBruteForce) {
  for (auto f : kAllInequalityFamilies) {
    const auto num = numerator_spec(f, 2), den = denominator_spec(f, 3);
    const auto a = numeric_mM(num, den, 0.2, 7);
    const auto b = brute_force_mM(num, den, 0.2, 7, 20001);
    EXPECT_LE(a.m, b.m * (1 + 1e-12)) << to_string(f);
    EXPECT_GE(a.M, b.M * (1 - 1e-12)) << to_string(f);
    EXPECT_NEAR(a.m / b.m, 1.0, 1e-7) << to_string(f);
    EXPECT_NEAR(a.M / b.M, 1.0, 1e-7) << to_string(f);
  }
}

TEST(Bounds, DegenerateIntervalAndErrors) {
  const auto nb = numeric_mM({GeneratorKind::PhiGen, 1}, {GeneratorKind::PhiGen, 2}, 1.5, 1.5);
  EXPECT_DOUBLE_EQ(nb.m, nb.M);
  EXPECT_THROW(numeric_mM({GeneratorKind::PhiGen, 1}, {GeneratorKind::PhiGen, 2}, 2, 1), Error);
  EXPECT_THROW(closed_form_mM(IF::I_OmegaPhi, 0, 0, 0, 1), Error);
  EXPECT_THROW(closed_form_mM(IF::I_OmegaPhi, 0, 0, 0.5, INFINITY), Error);
}

TEST(Bounds, ClosedFormAgreesWithNumeric) {
  const auto c = closed_form_mM(IF::I_OmegaPhi, -2, 4, 0.5, 2);
  EXPECT_EQ(c.source, CertificateSource::ClosedForm);
  EXPECT_TRUE(c.region_ok);
  EXPECT_FALSE(c.erratum.has_value());
  const auto nb = numeric_mM(numerator_spec(IF::I_OmegaPhi, -2), denominator_spec(IF::I_OmegaPhi, 4), 0.5, 2);
  EXPECT_NEAR(c.m, nb.m, 1e-9 * nb.m);
  EXPECT_NEAR(c.M, nb.M, 1e-9 * nb.M);
}

TEST(Bounds, OutsideRegion) {
  const auto c = closed_form_mM(IF::IV_ZetaAdjPhi, 1, 0, 0.5, 2);
  EXPECT_FALSE(c.region_ok);
  EXPECT_EQ(c.source, CertificateSource::Numeric);
  try {
    closed_form_mM(IF::IV_ZetaAdjPhi, 1, 0, 0.5, 2, {true});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RegionViolation);
  }
}

TEST(Bounds, ErratumPointsShipNumeric) {
  const auto c = closed_form_mM(IF::III_ZetaPhi, 4, 3, 0.5, 2);
  EXPECT_EQ(c.source, CertificateSource::Numeric);
  ASSERT_TRUE(c.erratum.has_value());
  EXPECT_EQ(*c.erratum, kErratumWrongDirection);
  ASSERT_NE(find_erratum(IF::IX_ZetaAdjOmegaAdj, 1, 0), nullptr);
  EXPECT_EQ(find_erratum(IF::IX_ZetaAdjOmegaAdj, 4, 0), nullptr);
  EXPECT_EQ(find_erratum(IF::I_OmegaPhi, -2, 4), nullptr);

  const auto ix = closed_form_mM(IF::IX_ZetaAdjOmegaAdj, 1, 0, 0.5, 2);
  EXPECT_EQ(ix.source, CertificateSource::Numeric);
  EXPECT_EQ(*ix.erratum, kErratumUpperMisprint);
}

TEST(Bounds, RegistryModeMatchesAlwaysMode) {
  const ClosedFormOptions reg{false, CrossCheck::Registry, 1e-6};
  for (auto f : kAllInequalityFamilies) {
    for (double s : kParameterGrid) {
      for (double t : kParameterGrid) {
        if (!region_ok(f, s, t)) continue;
        const auto a = closed_form_mM(f, s, t, 0.3, 4);
        const auto b = closed_form_mM(f, s, t, 0.3, 4, reg);
        EXPECT_EQ(a.source, b.source) << to_string(f) << ' ' << s << ' ' << t;
        EXPECT_NEAR(a.m, b.m, 1e-6 * std::abs(a.m));
        EXPECT_NEAR(a.M, b.M, 1e-6 * std::abs(a.M));
      }
    }
  }
}

TEST(Bounds, SandwichOnReferencePair) {
  const auto rep = sandwich_check(IF::I_OmegaPhi, 0.5, 1, kP, kQ);
  EXPECT_TRUE(rep.pass);
  EXPECT_LE(rep.lhs, rep.mid);
  EXPECT_LE(rep.mid, rep.rhs);
  EXPECT_DOUBLE_EQ(rep.certificate.r, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(rep.certificate.R, 2.0);
}

TEST(Bounds, SandwichDetectsViolation) {
  BoundCertificate cert{};
  cert.m = 2.0;
  cert.M = 3.0;
  EXPECT_FALSE(sandwich_from(cert, 1.0, 1.0).pass);
  EXPECT_TRUE(sandwich_from(cert, 2.5, 1.0).pass);
}

TEST(Corollaries, TableShape) {
  const auto& table = corollary_table();
  EXPECT_EQ(table.size(), 33u);
  const auto* b26 = find_corollary("F-adj-vs-D-adj");
  ASSERT_NE(b26, nullptr);
  EXPECT_TRUE(b26->erratum);
  EXPECT_EQ(find_corollary("no-such"), nullptr);
}

TEST(Corollaries, SandwichOnReferencePair) {
  const auto cv = classical_values(kP, kQ);
  const auto rb = ratio_bounds(kP, kQ);
  for (const auto& c : corollary_table()) {
    if (c.erratum) continue;
    const double ratio = c.ratio(cv);
    EXPECT_GE(ratio, rb.r * (1 - 1e-9)) << c.name;
    EXPECT_LE(ratio, rb.R * (1 + 1e-9)) << c.name;
    EXPECT_TRUE(sandwich_check(c.family, c.s, c.t, kP, kQ).pass) << c.name;
  }
}
