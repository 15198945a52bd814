#include <gtest/gtest.h>

#include <cmath>

#include "qperm/bounds.hpp"
#include "qperm/qsim.hpp"

using namespace qperm;

TEST(BoundValue, FormulaExamples) {
  auto v = bound_value(BoundKind::DszsUniform, {{"T", 3}, {"n", 10}});
  EXPECT_DOUBLE_EQ(v.value, 0.78125);
  EXPECT_FALSE(v.vacuous);
  v = bound_value(BoundKind::DszsSuperpos, {{"T", 2}, {"kappa", 1}, {"n", 4}});
  EXPECT_DOUBLE_EQ(v.value, 1.5);
  EXPECT_TRUE(v.vacuous);
  v = bound_value(BoundKind::UnstructuredSuccess, {{"T", 0}, {"K", 1}, {"N", 4}});
  EXPECT_DOUBLE_EQ(v.value, 2.0);
  EXPECT_TRUE(v.vacuous);
  EXPECT_DOUBLE_EQ(bound_value(BoundKind::DszsFixedKappa, {{"T", 1}, {"kappa", 2}, {"n", 8}}).value, 64.0 / 256);
  EXPECT_DOUBLE_EQ(bound_value(BoundKind::Nuds, {{"T", 0}, {"r", 5}, {"c", 7}}).value, 80.0 / 32);
  EXPECT_DOUBLE_EQ(bound_value(BoundKind::SpongeOw, {{"T", 1}, {"r", 12}, {"c", 10}}).value, 320.0 / 1024);
  const double ratio = 4.0;
  EXPECT_DOUBLE_EQ(bound_value(BoundKind::UnstructuredQueries, {{"N", 16}, {"K", 1}, {"eps", 0.5}}).value,
                   ratio / (2 * std::sqrt(2.0)) * (1 + std::sqrt(0.5) - std::sqrt(0.5) - 2 / ratio));
}

TEST(BoundValue, Errors) {
  EXPECT_THROW(bound_value(BoundKind::DszsUniform, {{"T", 3}}), ConfigError);
  EXPECT_THROW(bound_value(BoundKind::DszsFixedKappa, {{"T", 3}, {"kappa", 0}, {"n", 4}}), DomainError);
  EXPECT_THROW(bound_value(BoundKind::UnstructuredSuccess, {{"T", 3}, {"K", 0}, {"N", 4}}), DomainError);
  EXPECT_THROW(parse_bound_kind("nope"), ConfigError);
  try {
    bound_value(BoundKind::Nuds, {{"T", 1}, {"r", 2}});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("'c'"), std::string::npos);
  }
}

TEST(BoundValue, TagsRoundTrip) {
  for (auto k : all_bound_kinds()) EXPECT_EQ(parse_bound_kind(to_string(k)), k);
  EXPECT_EQ(all_bound_kinds().size(), 7U);
}

TEST(BoundValue, MonotoneInTAndK) {
  for (auto k : all_bound_kinds()) {
    if (k == BoundKind::UnstructuredQueries) continue;
    for (double kap = 1; kap <= 8; kap *= 2) {
      double prev = -1;
      for (double t = 0; t <= 20; ++t) {
        const BoundParams p{{"T", t}, {"K", kap}, {"kappa", kap}, {"N", 1024}, {"n", 10}, {"r", 4}, {"c", 6}};
        const double v = bound_value(k, p).value;
        EXPECT_GE(v, prev);
        prev = v;
        BoundParams q = p;
        q["K"] = q["kappa"] = kap * 2;
        EXPECT_GE(bound_value(k, q).value, v);
      }
    }
  }
}

TEST(BoundValue, QueryLowerBoundConsistentWithSuccessCeiling) {
  for (double n : {64.0, 256.0, 4096.0})
    for (double k : {1.0, 2.0, 8.0})
      for (double eps = 0.05; eps <= 1.0; eps += 0.05) {
        const double t = bound_value(BoundKind::UnstructuredQueries, {{"N", n}, {"K", k}, {"eps", eps}}).value;
        const double tt = std::max(0.0, t);
        EXPECT_GE(bound_value(BoundKind::UnstructuredSuccess, {{"T", tt}, {"K", k}, {"N", n}}).value, eps);
      }
}

TEST(BoundCheck, ClampsAndSlack) {
  EXPECT_TRUE(bound_check(BoundKind::DszsUniform, {{"T", 0}, {"n", 20}}, 0.0, 0.0).pass);
  EXPECT_TRUE(bound_check(BoundKind::DszsSuperpos, {{"T", 2}, {"kappa", 1}, {"n", 4}}, 1.0, 0.0).pass);
  EXPECT_FALSE(bound_check(BoundKind::DszsUniform, {{"T", 0}, {"n", 20}}, 0.01, 0.001).pass);
  EXPECT_TRUE(bound_check(BoundKind::DszsUniform, {{"T", 0}, {"n", 20}}, 0.01, 0.004).pass);
  EXPECT_THROW(bound_check(BoundKind::DszsFixedKappa, {{"T", 0}, {"kappa", 0}, {"n", 4}}, 0.0, 0.0), DomainError);
  const auto v = bound_check(BoundKind::DszsUniform, {{"T", 3}, {"n", 10}}, 0.5, 0.01);
  json j = v;
  EXPECT_EQ(j["kind"], "dszs-uniform");
  EXPECT_DOUBLE_EQ(j["bound"].get<double>(), 0.78125);
  EXPECT_TRUE(j["pass"].get<bool>());
}

TEST(BoundCheck, GroverSweepAtEightBits) {
  for (std::uint64_t kappa : {1U, 2U}) {
    for (const auto& rep : dszs_sweep(4, kappa, {0, 1, 2, 3, 4, 5, 6}, 0, 1)) {
      EXPECT_TRUE(bound_check(rep, BoundKind::DszsFixedKappa).pass);
      EXPECT_TRUE(bound_check(rep, BoundKind::DszsUniform).pass);
    }
  }
}
