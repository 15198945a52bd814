#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "oracles.hpp"
#include "qperm/pairs.hpp"

using namespace qperm;

namespace {

Permutation P(std::vector<Index> v) { return Permutation::from_forward(std::move(v)); }

// Exact law of |X_p| over S_n, counted by the recursive enumerator.
std::map<std::size_t, Rational> brute_law(const SubsetPairSpec& x) {
  std::map<std::size_t, oracle::Big> counts;
  const auto perms = oracle::all_perms(x.size());
  for (const auto& p : perms) counts[oracle::pair_count(p, x.x1(), x.x2())] += 1;
  std::map<std::size_t, Rational> out;
  for (const auto& [k, c] : counts) out[k] = Rational(c, oracle::Big(perms.size()));
  return out;
}

Rational law_at(const std::map<std::size_t, Rational>& m, std::size_t k) {
  auto it = m.find(k);
  return it == m.end() ? Rational(0) : it->second;
}

}  // namespace

TEST(XPairs, HandExamples) {
  const SubsetPairSpec x(4, {0, 2}, {0, 2});
  const PairList want{{0, 0}, {2, 2}};
  EXPECT_EQ(x_pairs(Permutation::identity(4), x), want);
  EXPECT_TRUE(x_pairs(P({1, 0, 3, 2}), x).empty());
}

TEST(XPairs, AgreesWithIndependentScan) {
  Rng rng(4);
  const SubsetPairSpec x(8, {1, 2, 6}, {0, 2, 5, 7});
  for (int i = 0; i < 500; ++i) {
    const Permutation p = sample_uniform(8, rng);
    const oracle::Vec t(p.forward_table().begin(), p.forward_table().end());
    EXPECT_EQ(x_pairs(p, x).size(), oracle::pair_count(t, x.x1(), x.x2()));
  }
}

TEST(Expectation, ClosedFormAndEnumeration) {
  EXPECT_EQ(expected_pairs_uniform(SubsetPairSpec(4, {0, 1}, {2, 3})), Rational(1));
  for (unsigned r = 1; r <= 4; ++r)
    for (unsigned c = 1; c <= 4; ++c) EXPECT_EQ(expected_pairs_uniform(SubsetPairSpec::sponge_spec(r, c)), 1);
  const SubsetPairSpec x(6, {0, 1}, {2, 3, 4});
  Rational mean = 0;
  for (const auto& [k, pr] : brute_law(x)) mean += Rational(k) * pr;
  EXPECT_EQ(mean, Rational(1));
  EXPECT_EQ(expected_pairs_uniform(x), mean);
}

TEST(TotalPairs, MatchesEnumeration) {
  const SubsetPairSpec x(5, {0, 4}, {1, 2, 3});
  oracle::Big sum = 0;
  for (const auto& p : oracle::all_perms(5)) sum += oracle::pair_count(p, x.x1(), x.x2());
  EXPECT_EQ(total_pairs(x), sum);
  EXPECT_EQ(Rational(total_pairs(x)), expected_pairs_uniform(x) * Rational(oracle::fact(5)));
}

TEST(Hypergeometric, MatchesSubsetCounting) {
  EXPECT_EQ(hypergeometric_pmf(4, 2, 2, 1), Rational(2, 3));
  EXPECT_EQ(hypergeometric_pmf(10, 3, 4, 4), 0);
  for (unsigned n = 1; n <= 12; ++n)
    for (unsigned k = 0; k <= n; ++k)
      for (unsigned t = 0; t <= n; t += 3)
        for (unsigned j = 0; j <= std::min(k, t); ++j)
          EXPECT_EQ(hypergeometric_pmf(n, k, t, j), oracle::hypergeometric_by_subsets(n, k, t, j));
  for (unsigned n = 1; n <= 20; ++n)
    for (unsigned k = 0; k <= n; ++k)
      for (unsigned t = 0; t <= n; ++t) {
        Rational s = 0;
        for (unsigned j = 0; j <= n; ++j) s += hypergeometric_pmf(n, k, t, j);
        EXPECT_EQ(s, 1);
      }
  EXPECT_THROW(hypergeometric_pmf(4, 5, 1, 0), DomainError);
}

TEST(Binomial, MatchesPascal) {
  for (unsigned n = 0; n <= 40; ++n)
    for (unsigned k = 0; k <= n + 1; ++k) EXPECT_EQ(binomial(n, k), oracle::pascal(n, k));
}

TEST(PairLaw, ExhaustiveSmallN) {
  const SubsetPairSpec x(4, {0, 2}, {0, 2});
  const auto law = pair_count_distribution(x);
  EXPECT_EQ(law.at(0), Rational(1, 6));
  EXPECT_EQ(law.at(1), Rational(2, 3));
  EXPECT_EQ(law.at(2), Rational(1, 6));
  const SubsetPairSpec full(5, {0, 1, 2, 3, 4}, {0, 1, 2, 3, 4});
  EXPECT_EQ(pair_count_distribution(full).at(5), 1);
  for (const auto& y : {SubsetPairSpec(6, {0, 3, 4}, {1, 4}), SubsetPairSpec(7, {0, 1, 2, 3, 4}, {2, 3, 4, 5, 6})}) {
    const auto brute = brute_law(y);
    Rational mean = 0;
    for (const auto& [k, pr] : pair_count_distribution(y)) {
      EXPECT_EQ(pr, law_at(brute, k));
      mean += Rational(k) * pr;
    }
    EXPECT_EQ(mean, expected_pairs_uniform(y));
  }
}

TEST(Existence, ClosedFormValues) {
  EXPECT_EQ(zero_pair_existence_prob(4), Rational(5, 6));
  EXPECT_EQ(zero_pair_existence_prob(16), Rational(1) - Rational(495, 1820));
  EXPECT_THROW(zero_pair_existence_prob(8), DomainError);
  std::size_t none = 0;
  for (const auto& p : oracle::all_perms(4)) none += oracle::pair_count(p, {0, 2}, {0, 2}) == 0;
  EXPECT_EQ(Rational(1) - Rational(none, 24), zero_pair_existence_prob(4));
  // The no-pair probability climbs toward 1/e.
  double prev = 0.0;
  for (std::uint64_t root = 2; root <= 40; ++root) {
    const double q = 1.0 - to_double(zero_pair_existence_prob(root * root));
    EXPECT_GT(q, prev);
    EXPECT_LT(q, std::exp(-1.0));
    prev = q;
  }
}

TEST(Existence, MonteCarloAtN16) {
  const auto x = SubsetPairSpec::zero_pair_spec(2);
  Rng rng(16);
  const int trials = 40000;
  int hits = 0;
  for (int i = 0; i < trials; ++i) hits += count_x_pairs(sample_uniform(16, rng), x) > 0;
  const double p = to_double(zero_pair_existence_prob(16));
  EXPECT_NEAR(hits / double(trials), p, 3 * std::sqrt(p * (1 - p) / trials));
}

TEST(Kl, ValuesAndLemma) {
  EXPECT_DOUBLE_EQ(kl_divergence(0.3, 0.3), 0.0);
  EXPECT_NEAR(kl_divergence(0.5, 0.25), 0.5 * std::log(2.0) + 0.5 * std::log(2.0 / 3.0), 1e-15);
  EXPECT_THROW(kl_divergence(0.0, 0.5), DomainError);
  EXPECT_THROW(kl_divergence(0.5, 1.0), DomainError);
  for (int i = 1; i <= 200; ++i) {
    const double p = 0.1 * i / 200;
    for (int j = 0; j < 200; ++j) {
      const double t = 6 * p + (1 - p - 6 * p) * j / 200;
      if (p + t >= 1) continue;
      EXPECT_GT(kl_divergence(p + t, p), 0.75 * t);
    }
  }
}

TEST(Hoeffding, DominatesExactTail) {
  EXPECT_DOUBLE_EQ(hoeffding_tail(8, 2, 2, 0.0), 1.0);
  EXPECT_THROW(hoeffding_tail(8, 2, 2, 0.8), DomainError);
  for (unsigned n = 2; n <= 8; ++n)
    for (unsigned k = 1; k < n; ++k)
      for (unsigned t = 1; t <= n; ++t) {
        double prev = 1.0;
        for (int s = 1; s < 40; ++s) {
          const double dev = (1.0 - double(k) / n) * s / 40;
          const double bound = hoeffding_tail(n, k, t, dev);
          Rational tail = 0;
          for (unsigned j = 0; j <= t; ++j)
            if (j >= (double(k) / n + dev) * t - 1e-12) tail += hypergeometric_pmf(n, k, t, j);
          EXPECT_LE(to_double(tail), bound + 1e-12);
          EXPECT_LE(bound, prev + 1e-15);
          prev = bound;
        }
      }
  const double exact = to_double(hypergeometric_pmf(8, 2, 2, 2));
  EXPECT_LE(exact, hoeffding_tail(8, 2, 2, 0.5));
}

TEST(TailBound, FormulasAndRefusals) {
  const auto x = SubsetPairSpec::sponge_spec(2, 2);
  EXPECT_DOUBLE_EQ(tail_bound(x, 8, TailKind::Uniform), std::exp(-6.0));
  EXPECT_DOUBLE_EQ(tail_bound(x, 18, TailKind::Nonuniform), 3 * std::exp(-8.0));
  EXPECT_THROW(tail_bound(x, 9, TailKind::Nonuniform), DomainError);  // 6 E_DX = 9.6
  EXPECT_THROW(tail_bound(x, 5, TailKind::Uniform), DomainError);
  EXPECT_THROW(tail_bound(SubsetPairSpec(8, {0, 1}, {0, 1}), 40, TailKind::Nonuniform), DomainError);
  try {
    tail_bound(x, 1, TailKind::Nonuniform);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("u >= 6"), std::string::npos);
  }
}

TEST(TailBound, DominatesExactTailsAtN8) {
  const SubsetPairSpec x(8, {0, 1}, {0, 1});
  const auto law = brute_law(x);
  const double e = to_double(expected_pairs_uniform(x));
  EXPECT_EQ(expected_pairs_uniform(x), Rational(1, 2));
  for (double u = 6 * e; u <= 6 * e + 5; u += 0.25) {
    Rational tail = 0;
    for (const auto& [k, pr] : law)
      if (k >= e + u) tail += pr;
    EXPECT_LE(to_double(tail), tail_bound(x, u, TailKind::Uniform) + 1e-12);
  }
  Rational at = 0;
  for (const auto& [k, pr] : law)
    if (k >= 3.5) at += pr;
  EXPECT_LE(to_double(at), std::exp(-9.0 / 4));
}

TEST(Dx, PmfAndLaw) {
  const SubsetPairSpec x(4, {0, 2}, {0, 2});
  EXPECT_EQ(dx_pmf(Permutation::identity(4), x), Rational(1, 12));
  EXPECT_EQ(dx_pmf(P({1, 0, 3, 2}), x), 0);
  Rational sum = 0;
  for_each_permutation(4, [&](const Permutation& p) { sum += dx_pmf(p, x); });
  EXPECT_EQ(sum, 1);
  for (auto spec : {SubsetPairSpec::sponge_spec(1, 1), SubsetPairSpec::sponge_spec(1, 2),
                    SubsetPairSpec::sponge_spec(2, 1)}) {
    std::map<std::size_t, Rational> brute;
    for_each_permutation(spec.size(), [&](const Permutation& p) { brute[count_x_pairs(p, spec)] += dx_pmf(p, spec); });
    const auto uni = pair_count_distribution(spec);
    for (const auto& [k, pr] : dx_pair_count_distribution(spec)) {
      EXPECT_EQ(pr, law_at(brute, k));
      EXPECT_EQ(pr, Rational(k) * uni.at(k));  // balanced spec: E = 1
    }
  }
}

TEST(NonuniformExpectation, ExactAndBounds) {
  const SubsetPairSpec x(4, {0, 2}, {0, 2});
  EXPECT_EQ(nonuniform_expectation(x), Rational(4, 3));
  EXPECT_EQ(nonuniform_expectation_closed(x), Rational(4, 3));
  EXPECT_EQ(second_moment_uniform(x), Rational(4, 3));
  const SubsetPairSpec full(5, {0, 1, 2, 3, 4}, {0, 1, 2, 3, 4});
  EXPECT_EQ(nonuniform_expectation(full), 5);
  EXPECT_THROW(nonuniform_expectation(SubsetPairSpec(9, {0}, {0})), ResourceError);
  for (auto spec : {SubsetPairSpec::sponge_spec(1, 2), SubsetPairSpec::sponge_spec(2, 1),
                    SubsetPairSpec(7, {0, 3}, {1, 2, 3, 4})}) {
    const Rational v = nonuniform_expectation(spec);
    EXPECT_EQ(v, nonuniform_expectation_closed(spec));
    const auto [lo, hi] = nonuniform_expectation_bounds(spec);
    EXPECT_LE(lo, v);
    EXPECT_LE(v, hi);
  }
  const auto stats = pair_statistics(SubsetPairSpec::sponge_spec(3, 3));
  EXPECT_EQ(stats.nonuniform_hi, 2);
  EXPECT_EQ(Rational(stats.total_pairs), stats.expectation_uniform * Rational(factorial(64)));
}

TEST(SampleDx, NeverPairFree) {
  Rng rng(1);
  const auto x = SubsetPairSpec::sponge_spec(2, 3);
  for (int i = 0; i < 300; ++i) {
    EXPECT_GE(count_x_pairs(sample_dx(x, rng, DxSampler::Shift), x), 1U);
    EXPECT_GE(count_x_pairs(sample_dx(x, rng, DxSampler::Rejection), x), 1U);
  }
  EXPECT_THROW(sample_dx(SubsetPairSpec(6, {0}, {1}), rng, DxSampler::Shift), ConfigError);
  EXPECT_THROW(sample_dx(SubsetPairSpec(64, {0}, {1}), rng, DxSampler::Rejection, 1), ResourceError);
}

TEST(SampleDx, BothSamplersMatchPmfAtN4) {
  const auto x = SubsetPairSpec::sponge_spec(1, 1);
  std::vector<Permutation> all;
  for_each_permutation(4, [&](const Permutation& p) { all.push_back(p); });
  std::vector<double> probs;
  for (const auto& p : all) probs.push_back(to_double(dx_pmf(p, x)));
  for (auto sampler : {DxSampler::Shift, DxSampler::Rejection}) {
    std::map<Permutation, double> seen;
    Rng rng(sampler == DxSampler::Shift ? 10 : 20);
    for (int i = 0; i < 100000; ++i) seen[sample_dx(x, rng, sampler)] += 1;
    std::vector<double> counts;
    for (const auto& p : all) counts.push_back(seen.count(p) ? seen[p] : 0.0);
    EXPECT_GT(oracle::gof_pvalue(counts, probs), 1e-3);
  }
}

TEST(Json, DistributionRecords) {
  const auto j = distribution_to_json(pair_count_distribution(SubsetPairSpec(4, {0, 2}, {0, 2})));
  EXPECT_EQ(j.dump(),
            R"([{"kappa":0,"prob_den":"6","prob_num":"1"},{"kappa":1,"prob_den":"3","prob_num":"2"},)"
            R"({"kappa":2,"prob_den":"6","prob_num":"1"}])");
}
