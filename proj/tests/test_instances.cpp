#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qperm/instances.hpp"
#include "qperm/pairs.hpp"
#include "qperm/qsim.hpp"
#include "qperm/sponge.hpp"

using namespace qperm;

namespace {

std::vector<Index> subset_of(Index mask, unsigned bits) {
  std::vector<Index> out;
  for (Index x = 0; x < (Index{1} << bits); ++x)
    if ((mask >> x) & 1U) out.push_back(x);
  return out;
}

}  // namespace

TEST(MarkedFunction, CountsQueries) {
  MarkedFunction f(3, {1, 5, 5});
  EXPECT_EQ(f.marked_count(), 2U);
  EXPECT_TRUE(f.query(1));
  EXPECT_FALSE(f.query(2));
  EXPECT_TRUE(f.evaluate(5));
  EXPECT_EQ(f.queries(), 2U);
  EXPECT_THROW(MarkedFunction(2, {4}), ConfigError);
}

TEST(UniformWorstCase, HandValues) {
  MarkedFunction f(2, {0});
  OracleInstance phi = build_uniform_worst_case(f);
  EXPECT_EQ(phi.forward(0b0000), 0b0000U);
  EXPECT_EQ(phi.forward(0b0100), 0b0111U);
  EXPECT_EQ(f.queries(), 2U);
  EXPECT_EQ(phi.queries(), f.queries());
}

TEST(UniformWorstCase, PlantedPairsExhaustive) {
  for (unsigned n = 1; n <= 4; ++n) {
    const auto spec = SubsetPairSpec::zero_pair_spec(n);
    for (Index mask = 0; mask < (Index{1} << (Index{1} << n)); mask += (n == 4 ? 97 : 1)) {
      MarkedFunction f(n, subset_of(mask, n));
      OracleInstance phi = build_uniform_worst_case(f);
      const auto pairs = x_pairs(phi.table(), spec);
      ASSERT_EQ(pairs.size(), f.marked_count());
      for (const auto& [a, b] : pairs) {
        EXPECT_EQ(a, b);
        EXPECT_TRUE(f.evaluate(solve_search_via_pair({a, b}, phi)));
      }
    }
  }
}

TEST(UniformWorstCase, SelfInverse) {
  Rng rng(1);
  for (unsigned n : {3U, 4U}) {
    std::vector<Index> marked;
    for (Index x = 0; x < (Index{1} << n); ++x)
      if (rng.below(2)) marked.push_back(x);
    MarkedFunction f(n, marked);
    OracleInstance phi = build_uniform_worst_case(f);
    for (Index v = 0; v < phi.domain_size(); ++v) {
      EXPECT_EQ(phi.forward(phi.forward(v)), v);
      EXPECT_EQ(phi.backward(v), phi.forward(v));
    }
  }
}

TEST(NonuniformWorstCase, HandValues) {
  MarkedFunction f(1, {0});
  OracleInstance phi = build_nonuniform_worst_case(f, 2, 1);
  EXPECT_EQ(phi.forward(0b000), 0b000U);
  EXPECT_EQ(phi.forward(0b100), 0b111U);
}

TEST(NonuniformWorstCase, InverseAndQueryCost) {
  for (auto [r, c] : {std::pair{2U, 2U}, {1U, 3U}, {3U, 1U}, {2U, 3U}, {3U, 2U}}) {
    const unsigned m = std::min(r, c);
    for (Index mask = 0; mask < (Index{1} << (Index{1} << m)); ++mask) {
      MarkedFunction f(m, subset_of(mask, m));
      OracleInstance phi = build_nonuniform_worst_case(f, r, c);
      for (Index v = 0; v < phi.domain_size(); ++v) {
        const std::uint64_t before = f.queries();
        const Index w = phi.forward(v);
        EXPECT_EQ(f.queries() - before, 1U);
        EXPECT_EQ(phi.backward(w), v);
        EXPECT_EQ(f.queries() - before, 2U);
      }
    }
  }
}

TEST(NonuniformWorstCase, PlantedPairs) {
  for (auto [r, c] : {std::pair{1U, 1U}, {2U, 2U}, {2U, 3U}, {3U, 2U}, {4U, 4U}}) {
    const unsigned m = std::min(r, c);
    const auto spec = SubsetPairSpec::sponge_spec(r, c);
    for (Index mask = 0; mask < (Index{1} << (Index{1} << m)); mask += (m == 4 ? 131 : 1)) {
      MarkedFunction f(m, subset_of(mask, m));
      OracleInstance phi = build_nonuniform_worst_case(f, r, c);
      const auto pairs = x_pairs(phi.table(), spec);
      ASSERT_EQ(pairs.size(), f.marked_count());
      for (const auto& pr : pairs) {
        EXPECT_EQ(pr.first & low_mask(std::max(r, c)), 0U);
        EXPECT_TRUE(f.evaluate(solve_search_via_pair(pr, phi)));
      }
    }
  }
}

TEST(SolveSearch, RoundTripEveryPlant) {
  for (unsigned n = 1; n <= 4; ++n) {
    for (Index star = 0; star < (Index{1} << n); ++star) {
      MarkedFunction f(n, {star});
      OracleInstance phi = build_uniform_worst_case(f);
      const auto pairs = x_pairs(phi.table(), SubsetPairSpec::zero_pair_spec(n));
      ASSERT_EQ(pairs.size(), 1U);
      EXPECT_EQ(solve_search_via_pair(pairs[0], phi), star);
    }
  }
  MarkedFunction f(2, {1});
  OracleInstance phi = build_uniform_worst_case(f);
  EXPECT_THROW(solve_search_via_pair({0, 0}, phi), DomainError);  // 0 is unmarked: phi(0) = 3
  EXPECT_THROW(solve_search_via_pair({0b0101, 0b0101}, phi), DomainError);
  OracleInstance plain = OracleInstance::from_permutation(Permutation::identity(16));
  EXPECT_THROW(solve_search_via_pair({0, 0}, plain), ConfigError);
}

TEST(XorWrap, InvolutionAndSharedCounter) {
  Rng rng(5);
  for (unsigned bits = 1; bits <= 6; ++bits) {
    OracleInstance pi = random_oracle(bits, rng);
    for (Index mask = 0; mask < (Index{1} << bits); mask += 1 + bits) {
      OracleInstance phi = xor_wrap(pi, mask);
      for (Index v = 0; v < pi.domain_size(); ++v) {
        EXPECT_EQ(phi.forward(v), pi.peek_forward(v) ^ mask);
        EXPECT_EQ(phi.backward(phi.peek_forward(v)), v);
        EXPECT_EQ(phi.peek_forward(phi.peek_backward(v)), v);
      }
      EXPECT_EQ(phi.queries(), pi.queries());
    }
  }
}

TEST(OracleInstance, CloneHasFreshCounter) {
  Rng rng(2);
  OracleInstance a = random_oracle(4, rng);
  a.forward(1);
  OracleInstance b = a.clone();
  EXPECT_EQ(b.queries(), 0U);
  b.forward(2);
  EXPECT_EQ(a.queries(), 1U);
  EXPECT_EQ(b.peek_forward(7), a.peek_forward(7));
  json meta = a.meta();
  EXPECT_EQ(meta["kind"], "explicit");
}

TEST(LazyOracle, ConsistentAndBijective) {
  Rng rng(9);
  OracleInstance phi = random_oracle(40, rng);
  EXPECT_EQ(phi.meta().kind, InstanceKind::LazyRandom);
  std::map<Index, Index> seen;
  for (Index v = 0; v < 2000; ++v) seen[v] = phi.forward(v * 7919);
  for (const auto& [v, w] : seen) {
    EXPECT_EQ(phi.forward(v * 7919), w);
    EXPECT_EQ(phi.backward(w), v * 7919);
  }
  EXPECT_THROW((void)phi.table(), ResourceError);
  // Small lazy oracle materializes to a valid permutation.
  OracleInstance small(6, std::make_shared<LazyRandomBackend>(6, Rng(3)), InstanceMeta{});
  small.backward(5);
  EXPECT_EQ(small.table().size(), 64U);
  EXPECT_EQ(small.table().backward(5), small.peek_backward(5));
}

// Reduction inputs are non-uniform search instances, pi ~ D_X.
TEST(Reduction, PerfectInverterAlwaysYieldsPair) {
  for (auto [r, c] : {std::pair{1U, 1U}, {2U, 2U}, {3U, 2U}}) {
    const SpongeParams p(r, c);
    const auto spec = p.pair_spec();
    for (std::uint64_t s = 0; s < 200; ++s) {
      Rng rng(s);
      OracleInstance pi = OracleInstance::from_permutation(sample_dx(spec, rng));
      const auto out = reduce_sponge_inversion(pi, r, c, table_cheater(p), rng);
      ASSERT_TRUE(out.pair.has_value());
      EXPECT_TRUE(spec.in_x1(out.pair->first));
      EXPECT_TRUE(spec.in_x2(out.pair->second));
      EXPECT_EQ(pi.table()(out.pair->first), out.pair->second);
      EXPECT_EQ(out.total_queries, out.adversary_queries + 1);
    }
  }
}

TEST(Reduction, ConstantAdversarySucceedsExactlyWhenItInverts) {
  const SpongeParams p(2, 2);
  for (std::uint64_t s = 0; s < 300; ++s) {
    Rng rng(s);
    OracleInstance pi = random_oracle(4, rng);
    const auto out = reduce_sponge_inversion(pi, 2, 2, constant_adversary(1), rng);
    const Index image = pi.table()(1 << 2) ^ (out.y << 2);
    EXPECT_EQ(out.pair.has_value(), p.rate_of(image) == out.y);
  }
}

TEST(Reduction, MatchesStandaloneGroverInversion) {
  const SpongeParams p(2, 2);
  const int trials = 1000;
  for (std::uint64_t iters : {0U, 1U}) {
    int red = 0, game = 0;
    for (int i = 0; i < trials; ++i) {
      Rng a(1000 + i), b(5000 + i);
      OracleInstance pi = OracleInstance::from_permutation(sample_dx(p.pair_spec(), a));
      red += reduce_sponge_inversion(pi, 2, 2, grover_inverter(p, iters), a).pair.has_value();
      game += one_wayness_game(p, grover_inverter(p, iters), b).success;
    }
    const double pr = red / double(trials), pg = game / double(trials);
    const double sigma = std::sqrt(pr * (1 - pr) / trials + pg * (1 - pg) / trials);
    EXPECT_LE(std::abs(pr - pg), 3 * sigma + 1e-12) << "iterations=" << iters;
  }
}
