#pragma once

// Exhaustive self-checks of the combinatorial identities at small N.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qperm/exact.hpp"
#include "qperm/pairs.hpp"
#include "qperm/permgroup.hpp"
#include "qperm/permutation.hpp"
#include "qperm/rng.hpp"
#include "qperm/sponge.hpp"

namespace qperm {

struct CheckRecord {
  std::string check;
  std::string claim;
  std::size_t n = 0;
  bool pass = false;
  std::string detail;
};

inline void to_json(json& j, const CheckRecord& r) {
  j = json{{"check", r.check}, {"claim", r.claim}, {"N", r.n}, {"pass", r.pass}, {"detail", r.detail}};
}

namespace detail {

// A few subset shapes at size n: prefixes, evens, and a seeded random pair.
inline std::vector<SubsetPairSpec> shapes_for(std::size_t n, Rng& rng) {
  std::vector<SubsetPairSpec> out;
  auto prefix = [](std::size_t k) {
    std::vector<Index> v(k);
    for (std::size_t i = 0; i < k; ++i) v[i] = i;
    return v;
  };
  std::vector<Index> evens, tail;
  for (Index i = 0; i < n; i += 2) evens.push_back(i);
  for (Index i = n / 2; i < n; ++i) tail.push_back(i);
  out.emplace_back(n, prefix(1), prefix(1));
  out.emplace_back(n, prefix(2), prefix(n / 2));
  out.emplace_back(n, evens, evens);
  out.emplace_back(n, prefix(n / 2), tail);
  out.emplace_back(n, prefix(n), prefix(n - 1));
  std::vector<Index> all = prefix(n);
  shuffle_in_place(all, rng);
  std::vector<Index> a(all.begin(), all.begin() + 1 + rng.below(n - 1));
  shuffle_in_place(all, rng);
  std::vector<Index> b(all.begin(), all.begin() + 1 + rng.below(n - 1));
  out.emplace_back(n, a, b);
  return out;
}

inline std::map<std::size_t, BigInt> pair_count_histogram(const SubsetPairSpec& x, std::size_t cap) {
  std::map<std::size_t, BigInt> h;
  for_each_permutation(x.size(), [&](const Permutation& p) { h[count_x_pairs(p, x)] += 1; }, cap);
  return h;
}

}  // namespace detail

/// Runs every exhaustive check with N up to max_n (at most the enumeration cap).
inline std::vector<CheckRecord> verify_combinatorics(std::size_t max_n, std::uint64_t seed) {
  check_enumeration_cap(max_n, kDefaultEnumerationCap);
  Rng rng(seed);
  std::vector<CheckRecord> out;

  for (std::size_t n = 2; n <= max_n; n += 2) {
    for (const auto& x : detail::shapes_for(n, rng)) {
      const auto hist = detail::pair_count_histogram(x, max_n);
      BigInt sum = 0;
      for (const auto& [k, cnt] : hist) sum += cnt * k;
      const Rational mean = make_rational(sum, factorial(n));
      out.push_back({"expectation", "exhaustive mean of |X_p| equals |X1||X2|/N", n,
                     mean == expected_pairs_uniform(x), "mean=" + to_string(mean)});
      bool law = true;
      for (const auto& [k, pr] : pair_count_distribution(x)) {
        auto it = hist.find(k);
        const BigInt cnt = it == hist.end() ? BigInt(0) : it->second;
        if (make_rational(cnt, factorial(n)) != pr) law = false;
      }
      out.push_back({"hypergeometric", "law of |X_p| is Hypergeometric(N, |X2|, |X1|)", n, law, ""});
      BigInt first = 0, second = 0;
      for (const auto& [k, cnt] : hist) {
        first += cnt * k;
        second += cnt * k * k;
      }
      const Rational dx_mean = make_rational(second, first);
      const auto [lo, hi] = nonuniform_expectation_bounds(x);
      out.push_back({"nonuniform-expectation", "E_DX|X_p| = E[X^2]/E[X] within [1, 1 + |X1||X2|/N]", n,
                     dx_mean == nonuniform_expectation_closed(x) && lo <= dx_mean && dx_mean <= hi,
                     "value=" + to_string(dx_mean)});
    }
  }

  if (max_n >= 4) {
    const auto hist = detail::pair_count_histogram(SubsetPairSpec::zero_pair_spec(1), max_n);
    const Rational none = make_rational(hist.count(0) ? hist.at(0) : BigInt(0), factorial(4));
    out.push_back({"existence", "Pr[some zero pair] = 1 - C(N-sqrt N, sqrt N)/C(N, sqrt N)", 4,
                   Rational(1) - none == zero_pair_existence_prob(4), "value=" + to_string(Rational(1) - none)});
  }

  const std::size_t sym_n = max_n >= 6 ? 6 : max_n;
  if (sym_n >= 3) {
    const SubsetPairSpec x(sym_n, {0, 1}, {0, 1});
    const auto g1 = YoungSubgroupSpec::fixing(sym_n, x.x1());
    const auto g2 = YoungSubgroupSpec::fixing(sym_n, x.x2());
    for (std::size_t kappa = 0; kappa <= 2; ++kappa) {
      const Permutation rep = coset_representative(x, kappa);
      std::map<Permutation, std::uint64_t> hits;
      for_each_member(g2, [&](const Permutation& w) {
        for_each_member(g1, [&](const Permutation& s) { ++hits[symmetrized(rep, w, s)]; }, max_n);
      }, max_n);
      const auto coset = enumerate_coset(sym_n, x, kappa, max_n);
      bool equal = hits.size() == coset.size();
      for (const auto& p : coset) equal = equal && hits.count(p) && hits[p] == hits.begin()->second;
      out.push_back({"symmetrization", "omega o phi o sigma hits S_N^kappa uniformly", sym_n, equal,
                     "kappa=" + std::to_string(kappa) + " coset=" + std::to_string(coset.size())});
    }
  }

  if (max_n >= 4) {
    bool ok = true;
    const std::size_t n = 4;
    std::vector<YoungSubgroupSpec> groups;
    for (Index mask = 1; mask < (Index{1} << n); ++mask) {
      std::vector<Index> a;
      for (Index i = 0; i < n; ++i)
        if ((mask >> i) & 1U) a.push_back(i);
      groups.push_back(YoungSubgroupSpec::fixing(n, a));
    }
    for (const auto& h : groups)
      for (const auto& k : groups)
        for_each_permutation(n, [&](const Permutation& x) {
          for_each_permutation(n, [&](const Permutation& g) {
            if (same_double_coset(g, x, h, k) &&
                count_factorizations(g, x, h, k, max_n) != conjugate_intersection_size(x, h, k, max_n)) {
              ok = false;
            }
          }, max_n);
        }, max_n);
    out.push_back({"factorization", "#{(h,k): h x k = g} = |x^-1 H x ∩ K|", n, ok, ""});
  }

  if (max_n >= 4) {
    const SpongeParams p(1, 1);
    out.push_back({"d1-d2", "D1 and D2 coincide as exact joint laws", 4, d1_joint_law(p, max_n) == d2_joint_law(p, max_n),
                   "r=1 c=1"});
  }
  return out;
}

}  // namespace qperm
