#pragma once

// Subset-pair statistics: exact counts and moments, the hypergeometric law of
// |X_p| under uniform p, tail bounds, and the pair-weighted distribution D_X.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qperm/errors.hpp"
#include "qperm/exact.hpp"
#include "qperm/permgroup.hpp"
#include "qperm/permutation.hpp"
#include "qperm/rng.hpp"

namespace qperm {

using PairList = std::vector<std::pair<Index, Index>>;

/// All X-pairs (i, p(i)), ascending in i.
inline PairList x_pairs(const Permutation& p, const SubsetPairSpec& x) {
  if (p.size() != x.size()) throw ConfigError("x_pairs: size mismatch");
  PairList out;
  for (Index i : x.x1())
    if (x.in_x2(p(i))) out.emplace_back(i, p(i));
  return out;
}

inline Rational expected_pairs_uniform(const SubsetPairSpec& x) {
  return make_rational(BigInt(x.x1_size()) * x.x2_size(), BigInt(x.size()));
}

/// Sum of |X_p| over all of S_N, i.e. |X1| |X2| (N-1)!.
inline BigInt total_pairs(const SubsetPairSpec& x) {
  return BigInt(x.x1_size()) * x.x2_size() * factorial(x.size() - 1);
}

/// Pr[k marked among T draws without replacement from N objects, K marked].
inline Rational hypergeometric_pmf(std::uint64_t n, std::uint64_t marked, std::uint64_t draws, std::uint64_t k) {
  if (marked > n || draws > n) throw DomainError("hypergeometric_pmf: requires K, T <= N");
  if (k > marked || k > draws || draws - k > n - marked) return Rational(0);
  return make_rational(binomial(marked, k) * binomial(n - marked, draws - k), binomial(n, draws));
}

/// Law of |X_p| for uniform p: Hypergeometric(N, |X2|, |X1|). Keys run over
/// 0..min(|X1|, |X2|); infeasible counts carry probability 0.
inline std::map<std::size_t, Rational> pair_count_distribution(const SubsetPairSpec& x) {
  std::map<std::size_t, Rational> out;
  const std::size_t top = std::min(x.x1_size(), x.x2_size());
  for (std::size_t k = 0; k <= top; ++k) out[k] = hypergeometric_pmf(x.size(), x.x2_size(), x.x1_size(), k);
  return out;
}

/// Law of |X_p| for p ~ D_X: Pr[kappa] = kappa Pr_uniform[kappa] / E_uniform.
inline std::map<std::size_t, Rational> dx_pair_count_distribution(const SubsetPairSpec& x) {
  const Rational mean = expected_pairs_uniform(x);
  auto dist = pair_count_distribution(x);
  for (auto& [k, pr] : dist) pr = Rational(k) * pr / mean;
  return dist;
}

/// E_uniform[|X_p|^2], exact from the hypergeometric law.
inline Rational second_moment_uniform(const SubsetPairSpec& x) {
  Rational m = 0;
  for (const auto& [k, pr] : pair_count_distribution(x)) m += Rational(k * k) * pr;
  return m;
}

inline std::optional<std::uint64_t> exact_sqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::llround(std::sqrt(static_cast<double>(n))));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  if (r * r != n) return std::nullopt;
  return r;
}

/// Pr[a uniform p in S_N has at least one zero pair] = 1 - C(N-√N, √N) / C(N, √N).
inline Rational zero_pair_existence_prob(std::uint64_t n) {
  const auto root = exact_sqrt(n);
  if (!root || n == 0) throw DomainError("zero_pair_existence_prob: N = " + std::to_string(n) + " is not a perfect square");
  return Rational(1) - make_rational(binomial(n - *root, *root), binomial(n, *root));
}

/// D_KL(Bernoulli(q) || Bernoulli(p)) in nats.
inline double kl_divergence(double q, double p) {
  if (!(q > 0.0 && q < 1.0) || !(p > 0.0 && p < 1.0)) {
    throw DomainError("kl_divergence: arguments must lie in (0, 1)");
  }
  return q * std::log(q / p) + (1.0 - q) * std::log((1.0 - q) / (1.0 - p));
}

/// Hoeffding/Chvatal bound on Pr[X >= (K/N + t) T] for X ~ Hypergeometric(N, K, T).
inline double hoeffding_tail(std::uint64_t n, std::uint64_t marked, std::uint64_t draws, double t) {
  if (n == 0 || marked == 0 || marked >= n) throw DomainError("hoeffding_tail: requires 0 < K < N");
  const double p = static_cast<double>(marked) / static_cast<double>(n);
  if (!(t >= 0.0 && t < 1.0 - p)) throw DomainError("hoeffding_tail: requires 0 <= t < 1 - K/N");
  if (t == 0.0) return 1.0;
  return std::exp(-static_cast<double>(draws) * kl_divergence(p + t, p));
}

enum class TailKind { Uniform, Nonuniform };

inline const char* to_string(TailKind k) { return k == TailKind::Uniform ? "uniform" : "nonuniform"; }

/// E_{D_X}[|X_p|] = E[|X_p|^2] / E[|X_p|] under uniform p, exact at any N.
inline Rational nonuniform_expectation_closed(const SubsetPairSpec& x) {
  return second_moment_uniform(x) / expected_pairs_uniform(x);
}

/// Closed interval [1, 1 + |X1||X2|/N] that always contains E_{D_X}[|X_p|].
inline std::pair<Rational, Rational> nonuniform_expectation_bounds(const SubsetPairSpec& x) {
  return {Rational(1), Rational(1) + expected_pairs_uniform(x)};
}

/// E_{D_X}[|X_p|] by exhaustive enumeration of S_N: sum |X_p|^2 / sum |X_p|.
inline Rational nonuniform_expectation(const SubsetPairSpec& x, std::size_t cap = kDefaultEnumerationCap) {
  check_enumeration_cap(x.size(), cap);
  BigInt first = 0, second = 0;
  for_each_permutation(
      x.size(), [&](const Permutation& p) {
        const std::size_t k = count_x_pairs(p, x);
        first += k;
        second += k * k;
      },
      cap);
  return make_rational(second, first);
}

/// Closed-form ceiling on Pr[|X_p| >= E + u]: exp(-3u/4) for uniform p when
/// u >= 6 E_uniform; 3 exp(-4u/9) for p ~ D_X when |X1||X2| = N and
/// u >= 6 E_{D_X}. Outside those hypotheses the call is refused.
inline double tail_bound(const SubsetPairSpec& x, double u, TailKind kind) {
  if (kind == TailKind::Uniform) {
    const double six_e = 6.0 * to_double(expected_pairs_uniform(x));
    if (!(u >= six_e)) {
      throw DomainError("uniform tail bound requires u >= 6 E_uniform[|X_p|] = " + std::to_string(six_e));
    }
    return std::exp(-0.75 * u);
  }
  if (!x.is_balanced()) throw DomainError("non-uniform tail bound requires |X1| * |X2| = N");
  const double six_e = 6.0 * to_double(nonuniform_expectation_closed(x));
  if (!(u >= six_e)) {
    throw DomainError("non-uniform tail bound requires u >= 6 E_DX[|X_p|] = " + std::to_string(six_e));
  }
  return 3.0 * std::exp(-4.0 * u / 9.0);
}

/// Pr_{D_X}[p] = |X_p| / sum_s |X_s|.
inline Rational dx_pmf(const Permutation& p, const SubsetPairSpec& x) {
  return make_rational(BigInt(count_x_pairs(p, x)), total_pairs(x));
}

struct PairStatistics {
  std::size_t n_total;
  std::size_t x1_size;
  std::size_t x2_size;
  Rational expectation_uniform;
  BigInt total_pairs;
  Rational nonuniform_lo;
  Rational nonuniform_hi;
};

inline PairStatistics pair_statistics(const SubsetPairSpec& x) {
  auto [lo, hi] = nonuniform_expectation_bounds(x);
  return {x.size(), x.x1_size(), x.x2_size(), expected_pairs_uniform(x), total_pairs(x), lo, hi};
}

enum class DxSampler { Shift, Rejection };

/// (r, c) when x is exactly sponge_spec(r, c).
inline std::optional<std::pair<unsigned, unsigned>> sponge_shape(const SubsetPairSpec& x) {
  const std::size_t n = x.size();
  if (n < 4 || (n & (n - 1)) != 0) return std::nullopt;
  unsigned bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  for (unsigned r = 1; r < bits; ++r) {
    if (x.x1_size() != (std::size_t{1} << r)) continue;
    if (x == SubsetPairSpec::sponge_spec(r, bits - r)) return std::make_pair(r, bits - r);
  }
  return std::nullopt;
}

inline constexpr std::size_t kDefaultRejectionAttempts = 1'000'000;

/// Exact sample from D_X.
///
/// Shift sampler (sponge specs only): draw phi uniform and x uniform in X1, let
/// y be the first r bits of phi(x), and return XOR_{y||0^c} o phi. Rejection
/// sampler (any X): draw phi uniform and accept with probability
/// |X_phi| / min(|X1|, |X2|).
inline Permutation sample_dx(const SubsetPairSpec& x, Rng& rng, DxSampler sampler = DxSampler::Shift,
                             std::size_t max_attempts = kDefaultRejectionAttempts) {
  if (sampler == DxSampler::Shift) {
    const auto shape = sponge_shape(x);
    if (!shape) throw ConfigError("shift-based D_X sampler requires a sponge spec; use the rejection sampler");
    const unsigned c = shape->second;
    const Permutation phi = sample_uniform(x.size(), rng);
    const Index input = x.x1()[rng.below(x.x1_size())];
    const Index y = phi(input) >> c;
    std::vector<Index> t(x.size());
    for (Index v = 0; v < x.size(); ++v) t[v] = phi(v) ^ (y << c);
    return Permutation::from_forward(std::move(t));
  }
  const std::size_t top = std::min(x.x1_size(), x.x2_size());
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    Permutation phi = sample_uniform(x.size(), rng);
    const std::size_t k = count_x_pairs(phi, x);
    if (k > 0 && rng.below(top) < k) return phi;
  }
  throw ResourceError("D_X rejection sampler did not accept within " + std::to_string(max_attempts) + " attempts");
}

/// JSON records {"kappa", "prob_num", "prob_den"}; numerator and denominator
/// are decimal strings so arbitrary precision survives.
inline json distribution_to_json(const std::map<std::size_t, Rational>& dist) {
  json out = json::array();
  for (const auto& [k, pr] : dist) {
    out.push_back({{"kappa", k}, {"prob_num", numerator_of(pr).str()}, {"prob_den", denominator_of(pr).str()}});
  }
  return out;
}

}  // namespace qperm
