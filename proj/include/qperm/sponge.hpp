#pragma once

// Sponge construction over a block permutation phi on r+c bits, the
// one-wayness game, and the two equivalent samplers D1 and D2 of (phi, y).

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qperm/errors.hpp"
#include "qperm/exact.hpp"
#include "qperm/instances.hpp"
#include "qperm/pairs.hpp"
#include "qperm/permgroup.hpp"
#include "qperm/permutation.hpp"
#include "qperm/rng.hpp"

namespace qperm {

/// State layout: rate bits high, capacity bits low, so the state is
/// (rate << c) | capacity.
struct SpongeParams {
  unsigned r = 1;
  unsigned c = 1;
  Index iv = 0;
  std::size_t output_blocks = 1;

  SpongeParams() = default;
  SpongeParams(unsigned rate, unsigned capacity, Index init = 0, std::size_t blocks = 1)
      : r(rate), c(capacity), iv(init), output_blocks(blocks) {
    validate();
  }

  void validate() const {
    if (r == 0 || c == 0) throw ConfigError("sponge: r and c must be positive");
    if (r + c > 62) throw ConfigError("sponge: r + c must be at most 62");
    if (iv > low_mask(c)) throw ConfigError("sponge: iv must fit in c bits");
    if (output_blocks == 0) throw ConfigError("sponge: output_blocks must be positive");
  }

  [[nodiscard]] unsigned n() const noexcept { return r + c; }
  [[nodiscard]] Index rate_size() const noexcept { return Index{1} << r; }
  [[nodiscard]] Index state_size() const noexcept { return Index{1} << (r + c); }
  [[nodiscard]] Index pack(Index rate, Index cap) const noexcept { return (rate << c) | cap; }
  [[nodiscard]] Index rate_of(Index state) const noexcept { return state >> c; }
  [[nodiscard]] Index cap_of(Index state) const noexcept { return state & low_mask(c); }
  [[nodiscard]] SubsetPairSpec pair_spec() const { return SubsetPairSpec::sponge_spec(r, c); }
};

inline void to_json(json& j, const SpongeParams& p) {
  j = json{{"r", p.r}, {"c", p.c}, {"iv", p.iv}, {"output_blocks", p.output_blocks}};
}

namespace detail {

inline void check_rate_block(const SpongeParams& p, Index block) {
  if (block >= p.rate_size()) {
    throw DomainError("sponge: block " + std::to_string(block) + " does not fit in r = " + std::to_string(p.r) +
                      " bits");
  }
}

// Shared absorb/squeeze over any block function apply(state) -> state.
template <class Apply>
std::vector<Index> sponge_run(Apply&& apply, const SpongeParams& p, const std::vector<Index>& message) {
  p.validate();
  if (message.empty()) throw DomainError("sponge_eval: message must be nonempty");
  Index state = p.pack(0, p.iv);
  for (Index m : message) {
    check_rate_block(p, m);
    state = apply(p.pack(p.rate_of(state) ^ m, p.cap_of(state)));
  }
  std::vector<Index> out{p.rate_of(state)};
  while (out.size() < p.output_blocks) {
    state = apply(state);
    out.push_back(p.rate_of(state));
  }
  return out;
}

}  // namespace detail

/// First r bits of phi(x || iv).
inline Index single_round(const Permutation& phi, const SpongeParams& p, Index x) {
  detail::check_rate_block(p, x);
  if (phi.size() != p.state_size()) throw ConfigError("single_round: permutation width differs from r + c");
  return p.rate_of(phi(p.pack(x, p.iv)));
}

/// Counted evaluation through an oracle handle: one forward query.
inline Index single_round(OracleInstance& phi, const SpongeParams& p, Index x) {
  detail::check_rate_block(p, x);
  if (phi.bits() != p.n()) throw ConfigError("single_round: oracle width differs from r + c");
  return p.rate_of(phi.forward(p.pack(x, p.iv)));
}

inline std::vector<Index> sponge_eval(const Permutation& phi, const SpongeParams& p, const std::vector<Index>& message) {
  if (phi.size() != p.state_size()) throw ConfigError("sponge_eval: permutation width differs from r + c");
  return detail::sponge_run([&](Index s) { return phi(s); }, p, message);
}

inline std::vector<Index> sponge_eval(OracleInstance& phi, const SpongeParams& p, const std::vector<Index>& message) {
  if (phi.bits() != p.n()) throw ConfigError("sponge_eval: oracle width differs from r + c");
  return detail::sponge_run([&](Index s) { return phi.forward(s); }, p, message);
}

struct OneWayTranscript {
  unsigned r = 0;
  unsigned c = 0;
  std::uint64_t seed = 0;
  Index x = 0;
  Index y = 0;
  std::optional<Index> output;
  std::uint64_t queries = 0;
  bool success = false;
};

inline void to_json(json& j, const OneWayTranscript& t) {
  j = json{{"r", t.r},
           {"c", t.c},
           {"seed", t.seed},
           {"T", t.queries},
           {"success", t.success},
           {"y", t.y},
           {"output", t.output ? json(*t.output) : json(nullptr)}};
}

/// Sample phi uniformly and x uniformly, hand y = Sp(x) to the adversary and
/// score whether its answer hashes back to y. The challenger's own
/// evaluations are not charged to the adversary.
inline OneWayTranscript one_wayness_game(const SpongeParams& p, const InversionAdversary& adversary, Rng& rng,
                                         unsigned explicit_bits = 16) {
  p.validate();
  OneWayTranscript t;
  t.r = p.r;
  t.c = p.c;
  t.seed = rng.seed();
  OracleInstance phi = random_oracle(p.n(), rng, explicit_bits);
  t.x = rng.below(p.rate_size());
  t.y = p.rate_of(phi.peek_forward(p.pack(t.x, p.iv)));
  const std::uint64_t before = phi.queries();
  t.output = adversary(phi, t.y, rng);
  t.queries = phi.queries() - before;
  t.success = t.output && *t.output < p.rate_size() && p.rate_of(phi.peek_forward(p.pack(*t.output, p.iv))) == t.y;
  return t;
}

/// Holds the whole table and inverts without a single query.
inline InversionAdversary table_cheater(const SpongeParams& p) {
  return [p](OracleInstance& phi, Index y, Rng&) -> std::optional<Index> {
    for (Index x = 0; x < p.rate_size(); ++x)
      if (p.rate_of(phi.peek_forward(p.pack(x, p.iv))) == y) return x;
    return std::nullopt;
  };
}

inline InversionAdversary constant_adversary(Index value) {
  return [value](OracleInstance&, Index, Rng&) -> std::optional<Index> { return value; };
}

/// Classical forward scan over the first `budget` rate values.
inline InversionAdversary classical_scan(const SpongeParams& p, std::uint64_t budget) {
  return [p, budget](OracleInstance& phi, Index y, Rng&) -> std::optional<Index> {
    for (Index x = 0; x < std::min<Index>(budget, p.rate_size()); ++x)
      if (single_round(phi, p, x) == y) return x;
    return std::nullopt;
  };
}

using PhiSample = std::pair<Permutation, Index>;

/// D1: phi uniform, x uniform, y = Sp(x).
inline PhiSample sample_d1(const SpongeParams& p, Rng& rng) {
  p.validate();
  Permutation phi = sample_uniform(checked_domain(p.n()), rng);
  const Index x = rng.below(p.rate_size());
  const Index y = single_round(phi, p, x);
  return {std::move(phi), y};
}

/// D2: y uniform, pi ~ D_X for the sponge spec, phi = XOR_{y||0^c} o pi.
/// The rejection sampler is the default so this does not reuse the
/// construction that D1 = D2 is meant to justify.
inline PhiSample sample_d2(const SpongeParams& p, Rng& rng, DxSampler sampler = DxSampler::Rejection) {
  p.validate();
  const Index y = rng.below(p.rate_size());
  const Permutation pi = sample_dx(p.pair_spec(), rng, sampler);
  std::vector<Index> t(pi.size());
  for (Index v = 0; v < pi.size(); ++v) t[v] = pi(v) ^ (y << p.c);
  return {Permutation::from_forward(std::move(t)), y};
}

using JointLaw = std::map<std::pair<std::vector<Index>, Index>, Rational>;

/// Exact law of D1 by enumeration of S_N x {0,1}^r.
inline JointLaw d1_joint_law(const SpongeParams& p, std::size_t cap = kDefaultEnumerationCap) {
  p.validate();
  const Index n = checked_domain(p.n());
  const Rational weight = make_rational(1, factorial(n) * p.rate_size());
  JointLaw law;
  for_each_permutation(
      n, [&](const Permutation& phi) {
        const std::vector<Index> key(phi.forward_table().begin(), phi.forward_table().end());
        for (Index y = 0; y < p.rate_size(); ++y) law[{key, y}] += 0;
        for (Index x = 0; x < p.rate_size(); ++x) law[{key, single_round(phi, p, x)}] += weight;
      },
      cap);
  return law;
}

/// Exact law of D2: Pr[phi, y] = 2^{-r} Pr_{D_X}[XOR_{y||0^c} o phi].
inline JointLaw d2_joint_law(const SpongeParams& p, std::size_t cap = kDefaultEnumerationCap) {
  p.validate();
  const Index n = checked_domain(p.n());
  const SubsetPairSpec spec = p.pair_spec();
  const Rational half = make_rational(1, p.rate_size());
  JointLaw law;
  for_each_permutation(
      n, [&](const Permutation& phi) {
        const std::vector<Index> key(phi.forward_table().begin(), phi.forward_table().end());
        for (Index y = 0; y < p.rate_size(); ++y) {
          std::vector<Index> t(n);
          for (Index v = 0; v < n; ++v) t[v] = phi(v) ^ (y << p.c);
          law[{key, y}] = half * dx_pmf(Permutation::from_forward(std::move(t)), spec);
        }
      },
      cap);
  return law;
}

}  // namespace qperm
