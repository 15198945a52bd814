#pragma once

// Sampling, Young subgroups, double cosets S_N^kappa and the symmetrization
// re-randomizer phi -> omega o phi o sigma.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "qperm/errors.hpp"
#include "qperm/permutation.hpp"
#include "qperm/rng.hpp"

namespace qperm {

/// Exhaustive enumeration over S_N is refused above this size unless the
/// caller raises the cap explicitly.
inline constexpr std::size_t kDefaultEnumerationCap = 8;

inline void check_enumeration_cap(std::size_t n, std::size_t cap) {
  if (n > cap) {
    throw ResourceError("N = " + std::to_string(n) + " exceeds the enumeration cap " + std::to_string(cap));
  }
}

/// Fisher-Yates in place on `values`.
inline void shuffle_in_place(std::span<Index> values, Rng& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = rng.below(i);
    std::swap(values[i - 1], values[j]);
  }
}

inline Permutation sample_uniform(std::size_t n, Rng& rng) {
  if (n == 0) throw ConfigError("sample_uniform: N must be positive");
  std::vector<Index> t(n);
  std::iota(t.begin(), t.end(), Index{0});
  shuffle_in_place(t, rng);
  return Permutation::from_forward(std::move(t));
}

/// Uniform element of the Young subgroup: an independent shuffle inside each block.
inline Permutation sample_young_uniform(const YoungSubgroupSpec& spec, Rng& rng) {
  std::vector<Index> t(spec.size());
  for (const auto& block : spec.blocks()) {
    std::vector<Index> images = block;
    shuffle_in_place(images, rng);
    for (std::size_t i = 0; i < block.size(); ++i) t[block[i]] = images[i];
  }
  return Permutation::from_forward(std::move(t));
}

inline bool is_member(const YoungSubgroupSpec& spec, const Permutation& p) {
  if (spec.size() != p.size()) throw ConfigError("is_member: size mismatch");
  for (Index i = 0; i < p.size(); ++i)
    if (spec.block_of(p(i)) != spec.block_of(i)) return false;
  return true;
}

/// Visit every permutation of [0, n) in lexicographic order.
inline void for_each_permutation(std::size_t n, const std::function<void(const Permutation&)>& visit,
                                 std::size_t cap = kDefaultEnumerationCap) {
  check_enumeration_cap(n, cap);
  std::vector<Index> t(n);
  std::iota(t.begin(), t.end(), Index{0});
  do {
    visit(Permutation::from_forward(t));
  } while (std::next_permutation(t.begin(), t.end()));
}

/// Visit every element of the Young subgroup (odometer over per-block arrangements).
inline void for_each_member(const YoungSubgroupSpec& spec, const std::function<void(const Permutation&)>& visit,
                            std::size_t cap = kDefaultEnumerationCap) {
  check_enumeration_cap(spec.size(), cap);
  const auto& blocks = spec.blocks();
  std::vector<std::vector<Index>> images = blocks;
  std::vector<Index> t(spec.size());
  for (;;) {
    for (std::size_t b = 0; b < blocks.size(); ++b)
      for (std::size_t i = 0; i < blocks[b].size(); ++i) t[blocks[b][i]] = images[b][i];
    visit(Permutation::from_forward(t));
    std::size_t b = 0;
    while (b < blocks.size() && !std::next_permutation(images[b].begin(), images[b].end())) ++b;
    if (b == blocks.size()) return;
  }
}

inline std::size_t count_x_pairs(const Permutation& p, const SubsetPairSpec& x) {
  if (p.size() != x.size()) throw ConfigError("count_x_pairs: size mismatch");
  std::size_t k = 0;
  for (Index i : x.x1())
    if (x.in_x2(p(i))) ++k;
  return k;
}

inline void require_two_block_form(const YoungSubgroupSpec& g, const char* name) {
  if (g.blocks().size() > 2) {
    throw ConfigError(std::string(name) + " must fix a single subset (at most two blocks), got " +
                      std::to_string(g.blocks().size()) + " blocks");
  }
}

/// omega o phi o sigma.
inline Permutation symmetrized(const Permutation& phi, const Permutation& omega, const Permutation& sigma) {
  return compose(omega, compose(phi, sigma));
}

struct Symmetrization {
  Permutation phi_sym;
  Permutation sigma;  // drawn from the subgroup fixing X1, applied on the right
  Permutation omega;  // drawn from the subgroup fixing X2, applied on the left
};

/// Re-randomize phi within its double coset: phi_sym = omega o phi o sigma with
/// sigma uniform on g1 (fixes X1) and omega uniform on g2 (fixes X2). The
/// X-pair count is preserved and phi_sym is uniform on S_N^kappa.
inline Symmetrization symmetrize(const Permutation& phi, const YoungSubgroupSpec& g1, const YoungSubgroupSpec& g2,
                                 Rng& rng) {
  require_two_block_form(g1, "g1");
  require_two_block_form(g2, "g2");
  if (g1.size() != phi.size() || g2.size() != phi.size()) throw ConfigError("symmetrize: size mismatch");
  Permutation sigma = sample_young_uniform(g1, rng);
  Permutation omega = sample_young_uniform(g2, rng);
  Permutation sym = symmetrized(phi, omega, sigma);
  return {std::move(sym), std::move(sigma), std::move(omega)};
}

inline Symmetrization symmetrize(const Permutation& phi, const SubsetPairSpec& x, Rng& rng) {
  return symmetrize(phi, YoungSubgroupSpec::fixing(x.size(), x.x1()), YoungSubgroupSpec::fixing(x.size(), x.x2()),
                    rng);
}

/// Map an X-pair (x, y) of omega o phi o sigma back to the X-pair
/// (sigma(x), omega^{-1}(y)) of phi.
inline std::pair<Index, Index> pull_back_solution(Index x, Index y, const Permutation& sigma,
                                                  const Permutation& omega) {
  return {sigma(x), omega.backward(y)};
}

/// Smallest and largest achievable X-pair counts.
inline std::pair<std::size_t, std::size_t> kappa_range(const SubsetPairSpec& x) {
  const std::size_t a = x.x1_size(), b = x.x2_size(), n = x.size();
  const std::size_t lo = a + b > n ? a + b - n : 0;
  return {lo, std::min(a, b)};
}

/// All permutations of S_N with exactly kappa X-pairs, in lexicographic order.
inline std::vector<Permutation> enumerate_coset(std::size_t n, const SubsetPairSpec& x, std::size_t kappa,
                                                std::size_t cap = kDefaultEnumerationCap) {
  if (x.size() != n) throw ConfigError("enumerate_coset: spec size differs from N");
  if (kappa > std::min(x.x1_size(), x.x2_size())) {
    throw DomainError("enumerate_coset: kappa = " + std::to_string(kappa) + " exceeds min(|X1|, |X2|)");
  }
  std::vector<Permutation> out;
  for_each_permutation(
      n, [&](const Permutation& p) {
        if (count_x_pairs(p, x) == kappa) out.push_back(p);
      },
      cap);
  return out;
}

/// A fixed permutation with exactly kappa X-pairs: the first kappa elements of
/// X1 go to X2, the rest of X1 leaves X2, and the complements fill in.
inline Permutation coset_representative(const SubsetPairSpec& x, std::size_t kappa) {
  const auto [lo, hi] = kappa_range(x);
  if (kappa < lo || kappa > hi) {
    throw DomainError("no permutation of size " + std::to_string(x.size()) + " has exactly " + std::to_string(kappa) +
                      " X-pairs (feasible range " + std::to_string(lo) + ".." + std::to_string(hi) + ")");
  }
  const std::size_t n = x.size();
  std::vector<Index> not_x1, not_x2;
  for (Index i = 0; i < n; ++i) {
    if (!x.in_x1(i)) not_x1.push_back(i);
    if (!x.in_x2(i)) not_x2.push_back(i);
  }
  const auto& x1 = x.x1();
  const auto& x2 = x.x2();
  std::vector<Index> t(n);
  std::size_t next_x2 = 0, next_not_x2 = 0;
  for (std::size_t i = 0; i < x1.size(); ++i) t[x1[i]] = i < kappa ? x2[next_x2++] : not_x2[next_not_x2++];
  std::size_t src = 0;
  while (next_x2 < x2.size()) t[not_x1[src++]] = x2[next_x2++];
  while (src < not_x1.size()) t[not_x1[src++]] = not_x2[next_not_x2++];
  return Permutation::from_forward(std::move(t));
}

/// Uniform element of S_N^kappa at any N: symmetrize a fixed representative.
inline Permutation sample_coset(const SubsetPairSpec& x, std::size_t kappa, Rng& rng) {
  return symmetrize(coset_representative(x, kappa), x, rng).phi_sym;
}

/// |A_i ∩ p(B_j)| for blocks A of h and B of k; equal tables characterize
/// membership in the same (H, K) double coset.
inline std::vector<std::vector<std::size_t>> double_coset_profile(const Permutation& p, const YoungSubgroupSpec& h,
                                                                  const YoungSubgroupSpec& k) {
  std::vector<std::vector<std::size_t>> m(h.blocks().size(), std::vector<std::size_t>(k.blocks().size(), 0));
  for (Index i = 0; i < p.size(); ++i) ++m[h.block_of(p(i))][k.block_of(i)];
  return m;
}

inline bool same_double_coset(const Permutation& g, const Permutation& x, const YoungSubgroupSpec& h,
                              const YoungSubgroupSpec& k) {
  return double_coset_profile(g, h, k) == double_coset_profile(x, h, k);
}

/// |x^{-1} H x ∩ K|, by conjugating every element of H.
inline std::uint64_t conjugate_intersection_size(const Permutation& x, const YoungSubgroupSpec& h,
                                                 const YoungSubgroupSpec& k,
                                                 std::size_t cap = kDefaultEnumerationCap) {
  const Permutation x_inv = inverse(x);
  std::uint64_t count = 0;
  for_each_member(
      h, [&](const Permutation& e) {
        if (is_member(k, compose(x_inv, compose(e, x)))) ++count;
      },
      cap);
  return count;
}

/// Number of (h, k) in H x K with h x k = g. Each h determines the only
/// candidate k = x^{-1} h^{-1} g, so the scan is over the smaller factor.
inline std::uint64_t count_factorizations(const Permutation& g, const Permutation& x, const YoungSubgroupSpec& h,
                                          const YoungSubgroupSpec& k, std::size_t cap = kDefaultEnumerationCap) {
  if (g.size() != x.size() || h.size() != g.size() || k.size() != g.size()) {
    throw ConfigError("count_factorizations: size mismatch");
  }
  check_enumeration_cap(g.size(), cap);
  if (!same_double_coset(g, x, h, k)) throw DomainError("count_factorizations: g is not in the double coset H x K");
  std::uint64_t count = 0;
  if (h.order() <= k.order()) {
    const Permutation x_inv = inverse(x);
    for_each_member(
        h, [&](const Permutation& e) {
          if (is_member(k, compose(x_inv, compose(inverse(e), g)))) ++count;
        },
        cap);
  } else {
    const Permutation x_inv = inverse(x);
    for_each_member(
        k, [&](const Permutation& e) {
          if (is_member(h, compose(g, compose(inverse(e), x_inv)))) ++count;
        },
        cap);
  }
  return count;
}

}  // namespace qperm
