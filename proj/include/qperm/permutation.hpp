#pragma once

// Core value types: permutations of [0, N), Young subgroup partitions and
// subset-pair specifications. Indices are plain integers; the bit-string view
// (MSB first, "x||y" puts x in the high bits) is presentation only.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "qperm/errors.hpp"
#include "qperm/exact.hpp"

namespace qperm {

using Index = std::uint64_t;
using json = nlohmann::json;

/// Largest bit width for which explicit N-entry tables are built.
inline constexpr unsigned kMaxTableBits = 26;

inline Index checked_domain(unsigned bits) {
  if (bits > kMaxTableBits) {
    throw ResourceError("domain of " + std::to_string(bits) + " bits exceeds the explicit table limit of " +
                        std::to_string(kMaxTableBits) + " bits");
  }
  return Index{1} << bits;
}

inline Index low_mask(unsigned bits) { return bits >= 64 ? ~Index{0} : (Index{1} << bits) - 1; }

/// Reverse the lowest `width` bits of v.
inline Index reverse_bits(Index v, unsigned width) {
  Index r = 0;
  for (unsigned i = 0; i < width; ++i) r |= ((v >> i) & 1U) << (width - 1 - i);
  return r;
}

/// MSB-first rendering of the lowest `width` bits.
inline std::string to_bits(Index v, unsigned width) {
  std::string s(width, '0');
  for (unsigned i = 0; i < width; ++i)
    if ((v >> (width - 1 - i)) & 1U) s[i] = '1';
  return s;
}

/// Bijection on [0, N) stored as forward and backward tables, so both
/// directions cost one lookup.
class Permutation {
 public:
  static Permutation identity(std::size_t n) {
    if (n == 0) throw ConfigError("permutation size must be positive");
    std::vector<Index> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = i;
    return Permutation(std::move(t), Trusted{});
  }

  /// Validating constructor from an image table.
  static Permutation from_forward(std::vector<Index> forward) {
    if (forward.empty()) throw ConfigError("permutation size must be positive");
    std::vector<char> seen(forward.size(), 0);
    for (Index v : forward) {
      if (v >= forward.size()) throw ConfigError("image " + std::to_string(v) + " out of range");
      if (seen[v]) throw ConfigError("image " + std::to_string(v) + " repeated; not a bijection");
      seen[v] = 1;
    }
    return Permutation(std::move(forward), Trusted{});
  }

  [[nodiscard]] std::size_t size() const noexcept { return forward_.size(); }
  [[nodiscard]] Index forward(Index i) const { return forward_[i]; }
  [[nodiscard]] Index backward(Index i) const { return backward_[i]; }
  Index operator()(Index i) const { return forward_[i]; }

  [[nodiscard]] std::span<const Index> forward_table() const noexcept { return forward_; }
  [[nodiscard]] std::span<const Index> backward_table() const noexcept { return backward_; }

  [[nodiscard]] bool is_identity() const {
    for (std::size_t i = 0; i < forward_.size(); ++i)
      if (forward_[i] != i) return false;
    return true;
  }

  friend bool operator==(const Permutation& a, const Permutation& b) { return a.forward_ == b.forward_; }
  friend auto operator<=>(const Permutation& a, const Permutation& b) { return a.forward_ <=> b.forward_; }

 private:
  struct Trusted {};

  Permutation(std::vector<Index> forward, Trusted) : forward_(std::move(forward)), backward_(forward_.size()) {
    for (std::size_t i = 0; i < forward_.size(); ++i) backward_[forward_[i]] = i;
  }

  friend Permutation compose(const Permutation& p, const Permutation& q);
  friend Permutation inverse(const Permutation& p);

  std::vector<Index> forward_;
  std::vector<Index> backward_;
};

/// (p o q)(i) = p(q(i)).
inline Permutation compose(const Permutation& p, const Permutation& q) {
  if (p.size() != q.size()) {
    throw ConfigError("compose: size mismatch (" + std::to_string(p.size()) + " vs " + std::to_string(q.size()) + ")");
  }
  std::vector<Index> t(p.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = p.forward_[q.forward_[i]];
  return Permutation(std::move(t), Permutation::Trusted{});
}

inline Permutation inverse(const Permutation& p) {
  return Permutation(std::vector<Index>(p.backward_), Permutation::Trusted{});
}

inline void to_json(json& j, const Permutation& p) {
  j = json::array();
  for (Index v : p.forward_table()) j.push_back(v);
}

inline Permutation permutation_from_json(const json& j) { return Permutation::from_forward(j.get<std::vector<Index>>()); }

/// Partition of [0, N) into disjoint nonempty blocks; names the Young subgroup
/// S_{A_1} x ... x S_{A_l}.
class YoungSubgroupSpec {
 public:
  static YoungSubgroupSpec from_blocks(std::size_t size, std::vector<std::vector<Index>> blocks) {
    if (size == 0) throw ConfigError("Young subgroup size must be positive");
    std::vector<std::size_t> owner(size, kUnassigned);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (blocks[b].empty()) throw ConfigError("Young subgroup blocks must be nonempty");
      std::sort(blocks[b].begin(), blocks[b].end());
      for (Index v : blocks[b]) {
        if (v >= size) throw ConfigError("block element " + std::to_string(v) + " out of range");
        if (owner[v] != kUnassigned) throw ConfigError("blocks overlap at " + std::to_string(v));
        owner[v] = b;
      }
    }
    for (std::size_t i = 0; i < size; ++i)
      if (owner[i] == kUnassigned) throw ConfigError("blocks do not cover index " + std::to_string(i));
    return YoungSubgroupSpec(size, std::move(blocks), std::move(owner));
  }

  /// The subgroup fixing `subset` setwise: blocks {subset, complement}.
  static YoungSubgroupSpec fixing(std::size_t size, std::span<const Index> subset) {
    std::vector<char> in(size, 0);
    for (Index v : subset) {
      if (v >= size) throw ConfigError("subset element " + std::to_string(v) + " out of range");
      in[v] = 1;
    }
    std::vector<Index> a, b;
    for (std::size_t i = 0; i < size; ++i) (in[i] ? a : b).push_back(i);
    std::vector<std::vector<Index>> blocks;
    if (!a.empty()) blocks.push_back(std::move(a));
    if (!b.empty()) blocks.push_back(std::move(b));
    return from_blocks(size, std::move(blocks));
  }

  static YoungSubgroupSpec trivial(std::size_t size) {
    std::vector<std::vector<Index>> blocks(size);
    for (std::size_t i = 0; i < size; ++i) blocks[i] = {i};
    return from_blocks(size, std::move(blocks));
  }

  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  [[nodiscard]] const std::vector<std::vector<Index>>& blocks() const noexcept { return blocks_; }
  [[nodiscard]] std::size_t block_of(Index i) const { return owner_[i]; }

  [[nodiscard]] BigInt order() const {
    BigInt r = 1;
    for (const auto& b : blocks_) r *= factorial(b.size());
    return r;
  }

 private:
  static constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);

  YoungSubgroupSpec(std::size_t size, std::vector<std::vector<Index>> blocks, std::vector<std::size_t> owner)
      : size_(size), blocks_(std::move(blocks)), owner_(std::move(owner)) {}

  std::size_t size_;
  std::vector<std::vector<Index>> blocks_;
  std::vector<std::size_t> owner_;
};

inline void to_json(json& j, const YoungSubgroupSpec& s) { j = s.blocks(); }

/// Read back a spec; the size is the number of indices covered.
inline YoungSubgroupSpec young_from_json(const json& j) {
  auto blocks = j.get<std::vector<std::vector<Index>>>();
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.size();
  return YoungSubgroupSpec::from_blocks(n, std::move(blocks));
}

/// Pair (X1, X2) of nonempty subsets of [0, N). (i, p(i)) is an X-pair of p
/// when i is in X1 and p(i) is in X2.
class SubsetPairSpec {
 public:
  SubsetPairSpec(std::size_t size, std::vector<Index> x1, std::vector<Index> x2) : size_(size) {
    if (size == 0) throw ConfigError("subset pair size must be positive");
    x1_ = normalize(std::move(x1), "X1");
    x2_ = normalize(std::move(x2), "X2");
    in_x1_.assign(size, 0);
    in_x2_.assign(size, 0);
    for (Index v : x1_) in_x1_[v] = 1;
    for (Index v : x2_) in_x2_[v] = 1;
  }

  /// Zero pairs on 2n-bit strings: X1 = X2 = { z : low n bits of z are 0 }.
  static SubsetPairSpec zero_pair_spec(unsigned n) {
    if (n == 0) throw ConfigError("zero_pair_spec: n must be positive");
    const Index big_n = checked_domain(2 * n);
    std::vector<Index> z;
    z.reserve(Index{1} << n);
    for (Index x = 0; x < (Index{1} << n); ++x) z.push_back(x << n);
    return SubsetPairSpec(static_cast<std::size_t>(big_n), z, z);
  }

  /// Sponge spec on (r+c)-bit strings: X1 = strings ending in 0^c,
  /// X2 = strings beginning with 0^r.
  static SubsetPairSpec sponge_spec(unsigned r, unsigned c) {
    if (r == 0 || c == 0) throw ConfigError("sponge_spec: r and c must be positive");
    const Index big_n = checked_domain(r + c);
    std::vector<Index> x1, x2;
    for (Index x = 0; x < (Index{1} << r); ++x) x1.push_back(x << c);
    for (Index z = 0; z < (Index{1} << c); ++z) x2.push_back(z);
    return SubsetPairSpec(static_cast<std::size_t>(big_n), std::move(x1), std::move(x2));
  }

  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  [[nodiscard]] const std::vector<Index>& x1() const noexcept { return x1_; }
  [[nodiscard]] const std::vector<Index>& x2() const noexcept { return x2_; }
  [[nodiscard]] std::size_t x1_size() const noexcept { return x1_.size(); }
  [[nodiscard]] std::size_t x2_size() const noexcept { return x2_.size(); }
  [[nodiscard]] bool in_x1(Index i) const { return i < size_ && in_x1_[i]; }
  [[nodiscard]] bool in_x2(Index i) const { return i < size_ && in_x2_[i]; }

  /// |X1| * |X2| == N, the hypothesis of the non-uniform results.
  [[nodiscard]] bool is_balanced() const { return x1_.size() * x2_.size() == size_; }

  friend bool operator==(const SubsetPairSpec& a, const SubsetPairSpec& b) {
    return a.size_ == b.size_ && a.x1_ == b.x1_ && a.x2_ == b.x2_;
  }

 private:
  std::vector<Index> normalize(std::vector<Index> xs, const char* name) const {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    if (xs.empty()) throw ConfigError(std::string(name) + " must be nonempty");
    if (xs.back() >= size_) throw ConfigError(std::string(name) + " element out of range");
    return xs;
  }

  std::size_t size_;
  std::vector<Index> x1_, x2_;
  std::vector<char> in_x1_, in_x2_;
};

inline void to_json(json& j, const SubsetPairSpec& s) { j = json{{"N", s.size()}, {"x1", s.x1()}, {"x2", s.x2()}}; }

}  // namespace qperm
