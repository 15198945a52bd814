#pragma once

// Oracle instances with query accounting, the two worst-case constructions
// from unstructured search, and the sponge-inversion reduction.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qperm/errors.hpp"
#include "qperm/permgroup.hpp"
#include "qperm/permutation.hpp"
#include "qperm/rng.hpp"

namespace qperm {

/// f : {0,1}^m -> {0,1} given by its marked set, with a query counter.
class MarkedFunction {
 public:
  MarkedFunction(unsigned bits, const std::vector<Index>& marked)
      : bits_(bits), table_(checked_domain(bits), 0), counter_(std::make_shared<std::uint64_t>(0)) {
    for (Index x : marked) {
      if (x >= table_.size()) throw ConfigError("marked element " + std::to_string(x) + " out of range");
      if (!table_[x]) ++count_;
      table_[x] = 1;
    }
  }

  [[nodiscard]] unsigned bits() const noexcept { return bits_; }
  [[nodiscard]] Index domain_size() const noexcept { return table_.size(); }
  [[nodiscard]] std::size_t marked_count() const noexcept { return count_; }

  [[nodiscard]] std::vector<Index> marked() const {
    std::vector<Index> out;
    for (Index x = 0; x < table_.size(); ++x)
      if (table_[x]) out.push_back(x);
    return out;
  }

  /// Counted query.
  bool query(Index x) {
    ++*counter_;
    return evaluate(x);
  }

  /// Uncounted evaluation, for simulation bookkeeping only.
  [[nodiscard]] bool evaluate(Index x) const { return table_.at(x) != 0; }

  [[nodiscard]] std::uint64_t queries() const noexcept { return *counter_; }
  [[nodiscard]] std::shared_ptr<std::uint64_t> counter() const noexcept { return counter_; }

 private:
  unsigned bits_;
  std::vector<char> table_;
  std::size_t count_ = 0;
  std::shared_ptr<std::uint64_t> counter_;
};

/// Raw permutation evaluation; counting happens in OracleInstance.
class PermutationBackend {
 public:
  virtual ~PermutationBackend() = default;
  virtual Index forward(Index v) = 0;
  virtual Index backward(Index v) = 0;
  [[nodiscard]] virtual std::unique_ptr<PermutationBackend> clone() const = 0;
};

enum class InstanceKind { Explicit, LazyRandom, UniformWorstCase, NonuniformWorstCase, XorWrapped };

inline const char* to_string(InstanceKind k) {
  switch (k) {
    case InstanceKind::Explicit: return "explicit";
    case InstanceKind::LazyRandom: return "lazy-random";
    case InstanceKind::UniformWorstCase: return "uniform-worst-case";
    case InstanceKind::NonuniformWorstCase: return "nonuniform-worst-case";
    case InstanceKind::XorWrapped: return "xor-wrapped";
  }
  return "unknown";
}

struct InstanceMeta {
  InstanceKind kind = InstanceKind::Explicit;
  unsigned n = 0;  // half width for zero-search instances
  unsigned r = 0;
  unsigned c = 0;
  std::optional<std::size_t> k;  // planted marked/pair count, when known
  std::optional<std::uint64_t> seed;
};

inline void to_json(json& j, const InstanceMeta& m) {
  j = json{{"kind", to_string(m.kind)}};
  if (m.n) j["n"] = m.n;
  if (m.r || m.c) {
    j["r"] = m.r;
    j["c"] = m.c;
  }
  j["K"] = m.k ? json(*m.k) : json(nullptr);
  j["seed"] = m.seed ? json(*m.seed) : json(nullptr);
}

/// A permutation on `bits`-bit strings behind forward/backward handles. Every
/// forward or backward application increments the shared counter by one.
/// Copies share backend and counter; clone() gives an independent instance.
class OracleInstance {
 public:
  OracleInstance(unsigned bits, std::shared_ptr<PermutationBackend> backend, InstanceMeta meta,
                 std::shared_ptr<std::uint64_t> counter = std::make_shared<std::uint64_t>(0))
      : bits_(bits), backend_(std::move(backend)), meta_(meta), counter_(std::move(counter)) {}

  static OracleInstance from_permutation(Permutation p, InstanceMeta meta = {});

  Index forward(Index v) {
    ++*counter_;
    return backend_->forward(v);
  }
  Index backward(Index v) {
    ++*counter_;
    return backend_->backward(v);
  }

  /// Uncounted access used by the simulator to build its index maps.
  [[nodiscard]] Index peek_forward(Index v) const { return backend_->forward(v); }
  [[nodiscard]] Index peek_backward(Index v) const { return backend_->backward(v); }

  /// Record queries made through a channel other than forward()/backward(),
  /// e.g. superposition queries in the simulator.
  void charge(std::uint64_t q = 1) { *counter_ += q; }

  [[nodiscard]] std::uint64_t queries() const noexcept { return *counter_; }
  [[nodiscard]] unsigned bits() const noexcept { return bits_; }
  [[nodiscard]] Index domain_size() const noexcept { return Index{1} << bits_; }
  [[nodiscard]] const InstanceMeta& meta() const noexcept { return meta_; }
  [[nodiscard]] const std::shared_ptr<std::uint64_t>& counter() const noexcept { return counter_; }
  [[nodiscard]] const std::shared_ptr<PermutationBackend>& backend() const noexcept { return backend_; }

  /// Full table, built without touching the counter. Cached.
  [[nodiscard]] const Permutation& table() const {
    if (!table_) {
      const Index n = checked_domain(bits_);
      std::vector<Index> t(n);
      for (Index v = 0; v < n; ++v) t[v] = backend_->forward(v);
      table_ = std::make_shared<const Permutation>(Permutation::from_forward(std::move(t)));
    }
    return *table_;
  }

  [[nodiscard]] OracleInstance clone() const { return OracleInstance(bits_, backend_->clone(), meta_); }

 private:
  unsigned bits_;
  std::shared_ptr<PermutationBackend> backend_;
  InstanceMeta meta_;
  std::shared_ptr<std::uint64_t> counter_;
  mutable std::shared_ptr<const Permutation> table_;
};

class TableBackend final : public PermutationBackend {
 public:
  explicit TableBackend(Permutation p) : p_(std::move(p)) {}
  Index forward(Index v) override { return p_.forward(v); }
  Index backward(Index v) override { return p_.backward(v); }
  [[nodiscard]] std::unique_ptr<PermutationBackend> clone() const override {
    return std::make_unique<TableBackend>(p_);
  }

 private:
  Permutation p_;
};

inline unsigned bit_width_of(std::size_t n) {
  if (n == 0 || (n & (n - 1)) != 0) throw ConfigError("oracle domain size must be a power of two");
  unsigned b = 0;
  while ((std::size_t{1} << b) < n) ++b;
  return b;
}

inline OracleInstance OracleInstance::from_permutation(Permutation p, InstanceMeta meta) {
  const unsigned bits = bit_width_of(p.size());
  auto table = std::make_shared<const Permutation>(p);
  OracleInstance inst(bits, std::make_shared<TableBackend>(std::move(p)), meta);
  inst.table_ = std::move(table);
  return inst;
}

/// Random permutation sampled on demand: each fresh forward (backward) query
/// draws a uniform unused image (preimage). Equivalent in law to a full
/// Fisher-Yates table, without materializing 2^bits entries.
class LazyRandomBackend final : public PermutationBackend {
 public:
  LazyRandomBackend(unsigned bits, Rng rng) : size_(Index{1} << bits), rng_(std::move(rng)) {}

  Index forward(Index v) override {
    if (auto it = fwd_.find(v); it != fwd_.end()) return it->second;
    Index y;
    do y = rng_.below(size_);
    while (bwd_.contains(y));
    fwd_.emplace(v, y);
    bwd_.emplace(y, v);
    return y;
  }
  Index backward(Index y) override {
    if (auto it = bwd_.find(y); it != bwd_.end()) return it->second;
    Index v;
    do v = rng_.below(size_);
    while (fwd_.contains(v));
    fwd_.emplace(v, y);
    bwd_.emplace(y, v);
    return v;
  }
  [[nodiscard]] std::unique_ptr<PermutationBackend> clone() const override {
    return std::make_unique<LazyRandomBackend>(*this);
  }

 private:
  Index size_;
  Rng rng_;
  std::unordered_map<Index, Index> fwd_, bwd_;
};

/// Uniform random permutation oracle: an explicit table up to
/// `explicit_bits`, lazily sampled above.
inline OracleInstance random_oracle(unsigned bits, Rng& rng, unsigned explicit_bits = 16) {
  InstanceMeta meta;
  meta.seed = rng.seed();
  if (bits <= explicit_bits) {
    meta.kind = InstanceKind::Explicit;
    return OracleInstance::from_permutation(sample_uniform(checked_domain(bits), rng), meta);
  }
  if (bits >= 63) throw ResourceError("lazy random oracle supports at most 62 bits");
  meta.kind = InstanceKind::LazyRandom;
  return OracleInstance(bits, std::make_shared<LazyRandomBackend>(bits, rng.substream(rng.next_u64())), meta);
}

namespace detail {

class UniformWorstCaseBackend final : public PermutationBackend {
 public:
  UniformWorstCaseBackend(unsigned n, const MarkedFunction& f) : n_(n), f_(f) {}
  // phi(x||y) = x||y if f(x) = 1, else x||(y xor 1^n). Self-inverse.
  Index forward(Index v) override {
    const Index x = v >> n_;
    return f_.evaluate(x) ? v : v ^ low_mask(n_);
  }
  Index backward(Index v) override { return forward(v); }
  [[nodiscard]] std::unique_ptr<PermutationBackend> clone() const override {
    return std::make_unique<UniformWorstCaseBackend>(*this);
  }

 private:
  unsigned n_;
  MarkedFunction f_;
};

class NonuniformWorstCaseBackend final : public PermutationBackend {
 public:
  NonuniformWorstCaseBackend(unsigned r, unsigned c, const MarkedFunction& f)
      : r_(r), c_(c), short_(std::min(r, c)), long_(std::max(r, c)), f_(f) {}

  // phi(x||y) = (x||y)^R if f(x) = 1, else (x||y)^R xor 1^r||0^c, with x the
  // leading min(r,c) bits.
  Index forward(Index v) override {
    const Index x = v >> long_;
    const Index rev = reverse_bits(v, r_ + c_);
    return f_.evaluate(x) ? rev : rev ^ rate_mask();
  }
  // The image ends in x^R whichever case applied, so one f-evaluation decides.
  Index backward(Index w) override {
    const Index x = reverse_bits(w & low_mask(short_), short_);
    return reverse_bits(f_.evaluate(x) ? w : w ^ rate_mask(), r_ + c_);
  }
  [[nodiscard]] std::unique_ptr<PermutationBackend> clone() const override {
    return std::make_unique<NonuniformWorstCaseBackend>(*this);
  }

 private:
  [[nodiscard]] Index rate_mask() const { return low_mask(r_) << c_; }

  unsigned r_, c_, short_, long_;
  MarkedFunction f_;
};

class XorBackend final : public PermutationBackend {
 public:
  XorBackend(std::shared_ptr<PermutationBackend> inner, Index mask) : inner_(std::move(inner)), mask_(mask) {}
  Index forward(Index v) override { return inner_->forward(v) ^ mask_; }
  Index backward(Index v) override { return inner_->backward(v ^ mask_); }
  [[nodiscard]] std::unique_ptr<PermutationBackend> clone() const override {
    return std::make_unique<XorBackend>(std::shared_ptr<PermutationBackend>(inner_->clone()), mask_);
  }

 private:
  std::shared_ptr<PermutationBackend> inner_;
  Index mask_;
};

}  // namespace detail

/// Worst-case zero-search instance on 2n bits built from f on n bits. Each
/// application costs exactly one f-query; the instance shares f's counter.
inline OracleInstance build_uniform_worst_case(const MarkedFunction& f) {
  const unsigned n = f.bits();
  if (n == 0) throw ConfigError("build_uniform_worst_case: f needs at least one input bit");
  checked_domain(2 * n);
  InstanceMeta meta{InstanceKind::UniformWorstCase, n, 0, 0, f.marked_count(), std::nullopt};
  return OracleInstance(2 * n, std::make_shared<detail::UniformWorstCaseBackend>(n, f), meta, f.counter());
}

/// Worst-case non-uniform instance on r+c bits built from f on min(r,c) bits.
/// Its X-pairs for sponge_spec(r, c) are exactly x||0^max(r,c) with f(x) = 1.
inline OracleInstance build_nonuniform_worst_case(const MarkedFunction& f, unsigned r, unsigned c) {
  if (r == 0 || c == 0) throw ConfigError("build_nonuniform_worst_case: r and c must be positive");
  if (f.bits() != std::min(r, c)) throw ConfigError("build_nonuniform_worst_case: f must take min(r, c) bits");
  checked_domain(r + c);
  InstanceMeta meta{InstanceKind::NonuniformWorstCase, 0, r, c, f.marked_count(), std::nullopt};
  return OracleInstance(r + c, std::make_shared<detail::NonuniformWorstCaseBackend>(r, c, f), meta, f.counter());
}

/// XOR_mask o inner, sharing inner's counter: one wrapper application is one
/// application of inner.
inline OracleInstance xor_wrap(const OracleInstance& inner, Index mask) {
  InstanceMeta meta = inner.meta();
  meta.kind = InstanceKind::XorWrapped;
  return OracleInstance(inner.bits(), std::make_shared<detail::XorBackend>(inner.backend(), mask), meta,
                        inner.counter());
}

/// Recover a marked input of f from an X-pair of a worst-case instance.
inline Index solve_search_via_pair(std::pair<Index, Index> pair, const OracleInstance& instance) {
  const auto& m = instance.meta();
  const auto [in, out] = pair;
  if (in >= instance.domain_size() || instance.peek_forward(in) != out) {
    throw DomainError("solve_search_via_pair: (in, out) is not an input/output pair of the instance");
  }
  switch (m.kind) {
    case InstanceKind::UniformWorstCase:
      if ((in & low_mask(m.n)) != 0 || (out & low_mask(m.n)) != 0) {
        throw DomainError("solve_search_via_pair: not a zero pair");
      }
      return in >> m.n;
    case InstanceKind::NonuniformWorstCase:
      if ((in & low_mask(m.c)) != 0 || (out >> m.c) != 0) throw DomainError("solve_search_via_pair: not an X-pair");
      return in >> std::max(m.r, m.c);
    default:
      throw ConfigError("solve_search_via_pair: instance is not a worst-case construction");
  }
}

/// Sponge inverter: given handles to phi and an r-bit image y, return a
/// candidate preimage x' (or nothing).
using InversionAdversary = std::function<std::optional<Index>(OracleInstance& phi, Index y, Rng& rng)>;

struct ReductionOutcome {
  Index y = 0;
  std::optional<Index> adversary_output;
  std::optional<std::pair<Index, Index>> pair;  // X-pair of pi on success
  std::uint64_t adversary_queries = 0;
  std::uint64_t total_queries = 0;
};

/// Reduction from sponge inversion to X-pair search on pi: sample y, hand the
/// adversary phi = XOR_{y||0^c} o pi, then spend one pi-query on the answer
/// x' to emit (x'||0^c, 0^r||z). A failed inversion yields no pair.
inline ReductionOutcome reduce_sponge_inversion(OracleInstance& pi, unsigned r, unsigned c,
                                                const InversionAdversary& adversary, Rng& rng) {
  if (pi.bits() != r + c) throw ConfigError("reduce_sponge_inversion: oracle width differs from r + c");
  ReductionOutcome out;
  const std::uint64_t start = pi.queries();
  out.y = rng.below(Index{1} << r);
  OracleInstance phi = xor_wrap(pi, out.y << c);
  out.adversary_output = adversary(phi, out.y, rng);
  out.adversary_queries = pi.queries() - start;
  if (out.adversary_output && *out.adversary_output < (Index{1} << r)) {
    const Index input = *out.adversary_output << c;
    const Index image = pi.forward(input);
    if ((image >> c) == 0) out.pair = std::make_pair(input, image);
  }
  out.total_queries = pi.queries() - start;
  return out;
}

}  // namespace qperm
