#pragma once

// Dense statevector simulation of query algorithms against forward and
// backward permutation oracles, Grover attacks and the distinguishing
// experiment.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qperm/bounds.hpp"
#include "qperm/errors.hpp"
#include "qperm/instances.hpp"
#include "qperm/pairs.hpp"
#include "qperm/permgroup.hpp"
#include "qperm/permutation.hpp"
#include "qperm/rng.hpp"
#include "qperm/sponge.hpp"

namespace qperm {

inline constexpr std::size_t kDefaultCapacity = std::size_t{1} << 20;
inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kAnalyticTolerance = 1e-9;

struct Register {
  std::string name;
  std::size_t dim;
};

/// Amplitudes over a product of registers with arbitrary dimensions; the
/// first register is the most significant digit of the basis index.
class QueryState {
 public:
  using Amp = std::complex<double>;

  explicit QueryState(std::vector<Register> regs, std::size_t capacity = kDefaultCapacity) : regs_(std::move(regs)) {
    if (regs_.empty()) throw ConfigError("QueryState needs at least one register");
    std::size_t total = 1;
    strides_.assign(regs_.size(), 0);
    for (std::size_t i = regs_.size(); i-- > 0;) {
      if (regs_[i].dim == 0) throw ConfigError("register '" + regs_[i].name + "' has dimension 0");
      strides_[i] = total;
      if (total > capacity / regs_[i].dim) {
        throw ResourceError("state exceeds simulator capacity of " + std::to_string(capacity) + " amplitudes");
      }
      total *= regs_[i].dim;
    }
    amps_.assign(total, Amp{0.0, 0.0});
    amps_[0] = 1.0;
    buffer_.assign(total, Amp{0.0, 0.0});
  }

  [[nodiscard]] std::size_t size() const noexcept { return amps_.size(); }
  [[nodiscard]] std::size_t register_count() const noexcept { return regs_.size(); }
  [[nodiscard]] std::size_t dim(std::size_t reg) const { return regs_.at(reg).dim; }
  [[nodiscard]] std::size_t stride(std::size_t reg) const { return strides_.at(reg); }

  [[nodiscard]] std::size_t index_of(std::string_view name) const {
    for (std::size_t i = 0; i < regs_.size(); ++i)
      if (regs_[i].name == name) return i;
    throw ConfigError("no register named '" + std::string(name) + "'");
  }

  [[nodiscard]] std::size_t digit(std::size_t basis, std::size_t reg) const {
    return (basis / strides_[reg]) % regs_[reg].dim;
  }

  [[nodiscard]] std::vector<Amp>& amplitudes() noexcept { return amps_; }
  [[nodiscard]] const std::vector<Amp>& amplitudes() const noexcept { return amps_; }
  [[nodiscard]] std::vector<Amp>& buffer() noexcept { return buffer_; }
  void swap_buffer() noexcept { amps_.swap(buffer_); }

  /// |v_0>|v_1>...
  void set_basis(const std::vector<std::size_t>& values) {
    if (values.size() != regs_.size()) throw ConfigError("set_basis: one value per register required");
    std::size_t b = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] >= regs_[i].dim) throw ConfigError("set_basis: value out of range for '" + regs_[i].name + "'");
      b += values[i] * strides_[i];
    }
    std::fill(amps_.begin(), amps_.end(), Amp{0.0, 0.0});
    amps_[b] = 1.0;
  }

  /// Uniform superposition on `reg`, every other register |0>.
  void prepare_uniform(std::size_t reg) {
    std::fill(amps_.begin(), amps_.end(), Amp{0.0, 0.0});
    const double a = 1.0 / std::sqrt(static_cast<double>(regs_[reg].dim));
    for (std::size_t v = 0; v < regs_[reg].dim; ++v) amps_[v * strides_[reg]] = a;
  }

  [[nodiscard]] double norm() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return std::sqrt(s);
  }

  /// Marginal distribution of one register.
  [[nodiscard]] std::vector<double> probabilities(std::size_t reg) const {
    std::vector<double> p(regs_[reg].dim, 0.0);
    for (std::size_t b = 0; b < amps_.size(); ++b) p[digit(b, reg)] += std::norm(amps_[b]);
    return p;
  }

  /// Measure one register and collapse.
  std::size_t measure(std::size_t reg, Rng& rng) {
    const auto p = probabilities(reg);
    const std::size_t v = sample_index(p, rng);
    double kept = 0.0;
    for (std::size_t b = 0; b < amps_.size(); ++b) {
      if (digit(b, reg) != v) amps_[b] = 0.0;
      else kept += std::norm(amps_[b]);
    }
    const double scale = 1.0 / std::sqrt(kept);
    for (auto& a : amps_) a *= scale;
    return v;
  }

  static std::size_t sample_index(const std::vector<double>& p, Rng& rng) {
    double total = 0.0;
    for (double x : p) total += x;
    const double u = rng.uniform01() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      acc += p[i];
      if (u < acc) return i;
    }
    for (std::size_t i = p.size(); i-- > 0;)
      if (p[i] > 0.0) return i;
    return 0;
  }

  void set_query_budget(std::optional<std::uint64_t> budget) noexcept { budget_ = budget; }
  [[nodiscard]] std::optional<std::uint64_t> query_budget() const noexcept { return budget_; }
  [[nodiscard]] std::uint64_t queries() const noexcept { return queries_; }

  /// Refuses once the budget would be exceeded.
  void charge_query() {
    if (budget_ && queries_ >= *budget_) {
      throw ResourceError("query budget of " + std::to_string(*budget_) + " exhausted");
    }
    ++queries_;
  }

 private:
  std::vector<Register> regs_;
  std::vector<std::size_t> strides_;
  std::vector<Amp> amps_;
  std::vector<Amp> buffer_;
  std::optional<std::uint64_t> budget_;
  std::uint64_t queries_ = 0;
};

namespace detail {

inline std::vector<Index> oracle_inputs(const QueryState& s, std::size_t x_reg, const OracleInstance& phi,
                                        const std::vector<Index>* embed) {
  std::vector<Index> inputs;
  if (embed) {
    if (embed->size() != s.dim(x_reg)) throw ConfigError("oracle embedding size differs from the input register");
    for (Index v : *embed)
      if (v >= phi.domain_size()) throw ConfigError("oracle embedding points outside the permutation domain");
    inputs = *embed;
  } else {
    if (s.dim(x_reg) != phi.domain_size()) {
      throw ConfigError("input register dimension " + std::to_string(s.dim(x_reg)) + " differs from oracle domain " +
                        std::to_string(phi.domain_size()));
    }
    inputs.resize(phi.domain_size());
    for (Index v = 0; v < inputs.size(); ++v) inputs[v] = v;
  }
  return inputs;
}

}  // namespace detail

/// |x>|y> -> |x>|y xor phi(e(x))>, where e embeds the input register into the
/// permutation domain (identity when omitted). One query.
inline void apply_forward(QueryState& s, OracleInstance& phi, std::size_t x_reg, std::size_t y_reg,
                          const std::vector<Index>* embed = nullptr) {
  if (s.dim(y_reg) != phi.domain_size()) {
    throw ConfigError("output register dimension " + std::to_string(s.dim(y_reg)) + " differs from oracle domain " +
                      std::to_string(phi.domain_size()));
  }
  const auto inputs = detail::oracle_inputs(s, x_reg, phi, embed);
  s.charge_query();
  phi.charge();
  std::vector<Index> image(inputs.size());
  for (std::size_t x = 0; x < inputs.size(); ++x) image[x] = phi.peek_forward(inputs[x]);
  const std::size_t sy = s.stride(y_reg);
  auto& in = s.amplitudes();
  auto& out = s.buffer();
  for (std::size_t b = 0; b < in.size(); ++b) {
    const std::size_t x = s.digit(b, x_reg), y = s.digit(b, y_reg);
    out[b + ((y ^ image[x]) - y) * sy] = in[b];
  }
  s.swap_buffer();
}

/// |x>|y> -> |x xor phi^{-1}(y)>|y>. One query.
inline void apply_backward(QueryState& s, OracleInstance& phi, std::size_t x_reg, std::size_t y_reg) {
  if (s.dim(x_reg) != phi.domain_size() || s.dim(y_reg) != phi.domain_size()) {
    throw ConfigError("backward query needs both registers of the oracle's dimension");
  }
  s.charge_query();
  phi.charge();
  std::vector<Index> pre(phi.domain_size());
  for (Index y = 0; y < pre.size(); ++y) pre[y] = phi.peek_backward(y);
  const std::size_t sx = s.stride(x_reg);
  auto& in = s.amplitudes();
  auto& out = s.buffer();
  for (std::size_t b = 0; b < in.size(); ++b) {
    const std::size_t x = s.digit(b, x_reg), y = s.digit(b, y_reg);
    out[b + ((x ^ pre[y]) - x) * sx] = in[b];
  }
  s.swap_buffer();
}

/// |x>|0> -> (-1)^{pred(phi(e(x)))} |x>|0> by compute, flip, uncompute.
/// Two queries; the scratch register must start in |0>.
inline void phase_mark(QueryState& s, OracleInstance& phi, std::size_t search_reg, std::size_t scratch_reg,
                       const std::function<bool(Index)>& predicate, const std::vector<Index>* embed = nullptr) {
  double stray = 0.0;
  const auto& amps = s.amplitudes();
  for (std::size_t b = 0; b < amps.size(); ++b)
    if (s.digit(b, scratch_reg) != 0) stray += std::norm(amps[b]);
  if (stray > kNormTolerance) throw ContractViolation("phase_mark: scratch register is not |0>");
  apply_forward(s, phi, search_reg, scratch_reg, embed);
  std::vector<char> flip(s.dim(scratch_reg));
  for (std::size_t v = 0; v < flip.size(); ++v) flip[v] = predicate(v) ? 1 : 0;
  auto& a = s.amplitudes();
  for (std::size_t b = 0; b < a.size(); ++b)
    if (flip[s.digit(b, scratch_reg)]) a[b] = -a[b];
  apply_forward(s, phi, search_reg, scratch_reg, embed);
}

/// Reflection about the uniform state of `reg`, independently for every
/// assignment of the other registers.
inline void diffusion(QueryState& s, std::size_t reg) {
  auto& a = s.amplitudes();
  const std::size_t d = s.dim(reg), st = s.stride(reg);
  for (std::size_t b = 0; b < a.size(); ++b) {
    if (s.digit(b, reg) != 0) continue;
    QueryState::Amp mean = 0.0;
    for (std::size_t v = 0; v < d; ++v) mean += a[b + v * st];
    mean /= static_cast<double>(d);
    for (std::size_t v = 0; v < d; ++v) a[b + v * st] = 2.0 * mean - a[b + v * st];
  }
}

/// sin^2((2 T + 1) asin sqrt(K / M)).
inline double grover_success(std::uint64_t marked, std::uint64_t space, std::uint64_t iterations) {
  if (space == 0 || marked > space) throw DomainError("grover_success: requires 0 <= K <= M, M > 0");
  const double theta = std::asin(std::sqrt(static_cast<double>(marked) / static_cast<double>(space)));
  const double s = std::sin((2.0 * static_cast<double>(iterations) + 1.0) * theta);
  return s * s;
}

/// Search over `inputs` for an input whose image satisfies `target`.
struct SearchTask {
  std::vector<Index> inputs;
  std::function<bool(Index)> target;
};

struct GroverRun {
  std::vector<double> distribution;  // over search-register values
  std::uint64_t queries = 0;         // oracle queries spent in amplification
  double success = 0.0;              // mass on inputs whose image hits the target
  std::size_t marked = 0;
};

/// Uniform start, then `iterations` rounds of phase_mark + diffusion, with the
/// state's query budget pinned at 2 * iterations.
inline GroverRun run_grover(OracleInstance& phi, const SearchTask& task, std::uint64_t iterations,
                            std::size_t capacity = kDefaultCapacity) {
  if (task.inputs.empty()) throw ConfigError("run_grover: empty search space");
  QueryState s({{"search", task.inputs.size()}, {"scratch", static_cast<std::size_t>(phi.domain_size())}}, capacity);
  s.set_query_budget(2 * iterations);
  s.prepare_uniform(0);
  for (std::uint64_t i = 0; i < iterations; ++i) {
    phase_mark(s, phi, 0, 1, task.target, &task.inputs);
    diffusion(s, 0);
  }
  GroverRun run;
  run.distribution = s.probabilities(0);
  run.queries = s.queries();
  for (std::size_t x = 0; x < task.inputs.size(); ++x) {
    if (task.target(phi.peek_forward(task.inputs[x]))) {
      ++run.marked;
      run.success += run.distribution[x];
    }
  }
  return run;
}

struct AttackReport {
  std::string mode;
  unsigned n = 0;
  unsigned r = 0;
  unsigned c = 0;
  std::uint64_t kappa = 0;
  std::uint64_t iterations = 0;
  std::uint64_t total_queries = 0;  // per trial: 2 * iterations + 1
  std::uint64_t trials = 0;         // 0 = analytic mode
  double empirical = 0.0;
  std::optional<double> analytic;
  std::optional<double> simulated;
  std::optional<double> bound;
  std::string bound_kind;
  std::uint64_t seed = 0;
  double stderr_ = 0.0;
};

inline void to_json(json& j, const AttackReport& a) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  j = json{{"mode", a.mode},
           {"n", a.n},
           {"r", a.r},
           {"c", a.c},
           {"kappa", a.kappa},
           {"iterations", a.iterations},
           {"total_queries", a.total_queries},
           {"trials", a.trials},
           {"empirical", a.empirical},
           {"analytic", opt(a.analytic)},
           {"simulated", opt(a.simulated)},
           {"bound", opt(a.bound)},
           {"bound_kind", a.bound_kind},
           {"stderr", a.stderr_},
           {"seed", a.seed}};
}

/// 12 significant digits; empty for missing values.
inline std::string csv_number(std::optional<double> v) {
  if (!v) return "";
  std::ostringstream os;
  os.precision(12);
  os << *v;
  return os.str();
}

inline std::string attack_csv_header() { return "n,r,c,kappa,T,trials,empirical,analytic,bound,seed"; }

/// T is the iteration count; total queries are 2T + 1.
inline std::string to_csv_row(const AttackReport& a) {
  std::ostringstream os;
  os << a.n << ',' << a.r << ',' << a.c << ',' << a.kappa << ',' << a.iterations << ',' << a.trials << ','
     << csv_number(a.empirical) << ',' << csv_number(a.analytic) << ',' << csv_number(a.bound) << ',' << a.seed;
  return os.str();
}

/// Grover search for an X-pair of `instance`: the search register ranges over
/// X1, the marking predicate is membership in X2. Each trial measures and
/// spends one forward query verifying the candidate. With trials = 0 the
/// exact measurement distribution replaces sampling.
inline AttackReport grover_attack(OracleInstance& instance, const SubsetPairSpec& spec, std::uint64_t iterations,
                                  Rng& rng, std::uint64_t trials = 0, std::size_t capacity = kDefaultCapacity) {
  if (spec.size() != instance.domain_size()) throw ConfigError("grover_attack: spec size differs from oracle domain");
  SearchTask task{spec.x1(), [&spec](Index v) { return spec.in_x2(v); }};
  const GroverRun run = run_grover(instance, task, iterations, capacity);
  AttackReport rep;
  rep.mode = "grover";
  rep.kappa = run.marked;
  rep.iterations = iterations;
  rep.total_queries = run.queries + 1;
  rep.trials = trials;
  rep.seed = rng.seed();
  rep.analytic = grover_success(run.marked, task.inputs.size(), iterations);
  rep.simulated = run.success;
  if (trials == 0) {
    std::size_t best = 0;
    for (std::size_t x = 1; x < run.distribution.size(); ++x)
      if (run.distribution[x] > run.distribution[best]) best = x;
    (void)spec.in_x2(instance.forward(task.inputs[best]));
    rep.empirical = run.success;
    return rep;
  }
  std::uint64_t wins = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const std::size_t x = QueryState::sample_index(run.distribution, rng);
    if (spec.in_x2(instance.forward(task.inputs[x]))) ++wins;
  }
  rep.empirical = static_cast<double>(wins) / static_cast<double>(trials);
  rep.stderr_ = binomial_stderr(rep.empirical, trials);
  return rep;
}

/// Parameters a report supplies to a bound; T is the total query count.
inline BoundParams report_params(const AttackReport& a) {
  return {{"T", static_cast<double>(a.total_queries)}, {"n", static_cast<double>(a.n)},
          {"kappa", static_cast<double>(a.kappa)}, {"r", static_cast<double>(a.r)},
          {"c", static_cast<double>(a.c)}};
}

inline Verdict bound_check(const AttackReport& a, BoundKind kind, double sigma_slack = 3.0) {
  BoundParams p;
  const auto all = report_params(a);
  for (auto name : bound_parameters(kind)) {
    auto it = all.find(std::string(name));
    if (it == all.end()) throw ConfigError("report does not carry parameter '" + std::string(name) + "'");
    p[it->first] = it->second;
  }
  return bound_check(kind, p, a.empirical, a.stderr_, sigma_slack);
}

/// Grover inverter for the single-round sponge: amplify over rate values x
/// whose image phi(x||iv) starts with y, measure, verify with one query.
inline InversionAdversary grover_inverter(const SpongeParams& p, std::uint64_t iterations,
                                          std::size_t capacity = kDefaultCapacity) {
  return [p, iterations, capacity](OracleInstance& phi, Index y, Rng& rng) -> std::optional<Index> {
    SearchTask task;
    for (Index x = 0; x < p.rate_size(); ++x) task.inputs.push_back(p.pack(x, p.iv));
    task.target = [&p, y](Index v) { return p.rate_of(v) == y; };
    const GroverRun run = run_grover(phi, task, iterations, capacity);
    const Index x = QueryState::sample_index(run.distribution, rng);
    if (single_round(phi, p, x) == y) return x;
    return std::nullopt;
  };
}

namespace detail {

inline void finish_sweep_point(AttackReport& rep, std::uint64_t wins, double analytic_sum, double simulated_sum,
                               std::uint64_t samples) {
  const double s = static_cast<double>(samples);
  rep.trials = samples;
  rep.empirical = static_cast<double>(wins) / s;
  rep.stderr_ = binomial_stderr(rep.empirical, samples);
  rep.analytic = analytic_sum / s;
  rep.simulated = simulated_sum / s;
}

}  // namespace detail

/// Zero-pair search on 2n-bit permutations drawn uniformly from S_N^kappa.
/// samples = 0 evaluates one coset member exactly (every member gives the
/// same Grover success); otherwise each sample is a fresh coset member with
/// one measurement. The bound is the fixed-kappa ceiling at 2T + 1 queries.
inline std::vector<AttackReport> dszs_sweep(unsigned n, std::uint64_t kappa, const std::vector<std::uint64_t>& ts,
                                            std::uint64_t samples, std::uint64_t seed,
                                            std::size_t capacity = kDefaultCapacity) {
  const SubsetPairSpec spec = SubsetPairSpec::zero_pair_spec(n);
  std::vector<AttackReport> out;
  for (std::uint64_t t : ts) {
    AttackReport rep;
    Rng base(seed, t);
    if (samples == 0) {
      Rng rng = base.substream(0);
      OracleInstance inst = OracleInstance::from_permutation(sample_coset(spec, kappa, rng));
      rep = grover_attack(inst, spec, t, rng, 0, capacity);
    } else {
      std::uint64_t wins = 0;
      double analytic = 0.0, simulated = 0.0;
      for (std::uint64_t i = 0; i < samples; ++i) {
        Rng rng = base.substream(i);
        OracleInstance inst = OracleInstance::from_permutation(sample_coset(spec, kappa, rng));
        const AttackReport one = grover_attack(inst, spec, t, rng, 1, capacity);
        wins += one.empirical > 0.5 ? 1 : 0;
        analytic += *one.analytic;
        simulated += *one.simulated;
        rep.total_queries = one.total_queries;
      }
      detail::finish_sweep_point(rep, wins, analytic, simulated, samples);
      rep.iterations = t;
    }
    rep.mode = "dszs";
    rep.n = n;
    rep.kappa = kappa;
    rep.seed = seed;
    rep.bound_kind = to_string(BoundKind::DszsFixedKappa);
    rep.bound = kappa > 0 ? std::optional<double>(bound_value(BoundKind::DszsFixedKappa, report_params(rep)).value)
                          : std::nullopt;
    out.push_back(rep);
  }
  return out;
}

/// X-pair search on D_X-sampled permutations of the sponge spec (r, c).
inline std::vector<AttackReport> nuds_sweep(unsigned r, unsigned c, const std::vector<std::uint64_t>& ts,
                                            std::uint64_t samples, std::uint64_t seed,
                                            std::size_t capacity = kDefaultCapacity) {
  if (samples == 0) throw ConfigError("nuds sweep averages over sampled instances; trials must be positive");
  const SubsetPairSpec spec = SubsetPairSpec::sponge_spec(r, c);
  std::vector<AttackReport> out;
  for (std::uint64_t t : ts) {
    AttackReport rep;
    Rng base(seed, t);
    std::uint64_t wins = 0;
    double analytic = 0.0, simulated = 0.0;
    for (std::uint64_t i = 0; i < samples; ++i) {
      Rng rng = base.substream(i);
      OracleInstance inst = OracleInstance::from_permutation(sample_dx(spec, rng));
      const AttackReport one = grover_attack(inst, spec, t, rng, 1, capacity);
      wins += one.empirical > 0.5 ? 1 : 0;
      analytic += *one.analytic;
      simulated += *one.simulated;
      rep.total_queries = one.total_queries;
    }
    detail::finish_sweep_point(rep, wins, analytic, simulated, samples);
    rep.mode = "nuds";
    rep.r = r;
    rep.c = c;
    rep.iterations = t;
    rep.seed = seed;
    rep.bound_kind = to_string(BoundKind::Nuds);
    rep.bound = bound_value(BoundKind::Nuds, report_params(rep)).value;
    out.push_back(rep);
  }
  return out;
}

/// One-wayness game with the Grover inverter at each iteration count.
inline std::vector<AttackReport> sponge_sweep(unsigned r, unsigned c, const std::vector<std::uint64_t>& ts,
                                              std::uint64_t samples, std::uint64_t seed,
                                              std::size_t capacity = kDefaultCapacity) {
  if (samples == 0) throw ConfigError("sponge sweep plays the game; trials must be positive");
  const SpongeParams params(r, c);
  std::vector<AttackReport> out;
  for (std::uint64_t t : ts) {
    AttackReport rep;
    Rng base(seed, t);
    const InversionAdversary adv = grover_inverter(params, t, capacity);
    std::uint64_t wins = 0;
    for (std::uint64_t i = 0; i < samples; ++i) {
      Rng rng = base.substream(i);
      const OneWayTranscript tr = one_wayness_game(params, adv, rng);
      wins += tr.success ? 1 : 0;
      rep.total_queries = tr.queries;
    }
    rep.mode = "sponge";
    rep.r = r;
    rep.c = c;
    rep.iterations = t;
    rep.trials = samples;
    rep.empirical = static_cast<double>(wins) / static_cast<double>(samples);
    rep.stderr_ = binomial_stderr(rep.empirical, samples);
    rep.seed = seed;
    rep.bound_kind = to_string(BoundKind::SpongeOw);
    rep.bound = bound_value(BoundKind::SpongeOw, report_params(rep)).value;
    out.push_back(rep);
  }
  return out;
}

struct DistinguishReport {
  unsigned n = 0;
  std::uint64_t kappa = 0;
  std::uint64_t queries = 0;  // total budget T of the distinguisher
  std::uint64_t iterations = 0;
  std::uint64_t trials = 0;   // per arm
  double p_kappa = 0.0;       // Pr[output 1 | S_N^kappa]
  double p_zero = 0.0;        // Pr[output 1 | S_N^0]
  double advantage = 0.0;
  double analytic = 0.0;
  double stderr_ = 0.0;
  double bound = 0.0;
  bool pass = false;
  std::uint64_t seed = 0;
};

inline void to_json(json& j, const DistinguishReport& d) {
  j = json{{"mode", "distinguish"}, {"n", d.n},       {"kappa", d.kappa},         {"T", d.queries},
           {"iterations", d.iterations}, {"trials", d.trials}, {"p_kappa", d.p_kappa}, {"p_zero", d.p_zero},
           {"advantage", d.advantage}, {"analytic", d.analytic}, {"stderr", d.stderr_}, {"bound", d.bound},
           {"pass", d.pass},           {"seed", d.seed}};
}

/// T-query distinguisher: floor((T-1)/2) Grover iterations for a zero pair,
/// measure, verify (one query), and spend a leftover query on one uniform
/// guess. Outputs 1 iff a verified zero pair was found.
inline bool run_distinguisher(OracleInstance& phi, const SubsetPairSpec& spec, std::uint64_t t, Rng& rng,
                              std::size_t capacity = kDefaultCapacity) {
  if (t == 0) return false;
  const std::uint64_t iterations = (t - 1) / 2;
  SearchTask task{spec.x1(), [&spec](Index v) { return spec.in_x2(v); }};
  const GroverRun run = run_grover(phi, task, iterations, capacity);
  const std::size_t x = QueryState::sample_index(run.distribution, rng);
  bool found = spec.in_x2(phi.forward(task.inputs[x]));
  if (t - 2 * iterations - 1 == 1) found = spec.in_x2(phi.forward(task.inputs[rng.below(task.inputs.size())])) || found;
  return found;
}

/// Estimate |Pr[1 | S_N^kappa] - Pr[1 | S_N^0]| for the T-query distinguisher
/// on 2n-bit permutations and compare with 2 T sqrt(kappa / 2^n) + slack sigma.
inline DistinguishReport distinguishing_experiment(unsigned n, std::uint64_t kappa, std::uint64_t t,
                                                   std::uint64_t trials, std::uint64_t seed,
                                                   double sigma_slack = 3.0,
                                                   std::size_t capacity = kDefaultCapacity) {
  if (trials == 0) throw ConfigError("distinguishing_experiment: trials must be positive");
  const SubsetPairSpec spec = SubsetPairSpec::zero_pair_spec(n);
  const std::size_t amplitudes = spec.x1_size();
  if (amplitudes > capacity / spec.size()) {
    throw ResourceError("distinguishing_experiment: n = " + std::to_string(n) + " exceeds simulator capacity");
  }
  DistinguishReport d;
  d.n = n;
  d.kappa = kappa;
  d.queries = t;
  d.iterations = t == 0 ? 0 : (t - 1) / 2;
  d.trials = trials;
  d.seed = seed;
  auto arm = [&](std::uint64_t k, std::uint64_t stream) {
    Rng base(seed, stream);
    std::uint64_t ones = 0;
    for (std::uint64_t i = 0; i < trials; ++i) {
      Rng rng = base.substream(i);
      OracleInstance phi = OracleInstance::from_permutation(sample_coset(spec, k, rng));
      const std::uint64_t before = phi.queries();
      if (run_distinguisher(phi, spec, t, rng, capacity)) ++ones;
      if (phi.queries() - before > t) throw ContractViolation("distinguisher exceeded its query budget");
    }
    return static_cast<double>(ones) / static_cast<double>(trials);
  };
  d.p_kappa = arm(kappa, 2 * t + 1);
  d.p_zero = arm(0, 2 * t + 2);
  d.advantage = std::abs(d.p_kappa - d.p_zero);
  d.stderr_ = std::sqrt(binomial_stderr(d.p_kappa, trials) * binomial_stderr(d.p_kappa, trials) +
                        binomial_stderr(d.p_zero, trials) * binomial_stderr(d.p_zero, trials));
  if (t > 0) {
    const double m = static_cast<double>(spec.x1_size());
    const double grover = grover_success(kappa, spec.x1_size(), d.iterations);
    d.analytic = t - 2 * d.iterations - 1 == 1 ? 1.0 - (1.0 - grover) * (1.0 - static_cast<double>(kappa) / m)
                                                : grover;
  }
  d.bound = decision_advantage_bound(n, kappa, t);
  d.pass = d.advantage <= d.bound + sigma_slack * d.stderr_;
  return d;
}

}  // namespace qperm
