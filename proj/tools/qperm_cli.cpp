// qperm_cli: reproducible experiment runner. JSON lines by default, CSV as a projection.
// Exit codes: 0 ok, 1 a check failed, 2 configuration or domain error.

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qperm/qperm.hpp"

using namespace qperm;

namespace {

struct Options {
  std::optional<unsigned> n, r, c;
  std::optional<std::uint64_t> kappa, k, t;
  std::string t_range;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string out;
  std::size_t max_n = kDefaultEnumerationCap;
  std::string mode;
  std::string kind;
  std::optional<double> eps, big_n;
  std::string message;
  std::size_t blocks = 1;
  Index iv = 0;
};

template <class T>
T need(const std::optional<T>& v, const char* flag) {
  if (!v) throw ConfigError(std::string("missing required flag --") + flag);
  return *v;
}

std::vector<std::uint64_t> parse_ts(const Options& o) {
  if (!o.t_range.empty()) {
    const auto dots = o.t_range.find("..");
    if (dots == std::string::npos) throw ConfigError("--t-range expects a..b, got '" + o.t_range + "'");
    std::uint64_t a = 0, b = 0;
    try {
      a = std::stoull(o.t_range.substr(0, dots));
      b = std::stoull(o.t_range.substr(dots + 2));
    } catch (const std::exception&) {
      throw ConfigError("--t-range expects a..b, got '" + o.t_range + "'");
    }
    if (a > b) throw ConfigError("--t-range is empty: " + o.t_range);
    std::vector<std::uint64_t> ts;
    for (auto t = a; t <= b; ++t) ts.push_back(t);
    return ts;
  }
  return {need(o.t, "t")};
}

std::vector<Index> parse_message(const std::string& s) {
  std::vector<Index> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoull(item, nullptr, 0));
    } catch (const std::exception&) {
      throw ConfigError("--message expects comma-separated block values, got '" + item + "'");
    }
  }
  return out;
}

// Flatten nested objects one level with dotted keys.
json flatten(const json& j) {
  json flat = json::object();
  for (const auto& [k, v] : j.items()) {
    if (v.is_object()) {
      for (const auto& [k2, v2] : v.items()) flat[k + "." + k2] = v2;
    } else {
      flat[k] = v;
    }
  }
  return flat;
}

std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return csv_number(v.get<double>());
  return v.dump();
}

class Emitter {
 public:
  explicit Emitter(const Options& o) : csv_(o.format == "csv") {
    if (o.format != "json" && o.format != "csv") throw ConfigError("--format must be json or csv");
    if (!o.out.empty()) {
      file_.open(o.out);
      if (!file_) throw ConfigError("cannot open --out " + o.out);
    }
  }

  void record(const json& j) { records_.push_back(j); }

  // Attack sweeps use the fixed table layout.
  void attack(const AttackReport& a) {
    attack_rows_.push_back(to_csv_row(a));
    records_.push_back(a);
  }

  void flush() {
    std::ostream& os = file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout;
    if (!csv_) {
      for (const auto& r : records_) os << r.dump() << '\n';
      return;
    }
    if (!attack_rows_.empty()) {
      os << attack_csv_header() << '\n';
      for (const auto& row : attack_rows_) os << row << '\n';
      return;
    }
    std::vector<std::string> header;
    for (const auto& r : records_) {
      const json flat = flatten(r);
      for (const auto& [k, v] : flat.items())
        if (std::find(header.begin(), header.end(), k) == header.end()) header.push_back(k);
    }
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << '\n';
    for (const auto& r : records_) {
      const json flat = flatten(r);
      for (std::size_t i = 0; i < header.size(); ++i)
        os << (i ? "," : "") << (flat.contains(header[i]) ? csv_cell(flat[header[i]]) : "");
      os << '\n';
    }
  }

 private:
  bool csv_;
  std::ofstream file_;
  std::vector<json> records_;
  std::vector<std::string> attack_rows_;
};

int failed(const std::vector<std::string>& failures) {
  for (const auto& f : failures) std::cerr << "FAILED: " << f << '\n';
  return failures.empty() ? 0 : 1;
}

int cmd_verify(const Options& o, Emitter& e) {
  std::vector<std::string> failures;
  for (const auto& rec : verify_combinatorics(o.max_n, o.seed)) {
    json j = rec;
    j["seed"] = o.seed;
    e.record(j);
    if (!rec.pass) failures.push_back(rec.check + " (N=" + std::to_string(rec.n) + "): " + rec.claim);
  }
  e.flush();
  return failed(failures);
}

int cmd_existence(const Options& o, Emitter& e) {
  std::vector<std::string> failures;
  const std::uint64_t max_root = o.n.value_or(8);
  if (max_root == 0) throw ConfigError("--n (largest sqrt N) must be positive");
  double prev = 0.0;
  for (std::uint64_t s = 1; s <= max_root; ++s) {
    const std::uint64_t big = s * s;
    const Rational p = zero_pair_existence_prob(big);
    const double none = 1.0 - to_double(p);
    json j{{"N", big},
           {"existence", to_string(p)},
           {"value", to_double(p)},
           {"no_pair", none},
           {"seed", o.seed},
           {"trials", o.trials}};
    if (s > 1 && !(none > prev && none < std::exp(-1.0))) {
      failures.push_back("zero-pair existence: no-pair sequence not increasing below 1/e at N=" + std::to_string(big));
    }
    prev = none;
    if (s > 1 && o.trials > 0 && big <= (std::uint64_t{1} << kMaxTableBits)) {
      Rng rng(o.seed, s);
      const auto bits = static_cast<unsigned>(std::log2(static_cast<double>(s)) + 0.5);
      if ((Index{1} << bits) == s) {
        const auto spec = SubsetPairSpec::zero_pair_spec(bits);
        std::uint64_t hits = 0;
        for (std::uint64_t i = 0; i < o.trials; ++i) hits += count_x_pairs(sample_uniform(big, rng), spec) > 0;
        const double emp = static_cast<double>(hits) / static_cast<double>(o.trials);
        const double sigma = binomial_stderr(to_double(p), o.trials);
        j["empirical"] = emp;
        j["stderr"] = sigma;
        j["pass"] = std::abs(emp - to_double(p)) <= 3 * sigma;
        if (!j["pass"].get<bool>()) failures.push_back("zero-pair existence: Monte Carlo off by > 3 sigma at N=" + std::to_string(big));
      }
    }
    e.record(j);
  }
  e.flush();
  return failed(failures);
}

double chi_square_pvalue(const std::vector<double>& observed, const std::vector<double>& probs) {
  const double total = std::accumulate(observed.begin(), observed.end(), 0.0);
  double stat = 0.0;
  std::size_t df = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    const double expect = total * probs[i];
    stat += (observed[i] - expect) * (observed[i] - expect) / expect;
    ++df;
  }
  if (df < 2) return 1.0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(static_cast<double>(df - 1)), stat));
}

// Distribution of |X_pi| under the chosen sampler against the exact D_X law.
int cmd_sample(const Options& o, Emitter& e) {
  if (o.trials == 0) throw ConfigError("sample needs --trials > 0");
  const std::string mode = o.mode.empty() ? "dx" : o.mode;
  const unsigned r = need(o.r, "r"), c = need(o.c, "c");
  const SpongeParams params(r, c);
  const SubsetPairSpec spec = params.pair_spec();
  const auto exact = dx_pair_count_distribution(spec);
  std::map<std::size_t, double> counts;
  Rng rng(o.seed);
  for (std::uint64_t i = 0; i < o.trials; ++i) {
    auto draw = [&]() -> Permutation {
      if (mode == "dx") return sample_dx(spec, rng, DxSampler::Shift);
      if (mode == "dx-rejection") return sample_dx(spec, rng, DxSampler::Rejection);
      if (mode != "d1" && mode != "d2") throw ConfigError("--mode for sample must be dx, dx-rejection, d1 or d2");
      const auto [phi, y] = mode == "d1" ? sample_d1(params, rng) : sample_d2(params, rng);
      std::vector<Index> t(phi.size());
      for (Index v = 0; v < phi.size(); ++v) t[v] = phi(v) ^ (y << c);
      return Permutation::from_forward(std::move(t));
    };
    const Permutation pi = draw();
    counts[count_x_pairs(pi, spec)] += 1;
  }
  std::vector<double> observed, probs;
  for (const auto& [k, pr] : exact) {
    observed.push_back(counts[k]);
    probs.push_back(to_double(pr));
    e.record({{"mode", mode}, {"r", r}, {"c", c}, {"kappa", k}, {"count", static_cast<std::uint64_t>(counts[k])},
              {"empirical", counts[k] / static_cast<double>(o.trials)}, {"exact", to_double(pr)},
              {"trials", o.trials}, {"seed", o.seed}});
  }
  const double pv = chi_square_pvalue(observed, probs);
  const bool pass = pv >= 1e-3;
  e.record({{"mode", mode}, {"r", r}, {"c", c}, {"summary", "chi-square against the exact D_X law"},
            {"p_value", pv}, {"pass", pass}, {"trials", o.trials}, {"seed", o.seed}});
  e.flush();
  return failed(pass ? std::vector<std::string>{}
                     : std::vector<std::string>{"D1 = D2 / D_X sampler: chi-square p-value below 1e-3"});
}

int cmd_attack(const Options& o, Emitter& e) {
  const auto ts = parse_ts(o);
  std::vector<AttackReport> reps;
  if (o.mode == "dszs") {
    reps = dszs_sweep(need(o.n, "n"), need(o.kappa, "kappa"), ts, o.trials, o.seed);
  } else if (o.mode == "nuds") {
    reps = nuds_sweep(need(o.r, "r"), need(o.c, "c"), ts, o.trials, o.seed);
  } else if (o.mode == "sponge") {
    reps = sponge_sweep(need(o.r, "r"), need(o.c, "c"), ts, o.trials, o.seed);
  } else {
    throw ConfigError("--mode for attack must be dszs, nuds or sponge");
  }
  std::vector<std::string> failures;
  for (const auto& rep : reps) {
    e.attack(rep);
    if (!rep.bound) continue;
    const auto v = bound_check(rep, parse_bound_kind(rep.bound_kind));
    if (!v.pass) failures.push_back(rep.bound_kind + " bound exceeded at T=" + std::to_string(rep.iterations));
  }
  e.flush();
  return failed(failures);
}

int cmd_distinguish(const Options& o, Emitter& e) {
  if (o.trials == 0) throw ConfigError("distinguish needs --trials > 0");
  std::vector<std::string> failures;
  for (auto t : parse_ts(o)) {
    const auto d = distinguishing_experiment(need(o.n, "n"), need(o.kappa, "kappa"), t, o.trials, o.seed);
    e.record(d);
    if (!d.pass) failures.push_back("decision bound 2T sqrt(kappa/2^n) exceeded at T=" + std::to_string(t));
  }
  e.flush();
  return failed(failures);
}

int cmd_bounds(const Options& o, Emitter& e) {
  const BoundKind kind = parse_bound_kind(o.kind);
  std::vector<std::optional<std::uint64_t>> ts;
  if (!o.t_range.empty() || o.t) {
    for (auto t : parse_ts(o)) ts.emplace_back(t);
  } else {
    ts.emplace_back(std::nullopt);
  }
  for (const auto& t : ts) {
    BoundParams p;
    if (t) p["T"] = static_cast<double>(*t);
    if (o.n) p["n"] = *o.n;
    if (o.r) p["r"] = *o.r;
    if (o.c) p["c"] = *o.c;
    if (o.kappa) p["kappa"] = static_cast<double>(*o.kappa);
    if (o.k) p["K"] = static_cast<double>(*o.k);
    if (o.big_n) p["N"] = *o.big_n;
    if (o.eps) p["eps"] = *o.eps;
    BoundParams used;
    for (auto name : bound_parameters(kind)) {
      auto it = p.find(std::string(name));
      if (it != p.end()) used[it->first] = it->second;
    }
    const auto v = bound_value(kind, used);
    e.record({{"kind", to_string(kind)}, {"params", used}, {"value", v.value}, {"vacuous", v.vacuous}});
  }
  e.flush();
  return 0;
}

int cmd_sponge(const Options& o, Emitter& e) {
  const SpongeParams p(need(o.r, "r"), need(o.c, "c"), o.iv, o.blocks);
  const auto msg = parse_message(o.message);
  Rng rng(o.seed);
  OracleInstance phi = random_oracle(p.r + p.c, rng);
  const auto out = sponge_eval(phi, p, msg);
  e.record({{"r", p.r}, {"c", p.c}, {"iv", p.iv}, {"blocks", p.output_blocks}, {"message", msg},
            {"output", out}, {"queries", phi.queries()}, {"seed", o.seed}, {"instance", phi.meta()}});
  e.flush();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qperm: permutation-oracle combinatorics, sponge games and Grover experiments"};
  app.require_subcommand(1);
  Options o;

  auto common = [&o](CLI::App* s) {
    s->add_option("--n", o.n, "half-width n (2n-bit permutations) or size parameter");
    s->add_option("--r", o.r, "sponge rate bits");
    s->add_option("--c", o.c, "sponge capacity bits");
    s->add_option("--kappa", o.kappa, "number of planted pairs (double coset index)");
    s->add_option("--k", o.k, "number of marked items K");
    s->add_option("--t", o.t, "iteration count T");
    s->add_option("--t-range", o.t_range, "inclusive range a..b of T");
    s->add_option("--trials", o.trials, "samples per point (0 = analytic where supported)");
    s->add_option("--seed", o.seed, "64-bit seed");
    s->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    s->add_option("--out", o.out, "output path (default stdout)");
    s->add_option("--max-n", o.max_n, "enumeration cap on N");
  };

  auto* verify = app.add_subcommand("verify-combinatorics", "exhaustive identity checks at N <= max-n");
  auto* existence = app.add_subcommand("existence", "zero-pair existence table for N = 1, 4, ..., n^2");
  auto* sample = app.add_subcommand("sample", "D_X / D1 / D2 sampler diagnostics");
  auto* attack = app.add_subcommand("attack", "Grover sweeps with bound checks");
  auto* distinguish = app.add_subcommand("distinguish", "kappa-versus-zero decision experiment");
  auto* bounds = app.add_subcommand("bounds", "evaluate a query bound");
  auto* sponge = app.add_subcommand("sponge", "evaluate a sponge digest under a seeded random permutation");
  for (auto* s : {verify, existence, sample, attack, distinguish, bounds, sponge}) common(s);
  sample->add_option("--mode", o.mode, "dx, dx-rejection, d1 or d2");
  attack->add_option("--mode", o.mode, "dszs, nuds or sponge")->required();
  bounds->add_option("--kind", o.kind, "bound tag")->required();
  bounds->add_option("--eps", o.eps, "target success probability");
  bounds->add_option("--N", o.big_n, "search space size");
  sponge->add_option("--message", o.message, "comma-separated rate blocks")->required();
  sponge->add_option("--blocks", o.blocks, "output blocks");
  sponge->add_option("--iv", o.iv, "capacity IV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 2;
  }

  try {
    Emitter e(o);
    if (*verify) return cmd_verify(o, e);
    if (*existence) return cmd_existence(o, e);
    if (*sample) return cmd_sample(o, e);
    if (*attack) return cmd_attack(o, e);
    if (*distinguish) return cmd_distinguish(o, e);
    if (*bounds) return cmd_bounds(o, e);
    if (*sponge) return cmd_sponge(o, e);
  } catch (const ConfigError& err) {
    std::cerr << "configuration error: " << err.what() << '\n';
    return 2;
  } catch (const DomainError& err) {
    std::cerr << "domain error: " << err.what() << '\n';
    return 2;
  } catch (const ResourceError& err) {
    std::cerr << "resource limit: " << err.what() << '\n';
    return 2;
  }
  return 2;
}
