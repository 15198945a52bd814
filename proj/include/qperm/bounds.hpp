#pragma once

// Closed-form query-complexity ceilings, one table entry per bound.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qperm/errors.hpp"

namespace qperm {

enum class BoundKind {
  UnstructuredQueries,
  UnstructuredSuccess,
  DszsUniform,
  DszsFixedKappa,
  DszsSuperpos,
  Nuds,
  SpongeOw,
};

using BoundParams = std::map<std::string, double>;

struct BoundValue {
  double value;
  bool vacuous;  // a success ceiling above 1
};

namespace detail {

struct BoundEntry {
  BoundKind kind;
  std::string_view tag;
  std::vector<std::string_view> params;
  bool success_type;
  double (*eval)(const BoundParams&);
};

inline double param(const BoundParams& p, std::string_view name) { return p.at(std::string(name)); }

inline double t1(const BoundParams& p) { return param(p, "T") + 1.0; }

inline double pow2(double e) { return std::exp2(e); }

inline const std::array<BoundEntry, 7>& bound_table() {
  static const std::array<BoundEntry, 7> table{{
      // Minimum query count for worst-case success eps with K of N marked.
      {BoundKind::UnstructuredQueries, "unstructured-queries", {"N", "K", "eps"}, false,
       [](const BoundParams& p) {
         const double ratio = std::sqrt(param(p, "N") / param(p, "K"));
         const double eps = param(p, "eps");
         return ratio / (2.0 * std::sqrt(2.0)) * (1.0 + std::sqrt(eps) - std::sqrt(1.0 - eps) - 2.0 / ratio);
       }},
      {BoundKind::UnstructuredSuccess, "unstructured-success", {"T", "K", "N"}, true,
       [](const BoundParams& p) { return 8.0 * t1(p) * t1(p) * param(p, "K") / param(p, "N"); }},
      {BoundKind::DszsUniform, "dszs-uniform", {"T", "n"}, true,
       [](const BoundParams& p) { return 50.0 * t1(p) * t1(p) / pow2(param(p, "n")); }},
      {BoundKind::DszsFixedKappa, "dszs-fixed-kappa", {"T", "kappa", "n"}, true,
       [](const BoundParams& p) { return 8.0 * t1(p) * t1(p) * param(p, "kappa") / pow2(param(p, "n")); }},
      {BoundKind::DszsSuperpos, "dszs-superpos", {"T", "kappa", "n"}, true,
       [](const BoundParams& p) { return 2.0 * t1(p) * std::sqrt(param(p, "kappa") / pow2(param(p, "n"))); }},
      {BoundKind::Nuds, "nuds", {"T", "r", "c"}, true,
       [](const BoundParams& p) {
         return 80.0 * t1(p) * t1(p) / pow2(std::min(param(p, "r"), param(p, "c")));
       }},
      {BoundKind::SpongeOw, "sponge-ow", {"T", "r", "c"}, true,
       [](const BoundParams& p) {
         return 80.0 * t1(p) * t1(p) / pow2(std::min(param(p, "r"), param(p, "c")));
       }},
  }};
  return table;
}

inline const BoundEntry& entry(BoundKind k) {
  for (const auto& e : bound_table())
    if (e.kind == k) return e;
  throw ConfigError("unknown bound kind");
}

}  // namespace detail

inline std::string to_string(BoundKind k) { return std::string(detail::entry(k).tag); }

inline BoundKind parse_bound_kind(std::string_view tag) {
  for (const auto& e : detail::bound_table())
    if (e.tag == tag) return e.kind;
  throw ConfigError("unknown bound kind '" + std::string(tag) + "'");
}

inline std::vector<BoundKind> all_bound_kinds() {
  std::vector<BoundKind> out;
  for (const auto& e : detail::bound_table()) out.push_back(e.kind);
  return out;
}

inline const std::vector<std::string_view>& bound_parameters(BoundKind k) { return detail::entry(k).params; }

/// Raw (unclamped) bound. Missing or non-finite parameters are configuration
/// errors; values outside a bound's hypotheses are domain errors.
inline BoundValue bound_value(BoundKind kind, const BoundParams& params) {
  const auto& e = detail::entry(kind);
  for (auto name : e.params) {
    auto it = params.find(std::string(name));
    if (it == params.end()) throw ConfigError(std::string(e.tag) + ": missing parameter '" + std::string(name) + "'");
    if (!std::isfinite(it->second)) {
      throw ConfigError(std::string(e.tag) + ": parameter '" + std::string(name) + "' must be finite");
    }
  }
  auto at = [&](const char* name) { return params.at(name); };
  if (params.count("T") && at("T") < 0) throw DomainError(std::string(e.tag) + ": T must be nonnegative");
  const bool unstructured = kind == BoundKind::UnstructuredQueries || kind == BoundKind::UnstructuredSuccess;
  if (unstructured && at("K") < 1) throw DomainError(std::string(e.tag) + ": requires K >= 1");
  if ((kind == BoundKind::DszsFixedKappa || kind == BoundKind::DszsSuperpos) && at("kappa") < 1) {
    throw DomainError(std::string(e.tag) + ": requires exactly kappa > 0 zero pairs");
  }
  if (unstructured) {
    if (at("K") > at("N")) throw DomainError(std::string(e.tag) + ": requires K <= N");
  }
  if (kind == BoundKind::UnstructuredQueries && !(at("eps") > 0.0 && at("eps") <= 1.0)) {
    throw DomainError("unstructured-queries: requires 0 < eps <= 1");
  }
  if ((kind == BoundKind::Nuds || kind == BoundKind::SpongeOw) && (at("r") < 1 || at("c") < 1)) {
    throw DomainError(std::string(e.tag) + ": requires r, c >= 1");
  }
  const double v = e.eval(params);
  return {v, e.success_type && v > 1.0};
}

struct Verdict {
  BoundKind kind;
  BoundParams params;
  double bound;
  double empirical;
  double stderr_;
  double slack;
  bool pass;
};

inline void to_json(nlohmann::json& j, const Verdict& v) {
  j = nlohmann::json{{"kind", to_string(v.kind)}, {"params", v.params}, {"bound", v.bound},
                     {"empirical", v.empirical}, {"stderr", v.stderr_}, {"pass", v.pass}};
}

/// Binomial standard error sqrt(p(1-p)/trials); zero in analytic mode.
inline double binomial_stderr(double p, std::uint64_t trials) {
  if (trials == 0) return 0.0;
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(trials));
}

/// Pass iff empirical <= min(1, bound) + slack * stderr.
inline Verdict bound_check(BoundKind kind, const BoundParams& params, double empirical, double stderr_value,
                           double sigma_slack = 3.0) {
  if (kind == BoundKind::UnstructuredQueries) {
    throw ConfigError("unstructured-queries is a query-count lower bound, not a success ceiling");
  }
  const BoundValue b = bound_value(kind, params);
  const bool pass = empirical <= std::min(1.0, b.value) + sigma_slack * stderr_value;
  return {kind, params, b.value, empirical, stderr_value, sigma_slack, pass};
}

/// Advantage ceiling 2 T sqrt(kappa / 2^n) for telling S_N^kappa from S_N^0
/// with T queries.
inline double decision_advantage_bound(unsigned n, std::uint64_t kappa, std::uint64_t t) {
  return 2.0 * static_cast<double>(t) * std::sqrt(static_cast<double>(kappa) / std::exp2(n));
}

}  // namespace qperm
