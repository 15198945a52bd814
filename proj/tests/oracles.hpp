#pragma once

// Brute-force reference implementations used only by the tests. They avoid
// the library's algorithms: permutations come from plain recursion, counts
// from direct predicate scans, binomials from Pascal's triangle.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using Vec = std::vector<std::uint64_t>;
using Big = boost::multiprecision::cpp_int;
using Frac = boost::multiprecision::cpp_rational;

/// Every permutation of [0, n) as an image table, by recursive insertion.
inline std::vector<Vec> all_perms(std::size_t n) {
  std::vector<Vec> out;
  Vec cur;
  std::vector<bool> used(n, false);
  std::function<void()> rec = [&] {
    if (cur.size() == n) {
      out.push_back(cur);
      return;
    }
    for (std::uint64_t v = 0; v < n; ++v) {
      if (used[v]) continue;
      used[v] = true;
      cur.push_back(v);
      rec();
      cur.pop_back();
      used[v] = false;
    }
  };
  rec();
  return out;
}

inline std::vector<bool> indicator(std::size_t n, const Vec& set) {
  std::vector<bool> in(n, false);
  for (auto v : set) in[v] = true;
  return in;
}

inline std::size_t pair_count(const Vec& p, const Vec& x1, const Vec& x2) {
  const auto in1 = indicator(p.size(), x1), in2 = indicator(p.size(), x2);
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (in1[i] && in2[p[i]]) ++k;
  return k;
}

inline Vec compose(const Vec& p, const Vec& q) {
  Vec r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[i] = p[q[i]];
  return r;
}

inline Vec invert(const Vec& p) {
  Vec r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[p[i]] = i;
  return r;
}

/// Members of the subgroup preserving each block, by filtering S_n.
inline std::vector<Vec> preserving(std::size_t n, const std::vector<Vec>& blocks) {
  std::vector<std::size_t> owner(n);
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (auto v : blocks[b]) owner[v] = b;
  std::vector<Vec> out;
  for (const auto& p : all_perms(n)) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) ok = owner[p[i]] == owner[i];
    if (ok) out.push_back(p);
  }
  return out;
}

inline Big pascal(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::vector<Big> row{1};
  for (std::uint64_t i = 1; i <= n; ++i) {
    std::vector<Big> next(i + 1, 1);
    for (std::uint64_t j = 1; j < i; ++j) next[j] = row[j - 1] + row[j];
    row = std::move(next);
  }
  return row[k];
}

inline Big fact(std::uint64_t n) {
  Big r = 1;
  for (std::uint64_t i = 2; i <= n; ++i) r *= i;
  return r;
}

/// Pr[k marked] when drawing `draws` of n with `marked` marked, by counting
/// every subset bitmask.
inline Frac hypergeometric_by_subsets(unsigned n, unsigned marked, unsigned draws, unsigned k) {
  std::uint64_t hit = 0, total = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    if (static_cast<unsigned>(__builtin_popcountll(mask)) != draws) continue;
    ++total;
    if (static_cast<unsigned>(__builtin_popcountll(mask & ((std::uint64_t{1} << marked) - 1))) == k) ++hit;
  }
  return Frac(hit, total);
}

/// Upper-tail p-value of a chi-square statistic.
inline double chi_square_pvalue(double stat, double df) {
  if (df <= 0) return 1.0;
  boost::math::chi_squared dist(df);
  return boost::math::cdf(boost::math::complement(dist, stat));
}

/// Goodness of fit of observed counts against expected probabilities.
inline double gof_pvalue(const std::vector<double>& observed, const std::vector<double>& probs) {
  double total = 0.0;
  for (double o : observed) total += o;
  double stat = 0.0;
  std::size_t cells = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    const double e = probs[i] * total;
    stat += (observed[i] - e) * (observed[i] - e) / e;
    ++cells;
  }
  return chi_square_pvalue(stat, static_cast<double>(cells) - 1.0);
}

/// Two-sample homogeneity test over keyed counts with equal sample sizes.
template <class Key>
double two_sample_pvalue(const std::map<Key, double>& a, const std::map<Key, double>& b) {
  std::map<Key, std::pair<double, double>> cells;
  for (const auto& [k, v] : a) cells[k].first += v;
  for (const auto& [k, v] : b) cells[k].second += v;
  double stat = 0.0;
  for (const auto& [k, ab] : cells) stat += (ab.first - ab.second) * (ab.first - ab.second) / (ab.first + ab.second);
  return chi_square_pvalue(stat, static_cast<double>(cells.size()) - 1.0);
}

/// MSB-first bit strings.
inline std::string bits(std::uint64_t v, unsigned w) {
  std::string s;
  for (unsigned i = w; i-- > 0;) s.push_back(((v >> i) & 1U) ? '1' : '0');
  return s;
}

inline std::uint64_t from_bits(const std::string& s) {
  std::uint64_t v = 0;
  for (char ch : s) v = (v << 1) | (ch == '1' ? 1U : 0U);
  return v;
}

inline std::string xor_bits(const std::string& a, const std::string& b) {
  std::string s(a);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = a[i] == b[i] ? '0' : '1';
  return s;
}

/// Sponge absorb/squeeze over string states.
inline Vec sponge_reference(const Vec& phi, unsigned r, unsigned c, const Vec& message, std::size_t blocks,
                            std::uint64_t iv = 0) {
  std::string state = std::string(r, '0') + bits(iv, c);
  auto apply = [&](const std::string& s) { return bits(phi[from_bits(s)], r + c); };
  for (auto m : message) {
    const std::string rate = xor_bits(state.substr(0, r), bits(m, r));
    state = apply(rate + state.substr(r));
  }
  Vec out{from_bits(state.substr(0, r))};
  while (out.size() < blocks) {
    state = apply(state);
    out.push_back(from_bits(state.substr(0, r)));
  }
  return out;
}

/// Grover by explicit real amplitudes on a search space of size m.
inline double grover_reference(const std::vector<bool>& marked, unsigned iterations) {
  const std::size_t m = marked.size();
  std::vector<double> a(m, 1.0 / std::sqrt(static_cast<double>(m)));
  for (unsigned t = 0; t < iterations; ++t) {
    for (std::size_t i = 0; i < m; ++i)
      if (marked[i]) a[i] = -a[i];
    double mean = 0.0;
    for (double v : a) mean += v;
    mean /= static_cast<double>(m);
    for (double& v : a) v = 2 * mean - v;
  }
  double p = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    if (marked[i]) p += a[i] * a[i];
  return p;
}

}  // namespace oracle
