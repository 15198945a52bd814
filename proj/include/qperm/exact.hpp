#pragma once

// Arbitrary-precision integers and rationals for the exact combinatorics.

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "qperm/errors.hpp"

namespace qperm {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  return Rational(num, den);
}

inline BigInt numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline std::string to_string(const BigInt& v) { return v.str(); }
inline std::string to_string(const Rational& q) {
  return numerator_of(q).str() + "/" + denominator_of(q).str();
}

inline BigInt factorial(std::uint64_t n) {
  BigInt r = 1;
  for (std::uint64_t i = 2; i <= n; ++i) r *= i;
  return r;
}

namespace detail {

struct BinomialCache {
  std::mutex mutex;
  std::map<std::pair<std::uint64_t, std::uint64_t>, BigInt> table;
};

inline BinomialCache& binomial_cache() {
  static BinomialCache cache;
  return cache;
}

}  // namespace detail

/// C(n, k) by the multiplicative formula; zero when k > n. Memoized per process.
inline BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  if (k == 0) return 1;
  auto& cache = detail::binomial_cache();
  {
    std::lock_guard lock(cache.mutex);
    if (auto it = cache.table.find({n, k}); it != cache.table.end()) return it->second;
  }
  BigInt r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;  // exact: r is C(n-k+i, i) here
  }
  std::lock_guard lock(cache.mutex);
  cache.table.emplace(std::make_pair(n, k), r);
  return r;
}

}  // namespace qperm
