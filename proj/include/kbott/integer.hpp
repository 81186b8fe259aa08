#pragma once

#include <cstdint>
#include <mutex>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "kbott/error.hpp"

namespace kbott {

// Exact arithmetic types used throughout. Coefficients are arbitrary
// precision so products of many generators never overflow silently.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// binomial(n, r) = C(n, r) via a cached Pascal triangle. Rows are grown on
// demand and kept for the lifetime of the process; lookups after the first
// are O(1).
inline Int binomial(std::int64_t n, std::int64_t r) {
  if (n < 0) throw_internal("binomial: negative row");
  if (r < 0 || r > n) return 0;
  static std::vector<std::vector<Int>> triangle = {{1}};
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  while (static_cast<std::int64_t>(triangle.size()) <= n) {
    const std::vector<Int>& prev = triangle.back();
    std::vector<Int> row(prev.size() + 1, 1);
    for (std::size_t i = 1; i + 1 < row.size(); ++i)
      row[i] = prev[i - 1] + prev[i];
    triangle.push_back(std::move(row));
  }
  return triangle[static_cast<std::size_t>(n)][static_cast<std::size_t>(r)];
}

inline Int factorial(std::int64_t n) {
  if (n < 0) throw_internal("factorial: negative argument");
  Int out = 1;
  for (std::int64_t i = 2; i <= n; ++i) out *= i;
  return out;
}

// base^e for e >= 0 by binary powering.
inline Int int_pow(Int base, std::uint64_t e) {
  Int out = 1;
  while (e != 0) {
    if (e & 1u) out *= base;
    base *= base;
    e >>= 1u;
  }
  return out;
}

}  // namespace kbott
