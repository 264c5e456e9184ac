#pragma once

#include <cstdint>
#include <vector>

#include "snrn/nat.hpp"

namespace snrn {

// Sigma(d, y, x) = sum_i X^{d-i}|y_i| + sum_i X^{d-k-i}|x_i| with
// X = max(|y|,|x|) + 1. The weighted measure that every predecessor
// selection strictly decreases.
inline Nat sum_measure(long long d, const std::vector<Nat>& ys, const std::vector<Nat>& xs) {
  const long long k = static_cast<long long>(ys.size());
  const long long m = static_cast<long long>(xs.size());
  if (d < k + m) throw ArgumentError("sum_measure: d must be >= k+m");
  std::size_t maxlen = 0;
  for (const auto& y : ys) maxlen = std::max(maxlen, bit_length(y));
  for (const auto& x : xs) maxlen = std::max(maxlen, bit_length(x));
  const Nat X = Nat(maxlen) + 1;
  Nat total = 0;
  for (long long i = 1; i <= k; ++i)
    total += boost::multiprecision::pow(X, static_cast<unsigned>(d - i)) *
             Nat(bit_length(ys[static_cast<std::size_t>(i - 1)]));
  for (long long i = 1; i <= m; ++i)
    total += boost::multiprecision::pow(X, static_cast<unsigned>(d - k - i)) *
             Nat(bit_length(xs[static_cast<std::size_t>(i - 1)]));
  return total;
}

// n <= 2^e, without materializing 2^e.
inline bool le_pow2(const Nat& n, const Nat& e) {
  if (n <= 1) return true;
  return Nat(bit_length(n - 1)) <= e;
}

}  // namespace snrn
