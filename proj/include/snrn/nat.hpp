#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace snrn {

// Natural numbers viewed in binary notation. Values are canonical (no sign,
// no leading zeros), so the numeral 0 has no S0-form by construction.
using Nat = boost::multiprecision::cpp_int;

struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// |x| = ceil(log2(x+1)); |0| = 0.
inline std::size_t bit_length(const Nat& x) {
  if (x.is_zero()) return 0;
  return static_cast<std::size_t>(boost::multiprecision::msb(x)) + 1;
}

inline bool bit_at(const Nat& x, std::size_t i) {
  if (x.is_zero()) return false;
  if (i > boost::multiprecision::msb(x)) return false;
  return boost::multiprecision::bit_test(x, static_cast<unsigned>(i));
}

inline bool is_odd(const Nat& x) { return bit_at(x, 0); }

// P(;a) = floor(a/2)
inline Nat half(const Nat& x) { return x >> 1; }

// S_i(;a) = 2a + i
inline Nat append_bit(const Nat& x, int bit) { return (x << 1) | bit; }

inline Nat pow2(std::size_t e) {
  Nat r = 1;
  r <<= static_cast<unsigned>(e);
  return r;
}

inline std::uint64_t hash_nat(const Nat& x) {
  // limb-wise splitmix mixing; the canonical representation keeps it stable
  std::uint64_t h = 1469598103934665603ull;
  const auto& b = x.backend();
  const auto* limbs = b.limbs();
  for (unsigned i = 0; i < b.size(); ++i) {
    std::uint64_t v = static_cast<std::uint64_t>(limbs[i]) + 0x9e3779b97f4a7c15ull;
    v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ull;
    v = (v ^ (v >> 27)) * 0x94d049bb133111ebull;
    h = (h ^ (v ^ (v >> 31))) * 1099511628211ull;
  }
  return h ^ (static_cast<std::uint64_t>(b.size()) << 1);
}

inline Nat parse_nat(const std::string& s) {
  if (s.empty()) throw ArgumentError("empty numeral");
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'b' || s[1] == 'B')) {
    Nat r = 0;
    for (std::size_t i = 2; i < s.size(); ++i) {
      if (s[i] != '0' && s[i] != '1') throw ArgumentError("bad binary numeral: " + s);
      r = append_bit(r, s[i] - '0');
    }
    return r;
  }
  for (char c : s)
    if (c < '0' || c > '9') throw ArgumentError("bad numeral: " + s);
  return Nat(s);
}

}  // namespace snrn
