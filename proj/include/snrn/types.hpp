#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "snrn/nat.hpp"

namespace snrn {

// Argument zones: k normal positions (drive recursion), l safe positions.
struct Signature {
  int normals = 0;
  int safes = 0;
  bool operator==(const Signature&) const = default;
};

inline std::string to_string(const Signature& s) {
  return "(" + std::to_string(s.normals) + "," + std::to_string(s.safes) + ")";
}

// Per-component classification over the signature {0, 1, Z}.
enum class TypeSymbol : std::uint8_t { ZeroBit = 0, OneBit = 1, Z = 2 };

using TypeWord = std::vector<TypeSymbol>;

// tau(y): Z for 0, else the last binary digit.
inline TypeSymbol type_of(const Nat& y) {
  if (y.is_zero()) return TypeSymbol::Z;
  return is_odd(y) ? TypeSymbol::OneBit : TypeSymbol::ZeroBit;
}

inline TypeWord type_word(const std::vector<Nat>& ys) {
  if (ys.empty()) throw ArgumentError("type_word: empty tuple");
  TypeWord w;
  w.reserve(ys.size());
  for (const auto& y : ys) w.push_back(type_of(y));
  return w;
}

// Membership in Sigma^k_0: some component among the first `scope` is non-Z.
inline bool word_has_nonzero(const TypeWord& w, std::size_t scope) {
  for (std::size_t i = 0; i < scope && i < w.size(); ++i)
    if (w[i] != TypeSymbol::Z) return true;
  return false;
}

inline char symbol_char(TypeSymbol s) {
  switch (s) {
    case TypeSymbol::ZeroBit: return '0';
    case TypeSymbol::OneBit: return '1';
    default: return 'Z';
  }
}

inline std::string word_string(const TypeWord& w) {
  std::string r;
  for (auto s : w) r.push_back(symbol_char(s));
  return r;
}

// Modified projections J^k_j: the k identities plus the k halvings.
inline Nat select(std::size_t j, const std::vector<Nat>& ys) {
  const std::size_t k = ys.size();
  if (j < 1 || j > 2 * k) throw ArgumentError("select: index out of range");
  if (j <= k) return ys[j - 1];
  return half(ys[j - k - 1]);
}

// Surface pattern alphabet for type-word tables: '0' '1' 'Z', '_' (any),
// plus the non-Z class 'i' used by the generated cascades.
enum class PatSym : std::uint8_t { Bit0, Bit1, Z, Any, NonZ };

using Pattern = std::vector<PatSym>;

inline bool pattern_matches(const Pattern& p, const TypeWord& w) {
  if (p.size() != w.size()) return false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    switch (p[i]) {
      case PatSym::Any: break;
      case PatSym::NonZ:
        if (w[i] == TypeSymbol::Z) return false;
        break;
      case PatSym::Z:
        if (w[i] != TypeSymbol::Z) return false;
        break;
      case PatSym::Bit0:
        if (w[i] != TypeSymbol::ZeroBit) return false;
        break;
      case PatSym::Bit1:
        if (w[i] != TypeSymbol::OneBit) return false;
        break;
    }
  }
  return true;
}

inline std::string pattern_string(const Pattern& p) {
  std::string r;
  for (auto s : p) {
    switch (s) {
      case PatSym::Bit0: r.push_back('0'); break;
      case PatSym::Bit1: r.push_back('1'); break;
      case PatSym::Z: r.push_back('Z'); break;
      case PatSym::Any: r.push_back('_'); break;
      case PatSym::NonZ: r.push_back('i'); break;
    }
  }
  return r;
}

inline Pattern parse_pattern(const std::string& s) {
  Pattern p;
  for (char c : s) {
    switch (c) {
      case '0': p.push_back(PatSym::Bit0); break;
      case '1': p.push_back(PatSym::Bit1); break;
      case 'Z': case 'z': p.push_back(PatSym::Z); break;
      case '_': p.push_back(PatSym::Any); break;
      case 'i': p.push_back(PatSym::NonZ); break;
      default: throw ArgumentError(std::string("bad pattern symbol '") + c + "'");
    }
  }
  return p;
}

// A finite table realizing a prec-function: per matched word, the modified
// projection index chosen for every position. First match wins.
struct PrecRule {
  Pattern pattern;
  std::vector<std::uint16_t> indices;  // one per position, in 1..2k
};

struct PrecFunction {
  int width = 0;
  std::vector<PrecRule> rules;

  const PrecRule* lookup(const TypeWord& w) const {
    for (const auto& r : rules)
      if (pattern_matches(r.pattern, w)) return &r;
    return nullptr;
  }

  // Applies the table to a concrete tuple (whose type word selects the row).
  std::vector<Nat> apply(const std::vector<Nat>& ys) const {
    const PrecRule* r = lookup(type_word(ys));
    if (!r) throw ArgumentError("prec-function: no rule for word");
    std::vector<Nat> out;
    out.reserve(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) out.push_back(select(r->indices[i], ys));
    return out;
  }

  bool operator==(const PrecFunction&) const = default;
};

inline bool operator==(const PrecRule& a, const PrecRule& b) {
  return a.pattern == b.pattern && a.indices == b.indices;
}

// Enumerates all words of the given width whose first `scope` symbols are
// not all Z, calling fn(word). Used by validation (widths stay small).
template <typename Fn>
void for_each_domain_word(int width, int scope, Fn&& fn) {
  TypeWord w(static_cast<std::size_t>(width), TypeSymbol::ZeroBit);
  const std::size_t n = w.size();
  while (true) {
    if (word_has_nonzero(w, static_cast<std::size_t>(scope))) fn(w);
    std::size_t i = 0;
    for (; i < n; ++i) {
      if (w[i] == TypeSymbol::ZeroBit) { w[i] = TypeSymbol::OneBit; break; }
      if (w[i] == TypeSymbol::OneBit) { w[i] = TypeSymbol::Z; break; }
      w[i] = TypeSymbol::ZeroBit;
    }
    if (i == n) break;
  }
}

}  // namespace snrn
