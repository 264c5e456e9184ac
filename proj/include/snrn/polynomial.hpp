#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "snrn/types.hpp"

namespace snrn {

// A monomial is a multiset of variable indices (0-based); the empty multiset
// is the constant 1. Coefficients are realized by repetition.
struct Monomial {
  std::vector<int> vars;
  bool operator==(const Monomial&) const = default;
};

struct Polynomial {
  int var_count = 0;
  std::vector<Monomial> monomials;

  Nat value_at(const std::vector<std::size_t>& lengths) const {
    Nat total = 0;
    for (const auto& mon : monomials) {
      Nat prod = 1;
      for (int v : mon.vars) prod *= Nat(lengths.at(static_cast<std::size_t>(v)));
      total += prod;
    }
    return total;
  }

  int constant_part() const {
    int c = 0;
    for (const auto& m : monomials)
      if (m.vars.empty()) ++c;
    return c;
  }

  bool operator==(const Polynomial&) const = default;
};

inline Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  Polynomial r;
  r.var_count = std::max(a.var_count, b.var_count);
  r.monomials = a.monomials;
  r.monomials.insert(r.monomials.end(), b.monomials.begin(), b.monomials.end());
  return r;
}

inline Polynomial poly_const(int c) {
  Polynomial p;
  for (int i = 0; i < c; ++i) p.monomials.push_back({});
  return p;
}

inline std::string to_string(const Polynomial& p) {
  if (p.monomials.empty()) return "0";
  std::string s;
  int pending_const = 0;
  for (const auto& m : p.monomials) {
    if (m.vars.empty()) {
      ++pending_const;
      continue;
    }
    if (!s.empty()) s += "+";
    for (std::size_t i = 0; i < m.vars.size(); ++i) {
      if (i) s += "*";
      s += "x" + std::to_string(m.vars[i] + 1);
    }
  }
  if (pending_const) {
    if (!s.empty()) s += "+";
    s += std::to_string(pending_const);
  }
  return s.empty() ? "0" : s;
}

// Parses "x1*x2+x3+2" style strings; a constant factor repeats its monomial.
inline Polynomial parse_polynomial(const std::string& text, int var_count = 0) {
  Polynomial p;
  p.var_count = var_count;
  std::string s;
  for (char c : text)
    if (!isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) return p;
  std::size_t pos = 0;
  auto parse_term = [&]() {
    Monomial mon;
    long long coeff = 1;
    while (true) {
      if (pos >= s.size()) throw ArgumentError("polynomial: trailing operator");
      if (s[pos] == 'x') {
        ++pos;
        std::size_t start = pos;
        while (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (start == pos) throw ArgumentError("polynomial: bad variable");
        int v = std::stoi(s.substr(start, pos - start));
        if (v < 1) throw ArgumentError("polynomial: variables are x1..xn");
        mon.vars.push_back(v - 1);
        p.var_count = std::max(p.var_count, v);
      } else if (isdigit(static_cast<unsigned char>(s[pos]))) {
        std::size_t start = pos;
        while (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        coeff *= std::stoll(s.substr(start, pos - start));
        if (coeff > 1'000'000) throw ArgumentError("polynomial: constant too large");
      } else {
        throw ArgumentError(std::string("polynomial: unexpected '") + s[pos] + "'");
      }
      if (pos < s.size() && s[pos] == '*') {
        ++pos;
        continue;
      }
      break;
    }
    std::sort(mon.vars.begin(), mon.vars.end());
    for (long long i = 0; i < coeff; ++i) p.monomials.push_back(mon);
    if (coeff == 0) { /* 0*... contributes nothing */ }
  };
  parse_term();
  while (pos < s.size()) {
    if (s[pos] != '+') throw ArgumentError(std::string("polynomial: unexpected '") + s[pos] + "'");
    ++pos;
    parse_term();
  }
  return p;
}

// ---------------------------------------------------------------------------
// Cascade plans.
//
// The step-by-step construction behind f0/f1/f2 walks a tuple of slots, one
// slot per monomial factor, decrementing the last live slot of the last live
// monomial and refilling the next-shorter monomial from the current one.
// A plan captures that slot layout plus the word-pattern rules; towers and
// the pairing family instantiate the same plan with different node wiring.
// ---------------------------------------------------------------------------

struct CascadeRule {
  Pattern pattern;                          // over the slot tuple
  int pivot = 0;                            // slot being halved
  std::vector<std::pair<int, int>> refill;  // target slot <- source slot
  bool doubling = false;                    // exponent drops by one here
};

struct CascadePlan {
  std::vector<int> slot_var;             // slot -> variable index
  std::vector<std::vector<int>> groups;  // monomial -> slots
  std::vector<CascadeRule> rules;
  int constant = 0;
  int var_count = 0;

  int slots() const { return static_cast<int>(slot_var.size()); }

  // The effective polynomial (completion may have added monomials).
  Polynomial effective() const {
    Polynomial p;
    p.var_count = var_count;
    for (const auto& g : groups) {
      Monomial m;
      for (int s : g) m.vars.push_back(slot_var[static_cast<std::size_t>(s)]);
      std::sort(m.vars.begin(), m.vars.end());
      p.monomials.push_back(std::move(m));
    }
    for (int i = 0; i < constant; ++i) p.monomials.push_back({});
    return p;
  }

  PrecFunction prec() const {
    PrecFunction pf;
    pf.width = slots();
    for (const auto& r : rules) {
      PrecRule pr;
      pr.pattern = r.pattern;
      pr.indices.resize(static_cast<std::size_t>(pf.width));
      for (int i = 0; i < pf.width; ++i)
        pr.indices[static_cast<std::size_t>(i)] = static_cast<std::uint16_t>(i + 1);
      pr.indices[static_cast<std::size_t>(r.pivot)] =
          static_cast<std::uint16_t>(pf.width + r.pivot + 1);
      for (auto [tgt, src] : r.refill)
        pr.indices[static_cast<std::size_t>(tgt)] = static_cast<std::uint16_t>(src + 1);
      pf.rules.push_back(std::move(pr));
    }
    return pf;
  }
};

// Builds the slot layout and rules for p's variable monomials. Requires the
// monomial sizes, sorted descending, to cover every size down to 1; with
// allow_completion the gaps are filled by duplicating leading factors of the
// offending monomial (this grows the polynomial, which is fine for window
// bounds but not for exact towers).
inline CascadePlan build_cascade_plan(const Polynomial& p, bool allow_completion) {
  CascadePlan plan;
  plan.var_count = p.var_count;
  std::vector<Monomial> mons;
  for (const auto& m : p.monomials) {
    if (m.vars.empty())
      ++plan.constant;
    else
      mons.push_back(m);
  }
  std::stable_sort(mons.begin(), mons.end(), [](const Monomial& a, const Monomial& b) {
    return a.vars.size() > b.vars.size();
  });
  // staircase completion
  for (std::size_t q = 0; q < mons.size(); ++q) {
    const std::size_t sz = mons[q].vars.size();
    if (sz < 2) continue;
    bool found = false;
    for (std::size_t r = q + 1; r < mons.size() && !found; ++r)
      found = mons[r].vars.size() == sz - 1;
    if (!found) {
      if (!allow_completion)
        throw ArgumentError("polynomial is not cascade-complete (missing a size-" +
                            std::to_string(sz - 1) + " monomial)");
      Monomial fill;
      fill.vars.assign(mons[q].vars.begin(), mons[q].vars.end() - 1);
      mons.insert(mons.begin() + static_cast<long>(q) + 1, std::move(fill));
    }
  }
  // slot assignment
  for (const auto& m : mons) {
    std::vector<int> g;
    for (int v : m.vars) {
      g.push_back(plan.slots());
      plan.slot_var.push_back(v);
    }
    plan.groups.push_back(std::move(g));
  }
  const int S = plan.slots();
  const std::size_t R = plan.groups.size();
  auto blank = [&] { return Pattern(static_cast<std::size_t>(S), PatSym::Any); };
  // family A: decrement the last slot of monomial q; later monomials' last
  // slots must be exhausted; refill the next shorter monomial.
  for (std::size_t qi = R; qi-- > 0;) {
    const auto& g = plan.groups[qi];
    CascadeRule rule;
    rule.pattern = blank();
    rule.pivot = g.back();
    rule.pattern[static_cast<std::size_t>(g.back())] = PatSym::NonZ;
    for (std::size_t q2 = qi + 1; q2 < R; ++q2)
      rule.pattern[static_cast<std::size_t>(plan.groups[q2].back())] = PatSym::Z;
    if (g.size() == 1) {
      rule.doubling = true;
    } else {
      std::size_t tgt = R;
      for (std::size_t q2 = qi + 1; q2 < R; ++q2)
        if (plan.groups[q2].size() == g.size() - 1) { tgt = q2; break; }
      if (tgt == R) throw ArgumentError("cascade: no refill target (incomplete staircase)");
      const auto& t = plan.groups[tgt];
      for (std::size_t i = 0; i + 1 < g.size(); ++i) rule.refill.push_back({t[i], g[i]});
    }
    plan.rules.push_back(std::move(rule));
  }
  // family B: decrement an interior slot once everything after it is spent.
  for (std::size_t qi = 0; qi < R; ++qi) {
    const auto& g = plan.groups[qi];
    for (std::size_t t = g.size() - 1; t-- > 0;) {
      CascadeRule rule;
      rule.pattern = blank();
      rule.pivot = g[t];
      rule.pattern[static_cast<std::size_t>(g[t])] = PatSym::NonZ;
      for (std::size_t t2 = t + 1; t2 < g.size(); ++t2)
        rule.pattern[static_cast<std::size_t>(g[t2])] = PatSym::Z;
      for (std::size_t q2 = qi + 1; q2 < R; ++q2)
        rule.pattern[static_cast<std::size_t>(plan.groups[q2].back())] = PatSym::Z;
      plan.rules.push_back(std::move(rule));
    }
  }
  return plan;
}

}  // namespace snrn
