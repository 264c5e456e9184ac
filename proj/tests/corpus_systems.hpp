#pragma once

// Simultaneous-system corpus used by the transform tests and acceptance.
// Component maps are small recursion-free terms; the growing ones carry an
// explicit window polynomial sized for the tested boxes.

#include <optional>

#include "snrn/transforms.hpp"

namespace corpus {

using namespace snrn;

struct NamedSystem {
  std::string name;
  SimultaneousDef def;
  std::optional<LengthPolyPair> polys;  // empty = auto window
};

inline SimultaneousDef make_def(SimulShape shape, const std::string& drive, int m,
                                std::vector<TermPtr> h, std::vector<TermPtr> g) {
  SimultaneousDef d;
  d.shape = shape;
  d.drive = build_cascade_plan(parse_polynomial(drive), false);
  d.m = m;
  d.h = std::move(h);
  d.g = std::move(g);
  d.l = static_cast<int>(d.h.size());
  return d;
}

// seeds: x-dependent values enter through these
inline TermPtr seed_zero(int m) { return mk_zero(m, 0); }
inline TermPtr seed_var(int m, int i) { return mk_proj(m, 0, i); }
inline TermPtr seed_lit(int m, int v) { return literal_term(Nat(v), {m, 0}); }
inline TermPtr seed_twice(int m, int i) {
  return append_bit_term(mk_proj(m, 0, i), 0);
}

inline std::vector<NamedSystem> theorem21_corpus() {
  std::vector<NamedSystem> out;
  auto a = [](int m, int l, int j) { return mk_proj(m, l, m + j); };

  // 1: identity fixed point, l = 1, k = 1
  out.push_back({"identity-fixpoint",
                 make_def(SimulShape::Theorem21, "x1", 0, {a(0, 1, 1)}, {seed_lit(0, 6)}),
                 std::nullopt});
  // 2: swap pair, l = 2, k = 1 (period-two iterate)
  out.push_back({"swap",
                 make_def(SimulShape::Theorem21, "x1", 1, {a(1, 2, 2), a(1, 2, 1)},
                          {seed_var(1, 1), seed_lit(1, 5)}),
                 std::nullopt});
  // 3: select-the-first, l = 2
  out.push_back({"collapse",
                 make_def(SimulShape::Theorem21, "x1", 1, {a(1, 2, 1), a(1, 2, 1)},
                          {seed_var(1, 1), seed_zero(1)}),
                 std::nullopt});
  // 4: conditional churn: components swap based on parity of a1
  {
    int m = 1, l = 2;
    TermPtr h1 = cond_term(a(m, l, 1), a(m, l, 2), a(m, l, 1));
    TermPtr h2 = cond_term(a(m, l, 1), a(m, l, 1), a(m, l, 2));
    out.push_back({"parity-swap",
                   make_def(SimulShape::Theorem21, "x1", m, {h1, h2},
                            {seed_var(m, 1), seed_lit(m, 2)}),
                   std::nullopt});
  }
  // 5: halving walk, l = 2 (non-growing: values shrink)
  {
    int m = 1, l = 2;
    TermPtr h1 = halve_term(a(m, l, 1));
    TermPtr h2 = a(m, l, 1);
    out.push_back({"halving",
                   make_def(SimulShape::Theorem21, "x1", m, {h1, h2},
                            {seed_var(m, 1), seed_var(m, 1)}),
                   std::nullopt});
  }
  // 6: doubling/counting pair, l = 2, k = 1 (growing: explicit window).
  // On |y| <= 3 the iterate runs at most 2^3 = 8 times appending one digit,
  // so component lengths stay below 2^4 + seeds.
  {
    int m = 1, l = 2;
    TermPtr h1 = append_bit_term(a(m, l, 1), 0);
    TermPtr h2 = append_bit_term(a(m, l, 2), 1);
    out.push_back({"double-count",
                   make_def(SimulShape::Theorem21, "x1", m, {h1, h2},
                            {seed_zero(m), seed_zero(m)}),
                   LengthPolyPair{parse_polynomial("1"), parse_polynomial("4")}});
  }
  // 7: k = 2 drive, non-growing selection churn
  {
    int m = 1, l = 2;
    TermPtr h1 = cond_term(a(m, l, 2), a(m, l, 1), a(m, l, 2));
    TermPtr h2 = halve_term(a(m, l, 2));
    out.push_back({"pair-drive",
                   make_def(SimulShape::Theorem21, "x1+x2", m, {h1, h2},
                            {seed_var(m, 1), seed_twice(m, 1)}),
                   std::nullopt});
  }
  // 8: k = 2 drive with swaps
  {
    int m = 1, l = 2;
    TermPtr h1 = a(m, l, 2);
    TermPtr h2 = cond_term(a(m, l, 2), halve_term(a(m, l, 1)), a(m, l, 1));
    out.push_back({"ladder-swap",
                   make_def(SimulShape::Theorem21, "x1+x2", m, {h1, h2},
                            {seed_var(m, 1), halve_term(seed_var(m, 1))}),
                   std::nullopt});
  }
  // 9: l = 1 growing chain with a tight constant window (box |y| <= 3)
  {
    int m = 1, l = 1;
    TermPtr h1 = append_bit_term(a(m, l, 1), 1);
    out.push_back({"ones-chain",
                   make_def(SimulShape::Theorem21, "x1", m, {h1}, {seed_zero(m)}),
                   LengthPolyPair{parse_polynomial("1"), parse_polynomial("4")}});
  }
  // 10: three components, one growing slowly
  {
    int m = 1, l = 3;
    TermPtr h1 = a(m, l, 2);
    TermPtr h2 = a(m, l, 3);
    TermPtr h3 = append_bit_term(a(m, l, 1), 0);
    out.push_back({"rotate-grow",
                   make_def(SimulShape::Theorem21, "x1", m, {h1, h2, h3},
                            {seed_lit(m, 1), seed_lit(m, 2), seed_lit(m, 3)}),
                   LengthPolyPair{parse_polynomial("2"), parse_polynomial("4")}});
  }

  // parameter variations to round the corpus past twenty systems
  for (int variant = 0; variant < 6; ++variant) {
    int m = 1, l = 2;
    TermPtr h1 = variant % 2 ? halve_term(a(m, l, 2)) : a(m, l, 2);
    TermPtr h2 = variant % 3 == 0 ? cond_term(a(m, l, 1), a(m, l, 2), a(m, l, 1))
                                  : halve_term(a(m, l, 1));
    out.push_back({"mix-" + std::to_string(variant),
                   make_def(SimulShape::Theorem21, "x1", m, {h1, h2},
                            {seed_var(m, 1), seed_lit(m, 9 + variant)}),
                   std::nullopt});
  }
  for (int variant = 0; variant < 4; ++variant) {
    // k = 2, literal seeds keep the window a small constant
    int m = 2, l = 2;
    TermPtr h1 = variant % 2 ? a(m, l, 2) : halve_term(a(m, l, 2));
    TermPtr h2 = cond_term(a(m, l, 2), a(m, l, 1), halve_term(a(m, l, 1)));
    out.push_back({"wide-" + std::to_string(variant),
                   make_def(SimulShape::Theorem21, "x1+x2", m, {h1, h2},
                            {seed_lit(m, 5 + variant), seed_lit(m, 11 + variant)}),
                   std::nullopt});
  }
  return out;
}

struct NamedLift {
  std::string name;
  SimultaneousDef def;
  Polynomial poly;
  std::optional<Polynomial> window;
};

inline std::vector<NamedLift> corollary_corpus() {
  std::vector<NamedLift> out;
  auto a = [](int m, int l, int j) { return mk_proj(m, l, m + j); };

  // S1 chain: four applications give 15
  {
    int m = 1, l = 1;
    TermPtr h1 = append_bit_term(a(m, l, 1), 1);
    out.push_back({"unary-chain",
                   make_def(SimulShape::Corollary23, "2", m, {h1}, {seed_zero(m)}),
                   parse_polynomial("2"), std::nullopt});
  }
  // constant zero polynomial: a single application
  {
    int m = 1, l = 1;
    TermPtr h1 = append_bit_term(a(m, l, 1), 0);
    out.push_back({"single-step",
                   make_def(SimulShape::Corollary23, "0", m, {h1}, {seed_var(m, 1)}),
                   parse_polynomial("0"), std::nullopt});
  }
  // growing chain along a variable polynomial
  {
    int m = 1, l = 1;
    TermPtr h1 = append_bit_term(a(m, l, 1), 1);
    out.push_back({"ones-lift",
                   make_def(SimulShape::Corollary23, "x1", m, {h1}, {seed_zero(m)}),
                   parse_polynomial("x1"), std::nullopt});
  }
  // swap pair: large counts are free because values cycle
  {
    int m = 1, l = 2;
    out.push_back({"swap-lift",
                   make_def(SimulShape::Corollary23, "x1", m, {a(m, 2, 2), a(m, 2, 1)},
                            {seed_var(m, 1), seed_lit(m, 6)}),
                   parse_polynomial("x1+2"), std::nullopt});
  }
  // halving pair: values shrink to a fixed point
  {
    int m = 1, l = 2;
    out.push_back({"halve-lift",
                   make_def(SimulShape::Corollary23, "x1", m,
                            {halve_term(a(m, 2, 1)), a(m, 2, 1)},
                            {seed_var(m, 1), seed_var(m, 1)}),
                   parse_polynomial("x1+3"), std::nullopt});
  }
  // rotation with three components at a ten-valued polynomial
  {
    int m = 1, l = 3;
    out.push_back({"rotate-big",
                   make_def(SimulShape::Corollary23, "x1+7", m,
                            {a(m, 3, 2), a(m, 3, 3), a(m, 3, 1)},
                            {seed_lit(m, 1), seed_lit(m, 2), seed_lit(m, 3)}),
                   parse_polynomial("x1+7"), std::nullopt});
  }
  // parity toggle at the full budget of ten
  {
    int m = 1, l = 1;
    TermPtr h1 = cond_term(a(m, 1, 1), literal_term(Nat(1), {m, 2 - 1}),
                           literal_term(Nat(0), {m, 1}));
    out.push_back({"toggle-ten",
                   make_def(SimulShape::Corollary23, "x1+7", m, {h1}, {seed_zero(m)}),
                   parse_polynomial("x1+7"), std::nullopt});
  }
  // two-variable polynomial drive
  {
    int m = 2, l = 2;
    out.push_back({"two-var",
                   make_def(SimulShape::Corollary23, "x1*x2+x2", m,
                            {a(m, 2, 2), cond_term(a(m, 2, 1), a(m, 2, 2), a(m, 2, 1))},
                            {seed_var(m, 1), seed_var(m, 2)}),
                   parse_polynomial("x1*x2+x2"), std::nullopt});
  }
  // growing with explicit window at degree two
  {
    int m = 2, l = 1;
    TermPtr h1 = append_bit_term(a(m, 1, 1), 1);
    out.push_back({"grow-deg2",
                   make_def(SimulShape::Corollary23, "x1*x2+x2", m, {h1}, {seed_zero(m)}),
                   parse_polynomial("x1*x2+x2"), std::nullopt});
  }
  // counter pair: one component counts via the other
  {
    int m = 1, l = 2;
    TermPtr h1 = a(m, 2, 2);
    TermPtr h2 = append_bit_term(a(m, 2, 2), 0);
    out.push_back({"lag-double",
                   make_def(SimulShape::Corollary23, "x1+1", m, {h1, h2},
                            {seed_lit(m, 1), seed_lit(m, 1)}),
                   parse_polynomial("x1+1"), std::nullopt});
  }
  return out;
}

}  // namespace corpus
