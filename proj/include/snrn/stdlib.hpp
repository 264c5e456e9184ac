#pragma once

#include <string>
#include <utility>
#include <vector>

#include "snrn/polynomial.hpp"
#include "snrn/term.hpp"

namespace snrn {

namespace detail {

// Rows for a plain tower over a cascade plan (l = 1). Doubling steps compute
// f(v; f(v; a)); pass-through steps compute f(v; a).
inline std::vector<SnrnRow> tower_rows(const CascadePlan& plan) {
  const int S = plan.slots();
  const Signature step{S, 2};
  TermPtr fval = mk_proj(S, 2, S + 2);
  TermPtr aval = mk_proj(S, 2, S + 1);
  std::vector<SnrnRow> rows;
  for (const auto& r : plan.rules) {
    SnrnRow row;
    row.pattern = r.pattern;
    row.h = fval;
    row.t = {r.doubling ? fval : aval};
    row.s = {aval};
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

// The doubling tower over the plan's slot tuple: f(y; a) = 2^(2^E(|y|)) * a
// where E is the plan's effective polynomial. Signature (slots, 1); an
// additive constant c is realized by composing the variable tower 2^c times.
inline TermPtr mk_exp_tower_plan(const CascadePlan& plan) {
  const int S = plan.slots();
  if (S == 0) {
    // pure constant: 2^(2^c) * a is a chain of 2^c doublings
    Nat reps = pow2(static_cast<std::size_t>(plan.constant));
    TermPtr out = safe_of({0, 1}, 1);
    for (Nat i = 0; i < reps; ++i)
      out = hinted(mk_comp(mk_succ(0), {}, {std::move(out)}, Signature{0, 1}));
    return out;
  }
  PrecFunction pf = plan.prec();
  TermPtr tower = mk_snrn(S, 0, mk_succ(0), detail::tower_rows(plan), pf, pf, pf);
  if (plan.constant > 0) {
    Nat reps = pow2(static_cast<std::size_t>(plan.constant));
    TermPtr out = tower;
    for (Nat i = 1; i < reps; ++i)
      out = hinted(apply_all_normals(tower, {S, 1}, {std::move(out)}));
    return out;
  }
  return tower;
}

// Tower applied to the polynomial's own variables (duplication by
// composition); signature (p.var_count, 1).
inline TermPtr mk_exp_tower(const Polynomial& p) {
  if (p.monomials.empty()) return mk_succ(0);
  CascadePlan plan = build_cascade_plan(p, /*allow_completion=*/false);
  TermPtr slot_tower = mk_exp_tower_plan(plan);
  if (plan.slots() == 0) {
    // constant polynomial: lift the (0,1) chain to (var_count, 1)
    if (p.var_count == 0) return slot_tower;
    return mk_comp(slot_tower, {}, {safe_of({p.var_count, 1}, 1)}, Signature{p.var_count, 1});
  }
  std::vector<int> sel;
  for (int v : plan.slot_var) sel.push_back(v + 1);
  int k = std::max(p.var_count, 1);
  return mk_comp(slot_tower, std::move(sel), {safe_of({k, 1}, 1)}, Signature{k, 1});
}

inline TermPtr mk_f0() { return mk_exp_tower_plan(build_cascade_plan(parse_polynomial("x1"), false)); }
inline TermPtr mk_f1() {
  return mk_exp_tower_plan(build_cascade_plan(parse_polynomial("x1*x2+x3"), false));
}
inline TermPtr mk_f2() {
  return mk_exp_tower_plan(build_cascade_plan(parse_polynomial("x1*x2*x3+x4*x5+x6"), false));
}

// m(y; b) = floor(b / 2^|y|), the |y|th predecessor of b.
inline TermPtr mk_bellantoni_m() {
  TermPtr g = mk_proj(0, 1, 1);
  TermPtr h = mk_comp(mk_pred(), {}, {mk_proj(1, 2, 3)}, Signature{1, 2});
  return mk_srn(g, h, h);
}

// pi(y; a, b) interleaves the low |y| bits of a and b.
inline std::pair<TermPtr, TermPtr> mk_bellantoni_pair() {
  TermPtr m = mk_bellantoni_m();
  const Signature hsig{1, 3};  // (y ; a, b, r)
  auto msel = [&](int safe_idx) {
    return mk_comp(m, {1}, {mk_proj(1, 3, 1 + safe_idx)}, hsig);
  };
  TermPtr r = mk_proj(1, 3, 4);
  auto app = [&](TermPtr x, int b0, int b1) {
    return append_bit_term(append_bit_term(std::move(x), b0), b1);
  };
  TermPtr inner_even = cond_term(msel(2), app(r, 0, 0), app(r, 0, 1));
  TermPtr inner_odd = cond_term(msel(2), app(r, 1, 0), app(r, 1, 1));
  TermPtr h = cond_term(msel(1), inner_even, inner_odd);
  TermPtr pi = mk_srn(mk_zero(0, 2), h, h);
  return {pi, m};
}

// oplus(x; a) = a00 followed by the code of x; oplus_n^n builds the initial
// right-hand tape contents.
inline TermPtr mk_oplus() {
  TermPtr g = append_bit_term(append_bit_term(safe_of({0, 1}, 1), 0), 0);
  auto step = [&](int i) {
    TermPtr r = mk_proj(1, 2, 3);
    return append_bit_term(append_bit_term(std::move(r), 1), i);
  };
  return mk_srn(g, step(0), step(1));
}

// oplus^n_k for k = n: the concatenation of all n inputs.
inline std::pair<TermPtr, TermPtr> mk_concat(int n) {
  if (n < 1) throw ArgumentError("mk_concat: n must be >= 1");
  TermPtr oplus = mk_oplus();
  TermPtr acc = mk_zero(n, 0);
  for (int k = 1; k <= n; ++k)
    acc = mk_comp(oplus, {k}, {std::move(acc)}, Signature{n, 0});
  return {oplus, acc};
}

// A1(y; a): the 2^|y|th successor of a with respect to S1.
inline TermPtr mk_unary_add() {
  Polynomial p = parse_polynomial("x1");
  CascadePlan plan = build_cascade_plan(p, false);
  PrecFunction pf = plan.prec();
  return mk_snrn(1, 0, mk_succ(1), detail::tower_rows(plan), pf, pf, pf);
}

}  // namespace snrn
