#pragma once

#include <utility>
#include <vector>

#include "snrn/stdlib.hpp"

namespace snrn {

// Pairing kit over a window of 2^p(|x|) bits: Pi interleaves two values onto
// an accumulator, Pi1/Pi2 read the interleave back, and M/R/L are the shift,
// bounded-reverse and mask helpers everything is built from. All terms have
// the plan's slot tuple as normals.
struct PairingKit {
  Polynomial poly;  // effective window polynomial (completion may pad it)
  CascadePlan plan;
  TermPtr M, R, L, Pi, Pi1, Pi2;
  TermPtr M2, R2, L2;  // double-window helpers used by the unpairing family
  int slots = 0;
};

namespace detail {

struct WindowFamily {
  TermPtr M, R, L, Pi, Pi1, Pi2, M2, R2, L2;
};

// L = R(R(a,0),0); M2 = M(M(a)); R2(a,c) = R(M(a), R(a,c)); L2 = R2(R2(a,0),0).
// `sel` passes the normal tuple through unchanged.
inline void complete_family(WindowFamily& f, int S) {
  Signature s1{S, 1}, s2{S, 2};
  TermPtr a1 = safe_of(s1, 1);
  TermPtr z1 = mk_zero(S, 1);
  auto app = [&](const TermPtr& g, Signature outer, std::vector<TermPtr> safes) {
    return hinted(apply_all_normals(g, outer, std::move(safes)));
  };
  f.L = app(f.R, s1, {app(f.R, s1, {a1, z1}), z1});
  f.M2 = app(f.M, s1, {app(f.M, s1, {a1})});
  TermPtr a_of2 = safe_of(s2, 1), c_of2 = safe_of(s2, 2);
  TermPtr z2 = mk_zero(S, 2);
  f.R2 = app(f.R, s2, {app(f.M, s2, {a_of2}), app(f.R, s2, {a_of2, c_of2})});
  f.L2 = app(f.R2, s1, {app(f.R2, s1, {a1, z1}), z1});
}

// The window-1 functions: plain conditionals over the lowest bits.
inline WindowFamily base_family() {
  auto a1of2 = safe_of({0, 2}, 1), a2of2 = safe_of({0, 2}, 2);
  auto a1of3 = safe_of({0, 3}, 1), a2of3 = safe_of({0, 3}, 2), a3of3 = safe_of({0, 3}, 3);
  WindowFamily f;
  f.M = mk_pred();
  f.R = cond_term(a1of2, append_bit_term(a2of2, 0), append_bit_term(a2of2, 1));
  f.Pi = cond_term(a1of3,
                   cond_term(a2of3, append_bit_term(append_bit_term(a3of3, 0), 0),
                             append_bit_term(append_bit_term(a3of3, 0), 1)),
                   cond_term(a2of3, append_bit_term(append_bit_term(a3of3, 1), 0),
                             append_bit_term(append_bit_term(a3of3, 1), 1)));
  f.Pi1 = cond_term(halve_term(a1of2), append_bit_term(a2of2, 0), append_bit_term(a2of2, 1));
  f.Pi2 = cond_term(a1of2, append_bit_term(a2of2, 0), append_bit_term(a2of2, 1));
  complete_family(f, 0);
  return f;
}

// Doubles the window: the same equations that drive the cascade steps, as
// fixed compositions.
inline WindowFamily double_family(const WindowFamily& f) {
  Signature s1{0, 1}, s2{0, 2}, s3{0, 3};
  auto app = [&](const TermPtr& g, Signature outer, std::vector<TermPtr> safes) {
    return hinted(mk_comp(g, {}, std::move(safes), outer));
  };
  TermPtr a1 = safe_of(s1, 1);
  TermPtr a_of2 = safe_of(s2, 1), c_of2 = safe_of(s2, 2);
  TermPtr a_of3 = safe_of(s3, 1), b_of3 = safe_of(s3, 2), c_of3 = safe_of(s3, 3);
  WindowFamily n;
  n.M = app(f.M, s1, {app(f.M, s1, {a1})});
  n.R = f.R2;
  n.Pi = app(f.Pi, s3,
             {app(f.M, s3, {a_of3}), app(f.M, s3, {b_of3}),
              app(f.Pi, s3, {app(f.L, s3, {a_of3}), app(f.L, s3, {b_of3}), c_of3})});
  auto unpair = [&](const TermPtr& base) {
    return app(base, s2,
               {app(f.M2, s2, {a_of2}),
                app(base, s2, {app(f.L2, s2, {a_of2}), c_of2})});
  };
  n.Pi1 = unpair(f.Pi1);
  n.Pi2 = unpair(f.Pi2);
  complete_family(n, 0);
  return n;
}

inline WindowFamily fixed_window_family(int c) {
  WindowFamily f = base_family();
  for (int j = 0; j < c; ++j) f = double_family(f);
  return f;
}

inline std::vector<SnrnRow> kit_rows(const CascadePlan& plan, int arity,
                                     const WindowFamily& /*base*/, const PairingKit& kit,
                                     TermKind which);

}  // namespace detail

// Builds the pairing family for the window 2^p(|x|). The polynomial is
// staircase-completed if needed (a larger window is still a valid window).
inline PairingKit mk_pairing(const Polynomial& p) {
  CascadePlan plan = build_cascade_plan(p, /*allow_completion=*/true);
  const int S = plan.slots();
  detail::WindowFamily base = detail::fixed_window_family(plan.constant);
  PairingKit kit;
  kit.plan = plan;
  kit.poly = plan.effective();
  kit.slots = S;
  if (S == 0) {
    kit.M = base.M;
    kit.R = base.R;
    kit.L = base.L;
    kit.Pi = base.Pi;
    kit.Pi1 = base.Pi1;
    kit.Pi2 = base.Pi2;
    kit.M2 = base.M2;
    kit.R2 = base.R2;
    kit.L2 = base.L2;
    return kit;
  }
  PrecFunction pf = plan.prec();
  auto fval = [&](int l) { return mk_proj(S, l + 1, S + l + 1); };
  auto aval = [&](int l, int i) { return mk_proj(S, l + 1, S + i); };
  auto pass_row = [&](const CascadeRule& r, int l) {
    SnrnRow row;
    row.pattern = r.pattern;
    row.h = fval(l);
    for (int i = 1; i <= l; ++i) {
      row.t.push_back(aval(l, i));
      row.s.push_back(aval(l, i));
    }
    return row;
  };
  auto snrn_of = [&](int l, TermPtr g, auto&& double_row) {
    std::vector<SnrnRow> rows;
    for (const auto& r : plan.rules)
      rows.push_back(r.doubling ? double_row(r) : pass_row(r, l));
    return mk_snrn(S, 0, std::move(g), std::move(rows), pf, pf, pf);
  };
  auto applied = [&](const TermPtr& g, Signature outer, std::vector<TermPtr> safes) {
    return hinted(apply_all_normals(g, outer, std::move(safes)));
  };

  // M: doubling steps take the most significant part twice
  kit.M = snrn_of(1, base.M, [&](const CascadeRule& r) {
    SnrnRow row;
    row.pattern = r.pattern;
    row.h = fval(1);
    row.t = {fval(1)};
    row.s = {aval(1, 1)};
    return row;
  });
  // R: R(v; M(v;a), R(v; a, c))
  kit.R = snrn_of(2, base.R, [&](const CascadeRule& r) {
    Signature step{S, 3};
    SnrnRow row;
    row.pattern = r.pattern;
    row.h = fval(2);
    row.t = {applied(kit.M, step, {aval(2, 1)}), fval(2)};
    row.s = {aval(2, 1), aval(2, 2)};
    return row;
  });
  {
    Signature s1{S, 1};
    TermPtr a1 = safe_of(s1, 1), z1 = mk_zero(S, 1);
    kit.L = applied(kit.R, s1, {applied(kit.R, s1, {a1, z1}), z1});
    kit.M2 = applied(kit.M, s1, {applied(kit.M, s1, {a1})});
    Signature s2{S, 2};
    TermPtr a2 = safe_of(s2, 1), c2 = safe_of(s2, 2);
    kit.R2 = applied(kit.R, s2, {applied(kit.M, s2, {a2}), applied(kit.R, s2, {a2, c2})});
    kit.L2 = applied(kit.R2, s1, {applied(kit.R2, s1, {a1, z1}), z1});
  }
  // Pi: Pi(v; M a, M b, Pi(v; L a, L b, c)) via the s-stage
  kit.Pi = snrn_of(3, base.Pi, [&](const CascadeRule& r) {
    Signature step{S, 4};
    SnrnRow row;
    row.pattern = r.pattern;
    row.h = fval(3);
    row.t = {applied(kit.M, step, {aval(3, 1)}), applied(kit.M, step, {aval(3, 2)}), fval(3)};
    row.s = {applied(kit.L, step, {aval(3, 1)}), applied(kit.L, step, {aval(3, 2)}), aval(3, 3)};
    return row;
  });
  // Pi^j: Pi^j(v; M2 a, Pi^j(v; L2 a, c))
  auto unpair_of = [&](TermPtr b) {
    return snrn_of(2, std::move(b), [&](const CascadeRule& r) {
      Signature step{S, 3};
      SnrnRow row;
      row.pattern = r.pattern;
      row.h = fval(2);
      row.t = {applied(kit.M2, step, {aval(2, 1)}), fval(2)};
      row.s = {applied(kit.L2, step, {aval(2, 1)}), aval(2, 2)};
      return row;
    });
  };
  kit.Pi1 = unpair_of(base.Pi1);
  kit.Pi2 = unpair_of(base.Pi2);
  return kit;
}

// Composes a kit term under an outer signature: slot i reads the outer
// normal var_to_outer[slot_var[i]] (1-based), safes as given.
inline TermPtr kit_apply(const PairingKit& kit, const TermPtr& term,
                         const std::vector<int>& var_to_outer, Signature outer,
                         std::vector<TermPtr> safes) {
  std::vector<int> sel;
  sel.reserve(kit.plan.slot_var.size());
  for (int v : kit.plan.slot_var) sel.push_back(var_to_outer.at(static_cast<std::size_t>(v)));
  return mk_comp(term, std::move(sel), std::move(safes), outer);
}

}  // namespace snrn
