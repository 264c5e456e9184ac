#pragma once

#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "snrn/eval.hpp"
#include "snrn/pairing.hpp"

namespace snrn {

// ---------------------------------------------------------------------------
// Structural growth analysis: how many bits can a recursion-free term append
// beyond the longest argument it inherits. Used to pick window polynomials.
// ---------------------------------------------------------------------------

struct Growth {
  bool recursion_free = true;
  bool uses_normals = false;       // the value can depend on normal lengths
  long long add_bits = 0;          // bits appended beyond the longest argument
  std::optional<long long> cap;    // absolute length bound, when one exists
};

inline Growth growth_of(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Zero: return {true, false, 0, 0};
    case TermKind::Proj:
      return {true, t->proj <= t->sig.normals, 0, std::nullopt};
    case TermKind::Succ: return {true, false, 1, std::nullopt};
    case TermKind::Pred:
    case TermKind::Cond: return {true, false, 0, std::nullopt};
    case TermKind::Comp: {
      Growth g = growth_of(t->g);
      std::vector<Growth> hs;
      for (const auto& h : t->safe_args) hs.push_back(growth_of(h));
      // a conditional's value is one of its branches; the test argument
      // never enters it
      if (t->g->kind == TermKind::Cond && hs.size() == 3) {
        Growth r;
        r.recursion_free = g.recursion_free && hs[0].recursion_free &&
                           hs[1].recursion_free && hs[2].recursion_free;
        r.uses_normals = hs[1].uses_normals || hs[2].uses_normals;
        r.add_bits = std::max(hs[1].add_bits, hs[2].add_bits);
        if (hs[1].cap && hs[2].cap) r.cap = std::max(*hs[1].cap, *hs[2].cap);
        return r;
      }
      Growth r;
      r.recursion_free = g.recursion_free;
      r.uses_normals = g.uses_normals;
      long long hadd = 0;
      bool all_capped = true;
      long long max_cap = 0;
      for (const auto& hg : hs) {
        r.recursion_free = r.recursion_free && hg.recursion_free;
        r.uses_normals = r.uses_normals || hg.uses_normals;
        hadd = std::max(hadd, hg.add_bits);
        if (hg.cap)
          max_cap = std::max(max_cap, *hg.cap);
        else
          all_capped = false;
      }
      r.add_bits = g.add_bits + hadd;
      if (g.cap)
        r.cap = g.cap;
      else if (all_capped && !g.uses_normals && !hs.empty())
        r.cap = max_cap + g.add_bits;
      return r;
    }
    default: return {false, true, 0, std::nullopt};
  }
}

inline long long ceil_log2(long long v) {
  long long r = 0;
  while ((1ll << r) < v) ++r;
  return r;
}

// Smallest convenient polynomial dominating both arguments pointwise.
inline Polynomial poly_max(const Polynomial& a, const Polynomial& b) {
  auto varpart = [](const Polynomial& p) {
    Polynomial v = p;
    std::erase_if(v.monomials, [](const Monomial& m) { return m.vars.empty(); });
    return v;
  };
  Polynomial va = varpart(a), vb = varpart(b);
  int ca = a.constant_part(), cb = b.constant_part();
  auto canon = [](Polynomial p) {
    for (auto& m : p.monomials) std::sort(m.vars.begin(), m.vars.end());
    std::sort(p.monomials.begin(), p.monomials.end(),
              [](const Monomial& x, const Monomial& y) { return x.vars < y.vars; });
    return p;
  };
  if (canon(va).monomials == canon(vb).monomials) {
    Polynomial r = va;
    r.var_count = std::max(a.var_count, b.var_count);
    return r + poly_const(std::max(ca, cb));
  }
  if (va.monomials.empty()) return b + poly_const(std::max(0, ca - cb));
  if (vb.monomials.empty()) return a + poly_const(std::max(0, cb - ca));
  return a + b;  // coarse but pointwise dominating
}

// ---------------------------------------------------------------------------
// Nested binary pairing of l components, outermost-first.
// ---------------------------------------------------------------------------

struct PairLayout {
  int l = 0;
  std::vector<int> perm;               // component index, outermost first
  std::vector<PairingKit> kits;        // per level, 0 = innermost (size l-1)
  std::vector<Polynomial> windows;
};

// bounds[j]: window polynomial dominating component j's length.
inline PairLayout build_pair_layout(std::vector<Polynomial> bounds) {
  PairLayout lay;
  lay.l = static_cast<int>(bounds.size());
  if (lay.l < 2) return lay;
  std::vector<std::size_t> probe;
  int vc = 0;
  for (auto& b : bounds) vc = std::max(vc, b.var_count);
  probe.assign(static_cast<std::size_t>(vc), 2);
  lay.perm.resize(static_cast<std::size_t>(lay.l));
  for (int i = 0; i < lay.l; ++i) lay.perm[static_cast<std::size_t>(i)] = i;
  std::stable_sort(lay.perm.begin(), lay.perm.end(), [&](int x, int y) {
    return bounds[static_cast<std::size_t>(x)].value_at(probe) >
           bounds[static_cast<std::size_t>(y)].value_at(probe);
  });
  Polynomial inner = bounds[static_cast<std::size_t>(lay.perm.back())];
  lay.kits.resize(static_cast<std::size_t>(lay.l - 1));
  lay.windows.resize(static_cast<std::size_t>(lay.l - 1));
  for (int level = 0; level <= lay.l - 2; ++level) {
    int comp = lay.perm[static_cast<std::size_t>(lay.l - 2 - level)];
    Polynomial w = poly_max(bounds[static_cast<std::size_t>(comp)], inner);
    lay.windows[static_cast<std::size_t>(level)] = w;
    lay.kits[static_cast<std::size_t>(level)] = mk_pairing(w);
    inner = w + poly_const(1);  // a pack is at most twice the window long
  }
  return lay;
}

// Pack l component terms (all of signature `outer`) into one value.
inline TermPtr pack_components(const PairLayout& lay, const std::vector<int>& var_to_outer,
                               Signature outer, const std::vector<TermPtr>& comps) {
  if (lay.l == 1) return comps[0];
  TermPtr acc = comps[static_cast<std::size_t>(lay.perm.back())];
  for (int level = 0; level <= lay.l - 2; ++level) {
    int comp = lay.perm[static_cast<std::size_t>(lay.l - 2 - level)];
    const auto& kit = lay.kits[static_cast<std::size_t>(level)];
    acc = hinted(kit_apply(kit, kit.Pi, var_to_outer, outer,
                           {comps[static_cast<std::size_t>(comp)], acc,
                            mk_zero(outer.normals, outer.safes)}));
  }
  return acc;
}

// Extract component j back out of a packed value.
inline TermPtr extract_component(const PairLayout& lay, const std::vector<int>& var_to_outer,
                                 Signature outer, TermPtr packed, int j) {
  if (lay.l == 1) return packed;
  int t = 0;
  while (lay.perm[static_cast<std::size_t>(t)] != j) ++t;
  TermPtr cur = std::move(packed);
  auto zero = mk_zero(outer.normals, outer.safes);
  int steps = t <= lay.l - 2 ? t : lay.l - 1;
  for (int s = 0; s < steps; ++s) {
    const auto& kit = lay.kits[static_cast<std::size_t>(lay.l - 2 - s)];
    cur = hinted(kit_apply(kit, kit.Pi2, var_to_outer, outer, {std::move(cur), zero}));
  }
  if (t <= lay.l - 2) {
    const auto& kit = lay.kits[static_cast<std::size_t>(lay.l - 2 - t)];
    cur = hinted(kit_apply(kit, kit.Pi1, var_to_outer, outer, {std::move(cur), zero}));
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Simultaneous definitions.
// ---------------------------------------------------------------------------

enum class SimulShape { Theorem21, Corollary23 };

// A system of l functions defined simultaneously over a cascade drive:
// doubling steps are self-applications f_j(v; f(v; a)), the remaining steps
// pass the safe tuple through. Theorem21-shaped systems self-apply on every
// step.
struct SimultaneousDef {
  SimulShape shape = SimulShape::Theorem21;
  int l = 0;
  int m = 0;
  CascadePlan drive;
  std::vector<TermPtr> h;  // (m, l) each
  std::vector<TermPtr> g;  // (m, 0) seeds

  int k() const { return drive.slots(); }
  PrecFunction prec1() const { return drive.prec(); }
  PrecFunction prec2() const { return drive.prec(); }
  bool rule_self_applies(const CascadeRule& r) const {
    return shape == SimulShape::Theorem21 || r.doubling;
  }
};

struct LengthPolyPair {
  Polynomial p_g, p_f;  // over the m passive variables
};

// Reference semantics: structural recursion with value memoization.
inline std::vector<Nat> oracle_simultaneous_eval(const SimultaneousDef& d,
                                                 const std::vector<Nat>& ys,
                                                 const std::vector<Nat>& xs,
                                                 const std::vector<Nat>& as,
                                                 const EvalLimits& lim = {}) {
  if (static_cast<int>(ys.size()) != d.k()) throw ArgumentError("oracle: |ys| != k");
  struct KeyHash {
    std::size_t operator()(const std::pair<std::vector<Nat>, std::vector<Nat>>& k) const {
      std::uint64_t h = 17;
      for (auto& n : k.first) h = detail::mix(h, hash_nat(n));
      for (auto& n : k.second) h = detail::mix(h, hash_nat(n));
      return static_cast<std::size_t>(h);
    }
  };
  std::unordered_map<std::pair<std::vector<Nat>, std::vector<Nat>>, std::vector<Nat>, KeyHash>
      memo;
  PrecFunction pf = d.prec1();
  auto rec = [&](auto&& self, const std::vector<Nat>& y,
                 const std::vector<Nat>& a) -> std::vector<Nat> {
    bool base = true;
    for (auto& v : y)
      if (!v.is_zero()) { base = false; break; }
    if (base) {
      std::vector<Nat> out;
      for (auto& hj : d.h) out.push_back(eval(hj, xs, a, lim).value);
      return out;
    }
    auto key = std::make_pair(y, a);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    TypeWord w = type_word(y);
    const CascadeRule* rule = nullptr;
    for (const auto& r : d.drive.rules)
      if (pattern_matches(r.pattern, w)) { rule = &r; break; }
    if (!rule) throw Error("oracle: word not covered by the drive");
    std::vector<Nat> v = pf.apply(y);
    std::vector<Nat> out;
    if (d.rule_self_applies(*rule)) {
      auto inner = self(self, v, a);
      out = self(self, v, inner);
    } else {
      out = self(self, v, a);
    }
    memo.emplace(std::move(key), out);
    return out;
  };
  return rec(rec, ys, as);
}

// Iterates the component maps `count` times from the seeds.
inline std::vector<Nat> oracle_iterate(const std::vector<TermPtr>& g,
                                       const std::vector<TermPtr>& h, const Nat& count,
                                       const std::vector<Nat>& xs, const EvalLimits& lim = {}) {
  if (count > Nat(1) << 24) throw LimitExceeded(Limit::Cost);
  std::vector<Nat> cur;
  for (auto& gj : g) cur.push_back(eval(gj, xs, {}, lim).value);
  for (Nat i = 0; i < count; ++i) {
    std::vector<Nat> next;
    for (auto& hj : h) next.push_back(eval(hj, xs, cur, lim).value);
    cur = std::move(next);
  }
  return cur;
}

struct SingleizedSystem {
  std::vector<TermPtr> outputs;  // one (k+m, 0) term per component
  TermPtr fhat;                  // the packed single recursion, (k+m, l)
  Polynomial window;             // shared window polynomial (over the m vars)
  PairLayout layout;
};

namespace detail {

// Window polynomial from growth analysis. The window is over the passive
// variables only, so it must bound component lengths uniformly in the
// recursion tuple: that holds for capped or non-growing steps, and for
// corollary-style lifts where the iteration count is itself 2^p.
inline Polynomial auto_window(const SimultaneousDef& d, const Polynomial* lift_poly = nullptr) {
  long long hbits = 0, hcap = 0;
  bool huses = false, all_capped = true;
  for (const auto& hj : d.h) {
    Growth gr = growth_of(hj);
    if (!gr.recursion_free)
      throw ArgumentError("auto window: step terms contain recursion; pass explicit polynomials");
    if (gr.cap)
      hcap = std::max(hcap, *gr.cap);
    else
      all_capped = false;
    if (d.shape == SimulShape::Theorem21 && gr.add_bits > 0 && !gr.cap && !lift_poly)
      throw ArgumentError(
          "auto window: growing step terms need an explicit window (their length depends on the "
          "recursion tuple)");
    hbits = std::max(hbits, gr.add_bits);
    huses = huses || (gr.uses_normals && !gr.cap);
  }
  long long gbits = 0;
  bool guses = false;
  for (const auto& gj : d.g) {
    Growth gr = growth_of(gj);
    if (!gr.recursion_free)
      throw ArgumentError("auto window: seed terms contain recursion; pass explicit polynomials");
    gbits = std::max(gbits, gr.cap ? *gr.cap : gr.add_bits);
    guses = guses || (gr.uses_normals && !gr.cap);
  }
  Polynomial w;
  w.var_count = d.m;
  if (huses || guses)
    for (int i = 0; i < d.m; ++i) w.monomials.push_back({{i}});
  long long pad = ceil_log2(gbits + hbits + hcap + 2) + 2;
  if (!all_capped && hbits > 0 && lift_poly) {
    // iterate-count growth: lengths <= seeds + add * 2^p
    w = w + *lift_poly;
    pad += 1;
  }
  return w + poly_const(static_cast<int>(pad));
}

struct FhatPieces {
  TermPtr fhat;
  PairLayout layout;
  Polynomial window;
};

// Core of both transforms: the packed single recursion over the drive.
// Component windows are y-free, so pack and unpair agree on every call.
inline FhatPieces build_fhat(const SimultaneousDef& d, const Polynomial& window,
                             std::vector<Polynomial> component_bounds,
                             const std::vector<TermPtr>& base_components) {
  const int k = d.k(), m = d.m, l = d.l;
  FhatPieces out;
  out.window = window;
  if (component_bounds.empty()) component_bounds.assign(static_cast<std::size_t>(l), window);
  out.layout = build_pair_layout(component_bounds);

  std::vector<int> base_vars(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) base_vars[static_cast<std::size_t>(i)] = i + 1;
  std::vector<int> step_vars(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) step_vars[static_cast<std::size_t>(i)] = k + i + 1;

  TermPtr base = pack_components(out.layout, base_vars, Signature{m, l}, base_components);

  const Signature step{k + m, l + 1};
  TermPtr fval = mk_proj(k + m, l + 1, k + m + l + 1);
  std::vector<SnrnRow> rows;
  for (const auto& rule : d.drive.rules) {
    SnrnRow row;
    row.pattern = rule.pattern;
    row.h = fval;
    for (int j = 1; j <= l; ++j) row.s.push_back(mk_proj(k + m, l + 1, k + m + j));
    if (d.rule_self_applies(rule)) {
      for (int j = 0; j < l; ++j)
        row.t.push_back(extract_component(out.layout, step_vars, step, fval, j));
    } else {
      for (int j = 1; j <= l; ++j) row.t.push_back(mk_proj(k + m, l + 1, k + m + j));
    }
    rows.push_back(std::move(row));
  }
  PrecFunction pf = d.drive.prec();
  out.fhat = mk_snrn(k, m, base, std::move(rows), pf, pf, pf);
  return out;
}

}  // namespace detail

// Theorem-21 style transform: one packed recursion plus unpairing outputs.
inline SingleizedSystem simultaneous_to_single(const SimultaneousDef& d,
                                               std::optional<LengthPolyPair> polys = {}) {
  if (d.shape != SimulShape::Theorem21)
    throw ArgumentError("simultaneous_to_single expects a theorem21-shaped system");
  if (static_cast<int>(d.g.size()) != d.l)
    throw ArgumentError("simultaneous_to_single: provide one seed per component");
  Polynomial window = polys ? polys->p_f + polys->p_g + poly_const(1) : detail::auto_window(d);
  window.var_count = d.m;
  auto pieces = detail::build_fhat(d, window, {}, d.h);
  const int k = d.k(), m = d.m;
  SingleizedSystem out;
  out.fhat = pieces.fhat;
  out.window = pieces.window;
  out.layout = pieces.layout;
  std::vector<int> all(static_cast<std::size_t>(k + m));
  for (int i = 0; i < k + m; ++i) all[static_cast<std::size_t>(i)] = i + 1;
  std::vector<int> step_vars(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) step_vars[static_cast<std::size_t>(i)] = k + i + 1;
  std::vector<TermPtr> lifted_seeds;
  for (const auto& gj : d.g) {
    std::vector<int> sel(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) sel[static_cast<std::size_t>(i)] = k + i + 1;
    lifted_seeds.push_back(mk_comp(gj, sel, {}, Signature{k + m, 0}));
  }
  TermPtr seeded = hinted(mk_comp(pieces.fhat, all, lifted_seeds, Signature{k + m, 0}));
  for (int j = 0; j < d.l; ++j)
    out.outputs.push_back(
        extract_component(pieces.layout, step_vars, Signature{k + m, 0}, seeded, j));
  return out;
}

struct LiftResult {
  std::vector<TermPtr> outputs;  // (m, 0) each
  TermPtr fhat;                  // empty for constant polynomials
  Polynomial window;
  PairLayout layout;
  Nat count;  // iterations realized per unit drive (diagnostic)
};

// Corollary-23 style lift: substitute a tower value into the recursion
// parameter of a simultaneous iterate, i.e. run it 2^p(|x|) times.
inline LiftResult corollary_lift(const SimultaneousDef& d, const Polynomial& p,
                                 std::optional<Polynomial> window = {},
                                 std::vector<Polynomial> component_bounds = {}) {
  if (d.shape != SimulShape::Corollary23)
    throw ArgumentError("corollary_lift expects a corollary23-shaped system");
  if (static_cast<int>(d.g.size()) != d.l) throw ArgumentError("corollary_lift: missing seeds");
  const int m = d.m, l = d.l;
  CascadePlan plan = build_cascade_plan(p, /*allow_completion=*/false);
  const int S = plan.slots();
  LiftResult out;

  // base applies the component maps 2^const times (term DAG, shared levels)
  Nat base_apps = pow2(static_cast<std::size_t>(plan.constant));
  std::vector<TermPtr> base_comps;
  for (int j = 1; j <= l; ++j) base_comps.push_back(safe_of({m, l}, j));
  for (Nat i = 0; i < base_apps; ++i) {
    std::vector<TermPtr> next;
    for (int j = 0; j < l; ++j)
      next.push_back(hinted(apply_all_normals(d.h[static_cast<std::size_t>(j)], Signature{m, l},
                                              base_comps)));
    base_comps = std::move(next);
  }

  if (S == 0) {
    // no drive: the lift is a plain composition chain from the seeds
    std::vector<TermPtr> cur = d.g;
    for (Nat i = 0; i < base_apps; ++i) {
      std::vector<TermPtr> next;
      for (int j = 0; j < l; ++j)
        next.push_back(hinted(apply_all_normals(d.h[static_cast<std::size_t>(j)],
                                                Signature{m, 0}, cur)));
      cur = std::move(next);
    }
    out.outputs = std::move(cur);
    out.count = base_apps;
    return out;
  }

  SimultaneousDef lifted = d;
  lifted.shape = SimulShape::Corollary23;
  lifted.drive = plan;
  Polynomial w = window ? *window : detail::auto_window(d, &p);
  w.var_count = std::max(w.var_count, m);
  auto pieces = detail::build_fhat(lifted, w, std::move(component_bounds), base_comps);

  std::vector<int> all(static_cast<std::size_t>(S + m));
  for (int i = 0; i < S + m; ++i) all[static_cast<std::size_t>(i)] = i + 1;
  std::vector<int> step_vars(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) step_vars[static_cast<std::size_t>(i)] = S + i + 1;
  std::vector<TermPtr> lifted_seeds;
  for (const auto& gj : d.g) {
    std::vector<int> sel(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) sel[static_cast<std::size_t>(i)] = S + i + 1;
    lifted_seeds.push_back(mk_comp(gj, sel, {}, Signature{S + m, 0}));
  }
  TermPtr seeded = hinted(mk_comp(pieces.fhat, all, lifted_seeds, Signature{S + m, 0}));
  // final composition: slot i reads x_{slot_var[i]}
  std::vector<int> final_sel;
  for (int v : plan.slot_var) final_sel.push_back(v + 1);
  for (int i = 0; i < m; ++i) final_sel.push_back(i + 1);
  for (int j = 0; j < l; ++j) {
    TermPtr extracted =
        extract_component(pieces.layout, step_vars, Signature{S + m, 0}, seeded, j);
    out.outputs.push_back(mk_comp(extracted, final_sel, {}, Signature{m, 0}));
  }
  out.fhat = pieces.fhat;
  out.window = pieces.window;
  out.layout = pieces.layout;
  out.count = base_apps;
  return out;
}

}  // namespace snrn
