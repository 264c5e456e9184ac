#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "snrn/types.hpp"

namespace snrn {

// Term nodes are immutable after construction and shared freely; generated
// code is a DAG (builders reuse subterms), so traversals memoize by pointer.
enum class TermKind : std::uint8_t { Zero, Proj, Succ, Pred, Cond, Comp, Srn, Snrn };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

// One table row of an Snrn node: for matched type words, the h/t/s
// components of the scheme. First matching row governs the unfolding.
// Slots cache which components are plain safe projections (index into
// (a_1..a_l, fval), or -1): the evaluator wires those directly.
struct SnrnRow {
  Pattern pattern;
  TermPtr h;
  std::vector<TermPtr> t;
  std::vector<TermPtr> s;
  int h_slot = -1;
  std::vector<int> t_slots, s_slots;
  bool pass_wiring = false;  // h = fval, every t_i = s_i = a_i
};

enum class SnrnMode : std::uint8_t { Strict, Relaxed };

struct Term {
  TermKind kind;
  Signature sig;  // declared signature; wf-checker verifies consistency

  // Proj / Succ payloads
  int proj = 0;  // 1-based, 1..k+l
  int bit = 0;   // successor digit

  // Comp
  TermPtr g;
  std::vector<int> normal_select;  // 1-based indices into the outer normals
  std::vector<TermPtr> safe_args;

  // Srn
  TermPtr h0, h1;

  // Snrn
  int rec_k = 0;   // recursion positions
  int pass_m = 0;  // passive normals
  SnrnMode mode = SnrnMode::Strict;
  std::vector<SnrnRow> rows;
  PrecFunction prec1, prec2, prec3;
  bool precs_shared = false;  // all three prec functions coincide
  bool base_leaf = false;     // the base g is an initial function

  // Evaluator hint: results of this node are worth caching even though it is
  // not a recursion node (set on builder-generated shared composition DAGs).
  bool memo_hint = false;
};

inline TermPtr mk_zero(int k, int l) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Zero;
  t->sig = {k, l};
  return t;
}

inline TermPtr mk_proj(int k, int l, int j) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Proj;
  t->sig = {k, l};
  t->proj = j;
  return t;
}

inline TermPtr mk_succ(int bit) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Succ;
  t->sig = {0, 1};
  t->bit = bit;
  return t;
}

inline TermPtr mk_pred() {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Pred;
  t->sig = {0, 1};
  return t;
}

inline TermPtr mk_cond() {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Cond;
  t->sig = {0, 3};
  return t;
}

// Safe composition f(x;a) = g(x_{i1},...,x_{in}; h1(x;a),...,hm(x;a)).
// The outer signature is inferred from the safe arguments when present;
// otherwise from the selection indices (callers may also declare it).
inline TermPtr mk_comp(TermPtr g, std::vector<int> sel, std::vector<TermPtr> safes,
                       std::optional<Signature> declared = std::nullopt) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Comp;
  t->g = std::move(g);
  t->normal_select = std::move(sel);
  t->safe_args = std::move(safes);
  if (declared) {
    t->sig = *declared;
  } else if (!t->safe_args.empty()) {
    t->sig = t->safe_args.front()->sig;
  } else {
    int k = 0;
    for (int i : t->normal_select) k = std::max(k, i);
    t->sig = {k, 0};
  }
  return t;
}

inline TermPtr mk_srn(TermPtr g, TermPtr h0, TermPtr h1) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Srn;
  t->sig = {g->sig.normals + 1, g->sig.safes};
  t->g = std::move(g);
  t->h0 = std::move(h0);
  t->h1 = std::move(h1);
  return t;
}

inline TermPtr mk_snrn(int k, int m, TermPtr g, std::vector<SnrnRow> rows,
                       PrecFunction p1, PrecFunction p2, PrecFunction p3,
                       SnrnMode mode = SnrnMode::Strict) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Snrn;
  t->rec_k = k;
  t->pass_m = m;
  t->mode = mode;
  t->sig = {k + m, g->sig.safes};
  t->g = std::move(g);
  t->rows = std::move(rows);
  t->prec1 = std::move(p1);
  t->prec2 = std::move(p2);
  t->prec3 = std::move(p3);
  t->precs_shared = t->prec2 == t->prec1 && t->prec3 == t->prec1;
  t->base_leaf = t->g->kind != TermKind::Comp && t->g->kind != TermKind::Srn &&
                 t->g->kind != TermKind::Snrn;
  const int km = k + m;
  auto slot_of = [&](const TermPtr& c) {
    if (!c || c->kind != TermKind::Proj || c->proj <= km) return -1;
    return c->proj - km - 1;  // 0-based into (a_1..a_l, fval)
  };
  const int l = t->sig.safes;
  for (auto& row : t->rows) {
    row.h_slot = slot_of(row.h);
    row.t_slots.clear();
    row.s_slots.clear();
    bool pass = row.h_slot == l;
    for (int i = 0; i < static_cast<int>(row.t.size()); ++i) {
      row.t_slots.push_back(slot_of(row.t[static_cast<std::size_t>(i)]));
      pass = pass && row.t_slots.back() == i;
    }
    for (int i = 0; i < static_cast<int>(row.s.size()); ++i) {
      row.s_slots.push_back(slot_of(row.s[static_cast<std::size_t>(i)]));
      pass = pass && row.s_slots.back() == i;
    }
    row.pass_wiring = pass;
  }
  return t;
}

// Children in path order: Comp = [g, safes...]; Srn = [g, h0, h1];
// Snrn = [g, row0.h, row0.t..., row0.s..., row1.h, ...].
inline std::vector<TermPtr> children(const Term& t) {
  std::vector<TermPtr> out;
  switch (t.kind) {
    case TermKind::Comp:
      out.push_back(t.g);
      for (auto& s : t.safe_args) out.push_back(s);
      break;
    case TermKind::Srn:
      out.push_back(t.g);
      out.push_back(t.h0);
      out.push_back(t.h1);
      break;
    case TermKind::Snrn:
      out.push_back(t.g);
      for (auto& r : t.rows) {
        out.push_back(r.h);
        for (auto& x : r.t) out.push_back(x);
        for (auto& x : r.s) out.push_back(x);
      }
      break;
    default:
      break;
  }
  return out;
}

inline const char* kind_name(TermKind k) {
  switch (k) {
    case TermKind::Zero: return "zero";
    case TermKind::Proj: return "proj";
    case TermKind::Succ: return "succ";
    case TermKind::Pred: return "pred";
    case TermKind::Cond: return "cond";
    case TermKind::Comp: return "comp";
    case TermKind::Srn: return "srn";
    case TermKind::Snrn: return "snrn";
  }
  return "?";
}

// --- small construction helpers used across the builders ---

// Marks a freshly built node as worth memoizing (shared composition DAGs).
inline TermPtr hinted(TermPtr t) {
  const_cast<Term*>(t.get())->memo_hint = true;
  return t;
}

// Identity projection of safe position j (1-based among safes).
inline TermPtr safe_of(Signature sig, int j) {
  return mk_proj(sig.normals, sig.safes, sig.normals + j);
}

// g applied under an outer signature with all normals passed through in
// order and the given safe arguments.
inline TermPtr apply_all_normals(TermPtr g, Signature outer, std::vector<TermPtr> safes) {
  std::vector<int> sel(static_cast<std::size_t>(g->sig.normals));
  for (int i = 0; i < g->sig.normals; ++i) sel[static_cast<std::size_t>(i)] = i + 1;
  return mk_comp(std::move(g), std::move(sel), std::move(safes), outer);
}

// S_b(; x) lifted to an arbitrary signature.
inline TermPtr append_bit_term(TermPtr x, int b) {
  Signature sig = x->sig;
  return mk_comp(mk_succ(b), {}, {std::move(x)}, sig);
}

// Numeric literal as a safe-only composition chain (signature sig).
inline TermPtr literal_term(const Nat& value, Signature sig) {
  TermPtr t = mk_zero(sig.normals, sig.safes);
  if (value.is_zero()) return t;
  for (std::size_t i = bit_length(value); i-- > 0;)
    t = append_bit_term(std::move(t), bit_at(value, i) ? 1 : 0);
  return t;
}

// P(; x) lifted, n times.
inline TermPtr halve_term(TermPtr x, int times = 1) {
  Signature sig = x->sig;
  TermPtr t = std::move(x);
  for (int i = 0; i < times; ++i) t = mk_comp(mk_pred(), {}, {std::move(t)}, sig);
  return t;
}

// C(; a, b, c) lifted.
inline TermPtr cond_term(TermPtr a, TermPtr b, TermPtr c) {
  Signature sig = a->sig;
  return mk_comp(mk_cond(), {}, {std::move(a), std::move(b), std::move(c)}, sig);
}

}  // namespace snrn
