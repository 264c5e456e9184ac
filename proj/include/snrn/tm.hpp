#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "snrn/transforms.hpp"

namespace snrn {

// One-tape machine: states q0..q_m with q1 initial and q0 halting; symbols
// 0/1/B; directions left/halt/right. Each input is written LSB-first next to
// the head, separated by single blanks.
enum class TmSym : std::uint8_t { S0 = 0, S1 = 1, B = 2 };
enum class TmDir : std::uint8_t { Left, Halt, Right };

// codes fixed by the arithmetization
inline int sym_code(TmSym s) { return s == TmSym::B ? 0 : s == TmSym::S0 ? 2 : 3; }
inline int dir_code(TmDir d) { return d == TmDir::Left ? 2 : d == TmDir::Halt ? 0 : 1; }

struct TmRule {
  int next_state = 0;
  TmSym write = TmSym::B;
  TmDir move = TmDir::Halt;
};

struct TMSpec {
  int state_count = 0;  // states are 0..state_count, 0 halting, 1 initial
  std::map<std::pair<int, TmSym>, TmRule> delta;

  const TmRule* rule(int state, TmSym read) const {
    auto it = delta.find({state, read});
    return it == delta.end() ? nullptr : &it->second;
  }
};

// The five tracked quantities. left/right hold 2-bit symbol codes with the
// symbol nearest the head in the lowest bits; far-away blanks are invisible
// because B codes as 00.
struct TMConfig {
  Nat state = 1;
  Nat left = 0;
  Nat symb = 0;  // code of the scanned symbol
  Nat right = 0;
  Nat direc = 1;
};

inline Nat oplus_value(const Nat& x, const Nat& a) {
  Nat r = (a << 2);  // a00
  for (std::size_t i = bit_length(x); i-- > 0;) r = (r << 2) | (2 + (bit_at(x, i) ? 1 : 0));
  return r;
}

inline Nat initial_right(const std::vector<Nat>& xs) {
  Nat r = 0;
  for (const auto& x : xs) r = oplus_value(x, r);
  return r;
}

inline TMConfig simulate_tm(const TMSpec& tm, const std::vector<Nat>& xs, const Nat& steps) {
  TMConfig c;
  c.right = initial_right(xs);
  auto scanned = [](const Nat& v) { return static_cast<int>(v & 3); };
  auto as_sym = [](int code) {
    return code == 0 ? TmSym::B : code == 2 ? TmSym::S0 : TmSym::S1;
  };
  auto set_direc = [&] {
    if (c.state.is_zero()) {
      c.direc = 0;
      return;
    }
    const TmRule* r = tm.rule(static_cast<int>(c.state), as_sym(static_cast<int>(c.symb)));
    c.direc = r ? dir_code(r->move) : 0;
  };
  set_direc();
  for (Nat t = 0; t < steps; ++t) {
    if (c.state.is_zero()) break;  // q0 is absorbing
    const TmRule* r = tm.rule(static_cast<int>(c.state), as_sym(static_cast<int>(c.symb)));
    if (!r) throw ArgumentError("simulate_tm: transition table is not total");
    int wcode = sym_code(r->write);
    switch (r->move) {
      case TmDir::Right:
        c.left = (c.left << 2) | wcode;
        c.symb = scanned(c.right);
        c.right >>= 2;
        break;
      case TmDir::Left:
        c.right = (c.right << 2) | wcode;
        c.symb = scanned(c.left);
        c.left >>= 2;
        break;
      case TmDir::Halt:
        c.symb = wcode;
        break;
    }
    c.state = r->next_state;
    set_direc();
  }
  return c;
}

// Decodes the halting left-part: data bits sit at the even code positions,
// reversed back into place. Q caps the scan width (the window exponent).
inline Nat decode_output(const Nat& left_val, const Polynomial& Q,
                         const std::vector<Nat>& xs) {
  std::vector<std::size_t> lens;
  for (auto& x : xs) lens.push_back(bit_length(x));
  Nat window = Q.value_at(lens);
  std::size_t codes = (bit_length(left_val) + 1) / 2;
  if (window < Nat(codes)) throw ArgumentError("decode_output: window too small for the value");
  Nat out = 0;
  for (std::size_t i = codes; i-- > 0;)
    out = (out << 1) | (bit_at(left_val, 2 * i) ? 1 : 0);
  return out;
}

// ---------------------------------------------------------------------------
// Finite tables as safe-argument decision trees.
// ---------------------------------------------------------------------------

namespace detail {

// Decision tree over the declared bits of each scalar argument: C over
// iterated P, first argument first, LSB first. leaf(key) builds the result
// for a fully determined key tuple.
template <typename LeafFn>
TermPtr bit_tree(const std::vector<int>& input_bits, Signature sig, LeafFn&& leaf) {
  const int arity = static_cast<int>(input_bits.size());
  std::vector<int> key(static_cast<std::size_t>(arity), 0);
  auto rec = [&](auto&& self, int arg, int bit) -> TermPtr {
    if (arg == arity) return leaf(key);
    if (bit == input_bits[static_cast<std::size_t>(arg)]) return self(self, arg + 1, 0);
    auto grow = [&](int b) {
      key[static_cast<std::size_t>(arg)] |= b << bit;
      TermPtr r = self(self, arg, bit + 1);
      key[static_cast<std::size_t>(arg)] &= ~(1 << bit);
      return r;
    };
    TermPtr probe = halve_term(safe_of(sig, arg + 1), bit);
    TermPtr even = grow(0), odd = grow(1);
    return cond_term(std::move(probe), std::move(even), std::move(odd));
  };
  return rec(rec, 0, 0);
}

}  // namespace detail

// f maps key tuples (one bounded natural per declared argument) to values;
// the term is total on the bounded domain, with 0 at unmapped keys.
inline TermPtr compile_table(const std::map<std::vector<int>, Nat>& f,
                             const std::vector<int>& input_bits) {
  const Signature sig{0, static_cast<int>(input_bits.size())};
  std::map<Nat, TermPtr> literal_cache;
  return detail::bit_tree(input_bits, sig, [&](const std::vector<int>& key) {
    auto it = f.find(key);
    Nat v = it == f.end() ? Nat(0) : it->second;
    auto cached = literal_cache.find(v);
    if (cached != literal_cache.end()) return cached->second;
    TermPtr t = literal_term(v, sig);
    literal_cache.emplace(v, t);
    return t;
  });
}

// Like compile_table but the leaves act on one extra unbounded argument.
struct TableAction {
  enum Kind { Const, Identity, Append2, Drop2 } kind = Const;
  Nat value;     // Const payload
  int code = 0;  // Append2 payload (2-bit symbol code)
};

inline TermPtr compile_action_table(const std::map<std::vector<int>, TableAction>& f,
                                    const std::vector<int>& input_bits, int action_arg,
                                    int arity) {
  const Signature sig{0, arity};
  return detail::bit_tree(input_bits, sig, [&](const std::vector<int>& key) -> TermPtr {
    auto it = f.find(key);
    TableAction a = it == f.end() ? TableAction{TableAction::Identity, Nat(0), 0} : it->second;
    TermPtr target = safe_of(sig, action_arg);
    switch (a.kind) {
      case TableAction::Const: return literal_term(a.value, sig);
      case TableAction::Identity: return target;
      case TableAction::Drop2: return halve_term(std::move(target), 2);
      case TableAction::Append2:
        return append_bit_term(append_bit_term(std::move(target), (a.code >> 1) & 1),
                               a.code & 1);
    }
    return target;
  });
}

// ---------------------------------------------------------------------------
// The compiled machine.
// ---------------------------------------------------------------------------

struct CompiledTM {
  TermPtr main;  // (n, 0): the machine's function
  TermPtr stat, symb, direc, left, right;  // the five lifted functions, (n, 0)
  SimultaneousDef five;                    // the corollary-shaped system
  Polynomial step_poly;                    // p
  Polynomial decode_poly;                  // Q
  Polynomial window;                       // internal pack window
};

namespace detail {

inline int state_bits(const TMSpec& tm) {
  int b = 1;
  while ((1 << b) <= tm.state_count) ++b;
  return b;
}

}  // namespace detail

inline CompiledTM compile_tm_full(const TMSpec& tm, const Polynomial& p, int n_inputs) {
  const int n = n_inputs;
  // the step bound must keep pace with the tape content: every input
  // variable must occur in p and the constant part must be at least 2
  for (int v = 0; v < n; ++v) {
    bool seen = false;
    for (auto& m : p.monomials)
      for (int mv : m.vars) seen = seen || mv == v;
    if (!seen)
      throw ArgumentError("compile_tm: step polynomial must mention every input (x" +
                          std::to_string(v + 1) + ")");
  }
  if (p.constant_part() < 2)
    throw ArgumentError("compile_tm: step polynomial needs constant part >= 2");

  const int sb = detail::state_bits(tm);
  auto as_sym = [](int code) {
    return code == 0 ? TmSym::B : code == 2 ? TmSym::S0 : TmSym::S1;
  };
  auto rule_of = [&](int s, int csym) -> std::optional<TmRule> {
    if (s == 0 || s > tm.state_count) return std::nullopt;
    if (csym == 1) return std::nullopt;  // unused symbol code
    const TmRule* r = tm.rule(s, as_sym(csym));
    if (!r) return std::nullopt;
    return *r;
  };

  // Delta_1: next state over (state, symb)
  std::map<std::vector<int>, Nat> d1;
  // Delta_3: next direction over (state, symb)
  std::map<std::vector<int>, Nat> d3;
  // Delta_2: next scanned symbol over (state, symb, low2 left, low2 right)
  std::map<std::vector<int>, Nat> d2;
  for (int s = 0; s < (1 << sb); ++s) {
    for (int c = 0; c < 4; ++c) {
      auto r = rule_of(s, c);
      d1[{s, c}] = r ? Nat(r->next_state) : Nat(s == 0 ? 0 : 0);
      d3[{s, c}] = r ? Nat(dir_code(r->move)) : Nat(0);
      for (int ll = 0; ll < 4; ++ll)
        for (int lr = 0; lr < 4; ++lr) {
          Nat next;
          if (!r)
            next = s == 0 ? Nat(c) : Nat(0);  // q0 freezes the configuration
          else
            switch (r->move) {
              case TmDir::Right: next = lr; break;
              case TmDir::Left: next = ll; break;
              case TmDir::Halt: next = sym_code(r->write); break;
            }
          d2[{s, c, ll, lr}] = next;
        }
    }
  }
  // Delta_4 / Delta_5: actions on left/right over (state, symb, direc, side)
  std::map<std::vector<int>, TableAction> d4, d5;
  for (int s = 0; s < (1 << sb); ++s)
    for (int c = 0; c < 4; ++c)
      for (int dd = 0; dd < 4; ++dd) {
        auto r = rule_of(s, c);
        TableAction left_act, right_act;
        if (!r) {
          left_act = {TableAction::Identity, Nat(0), 0};
          right_act = {TableAction::Identity, Nat(0), 0};
        } else {
          switch (r->move) {
            case TmDir::Right:
              left_act = {TableAction::Append2, Nat(0), sym_code(r->write)};
              right_act = {TableAction::Drop2, Nat(0), 0};
              break;
            case TmDir::Left:
              left_act = {TableAction::Drop2, Nat(0), 0};
              right_act = {TableAction::Append2, Nat(0), sym_code(r->write)};
              break;
            case TmDir::Halt:
              left_act = {TableAction::Identity, Nat(0), 0};
              right_act = {TableAction::Identity, Nat(0), 0};
              break;
          }
        }
        d4[{s, c, dd}] = left_act;
        d5[{s, c, dd}] = right_act;
      }

  TermPtr delta1 = compile_table(d1, {sb, 2});
  TermPtr delta3 = compile_table(d3, {sb, 2});
  TermPtr delta2 = compile_table(d2, {sb, 2, 2, 2});
  TermPtr delta4 = compile_action_table(d4, {sb, 2, 2}, 4, 4);
  TermPtr delta5 = compile_action_table(d5, {sb, 2, 2}, 4, 4);

  // H_j over (x1..xn ; stat, symb, direc, left, right)
  const Signature hs{n, 5};
  auto a = [&](int j) { return safe_of(hs, j); };
  auto low2 = [&](TermPtr v) {
    // rebuild the low two bits as a number <= 3
    TermPtr b0 = v;
    TermPtr b1 = halve_term(v, 1);
    return cond_term(b1, cond_term(b0, literal_term(0, hs), literal_term(1, hs)),
                     cond_term(b0, literal_term(2, hs), literal_term(3, hs)));
  };
  TermPtr H1 = mk_comp(delta1, {}, {a(1), a(2)}, hs);
  TermPtr H2 = mk_comp(delta2, {}, {a(1), a(2), low2(a(4)), low2(a(5))}, hs);
  TermPtr H3 = mk_comp(delta3, {}, {a(1), a(2)}, hs);
  TermPtr H4 = mk_comp(delta4, {}, {a(1), a(2), a(3), a(4)}, hs);
  TermPtr H5 = mk_comp(delta5, {}, {a(1), a(2), a(3), a(5)}, hs);

  auto oplus_n = mk_concat(n).second;
  std::vector<TermPtr> seeds{literal_term(1, {n, 0}), literal_term(0, {n, 0}),
                             literal_term(1, {n, 0}), literal_term(0, {n, 0}), oplus_n};

  SimultaneousDef five;
  five.shape = SimulShape::Corollary23;
  five.l = 5;
  five.m = n;
  five.h = {H1, H2, H3, H4, H5};
  five.g = seeds;

  // window: tape content stays within 2^(p+2) bits given p >= total input
  // length + 2 (enforced above by shape)
  Polynomial W = p + poly_const(2);
  Polynomial scal2 = poly_const(2);
  Polynomial scal_state = poly_const(detail::state_bits(tm) + 1);
  std::vector<Polynomial> comp_bounds{scal_state, scal2, scal2, W, W};

  LiftResult lift = corollary_lift(five, p, W, comp_bounds);
  five.drive = build_cascade_plan(p, false);

  CompiledTM out;
  out.five = five;
  out.step_poly = p;
  out.window = lift.window;
  out.stat = lift.outputs[0];
  out.symb = lift.outputs[1];
  out.direc = lift.outputs[2];
  out.left = lift.outputs[3];
  out.right = lift.outputs[4];

  // decode: f(x) = R_Q(x; Pi2_Q(x; Left(x;), 0), 0)
  Polynomial Q = p;
  for (int v = 0; v < n; ++v) Q.monomials.push_back({{v}});
  Q = Q + poly_const(2);
  Q.var_count = n;
  out.decode_poly = Q;
  PairingKit kq = mk_pairing(Q);
  std::vector<int> vars(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) vars[static_cast<std::size_t>(i)] = i + 1;
  Signature outer{n, 0};
  TermPtr z = mk_zero(n, 0);
  TermPtr unpacked = kit_apply(kq, kq.Pi2, vars, outer, {out.left, z});
  out.main = kit_apply(kq, kq.R, vars, outer, {unpacked, z});
  return out;
}

inline TermPtr compile_tm(const TMSpec& tm, const Polynomial& p, int n_inputs) {
  return compile_tm_full(tm, p, n_inputs).main;
}

}  // namespace snrn
