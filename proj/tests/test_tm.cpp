#include <catch2/catch_amalgamated.hpp>

#include <deque>

#include "corpus_machines.hpp"
#include "snrn/check.hpp"
#include "snrn/io.hpp"

using namespace snrn;

namespace {

// flat-tape reference simulator, as naive as possible
struct FlatTape {
  std::deque<TmSym> cells;  // cell 0 at index `origin`
  long long origin = 0;
  long long head = 0;
  int state = 1;

  explicit FlatTape(const std::vector<Nat>& xs) {
    cells.assign(1, TmSym::B);
    long long pos = 1;
    for (const auto& x : xs) {
      for (std::size_t i = 0; i < bit_length(x); ++i)
        set(pos++, bit_at(x, i) ? TmSym::S1 : TmSym::S0);
      ++pos;  // separator blank
    }
  }

  TmSym get(long long p) {
    long long i = p + origin;
    if (i < 0 || i >= static_cast<long long>(cells.size())) return TmSym::B;
    return cells[static_cast<std::size_t>(i)];
  }

  void set(long long p, TmSym v) {
    while (p + origin < 0) {
      cells.push_front(TmSym::B);
      ++origin;
    }
    while (p + origin >= static_cast<long long>(cells.size())) cells.push_back(TmSym::B);
    cells[static_cast<std::size_t>(p + origin)] = v;
  }

  void step(const TMSpec& tm) {
    if (state == 0) return;
    const TmRule* r = tm.rule(state, get(head));
    REQUIRE(r);
    set(head, r->write);
    if (r->move == TmDir::Right) ++head;
    if (r->move == TmDir::Left) --head;
    state = r->next_state;
  }

  Nat left_value() {
    Nat v = 0;
    long long lo = -origin;
    for (long long p = lo; p < head; ++p) v = (v << 2) | sym_code(get(p));
    return v;
  }
  Nat right_value() {
    Nat v = 0;
    long long hi = static_cast<long long>(cells.size()) - origin;
    for (long long p = hi; p > head; --p) v = (v << 2) | sym_code(get(p));
    return v;
  }
};

Nat run_and_decode(const TMSpec& tm, const Polynomial& p, const std::vector<Nat>& xs) {
  std::vector<std::size_t> lens;
  for (auto& x : xs) lens.push_back(bit_length(x));
  Nat steps = pow2(p.value_at(lens).convert_to<std::size_t>());
  auto cfg = simulate_tm(tm, xs, steps);
  REQUIRE(cfg.state == 0);  // halted within the bound
  Polynomial Q = p;
  for (int v = 0; v < static_cast<int>(xs.size()); ++v) Q.monomials.push_back({{v}});
  Q = Q + poly_const(2);
  return decode_output(cfg.left, Q, xs);
}

}  // namespace

TEST_CASE("initial configuration") {
  auto cfg = simulate_tm(corpus::reverse_machine(), {Nat(1)}, Nat(0));
  CHECK(cfg.state == 1);
  CHECK(cfg.right == 3);  // the code of a single 1-digit
  CHECK(cfg.left == 0);
  CHECK(cfg.symb == 0);
  auto two = simulate_tm(corpus::reverse_machine(), {Nat(1), Nat(1)}, Nat(0));
  CHECK(two.right == 51);  // codes 1 B 1 with the leading blank vanishing
}

TEST_CASE("q0 absorbs") {
  auto tm = corpus::reverse_machine();
  auto at = [&](int steps) { return simulate_tm(tm, {Nat(5)}, Nat(steps)); };
  // |5| = 3 digits: the scan halts after 5 steps
  auto a = at(6), b = at(50), c = at(1000);
  CHECK(a.state == 0);
  CHECK(a.left == b.left);
  CHECK(b.left == c.left);
  CHECK(a.right == c.right);
  CHECK(a.symb == c.symb);
}

TEST_CASE("five quantities reassemble the flat tape") {
  for (auto& [name, tm, poly] : corpus::all_machines()) {
    for (int x : {0, 1, 5, 12, 15}) {
      FlatTape flat({Nat(x)});
      for (int t = 0; t <= 40; ++t) {
        auto cfg = simulate_tm(tm, {Nat(x)}, Nat(t));
        CHECK(cfg.state == flat.state);
        CHECK(cfg.left == flat.left_value());
        CHECK(cfg.right == flat.right_value());
        if (!cfg.state.is_zero()) CHECK(cfg.symb == sym_code(flat.get(flat.head)));
        flat.step(tm);
      }
    }
  }
}

TEST_CASE("machine functions on samples") {
  // the decoded outputs: scan machines read the tape back high-bit-first
  auto rev_bits = [](int x) {
    Nat out = 0;
    for (std::size_t i = 0; i < bit_length(Nat(x)); ++i)
      out = (out << 1) | (bit_at(Nat(x), i) ? 1 : 0);
    return out;
  };
  for (int x = 0; x < 16; ++x) {
    CHECK(run_and_decode(corpus::reverse_machine(), corpus::reverse_poly(), {Nat(x)}) ==
          rev_bits(x));
    // flip machine: complement every digit, read back high-first
    Nat expect = 0;
    for (std::size_t i = 0; i < bit_length(Nat(x)); ++i)
      expect = (expect << 1) | (bit_at(Nat(x), i) ? 0 : 1);
    CHECK(run_and_decode(corpus::flip_machine(), corpus::flip_poly(), {Nat(x)}) == expect);
    CHECK(run_and_decode(corpus::increment_machine(), corpus::increment_poly(), {Nat(x)}) ==
          rev_bits(x) + 1);
  }
  // the worked example: 3 is a palindrome, so the increment gives 4
  CHECK(run_and_decode(corpus::increment_machine(), corpus::increment_poly(), {Nat(3)}) == 4);
  // unary inputs: ones-count returns the count read high-bit-first
  CHECK(run_and_decode(corpus::ones_count_machine(), corpus::ones_count_poly(), {Nat(0)}) == 0);
  CHECK(run_and_decode(corpus::ones_count_machine(), corpus::ones_count_poly(), {Nat(1)}) == 1);
  CHECK(run_and_decode(corpus::ones_count_machine(), corpus::ones_count_poly(), {Nat(3)}) == 1);
  CHECK(run_and_decode(corpus::ones_count_machine(), corpus::ones_count_poly(), {Nat(7)}) == 3);
  CHECK(run_and_decode(corpus::ones_count_machine(), corpus::ones_count_poly(), {Nat(15)}) == 1);
}

TEST_CASE("halting layout leaves the right side blank") {
  for (auto& [name, tm, poly] : corpus::all_machines())
    for (int x = 0; x < 16; ++x) {
      std::vector<std::size_t> lens{bit_length(Nat(x))};
      Nat steps = pow2(poly.value_at(lens).convert_to<std::size_t>());
      auto cfg = simulate_tm(tm, {Nat(x)}, steps);
      REQUIRE(cfg.state == 0);
      CHECK(cfg.right == 0);
    }
}

TEST_CASE("decode output") {
  Polynomial Q = parse_polynomial("x1+4");
  CHECK(decode_output(Nat(14), Q, {Nat(1)}) == 2);
  CHECK(decode_output(Nat(0), Q, {Nat(1)}) == 0);
  CHECK(decode_output(Nat(3), Q, {Nat(1)}) == 1);
}

TEST_CASE("compile_table equals its map") {
  std::map<std::vector<int>, Nat> f;
  f[{0}] = 0;
  f[{1}] = 1;
  auto t = compile_table(f, {1});
  REQUIRE(check_term(t).ok);
  CHECK(check_term(t).signature == Signature{0, 1});
  CHECK(eval(t, {}, {Nat(0)}).value == 0);
  CHECK(eval(t, {}, {Nat(1)}).value == 1);

  std::map<std::vector<int>, Nat> g;
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 4; ++b) g[{a, b}] = Nat(3 * a + b);
  auto t2 = compile_table(g, {3, 2});
  REQUIRE(check_term(t2).ok);
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 4; ++b)
      CHECK(eval(t2, {}, {Nat(a), Nat(b)}).value == 3 * a + b);
}

TEST_CASE("action tables") {
  std::map<std::vector<int>, TableAction> f;
  f[{0}] = {TableAction::Identity, Nat(0), 0};
  f[{1}] = {TableAction::Append2, Nat(0), 3};
  f[{2}] = {TableAction::Drop2, Nat(0), 0};
  f[{3}] = {TableAction::Const, Nat(9), 0};
  auto t = compile_action_table(f, {2}, 2, 2);
  REQUIRE(check_term(t).ok);
  CHECK(eval(t, {}, {Nat(0), Nat(77)}).value == 77);
  CHECK(eval(t, {}, {Nat(1), Nat(77)}).value == 77 * 4 + 3);
  CHECK(eval(t, {}, {Nat(2), Nat(77)}).value == 77 / 4);
  CHECK(eval(t, {}, {Nat(3), Nat(77)}).value == 9);
}

TEST_CASE("compiled increment machine equals the simulator") {
  auto tm = corpus::increment_machine();
  auto p = corpus::increment_poly();
  auto compiled = compile_tm_full(tm, p, 1);
  REQUIRE(check_term(compiled.main).ok);
  CHECK(check_term(compiled.main).signature == Signature{1, 0});
  for (int x = 0; x < 8; ++x) {
    Nat expect = run_and_decode(tm, p, {Nat(x)});
    CHECK(eval(compiled.main, {Nat(x)}, {}).value == expect);
  }
  // the worked example
  CHECK(eval(compiled.main, {Nat(3)}, {}).value == 4);
}

TEST_CASE("tm json roundtrip") {
  auto tm = corpus::increment_machine();
  auto parsed = parse_tm_json(tm_to_json(tm));
  CHECK(parsed.state_count == tm.state_count);
  CHECK(parsed.delta.size() == tm.delta.size());
  for (auto& [k, v] : tm.delta) {
    auto r = parsed.rule(k.first, k.second);
    REQUIRE(r);
    CHECK(r->next_state == v.next_state);
    CHECK(r->write == v.write);
    CHECK(r->move == v.move);
  }
}
