#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "snrn/check.hpp"
#include "snrn/stdlib.hpp"

using namespace snrn;

namespace {

PrecFunction example_three_slot_table() {
  // the hand-written three-position table: halve z keeping x,y; halve y
  // refilling z from x; halve x
  PrecFunction pf;
  pf.width = 3;
  pf.rules.push_back({parse_pattern("__i"), {1, 2, 6}});
  pf.rules.push_back({parse_pattern("_iZ"), {1, 5, 1}});
  pf.rules.push_back({parse_pattern("iZZ"), {4, 2, 3}});
  return pf;
}

}  // namespace

TEST_CASE("the example three-position table validates") {
  auto rep = validate_prec_function(example_three_slot_table(), PrecMode::Strict);
  CHECK(rep.ok);
}

TEST_CASE("width-one tables have a unique choice") {
  PrecFunction pf;
  pf.width = 1;
  pf.rules.push_back({parse_pattern("i"), {2}});
  CHECK(validate_prec_function(pf, PrecMode::Strict).ok);
  PrecFunction bad;
  bad.width = 1;
  bad.rules.push_back({parse_pattern("i"), {1}});
  CHECK_FALSE(validate_prec_function(bad, PrecMode::Strict).ok);
}

TEST_CASE("identity selection is rejected") {
  PrecFunction pf;
  pf.width = 2;
  pf.rules.push_back({parse_pattern("__"), {1, 2}});
  auto rep = validate_prec_function(pf, PrecMode::Strict);
  CHECK_FALSE(rep.ok);
  REQUIRE_FALSE(rep.violations.empty());
  CHECK(rep.violations.front().kind == "prec-pivot");
}

TEST_CASE("lax mode accepts halving a zero prefix position") {
  PrecFunction pf;
  pf.width = 2;
  // on words Z i, position 1 selects P(y1) (= 0 = y1) and position 2 halves
  pf.rules.push_back({parse_pattern("Zi"), {3, 4}});
  pf.rules.push_back({parse_pattern("i_"), {3, 2}});
  CHECK_FALSE(validate_prec_function(pf, PrecMode::Strict).ok);
  CHECK(validate_prec_function(pf, PrecMode::Lax).ok);
}

TEST_CASE("prec totality is enforced") {
  PrecFunction pf;
  pf.width = 2;
  pf.rules.push_back({parse_pattern("i_"), {3, 2}});
  auto rep = validate_prec_function(pf, PrecMode::Strict);
  CHECK_FALSE(rep.ok);
  bool saw_total = false;
  for (auto& v : rep.violations) saw_total = saw_total || v.kind == "prec-total";
  CHECK(saw_total);
}

TEST_CASE("predecessor membership") {
  CHECK(is_pred({Nat(2), Nat(5), Nat(2)}, {Nat(5), Nat(5), Nat(2)}, 1));
  CHECK_FALSE(is_pred({Nat(5), Nat(5), Nat(2)}, {Nat(5), Nat(5), Nat(2)}, 1));
  CHECK_FALSE(is_pred({Nat(5), Nat(2), Nat(2)}, {Nat(5), Nat(5), Nat(2)}, 1));
  CHECK_THROWS_AS(is_pred({Nat(1)}, {Nat(1), Nat(2)}, 1), ArgumentError);
  // full-width relation: trailing components may come from anywhere
  CHECK(is_pred({Nat(2), Nat(2), Nat(5)}, {Nat(5), Nat(4), Nat(5)}, 3));
  CHECK_FALSE(is_pred({Nat(2), Nat(3), Nat(5)}, {Nat(5), Nat(4), Nat(5)}, 3));
}

TEST_CASE("validated tables are semantically sound") {
  // accepted tables, applied to concrete tuples, must land in the
  // predecessor relation
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> widthd(1, 4), idxd(1, 8), vald(0, (1 << 16) - 1);
  int accepted = 0;
  for (int trial = 0; trial < 1500; ++trial) {
    int k = widthd(rng);
    PrecFunction pf;
    pf.width = k;
    // random single-rule-per-word table via a catch-all plus random rows
    int nrules = 1 + trial % 3;
    for (int r = 0; r < nrules; ++r) {
      Pattern pat;
      for (int i = 0; i < k; ++i) {
        int c = rng() % 4;
        pat.push_back(c == 0 ? PatSym::Any
                             : c == 1 ? PatSym::Z
                                      : c == 2 ? PatSym::NonZ : PatSym::Bit1);
      }
      std::vector<std::uint16_t> idx;
      for (int i = 0; i < k; ++i)
        idx.push_back(static_cast<std::uint16_t>(1 + static_cast<int>(rng() % (2 * k))));
      pf.rules.push_back({pat, idx});
    }
    // a legal catch-all so some tables validate: halve the first non-Z position
    for (int n = 0; n < k; ++n) {
      Pattern pat(static_cast<std::size_t>(k), PatSym::Any);
      for (int i = 0; i < n; ++i) pat[static_cast<std::size_t>(i)] = PatSym::Z;
      pat[static_cast<std::size_t>(n)] = PatSym::NonZ;
      std::vector<std::uint16_t> idx;
      for (int i = 0; i < k; ++i) idx.push_back(static_cast<std::uint16_t>(i + 1));
      idx[static_cast<std::size_t>(n)] = static_cast<std::uint16_t>(k + n + 1);
      pf.rules.push_back({pat, idx});
    }
    if (!validate_prec_function(pf, PrecMode::Strict).ok) continue;
    ++accepted;
    for (int probe = 0; probe < 20; ++probe) {
      std::vector<Nat> ys;
      bool allz = true;
      for (int i = 0; i < k; ++i) {
        int v = vald(rng);
        allz = allz && v == 0;
        ys.push_back(Nat(v));
      }
      if (allz) ys[0] = 1;
      auto vs = pf.apply(ys);
      CHECK(is_pred(vs, ys, static_cast<std::size_t>(k)));
    }
  }
  CHECK(accepted > 50);
}

TEST_CASE("checking simple compositions") {
  // identity-style composition over three safe arguments
  auto t = mk_comp(mk_cond(), {}, {mk_proj(0, 3, 1), mk_proj(0, 3, 2), mk_proj(0, 3, 3)},
                   Signature{0, 3});
  auto rep = check_term(t);
  CHECK(rep.ok);
  CHECK(rep.signature == Signature{0, 3});
}

TEST_CASE("normal positions cannot be fed from safe computations") {
  // selecting index 3 under outer signature (2,1) points into the safe zone
  auto g = mk_proj(1, 0, 1);
  auto t = mk_comp(g, {3}, {}, Signature{2, 1});
  auto rep = check_term(t);
  CHECK_FALSE(rep.ok);
  bool saw = false;
  for (auto& v : rep.violations)
    saw = saw || v.kind == "comp-normal-from-safe";
  CHECK(saw);
}

TEST_CASE("srn component signatures") {
  auto good = mk_bellantoni_m();
  CHECK(check_term(good).ok);
  CHECK(check_term(good).signature == Signature{1, 1});
  // wrong arity step
  auto bad = mk_srn(mk_proj(0, 1, 1), mk_pred(), mk_pred());
  CHECK_FALSE(check_term(bad).ok);
}

TEST_CASE("stdlib towers pass the checker") {
  auto f0 = mk_f0();
  auto r0 = check_term(f0);
  CHECK(r0.ok);
  CHECK(r0.signature == Signature{1, 1});
  auto r1 = check_term(mk_f1());
  CHECK(r1.ok);
  CHECK(r1.signature == Signature{3, 1});
  auto r2 = check_term(mk_f2());
  CHECK(r2.ok);
  CHECK(r2.signature == Signature{6, 1});
}

TEST_CASE("snrn requires a recursion position") {
  Polynomial p = parse_polynomial("x1");
  auto plan = build_cascade_plan(p, false);
  auto pf = plan.prec();
  auto bad = mk_snrn(0, 1, mk_proj(1, 1, 2), {}, pf, pf, pf);
  CHECK_FALSE(check_term(bad).ok);
}

TEST_CASE("check reports are deterministic") {
  auto t = mk_comp(mk_proj(1, 0, 1), {3}, {}, Signature{2, 1});
  auto a = check_term(t);
  auto b = check_term(t);
  REQUIRE(a.violations.size() == b.violations.size());
  for (std::size_t i = 0; i < a.violations.size(); ++i) {
    CHECK(a.violations[i].kind == b.violations[i].kind);
    CHECK(a.violations[i].path == b.violations[i].path);
  }
}
