#include <catch2/catch_amalgamated.hpp>

#include "snrn/measure.hpp"
#include "snrn/polynomial.hpp"
#include "snrn/types.hpp"

using namespace snrn;

TEST_CASE("binary length") {
  CHECK(bit_length(Nat(0)) == 0);
  CHECK(bit_length(Nat(1)) == 1);
  CHECK(bit_length(Nat(6)) == 3);  // ceil(log2 7)
  for (int x = 1; x < 200; ++x) {
    CHECK(bit_length(Nat(2 * x)) == bit_length(Nat(x)) + 1);
    CHECK(bit_length(Nat(2 * x + 1)) == bit_length(Nat(x)) + 1);
  }
}

TEST_CASE("type of a number") {
  CHECK(type_of(Nat(0)) == TypeSymbol::Z);
  CHECK(type_of(Nat(6)) == TypeSymbol::ZeroBit);
  CHECK(type_of(Nat(5)) == TypeSymbol::OneBit);
  for (int y = 0; y < 64; ++y)
    CHECK((type_of(Nat(y)) == TypeSymbol::Z) == (y == 0));
}

TEST_CASE("type words") {
  auto w = type_word({Nat(6), Nat(0), Nat(1)});
  CHECK(word_string(w) == "0Z1");
  CHECK(word_has_nonzero(w, 3));
  auto z = type_word({Nat(0), Nat(0)});
  CHECK(word_string(z) == "ZZ");
  CHECK_FALSE(word_has_nonzero(z, 2));
  CHECK(word_string(type_word({Nat(1)})) == "1");
  CHECK_THROWS_AS(type_word({}), ArgumentError);
}

TEST_CASE("modified projections") {
  std::vector<Nat> ys{Nat(3), Nat(7), Nat(2)};
  CHECK(select(2, ys) == 7);
  CHECK(select(5, ys) == 3);  // floor(7/2)
  CHECK(select(4, ys) == 1);  // floor(3/2)
  CHECK_THROWS_AS(select(0, ys), ArgumentError);
  CHECK_THROWS_AS(select(7, ys), ArgumentError);
  // j <= k is plain projection; j > k halves
  for (std::size_t j = 1; j <= 3; ++j) CHECK(select(j, ys) == ys[j - 1]);
  for (std::size_t j = 4; j <= 6; ++j) {
    Nat v = select(j, ys);
    CHECK(2 * v <= ys[j - 4]);
    CHECK(ys[j - 4] <= 2 * v + 1);
  }
}

TEST_CASE("pattern matching") {
  auto p = parse_pattern("_1Z");
  CHECK(pattern_matches(p, type_word({Nat(0), Nat(3), Nat(0)})));
  CHECK(pattern_matches(p, type_word({Nat(4), Nat(1), Nat(0)})));
  CHECK_FALSE(pattern_matches(p, type_word({Nat(1), Nat(2), Nat(0)})));
  CHECK_FALSE(pattern_matches(p, type_word({Nat(1), Nat(1), Nat(1)})));
  CHECK(pattern_string(p) == "_1Z");
  auto q = parse_pattern("i_");
  CHECK(pattern_matches(q, type_word({Nat(2), Nat(0)})));
  CHECK_FALSE(pattern_matches(q, type_word({Nat(0), Nat(2)})));
}

TEST_CASE("sum measure") {
  CHECK(sum_measure(1, {Nat(5)}, {}) == 3);  // X^0 * |5|
  CHECK(sum_measure(2, {Nat(3), Nat(1)}, {}) == 7);  // X=3: 3*2 + 1
  CHECK(sum_measure(2, {Nat(0), Nat(0)}, {}) == 0);
  CHECK(sum_measure(2, {Nat(5)}, {Nat(3)}) == 4 * 3 + 2);  // X = max(3,2)+1
  CHECK_THROWS_AS(sum_measure(1, {Nat(1), Nat(2)}, {}), ArgumentError);
}

TEST_CASE("polynomial parsing and evaluation") {
  auto p = parse_polynomial("x1*x2+x3");
  CHECK(p.var_count == 3);
  CHECK(p.monomials.size() == 2);
  CHECK(p.value_at({2, 3, 1}) == 7);
  auto c = parse_polynomial("x1+2");
  CHECK(c.constant_part() == 2);
  CHECK(c.value_at({4}) == 6);
  auto r = parse_polynomial("2*x1");
  CHECK(r.value_at({3}) == 6);
  CHECK(to_string(p) == "x1*x2+x3");
  auto round = parse_polynomial(to_string(p));
  CHECK(round == p);
  CHECK_THROWS_AS(parse_polynomial("x0"), ArgumentError);
  CHECK_THROWS_AS(parse_polynomial("x1+"), ArgumentError);
}

TEST_CASE("cascade plan reproduces the three-slot predecessor table") {
  auto plan = build_cascade_plan(parse_polynomial("x1*x2+x3"), false);
  REQUIRE(plan.slots() == 3);
  auto pf = plan.prec();
  // the table of Example: words ending in a digit keep x,y and halve z;
  // words _iZ halve y and refill z from x; words iZZ halve x.
  auto row = pf.lookup(type_word({Nat(1), Nat(1), Nat(1)}));
  REQUIRE(row);
  CHECK(row->indices == std::vector<std::uint16_t>{1, 2, 6});
  row = pf.lookup(type_word({Nat(2), Nat(3), Nat(0)}));
  REQUIRE(row);
  CHECK(row->indices == std::vector<std::uint16_t>{1, 5, 1});
  row = pf.lookup(type_word({Nat(1), Nat(0), Nat(0)}));
  REQUIRE(row);
  CHECK(row->indices == std::vector<std::uint16_t>{4, 2, 3});
}

TEST_CASE("cascade completion fills staircase gaps") {
  CHECK_THROWS_AS(build_cascade_plan(parse_polynomial("x1*x2"), false), ArgumentError);
  auto plan = build_cascade_plan(parse_polynomial("x1*x2"), true);
  CHECK(plan.slots() == 3);  // added a linear monomial
  auto eff = plan.effective();
  CHECK(eff.value_at({2, 3}) == 2 * 3 + 2);  // x1*x2 + x1
}
