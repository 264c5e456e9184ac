#pragma once

// The machine corpus shared by the unit and acceptance suites. The halting
// layout reads the output with its low bit next to the head, mirroring the
// input layout, so each machine's function is stated against that decode.

#include "snrn/tm.hpp"

namespace corpus {

using namespace snrn;

// Scans the input once and halts past it: tape content is untouched, the
// decoded value is the input read back high-bit-first.
inline TMSpec reverse_machine() {
  TMSpec tm;
  tm.state_count = 2;
  tm.delta[{1, TmSym::B}] = {2, TmSym::B, TmDir::Right};
  tm.delta[{1, TmSym::S0}] = {0, TmSym::S0, TmDir::Halt};
  tm.delta[{1, TmSym::S1}] = {0, TmSym::S1, TmDir::Halt};
  tm.delta[{2, TmSym::S0}] = {2, TmSym::S0, TmDir::Right};
  tm.delta[{2, TmSym::S1}] = {2, TmSym::S1, TmDir::Right};
  tm.delta[{2, TmSym::B}] = {0, TmSym::B, TmDir::Halt};
  return tm;
}
inline Polynomial reverse_poly() { return parse_polynomial("x1+2"); }

// Same scan, complementing every digit.
inline TMSpec flip_machine() {
  TMSpec tm = reverse_machine();
  tm.delta[{2, TmSym::S0}] = {2, TmSym::S1, TmDir::Right};
  tm.delta[{2, TmSym::S1}] = {2, TmSym::S0, TmDir::Right};
  return tm;
}
inline Polynomial flip_poly() { return parse_polynomial("x1+2"); }

// Walks to the far end and increments leftward from there (the far end is
// the carry entry), extending at the near cell on overflow, then returns to
// the far side to halt. Decoded: rev(x) + 1; on palindromic inputs, x + 1.
inline TMSpec increment_machine() {
  TMSpec tm;
  tm.state_count = 4;
  tm.delta[{1, TmSym::B}] = {2, TmSym::B, TmDir::Right};
  tm.delta[{1, TmSym::S0}] = {0, TmSym::S0, TmDir::Halt};
  tm.delta[{1, TmSym::S1}] = {0, TmSym::S1, TmDir::Halt};
  tm.delta[{2, TmSym::S0}] = {2, TmSym::S0, TmDir::Right};
  tm.delta[{2, TmSym::S1}] = {2, TmSym::S1, TmDir::Right};
  tm.delta[{2, TmSym::B}] = {3, TmSym::B, TmDir::Left};
  tm.delta[{3, TmSym::S1}] = {3, TmSym::S0, TmDir::Left};   // carry ripples
  tm.delta[{3, TmSym::S0}] = {4, TmSym::S1, TmDir::Right};  // absorbed
  tm.delta[{3, TmSym::B}] = {4, TmSym::S1, TmDir::Right};   // overflow digit
  tm.delta[{4, TmSym::S0}] = {4, TmSym::S0, TmDir::Right};
  tm.delta[{4, TmSym::S1}] = {4, TmSym::S1, TmDir::Right};
  tm.delta[{4, TmSym::B}] = {0, TmSym::B, TmDir::Halt};
  return tm;
}
inline Polynomial increment_poly() { return parse_polynomial("x1+2"); }

// Counts the 1-digits: eats them left to right, keeping a binary counter
// beyond the separator. States: 1 start, 2 find/eat, 3 walk to counter,
// 4 increment, 5 return over counter, 6 return over source, 7 finish.
inline TMSpec ones_count_machine() {
  TMSpec tm;
  tm.state_count = 7;
  auto set = [&](int q, TmSym r, int q2, TmSym w, TmDir d) { tm.delta[{q, r}] = {q2, w, d}; };
  set(1, TmSym::B, 2, TmSym::B, TmDir::Right);
  set(1, TmSym::S0, 0, TmSym::S0, TmDir::Halt);
  set(1, TmSym::S1, 0, TmSym::S1, TmDir::Halt);
  // 2: scan for the next 1; 0s are skipped (eaten or original)
  set(2, TmSym::S0, 2, TmSym::S0, TmDir::Right);
  set(2, TmSym::S1, 3, TmSym::S0, TmDir::Right);  // eat it
  set(2, TmSym::B, 7, TmSym::B, TmDir::Right);    // source done: cross counter
  // 3: cross the rest of the source to the separator
  set(3, TmSym::S0, 3, TmSym::S0, TmDir::Right);
  set(3, TmSym::S1, 3, TmSym::S1, TmDir::Right);
  set(3, TmSym::B, 4, TmSym::B, TmDir::Right);
  // 4: binary increment of the counter, low digit first
  set(4, TmSym::S0, 5, TmSym::S1, TmDir::Left);
  set(4, TmSym::S1, 4, TmSym::S0, TmDir::Right);
  set(4, TmSym::B, 5, TmSym::S1, TmDir::Left);
  // 5: return across the counter to the separator
  set(5, TmSym::S0, 5, TmSym::S0, TmDir::Left);
  set(5, TmSym::S1, 5, TmSym::S1, TmDir::Left);
  set(5, TmSym::B, 6, TmSym::B, TmDir::Left);
  // 6: return across the source to the start blank
  set(6, TmSym::S0, 6, TmSym::S0, TmDir::Left);
  set(6, TmSym::S1, 6, TmSym::S1, TmDir::Left);
  set(6, TmSym::B, 2, TmSym::B, TmDir::Right);
  // 7: cross the counter and halt just past it
  set(7, TmSym::S0, 7, TmSym::S0, TmDir::Right);
  set(7, TmSym::S1, 7, TmSym::S1, TmDir::Right);
  set(7, TmSym::B, 0, TmSym::B, TmDir::Halt);
  return tm;
}
inline Polynomial ones_count_poly() { return parse_polynomial("x1+3"); }

struct NamedMachine {
  const char* name;
  TMSpec tm;
  Polynomial poly;
};

inline std::vector<NamedMachine> all_machines() {
  return {{"reverse", reverse_machine(), reverse_poly()},
          {"flip", flip_machine(), flip_poly()},
          {"increment", increment_machine(), increment_poly()},
          {"ones-count", ones_count_machine(), ones_count_poly()}};
}

}  // namespace corpus
