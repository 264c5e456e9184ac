#pragma once

#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "snrn/tm.hpp"

namespace snrn {

struct ParseError : Error {
  int line, column;
  ParseError(const std::string& msg, int ln, int col)
      : Error(msg + " at " + std::to_string(ln) + ":" + std::to_string(col)),
        line(ln),
        column(col) {}
};

namespace sexp {

// Minimal s-expression reader: atoms, strings, and lists, with positions.
struct Node {
  bool is_list = false;
  std::string atom;
  std::vector<Node> items;
  int line = 0, col = 0;

  bool is_atom(const std::string& s) const { return !is_list && atom == s; }
};

class Reader {
 public:
  explicit Reader(const std::string& text) : s_(text) {}

  std::vector<Node> read_all() {
    std::vector<Node> out;
    skip_ws();
    while (pos_ < s_.size()) {
      out.push_back(read());
      skip_ws();
    }
    return out;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, line_, col_); }

  void bump() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_ws() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == ';') {
        while (pos_ < s_.size() && s_[pos_] != '\n') bump();
      } else if (isspace(static_cast<unsigned char>(c))) {
        bump();
      } else {
        break;
      }
    }
  }

  Node read() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    Node n;
    n.line = line_;
    n.col = col_;
    char c = s_[pos_];
    if (c == '(') {
      bump();
      n.is_list = true;
      skip_ws();
      while (pos_ < s_.size() && s_[pos_] != ')') {
        n.items.push_back(read());
        skip_ws();
      }
      if (pos_ >= s_.size()) fail("missing ')'");
      bump();
      return n;
    }
    if (c == ')') fail("unexpected ')'");
    if (c == '"') {
      bump();
      while (pos_ < s_.size() && s_[pos_] != '"') {
        n.atom.push_back(s_[pos_]);
        bump();
      }
      if (pos_ >= s_.size()) fail("unterminated string");
      bump();
      return n;
    }
    while (pos_ < s_.size() && !isspace(static_cast<unsigned char>(s_[pos_])) &&
           s_[pos_] != '(' && s_[pos_] != ')' && s_[pos_] != ';')
      n.atom.push_back(s_[pos_]), bump();
    return n;
  }
};

}  // namespace sexp

// ---------------------------------------------------------------------------
// stdlib registry: named terms addressable from the CLI and from documents.
// ---------------------------------------------------------------------------

inline const std::map<std::string, std::function<TermPtr()>>& stdlib_builders() {
  static const std::map<std::string, std::function<TermPtr()>> reg = [] {
    std::map<std::string, std::function<TermPtr()>> r;
    r["f0"] = [] { return mk_f0(); };
    r["f1"] = [] { return mk_f1(); };
    r["f2"] = [] { return mk_f2(); };
    r["pi"] = [] { return mk_bellantoni_pair().first; };
    r["m"] = [] { return mk_bellantoni_m(); };
    r["oplus"] = [] { return mk_oplus(); };
    r["oplus2"] = [] { return mk_concat(2).second; };
    r["A1"] = [] { return mk_unary_add(); };
    auto kit_member = [](const char* poly, TermPtr PairingKit::* member) {
      std::string p = poly;
      return [p, member] {
        PairingKit kit = mk_pairing(parse_polynomial(p));
        return kit.*member;
      };
    };
    for (auto& [suffix, poly] : std::vector<std::pair<std::string, const char*>>{
             {"@p0", "x1"}, {"@p1", "x1*x2+x3"}}) {
      r["M" + suffix] = kit_member(poly, &PairingKit::M);
      r["R" + suffix] = kit_member(poly, &PairingKit::R);
      r["L" + suffix] = kit_member(poly, &PairingKit::L);
      r["Pi" + suffix] = kit_member(poly, &PairingKit::Pi);
      r["Pi1" + suffix] = kit_member(poly, &PairingKit::Pi1);
      r["Pi2" + suffix] = kit_member(poly, &PairingKit::Pi2);
    }
    return r;
  }();
  return reg;
}

inline TermPtr stdlib_term(const std::string& name) {
  auto& reg = stdlib_builders();
  auto it = reg.find(name);
  if (it == reg.end()) throw ArgumentError("unknown stdlib name: " + name);
  return it->second();
}

// ---------------------------------------------------------------------------
// Term documents: named definitions in prefix notation.
// ---------------------------------------------------------------------------

struct TermDocument {
  std::vector<std::pair<std::string, TermPtr>> defs;

  TermPtr find(const std::string& name) const {
    for (auto& [n, t] : defs)
      if (n == name) return t;
    return nullptr;
  }
};

namespace detail {

class TermParser {
 public:
  explicit TermParser(const TermDocument* doc) : doc_(doc) {}

  TermPtr term(const sexp::Node& n) {
    if (!n.is_list) return named(n);
    if (n.items.empty()) throw ParseError("empty form", n.line, n.col);
    const std::string& head = n.items[0].atom;
    if (head == "zero") return mk_zero(num(n, 1), num(n, 2));
    if (head == "proj") return mk_proj(num(n, 1), num(n, 2), num(n, 3));
    if (head == "succ") return mk_succ(num(n, 1));
    if (head == "pred") return mk_pred();
    if (head == "cond") return mk_cond();
    if (head == "comp") return comp(n);
    if (head == "srn") {
      need(n, 4, "srn takes g h0 h1");
      return mk_srn(term(n.items[1]), term(n.items[2]), term(n.items[3]));
    }
    if (head == "snrn") return snrn(n);
    if (head == "simul-single" || head == "simul-lift") return simul(n, head == "simul-lift");
    throw ParseError("unknown form '" + head + "'", n.line, n.col);
  }

  PrecFunction prec(const sexp::Node& n) {
    if (!n.is_list || n.items.empty() || !n.items[0].is_atom("prec"))
      throw ParseError("expected (prec ...)", n.line, n.col);
    PrecFunction pf;
    pf.width = num(n, 1);
    for (std::size_t i = 2; i < n.items.size(); ++i) {
      const auto& r = n.items[i];
      if (!r.is_list || r.items.size() != 3 || !r.items[0].is_atom("rule"))
        throw ParseError("expected (rule \"pat\" (j...))", r.line, r.col);
      PrecRule rule;
      rule.pattern = parse_pattern(r.items[1].atom);
      for (auto& ji : r.items[2].items)
        rule.indices.push_back(static_cast<std::uint16_t>(atom_num(ji)));
      pf.rules.push_back(std::move(rule));
    }
    return pf;
  }

 private:
  const TermDocument* doc_;

  [[noreturn]] static void bad(const sexp::Node& n, const std::string& msg) {
    throw ParseError(msg, n.line, n.col);
  }

  static void need(const sexp::Node& n, std::size_t count, const std::string& msg) {
    if (n.items.size() != count) bad(n, msg);
  }

  static int atom_num(const sexp::Node& n) {
    if (n.is_list || n.atom.empty()) bad(n, "expected a number");
    try {
      return std::stoi(n.atom);
    } catch (...) {
      bad(n, "expected a number, got '" + n.atom + "'");
    }
  }

  static int num(const sexp::Node& n, std::size_t idx) {
    if (idx >= n.items.size()) bad(n, "missing argument");
    return atom_num(n.items[idx]);
  }

  TermPtr named(const sexp::Node& n) {
    if (doc_)
      if (TermPtr t = doc_->find(n.atom)) return t;
    auto& reg = stdlib_builders();
    if (reg.count(n.atom)) return stdlib_term(n.atom);
    bad(n, "unknown name '" + n.atom + "'");
  }

  // (comp g :select (i...) :safe (t...) [:sig (k l)])
  TermPtr comp(const sexp::Node& n) {
    if (n.items.size() < 2) bad(n, "comp needs a function");
    TermPtr g = term(n.items[1]);
    std::vector<int> sel;
    std::vector<TermPtr> safes;
    std::optional<Signature> sig;
    for (std::size_t i = 2; i < n.items.size(); i += 2) {
      if (i + 1 >= n.items.size()) bad(n, "dangling keyword");
      const std::string& kw = n.items[i].atom;
      const auto& val = n.items[i + 1];
      if (kw == ":select") {
        for (auto& x : val.items) sel.push_back(atom_num(x));
      } else if (kw == ":safe") {
        for (auto& x : val.items) safes.push_back(term(x));
      } else if (kw == ":sig") {
        sig = Signature{atom_num(val.items.at(0)), atom_num(val.items.at(1))};
      } else {
        bad(n.items[i], "unknown keyword '" + kw + "'");
      }
    }
    return mk_comp(std::move(g), std::move(sel), std::move(safes), sig);
  }

  // (snrn K M [:relaxed 1] :g g :prec1 p :prec2 p :prec3 p
  //   (case "pat" :h t :t (t...) :s (t...))...)
  TermPtr snrn(const sexp::Node& n) {
    if (n.items.size() < 3) bad(n, "snrn needs k and m");
    int k = num(n, 1), m = num(n, 2);
    TermPtr g;
    PrecFunction p1, p2, p3;
    bool saw1 = false, saw2 = false, saw3 = false;
    SnrnMode mode = SnrnMode::Strict;
    std::vector<SnrnRow> rows;
    std::size_t i = 3;
    while (i < n.items.size()) {
      const auto& it = n.items[i];
      if (it.is_atom(":relaxed")) {
        mode = SnrnMode::Relaxed;
        ++i;
        continue;
      }
      if (it.is_list && !it.items.empty() && it.items[0].is_atom("case")) {
        rows.push_back(snrn_case(it));
        ++i;
        continue;
      }
      if (i + 1 >= n.items.size()) bad(it, "dangling keyword");
      const auto& val = n.items[i + 1];
      if (it.is_atom(":g")) g = term(val);
      else if (it.is_atom(":prec1")) p1 = prec(val), saw1 = true;
      else if (it.is_atom(":prec2")) p2 = prec(val), saw2 = true;
      else if (it.is_atom(":prec3")) p3 = prec(val), saw3 = true;
      else bad(it, "unknown snrn keyword");
      i += 2;
    }
    if (!g || !saw1 || !saw2 || !saw3) bad(n, "snrn needs :g and all three prec functions");
    return mk_snrn(k, m, std::move(g), std::move(rows), std::move(p1), std::move(p2),
                   std::move(p3), mode);
  }

  SnrnRow snrn_case(const sexp::Node& n) {
    SnrnRow row;
    if (n.items.size() < 2) bad(n, "case needs a pattern");
    row.pattern = parse_pattern(n.items[1].atom);
    for (std::size_t i = 2; i < n.items.size(); i += 2) {
      if (i + 1 >= n.items.size()) bad(n, "dangling keyword in case");
      const std::string& kw = n.items[i].atom;
      const auto& val = n.items[i + 1];
      if (kw == ":h") row.h = term(val);
      else if (kw == ":t")
        for (auto& x : val.items) row.t.push_back(term(x));
      else if (kw == ":s")
        for (auto& x : val.items) row.s.push_back(term(x));
      else bad(n.items[i], "unknown case keyword");
    }
    if (!row.h) bad(n, "case needs :h");
    return row;
  }

  // (simul-single J (simul ...) [:polys ("pg" "pf")])
  // (simul-lift J (simul ...) "poly")
  TermPtr simul(const sexp::Node& n, bool lift) {
    if (n.items.size() < 3) bad(n, "simul form needs an index and a system");
    int j = num(n, 1);
    SimultaneousDef d = simul_def(n.items[2]);
    if (lift) {
      if (n.items.size() < 4) bad(n, "simul-lift needs a polynomial");
      Polynomial p = parse_polynomial(n.items[3].atom, d.m);
      auto r = corollary_lift(d, p);
      return r.outputs.at(static_cast<std::size_t>(j - 1));
    }
    std::optional<LengthPolyPair> polys;
    for (std::size_t i = 3; i + 1 < n.items.size(); i += 2) {
      if (n.items[i].is_atom(":polys")) {
        const auto& val = n.items[i + 1];
        polys = LengthPolyPair{parse_polynomial(val.items.at(0).atom, d.m),
                               parse_polynomial(val.items.at(1).atom, d.m)};
      }
    }
    auto r = simultaneous_to_single(d, polys);
    return r.outputs.at(static_cast<std::size_t>(j - 1));
  }

  // (simul :shape theorem21|corollary23 :drive "poly" :m M :h (t...) :g (t...))
  SimultaneousDef simul_def(const sexp::Node& n) {
    if (!n.is_list || n.items.empty() || !n.items[0].is_atom("simul"))
      bad(n, "expected (simul ...)");
    SimultaneousDef d;
    Polynomial drive;
    for (std::size_t i = 1; i + 1 < n.items.size(); i += 2) {
      const std::string& kw = n.items[i].atom;
      const auto& val = n.items[i + 1];
      if (kw == ":shape")
        d.shape = val.atom == "corollary23" ? SimulShape::Corollary23 : SimulShape::Theorem21;
      else if (kw == ":m") d.m = atom_num(val);
      else if (kw == ":drive") drive = parse_polynomial(val.atom);
      else if (kw == ":h")
        for (auto& x : val.items) d.h.push_back(term(x));
      else if (kw == ":g")
        for (auto& x : val.items) d.g.push_back(term(x));
      else bad(n.items[i], "unknown simul keyword");
    }
    d.l = static_cast<int>(d.h.size());
    d.drive = build_cascade_plan(drive, false);
    return d;
  }
};

}  // namespace detail

inline TermPtr parse_term(const std::string& text, const TermDocument* doc = nullptr) {
  sexp::Reader r(text);
  auto nodes = r.read_all();
  if (nodes.size() != 1) throw ParseError("expected exactly one term", 1, 1);
  detail::TermParser p(doc);
  return p.term(nodes[0]);
}

// Documents: a sequence of (def name term) forms.
inline TermDocument parse_document(const std::string& text) {
  sexp::Reader r(text);
  TermDocument doc;
  detail::TermParser p(&doc);
  for (const auto& n : r.read_all()) {
    if (!n.is_list || n.items.size() != 3 || !n.items[0].is_atom("def"))
      throw ParseError("expected (def name term)", n.line, n.col);
    const std::string& name = n.items[1].atom;
    if (doc.find(name)) throw ParseError("duplicate definition '" + name + "'", n.line, n.col);
    doc.defs.emplace_back(name, p.term(n.items[2]));
  }
  return doc;
}

// ---------------------------------------------------------------------------
// Printing. Multiply referenced nodes are pulled out as auxiliary defs so
// generated DAGs stay linear in size.
// ---------------------------------------------------------------------------

namespace detail {

class TermPrinter {
 public:
  std::string print_doc(const std::string& name, const TermPtr& t) {
    count_refs(t);
    std::ostringstream out;
    emit_shared(t, out);
    out << "(def " << name << " " << show(t) << ")\n";
    return out.str();
  }

  std::string print_inline(const TermPtr& t) {
    // no sharing extraction; suitable for small terms
    return show_node(t, nullptr);
  }

 private:
  std::unordered_map<const Term*, int> refs_;
  std::unordered_map<const Term*, std::string> names_;
  std::unordered_set<const Term*> visited_;
  int next_id_ = 0;

  void count_refs(const TermPtr& t) {
    if (++refs_[t.get()] > 1) return;
    for (auto& c : children(*t)) count_refs(c);
  }

  static bool compound(const Term& t) {
    return t.kind == TermKind::Comp || t.kind == TermKind::Srn || t.kind == TermKind::Snrn;
  }

  void emit_shared(const TermPtr& t, std::ostringstream& out) {
    if (!visited_.insert(t.get()).second) return;
    for (auto& c : children(*t)) emit_shared(c, out);
    if (refs_[t.get()] > 1 && compound(*t)) {
      std::string nm = "aux" + std::to_string(next_id_++);
      out << "(def " << nm << " " << show_node(t) << ")\n";
      names_[t.get()] = nm;
    }
  }

  std::string show(const TermPtr& t) {
    auto it = names_.find(t.get());
    if (it != names_.end()) return it->second;
    return show_node(t);
  }

  std::string show_node(const TermPtr& t, const std::string* = nullptr) {
    std::ostringstream o;
    switch (t->kind) {
      case TermKind::Zero:
        o << "(zero " << t->sig.normals << " " << t->sig.safes << ")";
        break;
      case TermKind::Proj:
        o << "(proj " << t->sig.normals << " " << t->sig.safes << " " << t->proj << ")";
        break;
      case TermKind::Succ: o << "(succ " << t->bit << ")"; break;
      case TermKind::Pred: o << "(pred)"; break;
      case TermKind::Cond: o << "(cond)"; break;
      case TermKind::Comp: {
        o << "(comp " << show(t->g) << " :select (";
        for (std::size_t i = 0; i < t->normal_select.size(); ++i)
          o << (i ? " " : "") << t->normal_select[i];
        o << ") :safe (";
        for (std::size_t i = 0; i < t->safe_args.size(); ++i)
          o << (i ? " " : "") << show(t->safe_args[i]);
        o << ") :sig (" << t->sig.normals << " " << t->sig.safes << "))";
        break;
      }
      case TermKind::Srn:
        o << "(srn " << show(t->g) << " " << show(t->h0) << " " << show(t->h1) << ")";
        break;
      case TermKind::Snrn: {
        o << "(snrn " << t->rec_k << " " << t->pass_m;
        if (t->mode == SnrnMode::Relaxed) o << " :relaxed";
        o << " :g " << show(t->g);
        o << " :prec1 " << show_prec(t->prec1);
        o << " :prec2 " << show_prec(t->prec2);
        o << " :prec3 " << show_prec(t->prec3);
        for (auto& row : t->rows) {
          o << " (case \"" << pattern_string(row.pattern) << "\" :h " << show(row.h) << " :t (";
          for (std::size_t i = 0; i < row.t.size(); ++i) o << (i ? " " : "") << show(row.t[i]);
          o << ") :s (";
          for (std::size_t i = 0; i < row.s.size(); ++i) o << (i ? " " : "") << show(row.s[i]);
          o << "))";
        }
        o << ")";
        break;
      }
    }
    return o.str();
  }

  static std::string show_prec(const PrecFunction& pf) {
    std::ostringstream o;
    o << "(prec " << pf.width;
    for (auto& r : pf.rules) {
      o << " (rule \"" << pattern_string(r.pattern) << "\" (";
      for (std::size_t i = 0; i < r.indices.size(); ++i) o << (i ? " " : "") << r.indices[i];
      o << "))";
    }
    o << ")";
    return o.str();
  }
};

}  // namespace detail

inline std::string print_term(const TermPtr& t) {
  detail::TermPrinter p;
  return p.print_inline(t);
}

inline std::string print_document(const std::string& name, const TermPtr& t) {
  detail::TermPrinter p;
  return p.print_doc(name, t);
}

// ---------------------------------------------------------------------------
// TM spec files: {"states": m, "delta": [[q, read, q', write, move], ...]}
// with symbols "0"/"1"/"B" and moves "L"/"H"/"R".
// ---------------------------------------------------------------------------

inline TMSpec parse_tm_json(const std::string& text);
inline std::string tm_to_json(const TMSpec& tm);

}  // namespace snrn

#include <json.hpp>

namespace snrn {

inline TMSpec parse_tm_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  TMSpec tm;
  tm.state_count = j.at("states").get<int>();
  auto sym = [](const std::string& s) {
    if (s == "0") return TmSym::S0;
    if (s == "1") return TmSym::S1;
    if (s == "B") return TmSym::B;
    throw ArgumentError("tm: bad symbol '" + s + "'");
  };
  auto dir = [](const std::string& s) {
    if (s == "L") return TmDir::Left;
    if (s == "H") return TmDir::Halt;
    if (s == "R") return TmDir::Right;
    throw ArgumentError("tm: bad move '" + s + "'");
  };
  for (const auto& row : j.at("delta")) {
    int q = row.at(0).get<int>();
    TmSym read = sym(row.at(1).get<std::string>());
    TmRule rule{row.at(2).get<int>(), sym(row.at(3).get<std::string>()),
                dir(row.at(4).get<std::string>())};
    if (q < 1 || q > tm.state_count) throw ArgumentError("tm: state out of range");
    if (rule.next_state < 0 || rule.next_state > tm.state_count)
      throw ArgumentError("tm: next state out of range");
    tm.delta[{q, read}] = rule;
  }
  return tm;
}

inline std::string tm_to_json(const TMSpec& tm) {
  nlohmann::json j;
  j["states"] = tm.state_count;
  auto sym = [](TmSym s) {
    return s == TmSym::S0 ? "0" : s == TmSym::S1 ? "1" : "B";
  };
  auto dir = [](TmDir d) { return d == TmDir::Left ? "L" : d == TmDir::Halt ? "H" : "R"; };
  j["delta"] = nlohmann::json::array();
  for (const auto& [key, rule] : tm.delta)
    j["delta"].push_back({key.first, sym(key.second), rule.next_state, sym(rule.write),
                          dir(rule.move)});
  return j.dump(2);
}

}  // namespace snrn
