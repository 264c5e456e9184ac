// Command line front end: checking, evaluation, machine compilation and
// bound reports over term documents.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "snrn/bounds.hpp"
#include "snrn/io.hpp"

using namespace snrn;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// "std" names the built-in registry; anything else is a document file
TermPtr resolve(const std::string& file, const std::string& name, TermDocument& doc) {
  if (file == "std") return stdlib_term(name);
  doc = parse_document(slurp(file));
  TermPtr t = doc.find(name);
  if (!t) throw ArgumentError("no definition '" + name + "' in " + file);
  return t;
}

std::vector<Nat> parse_list(const std::string& text) {
  std::vector<Nat> out;
  std::string cur;
  for (char c : text + ",") {
    if (c == ',' || c == ' ') {
      if (!cur.empty()) out.push_back(parse_nat(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  return out;
}

int run_check(const std::string& file) {
  auto doc = parse_document(slurp(file));
  bool all_ok = true;
  for (auto& [name, term] : doc.defs) {
    auto rep = check_term(term);
    if (rep.ok) {
      std::cout << name << ": ok " << to_string(rep.signature) << "\n";
    } else {
      all_ok = false;
      std::cout << name << ": FAILED\n";
      for (auto& v : rep.violations)
        std::cerr << "  " << path_string(v.path) << " " << v.kind << ": " << v.detail
                  << "\n";
    }
  }
  return all_ok ? 0 : 1;
}

int run_eval(const std::string& file, const std::string& name, const std::string& normals,
             const std::string& safes, EvalLimits lim, bool tracing) {
  TermDocument doc;
  TermPtr t = resolve(file, name, doc);
  auto rep = check_term(t);
  if (!rep.ok) {
    std::cerr << "term does not check\n";
    for (auto& v : rep.violations)
      std::cerr << "  " << path_string(v.path) << " " << v.kind << ": " << v.detail << "\n";
    return 1;
  }
  auto xs = parse_list(normals), as = parse_list(safes);
  if (tracing) {
    auto result = trace(t, xs, as, lim);
    for (std::size_t i = 0; i < result.events.size(); ++i) {
      const auto& e = result.events[i];
      std::cerr << (e.base ? "base  " : "unfold") << " path=" << path_string(result.paths[i])
                << " word=" << (e.base ? "-" : word_string(e.word)) << " measure=" << e.measure
                << " normals=(";
      for (std::size_t j = 0; j < e.normals.size(); ++j)
        std::cerr << (j ? " " : "") << e.normals[j];
      std::cerr << ")";
      if (!e.base) {
        const char* tag[3] = {" v1=(", " v2=(", " v3=("};
        for (int p = 0; p < 3 && p < static_cast<int>(e.preds.size()); ++p) {
          std::cerr << tag[p];
          for (std::size_t j = 0; j < e.preds[static_cast<std::size_t>(p)].size(); ++j)
            std::cerr << (j ? " " : "") << e.preds[static_cast<std::size_t>(p)][j];
          std::cerr << ")";
        }
      }
      std::cerr << "\n";
    }
    std::cout << result.outcome.value << "\n";
    std::cerr << "cost=" << result.outcome.cost << " peak_bits=" << result.outcome.peak_bits
              << "\n";
  } else {
    auto out = eval(t, xs, as, lim);
    std::cout << out.value << "\n";
    std::cerr << "cost=" << out.cost << " peak_bits=" << out.peak_bits << "\n";
  }
  return 0;
}

int run_compile_tm(const std::string& file, const std::string& poly_text,
                   const std::string& out_path, int inputs) {
  TMSpec tm = parse_tm_json(slurp(file));
  Polynomial p = parse_polynomial(poly_text, inputs);
  auto compiled = compile_tm_full(tm, p, inputs);
  std::string text = print_document("main", compiled.main);
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    out << text;
    std::cerr << "wrote " << out_path << "\n";
  }
  return 0;
}

int run_bounds(const std::string& file, const std::string& name, const std::string& box_text) {
  TermDocument doc;
  TermPtr t = resolve(file, name, doc);
  auto rep = check_term(t);
  if (!rep.ok) {
    std::cerr << "term does not check\n";
    return 1;
  }
  SampleBox box;
  if (!box_text.empty()) {
    auto parts = parse_list(box_text);
    if (parts.size() != 2) throw ArgumentError("--box expects NORMAL_LIMIT,SAFE_LIMIT");
    box.normal_limit = parts[0];
    box.safe_limit = parts[1];
  }
  auto lcert = derive_length_certificate(t);
  auto tcert = derive_time_certificate(t);
  auto lrep = check_length_bound(t, lcert, box);
  auto trep = check_time_bound(t, tcert, box);
  std::cout << "term " << name << " signature " << to_string(rep.signature) << "\n";
  std::cout << "length: c=" << lcert.length_c << " points=" << lrep.points
            << " min-headroom-bits=" << lrep.min_headroom << " "
            << (lrep.ok ? "ok" : "VIOLATED") << "\n";
  std::cout << "time (abstract-cost): c=" << tcert.time_c << " d=" << tcert.time_d
            << " points=" << trep.points << " min-headroom-bits=" << trep.min_headroom << " "
            << (trep.ok ? "ok" : "VIOLATED") << "\n";
  for (auto& v : lrep.violations) {
    std::cout << "  length witness: normals=(";
    for (auto& n : v.normals) std::cout << n << " ";
    std::cout << ") |value|=" << v.observed << "\n";
  }
  return lrep.ok && trep.ok ? 0 : 1;
}

int run_demo(const std::string& which) {
  if (which == "towers") {
    auto f0 = mk_f0();
    std::cout << "f0(x; a) = 2^(2^|x|) a\n";
    for (int x : {0, 1, 3, 7})
      std::cout << "  f0(" << x << "; 1) = " << eval(f0, {Nat(x)}, {Nat(1)}).value << "\n";
    return 0;
  }
  if (which == "pairing") {
    PairingKit kit = mk_pairing(parse_polynomial("x1"));
    Nat packed = eval(kit.Pi, {Nat(1)}, {Nat(2), Nat(3), Nat(0)}).value;
    std::cout << "Pi(1; 2, 3, 0) = " << packed << "\n";
    std::cout << "Pi1(1; " << packed << ", 0) = "
              << eval(kit.Pi1, {Nat(1)}, {packed, Nat(0)}).value << "\n";
    std::cout << "Pi2(1; " << packed << ", 0) = "
              << eval(kit.Pi2, {Nat(1)}, {packed, Nat(0)}).value << "\n";
    return 0;
  }
  if (which == "tm") {
    TMSpec tm = parse_tm_json(slurp("corpus/increment.json"));
    auto compiled = compile_tm_full(tm, parse_polynomial("x1+2"), 1);
    std::cout << "increment machine, compiled to a closed term:\n";
    for (int x : {0, 1, 3, 7})
      std::cout << "  f(" << x << ") = " << eval(compiled.main, {Nat(x)}, {}).value << "\n";
    return 0;
  }
  std::cerr << "unknown demo '" << which << "' (try: towers, pairing, tm)\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"safe nested recursion on notation: checker, evaluator and machine compiler"};
  app.require_subcommand(1);

  std::string file, name, normals, safes, poly, out_path = "-", box_text, demo_name;
  int inputs = 1;
  EvalLimits lim;
  bool tracing = false;
  std::uint64_t max_cost = 0, max_bits = 0;
  int max_depth = 0;

  auto* check = app.add_subcommand("check", "check every definition in a term file");
  check->add_option("file", file)->required();

  auto* ev = app.add_subcommand("eval", "evaluate NAME from FILE ('std' for built-ins)");
  ev->add_option("file", file)->required();
  ev->add_option("name", name)->required();
  ev->add_option("--normal", normals, "comma separated normal arguments");
  ev->add_option("--safe", safes, "comma separated safe arguments");
  ev->add_option("--max-cost", max_cost);
  ev->add_option("--max-bits", max_bits);
  ev->add_option("--max-depth", max_depth);
  ev->add_flag("--trace", tracing, "emit one line per recursion unfolding");

  auto* ctm = app.add_subcommand("compile-tm", "compile a machine description to a term");
  ctm->add_option("file", file)->required();
  ctm->add_option("--poly", poly, "step bound exponent, e.g. \"x1+2\"")->required();
  ctm->add_option("-o,--output", out_path);
  ctm->add_option("--inputs", inputs, "number of machine inputs");

  auto* bd = app.add_subcommand("bounds", "derive and validate bound certificates");
  bd->add_option("file", file)->required();
  bd->add_option("name", name)->required();
  bd->add_option("--box", box_text, "NORMAL_LIMIT,SAFE_LIMIT (exclusive)");

  auto* dm = app.add_subcommand("demo", "run a canned demonstration");
  dm->add_option("name", demo_name)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (max_cost) lim.max_cost = max_cost;
    if (max_bits) lim.max_bits = max_bits;
    if (max_depth) lim.max_depth = max_depth;
    if (check->parsed()) return run_check(file);
    if (ev->parsed()) return run_eval(file, name, normals, safes, lim, tracing);
    if (ctm->parsed()) return run_compile_tm(file, poly, out_path, inputs);
    if (bd->parsed()) return run_bounds(file, name, box_text);
    if (dm->parsed()) return run_demo(demo_name);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const LimitExceeded& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
