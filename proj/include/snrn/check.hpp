#pragma once

#include <algorithm>
#include <string>
#include <unordered_map>
#include <vector>

#include "snrn/term.hpp"

namespace snrn {

using NodePath = std::vector<int>;

struct Violation {
  NodePath path;
  std::string kind;
  std::string detail;
};

struct CheckReport {
  bool ok = false;
  Signature signature{};
  std::vector<Violation> violations;
};

inline std::string path_string(const NodePath& p) {
  std::string s = "/";
  for (int i : p) {
    s += std::to_string(i);
    s += '/';
  }
  return s;
}

enum class PrecMode { Strict, Lax };

// Decides whether a prec-function table has the required pivot shape on
// every word of its domain. For the relaxed-SNRN use the pivot (and the
// restricted trailing choices) must stay within the first y_scope
// positions; plain tables pass y_scope = width.
inline CheckReport validate_prec_function(const PrecFunction& pf, PrecMode mode,
                                          int y_scope = -1) {
  CheckReport rep;
  const int K = pf.width;
  if (y_scope < 0) y_scope = K;
  if (K < 1) {
    rep.violations.push_back({{}, "prec-width", "width must be >= 1"});
    return rep;
  }
  for (const auto& r : pf.rules) {
    if (static_cast<int>(r.pattern.size()) != K)
      rep.violations.push_back({{}, "prec-pattern", "pattern width mismatch: " + pattern_string(r.pattern)});
    if (static_cast<int>(r.indices.size()) != K)
      rep.violations.push_back({{}, "prec-row", "row must carry one index per position"});
  }
  if (!rep.violations.empty()) return rep;

  const auto scope = static_cast<std::size_t>(y_scope);
  for_each_domain_word(K, y_scope, [&](const TypeWord& w) {
    const PrecRule* r = pf.lookup(w);
    if (!r) {
      rep.violations.push_back({{}, "prec-total", "no rule for word " + word_string(w)});
      return;
    }
    for (auto j : r->indices)
      if (j < 1 || j > 2 * K) {
        rep.violations.push_back({{}, "prec-index", "index out of range on word " + word_string(w)});
        return;
      }
    // Search for a pivot position n making the row a legal predecessor map.
    bool legal = false;
    for (std::size_t n = 0; n < scope && !legal; ++n) {
      if (w[n] == TypeSymbol::Z) continue;
      bool ok = r->indices[n] == static_cast<std::uint16_t>(K + n + 1);
      for (std::size_t i = 0; ok && i < n; ++i) {
        if (r->indices[i] == i + 1) continue;
        if (mode == PrecMode::Lax && w[i] == TypeSymbol::Z &&
            r->indices[i] == static_cast<std::uint16_t>(K + i + 1))
          continue;  // P(;0) = 0, semantically the identity here
        ok = false;
      }
      for (std::size_t i = n + 1; ok && i < scope; ++i) {
        // trailing y-components must be drawn from the y-universe
        std::uint16_t j = r->indices[i];
        if (!(j <= static_cast<std::uint16_t>(y_scope) ||
              (j > static_cast<std::uint16_t>(K) && j <= static_cast<std::uint16_t>(K + y_scope))))
          ok = false;
      }
      legal = legal || ok;
    }
    if (!legal)
      rep.violations.push_back({{}, "prec-pivot", "no legal pivot decomposition for word " + word_string(w)});
  });

  rep.ok = rep.violations.empty();
  return rep;
}

// Definition of the predecessor set P(y,x): (v,u) is a predecessor of (y,x)
// as a (k+m)-tuple whose first k components also decrease as a k-tuple.
inline bool is_pred(const std::vector<Nat>& vu, const std::vector<Nat>& yx, std::size_t k) {
  if (vu.size() != yx.size()) throw ArgumentError("is_pred: length mismatch");
  if (k > yx.size()) throw ArgumentError("is_pred: k exceeds tuple length");
  const std::size_t K = yx.size();
  std::size_t d = 0;
  while (d < K && vu[d] == yx[d]) ++d;
  if (d == K) return false;  // no strict decrease
  if (d >= k) return false;  // pivot must fall in the y-part
  if (yx[d].is_zero()) return false;
  if (vu[d] != half(yx[d])) return false;
  auto from_universe = [&](const Nat& v, std::size_t limit) {
    for (std::size_t j = 0; j < limit; ++j)
      if (v == yx[j] || v == half(yx[j])) return true;
    return false;
  };
  for (std::size_t i = d + 1; i < K; ++i) {
    std::size_t limit = i < k ? k : K;
    if (!from_universe(vu[i], limit)) return false;
  }
  return true;
}

namespace detail {

class Checker {
 public:
  CheckReport run(const TermPtr& t) {
    CheckReport rep;
    auto sig = check(t, {});
    rep.violations = std::move(viols_);
    rep.ok = rep.violations.empty() && sig.has_value();
    if (sig) rep.signature = *sig;
    return rep;
  }

 private:
  std::unordered_map<const Term*, std::optional<Signature>> memo_;
  std::vector<Violation> viols_;

  void fail(const NodePath& p, std::string kind, std::string detail) {
    viols_.push_back({p, std::move(kind), std::move(detail)});
  }

  std::optional<Signature> check(const TermPtr& t, NodePath path) {
    if (!t) {
      fail(path, "null", "missing subterm");
      return std::nullopt;
    }
    auto it = memo_.find(t.get());
    if (it != memo_.end()) return it->second;
    auto sig = checkNode(*t, path);
    if (sig && *sig != t->sig) {
      fail(path, "signature", "declared " + to_string(t->sig) + " but derived " + to_string(*sig));
      sig = std::nullopt;
    }
    memo_.emplace(t.get(), sig);
    return sig;
  }

  std::optional<Signature> checkNode(const Term& t, const NodePath& path) {
    switch (t.kind) {
      case TermKind::Zero:
        if (t.sig.normals < 0 || t.sig.safes < 0) {
          fail(path, "arity", "negative arity");
          return std::nullopt;
        }
        return t.sig;
      case TermKind::Proj: {
        int total = t.sig.normals + t.sig.safes;
        if (t.proj < 1 || t.proj > total) {
          fail(path, "proj-range", "projection index " + std::to_string(t.proj) +
                                       " outside 1.." + std::to_string(total));
          return std::nullopt;
        }
        return t.sig;
      }
      case TermKind::Succ:
      case TermKind::Pred:
        return Signature{0, 1};
      case TermKind::Cond:
        return Signature{0, 3};
      case TermKind::Comp:
        return checkComp(t, path);
      case TermKind::Srn:
        return checkSrn(t, path);
      case TermKind::Snrn:
        return checkSnrn(t, path);
    }
    return std::nullopt;
  }

  std::optional<Signature> checkComp(const Term& t, const NodePath& path) {
    NodePath p = path;
    p.push_back(0);
    auto gsig = check(t.g, p);
    const int k = t.sig.normals, l = t.sig.safes;
    bool ok = true;
    if (gsig) {
      if (static_cast<int>(t.normal_select.size()) != gsig->normals) {
        fail(path, "comp-select",
             "g expects " + std::to_string(gsig->normals) + " normals, selection has " +
                 std::to_string(t.normal_select.size()));
        ok = false;
      }
      if (static_cast<int>(t.safe_args.size()) != gsig->safes) {
        fail(path, "comp-safe-count",
             "g expects " + std::to_string(gsig->safes) + " safes, got " +
                 std::to_string(t.safe_args.size()));
        ok = false;
      }
    } else {
      ok = false;
    }
    for (int idx : t.normal_select) {
      if (idx >= 1 && idx <= k) continue;
      if (idx > k && idx <= k + l)
        fail(path, "comp-normal-from-safe",
             "normal position fed from safe computation (index " + std::to_string(idx) + ")");
      else
        fail(path, "comp-select-range", "selection index " + std::to_string(idx) +
                                            " outside 1.." + std::to_string(k));
      ok = false;
    }
    for (std::size_t i = 0; i < t.safe_args.size(); ++i) {
      NodePath cp = path;
      cp.push_back(static_cast<int>(i) + 1);
      auto s = check(t.safe_args[i], cp);
      if (!s) {
        ok = false;
      } else if (*s != t.sig) {
        fail(cp, "comp-safe-sig",
             "safe argument has signature " + to_string(*s) + ", outer is " + to_string(t.sig));
        ok = false;
      }
    }
    if (!ok) return std::nullopt;
    return t.sig;
  }

  std::optional<Signature> checkSrn(const Term& t, const NodePath& path) {
    NodePath pg = path, p0 = path, p1 = path;
    pg.push_back(0);
    p0.push_back(1);
    p1.push_back(2);
    auto gs = check(t.g, pg);
    auto h0s = check(t.h0, p0);
    auto h1s = check(t.h1, p1);
    if (!gs || !h0s || !h1s) return std::nullopt;
    Signature want{1 + gs->normals, gs->safes + 1};
    bool ok = true;
    if (*h0s != want) {
      fail(p0, "srn-step-sig", "h0 has " + to_string(*h0s) + ", expected " + to_string(want));
      ok = false;
    }
    if (*h1s != want) {
      fail(p1, "srn-step-sig", "h1 has " + to_string(*h1s) + ", expected " + to_string(want));
      ok = false;
    }
    if (!ok) return std::nullopt;
    return Signature{1 + gs->normals, gs->safes};
  }

  std::optional<Signature> checkSnrn(const Term& t, const NodePath& path) {
    const int k = t.rec_k, m = t.pass_m;
    if (k < 1) {
      fail(path, "snrn-k", "scheme requires at least one recursion position");
      return std::nullopt;
    }
    NodePath pg = path;
    pg.push_back(0);
    auto gs = check(t.g, pg);
    bool ok = true;
    int l = -1;
    if (gs) {
      if (gs->normals != m) {
        fail(pg, "snrn-base-sig", "base has " + to_string(*gs) + ", expected " +
                                      std::to_string(m) + " normals");
        ok = false;
      }
      l = gs->safes;
    } else {
      ok = false;
    }
    const int width = t.mode == SnrnMode::Strict ? k : k + m;
    Signature step{k + m, (l < 0 ? 0 : l) + 1};
    int child = 1;
    for (std::size_t ri = 0; ri < t.rows.size(); ++ri) {
      const auto& row = t.rows[ri];
      if (static_cast<int>(row.pattern.size()) != width) {
        fail(path, "snrn-pattern", "row " + std::to_string(ri) + " pattern width " +
                                       std::to_string(row.pattern.size()) + ", expected " +
                                       std::to_string(width));
        ok = false;
      }
      if (l >= 0 && (static_cast<int>(row.t.size()) != l || static_cast<int>(row.s.size()) != l)) {
        fail(path, "snrn-row-arity", "row " + std::to_string(ri) + " must carry l=" +
                                         std::to_string(l) + " t- and s-components");
        ok = false;
      }
      auto checkStep = [&](const TermPtr& c) {
        NodePath cp = path;
        cp.push_back(child++);
        auto s = check(c, cp);
        if (!s) {
          ok = false;
        } else if (l >= 0 && *s != step) {
          fail(cp, "snrn-step-sig", "component has " + to_string(*s) + ", expected " + to_string(step));
          ok = false;
        }
      };
      checkStep(row.h);
      for (auto& x : row.t) checkStep(x);
      for (auto& x : row.s) checkStep(x);
    }
    // totality of the row table over the word domain
    if (width <= 16) {
      const int scope = t.mode == SnrnMode::Strict ? k : k;
      bool total = true;
      std::string witness;
      for_each_domain_word(width, scope, [&](const TypeWord& w) {
        if (!total) return;
        for (const auto& row : t.rows)
          if (pattern_matches(row.pattern, w)) return;
        total = false;
        witness = word_string(w);
      });
      if (!total) {
        fail(path, "snrn-total", "no row for word " + witness);
        ok = false;
      }
    }
    for (const PrecFunction* pf : {&t.prec1, &t.prec2, &t.prec3}) {
      if (pf->width != width) {
        fail(path, "snrn-prec-width", "prec function width " + std::to_string(pf->width) +
                                          ", expected " + std::to_string(width));
        ok = false;
        continue;
      }
      auto rep = validate_prec_function(*pf, PrecMode::Strict,
                                        t.mode == SnrnMode::Strict ? width : k);
      if (!rep.ok) {
        for (auto& v : rep.violations) fail(path, v.kind, v.detail);
        ok = false;
      }
    }
    if (!ok) return std::nullopt;
    return Signature{k + m, l};
  }
};

}  // namespace detail

// Decides membership of a term tree in the algebra; never throws on
// malformed trees.
inline CheckReport check_term(const TermPtr& t) {
  detail::Checker c;
  return c.run(t);
}

}  // namespace snrn
