#pragma once

#include <boost/container/small_vector.hpp>

#include <array>
#include <deque>
#include <memory>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "snrn/check.hpp"
#include "snrn/measure.hpp"
#include "snrn/term.hpp"

namespace snrn {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Limit { Cost, Bits, Depth };

struct LimitExceeded : Error {
  Limit which;
  explicit LimitExceeded(Limit w)
      : Error(std::string("limit exceeded: ") +
              (w == Limit::Cost ? "cost" : w == Limit::Bits ? "bits" : "depth")),
        which(w) {}
};

struct EvalLimits {
  // the abstract cost mirrors the fully unshared recursion, so it can be
  // astronomically larger than the work actually done
  Nat max_cost = Nat(1) << 4096;
  std::size_t max_bits = std::size_t(1) << 24;
  int max_depth = 8192;
  std::size_t memo_cap = std::size_t(1) << 22;
};

struct EvalOutcome {
  Nat value;
  Nat cost;  // abstract steps: 1 per initial application / unfolding
  std::size_t peak_bits = 0;
};

struct TraceEvent {
  const Term* node;
  bool base;  // base-case dispatch (max y = 0)
  std::vector<Nat> normals;
  TypeWord word;                        // empty on base events
  std::vector<std::vector<Nat>> preds;  // v1, v2, v3 (empty on base events)
  Nat measure;                          // Sigma(k+m, ...) at this call
};

namespace detail {

// Values are shared within one evaluation only, so a plain reference count
// beats the atomic one.
struct Val {
  Nat n;
  mutable std::uint64_t h = 0;
  mutable bool hashed = false;
  mutable int rc = 1;
  explicit Val(Nat v) : n(std::move(v)) {}
  std::uint64_t hash() const {
    if (!hashed) {
      h = hash_nat(n);
      hashed = true;
    }
    return h;
  }
};

class ValPtr {
 public:
  ValPtr() = default;
  explicit ValPtr(Val* p) : p_(p) {}
  ValPtr(const ValPtr& o) : p_(o.p_) {
    if (p_) ++p_->rc;
  }
  ValPtr(ValPtr&& o) noexcept : p_(o.p_) { o.p_ = nullptr; }
  ValPtr& operator=(const ValPtr& o) {
    if (this != &o) {
      release();
      p_ = o.p_;
      if (p_) ++p_->rc;
    }
    return *this;
  }
  ValPtr& operator=(ValPtr&& o) noexcept {
    if (this != &o) {
      release();
      p_ = o.p_;
      o.p_ = nullptr;
    }
    return *this;
  }
  ~ValPtr() { release(); }
  const Val* operator->() const { return p_; }
  const Val& operator*() const { return *p_; }
  const Val* get() const { return p_; }
  explicit operator bool() const { return p_ != nullptr; }
  bool operator==(const ValPtr& o) const { return p_ == o.p_; }

 private:
  Val* p_ = nullptr;
  void release() {
    if (p_ && --p_->rc == 0) delete p_;
  }
};

using NormVec = boost::container::small_vector<Nat, 8>;
using SafeVec = boost::container::small_vector<ValPtr, 6>;

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  a ^= b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2);
  return a;
}

inline bool same_ptrs(const SafeVec& a, const SafeVec& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a[i] == b[i])) return false;
  return true;
}

inline std::uint64_t norm_hash(const NormVec& ns) {
  std::uint64_t h = ns.size() + 1;
  for (const auto& n : ns) h = mix(h, hash_nat(n));
  return h;
}

// Normal tuples are almost always short and word-sized (safe composition
// never substitutes computed values into normal positions), so memo keys
// store them as inline machine words when possible.
struct NormKey {
  std::uint8_t count = 0;
  bool small = true;
  std::array<std::uint64_t, 8> v{};
  std::vector<Nat> big;  // fallback, empty in the small case

  static NormKey of(const NormVec& ns) {
    NormKey k;
    if (ns.size() <= 8) {
      k.count = static_cast<std::uint8_t>(ns.size());
      for (std::size_t i = 0; i < ns.size(); ++i) {
        const auto& b = ns[i].backend();
        if (b.size() > 1) {
          k.small = false;
          break;
        }
        k.v[i] = b.size() ? static_cast<std::uint64_t>(b.limbs()[0]) : 0;
      }
    } else {
      k.small = false;
    }
    if (!k.small) k.big.assign(ns.begin(), ns.end());
    return k;
  }

  bool matches(const NormVec& ns) const {
    if (small) {
      if (ns.size() != count) return false;
      for (std::uint8_t i = 0; i < count; ++i) {
        const auto& b = ns[i].backend();
        if (b.size() > 1) return false;
        std::uint64_t w = b.size() ? static_cast<std::uint64_t>(b.limbs()[0]) : 0;
        if (w != v[i]) return false;
      }
      return true;
    }
    if (big.size() != ns.size()) return false;
    for (std::size_t i = 0; i < ns.size(); ++i)
      if (big[i] != ns[i]) return false;
    return true;
  }
};

// Open-addressing memo table keyed by (node, normal tuple, safe tuple).
class MemoTable {
 public:
  struct Entry {
    std::uint64_t h;
    const Term* node;
    NormKey normals;
    SafeVec safes;
    ValPtr value;
    Nat cost;
  };

  MemoTable() { slots_.assign(1024, -1); }

  static std::uint64_t hash_of(const Term* node, const NormVec& ns, const SafeVec& ss) {
    std::uint64_t h = reinterpret_cast<std::uintptr_t>(node) * 0x9e3779b97f4a7c15ull;
    h = mix(h, norm_hash(ns));
    for (const auto& s : ss) h = mix(h, s->hash());
    return h;
  }

  Entry* find(std::uint64_t h, const Term* node, const NormVec& ns, const SafeVec& ss) {
    std::size_t mask = slots_.size() - 1;
    for (std::size_t i = static_cast<std::size_t>(h) & mask;; i = (i + 1) & mask) {
      int idx = slots_[i];
      if (idx < 0) return nullptr;
      Entry& e = entries_[static_cast<std::size_t>(idx)];
      if (e.h == h && e.node == node && e.normals.matches(ns) && keys_equal(e.safes, ss))
        return &e;
    }
  }

  void insert(std::uint64_t h, const Term* node, const NormVec& ns, const SafeVec& ss,
              ValPtr value, Nat cost, std::size_t cap) {
    if (entries_.size() >= cap) return;
    if ((entries_.size() + 1) * 10 >= slots_.size() * 7) grow();
    std::size_t mask = slots_.size() - 1;
    std::size_t i = static_cast<std::size_t>(h) & mask;
    while (slots_[i] >= 0) i = (i + 1) & mask;
    slots_[i] = static_cast<int>(entries_.size());
    entries_.push_back({h, node, NormKey::of(ns), ss, std::move(value), std::move(cost)});
  }

  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<int> slots_;
  std::deque<Entry> entries_;

  static bool keys_equal(const SafeVec& a, const SafeVec& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == b[i]) continue;
      if (a[i]->n != b[i]->n) return false;
    }
    return true;
  }

  void grow() {
    std::vector<int> next(slots_.size() * 2, -1);
    std::size_t mask = next.size() - 1;
    for (std::size_t idx = 0; idx < entries_.size(); ++idx) {
      std::size_t i = static_cast<std::size_t>(entries_[idx].h) & mask;
      while (next[i] >= 0) i = (i + 1) & mask;
      next[i] = static_cast<int>(idx);
    }
    slots_ = std::move(next);
  }
};

// Per-evaluation cache of resolved unfolding steps: many calls share the
// same normal tuple with different safe tuples, and the row lookup plus
// predecessor selection only depend on the tuple.
class StepCache {
 public:
  struct Entry {
    std::uint64_t h;
    const Term* node;
    NormKey key;
    const SnrnRow* row;
    NormVec v1;
  };

  StepCache() { slots_.assign(512, -1); }

  Entry* find(std::uint64_t h, const Term* node, const NormVec& ns) {
    std::size_t mask = slots_.size() - 1;
    for (std::size_t i = static_cast<std::size_t>(h) & mask;; i = (i + 1) & mask) {
      int idx = slots_[i];
      if (idx < 0) return nullptr;
      Entry& e = entries_[static_cast<std::size_t>(idx)];
      if (e.h == h && e.node == node && e.key.matches(ns)) return &e;
    }
  }

  const Entry* insert(std::uint64_t h, const Term* node, const NormVec& ns, const SnrnRow* row,
                      NormVec v1) {
    if (entries_.size() >= (std::size_t(1) << 20)) {
      overflow_.push_back({h, node, NormKey::of(ns), row, std::move(v1)});
      return &overflow_.back();
    }
    if ((entries_.size() + 1) * 10 >= slots_.size() * 7) grow();
    std::size_t mask = slots_.size() - 1;
    std::size_t i = static_cast<std::size_t>(h) & mask;
    while (slots_[i] >= 0) i = (i + 1) & mask;
    slots_[i] = static_cast<int>(entries_.size());
    entries_.push_back({h, node, NormKey::of(ns), row, std::move(v1)});
    return &entries_.back();
  }

 private:
  std::vector<int> slots_;
  std::deque<Entry> entries_;
  std::deque<Entry> overflow_;  // uncached past the cap, kept alive for refs

  void grow() {
    std::vector<int> next(slots_.size() * 2, -1);
    std::size_t mask = next.size() - 1;
    for (std::size_t idx = 0; idx < entries_.size(); ++idx) {
      std::size_t i = static_cast<std::size_t>(entries_[idx].h) & mask;
      while (next[i] >= 0) i = (i + 1) & mask;
      next[i] = static_cast<int>(idx);
    }
    slots_ = std::move(next);
  }
};

class Evaluator {
 public:
  Evaluator(const EvalLimits& lim, bool tracing) : lim_(lim), tracing_(tracing) {
    zero_ = ValPtr(new Val(Nat(0)));
  }

  ValPtr run(const TermPtr& t, const std::vector<Nat>& xs, const std::vector<Nat>& as) {
    if (static_cast<int>(xs.size()) != t->sig.normals ||
        static_cast<int>(as.size()) != t->sig.safes)
      throw ArgumentError("eval: argument counts do not match signature " + to_string(t->sig));
    NormVec normals(xs.begin(), xs.end());
    SafeVec safes;
    for (const auto& a : as) safes.push_back(wrap(Nat(a)));
    if (tracing_) index_paths(t);
    return eval(*t, normals, safes);
  }

  Nat cost() const { return cost_; }
  std::size_t peak_bits() const { return peak_; }
  std::vector<TraceEvent>&& take_events() { return std::move(events_); }

  NodePath path_of(const Term* node) const {
    auto it = paths_.find(node);
    return it == paths_.end() ? NodePath{} : it->second;
  }

 private:
  const EvalLimits& lim_;
  bool tracing_;
  Nat cost_ = 0;
  std::size_t peak_ = 0;
  int depth_ = 0;
  ValPtr zero_;
  MemoTable memo_;
  StepCache steps_;
  std::vector<TraceEvent> events_;
  std::unordered_map<const Term*, NodePath> paths_;
  std::unordered_set<std::uint64_t> traced_;

  void index_paths(const TermPtr& root) {
    std::vector<std::pair<TermPtr, NodePath>> stack{{root, {}}};
    while (!stack.empty()) {
      auto [t, p] = stack.back();
      stack.pop_back();
      if (!paths_.emplace(t.get(), p).second) continue;
      auto cs = children(*t);
      for (std::size_t i = 0; i < cs.size(); ++i) {
        NodePath cp = p;
        cp.push_back(static_cast<int>(i));
        stack.push_back({cs[i], cp});
      }
    }
  }

  void bump() {
    ++cost_;
    if (cost_ > lim_.max_cost) throw LimitExceeded(Limit::Cost);
  }

  void add_cost(const Nat& c) {
    cost_ += c;
    if (cost_ > lim_.max_cost) throw LimitExceeded(Limit::Cost);
  }

  ValPtr wrap(Nat n) {
    std::size_t bits = bit_length(n);
    if (bits > lim_.max_bits) throw LimitExceeded(Limit::Bits);
    if (bits > peak_) peak_ = bits;
    return ValPtr(new Val(std::move(n)));
  }

  ValPtr eval(const Term& t, const NormVec& normals, const SafeVec& safes) {
    switch (t.kind) {
      case TermKind::Zero:
        bump();
        return zero_;
      case TermKind::Proj: {
        bump();
        int j = t.proj;
        if (j <= t.sig.normals) return wrap(Nat(normals[static_cast<std::size_t>(j - 1)]));
        return safes[static_cast<std::size_t>(j - t.sig.normals - 1)];
      }
      case TermKind::Succ:
        bump();
        return wrap(append_bit(safes[0]->n, t.bit));
      case TermKind::Pred:
        bump();
        return wrap(half(safes[0]->n));
      case TermKind::Cond:
        bump();
        return is_odd(safes[0]->n) ? safes[2] : safes[1];
      default:
        break;
    }
    if (++depth_ > lim_.max_depth) {
      --depth_;
      throw LimitExceeded(Limit::Depth);
    }
    ValPtr out;
    switch (t.kind) {
      case TermKind::Comp:
        out = t.memo_hint ? memoized(t, normals, safes) : evalComp(t, normals, safes);
        break;
      case TermKind::Snrn:
        // base dispatches onto initial functions skip the table: their keys
        // carry fresh safe values and never repeat
        if (t.base_leaf && snrn_base(t, normals)) {
          bump();
          trace_base(t, normals);
          NormVec xs(normals.begin() + t.rec_k, normals.end());
          out = eval(*t.g, xs, safes);
          break;
        }
        out = memoized(t, normals, safes);
        break;
      case TermKind::Srn:
        out = memoized(t, normals, safes);
        break;
      default:
        --depth_;
        throw Error("eval: unreachable node kind");
    }
    --depth_;
    return out;
  }

  struct NodeStats {
    const Term* node;
    std::uint32_t finds = 0, hits = 0;
    bool disabled = false;
  };
  std::vector<NodeStats> stats_;

  NodeStats& stats_for(const Term* t) {
    for (auto& s : stats_)
      if (s.node == t) return s;
    stats_.push_back({t});
    return stats_.back();
  }

  ValPtr compute(const Term& t, const NormVec& normals, const SafeVec& safes) {
    switch (t.kind) {
      case TermKind::Comp: return evalComp(t, normals, safes);
      case TermKind::Srn: return evalSrn(t, normals, safes);
      default: return evalSnrn(t, normals, safes);
    }
  }

  ValPtr memoized(const Term& t, const NormVec& normals, const SafeVec& safes) {
    NodeStats& st = stats_for(&t);
    // nodes whose calls never repeat (the plain doubling chains) stop
    // paying for the table; values and costs are unaffected
    if (st.disabled) return compute(t, normals, safes);
    std::uint64_t h = MemoTable::hash_of(&t, normals, safes);
    if (MemoTable::Entry* e = memo_.find(h, &t, normals, safes)) {
      ++st.hits;
      // re-add the stored cost so that cost equals the unshared evaluation
      add_cost(e->cost);
      return e->value;
    }
    if (++st.finds >= 256 && st.hits == 0) st.disabled = true;
    Nat before = cost_;
    ValPtr v = compute(t, normals, safes);
    memo_.insert(h, &t, normals, safes, v, cost_ - before, lim_.memo_cap);
    return v;
  }

  ValPtr eval_rec(const Term& t, const NormVec& normals, const SafeVec& safes, Nat& delta) {
    Nat before = cost_;
    ValPtr v = eval(t, normals, safes);
    delta = cost_ - before;
    return v;
  }

  ValPtr evalComp(const Term& t, const NormVec& normals, const SafeVec& safes) {
    bump();
    SafeVec gsafes;
    for (const auto& h : t.safe_args) gsafes.push_back(eval(*h, normals, safes));
    NormVec gnormals;
    for (int idx : t.normal_select) gnormals.push_back(normals[static_cast<std::size_t>(idx - 1)]);
    return eval(*t.g, gnormals, gsafes);
  }

  ValPtr evalSrn(const Term& t, const NormVec& normals, const SafeVec& safes) {
    bump();
    const Nat& y = normals[0];
    if (y.is_zero()) {
      trace_base(t, normals);
      NormVec rest(normals.begin() + 1, normals.end());
      return eval(*t.g, rest, safes);
    }
    trace_srn(t, normals);
    int bit = is_odd(y) ? 1 : 0;
    NormVec child;
    child.push_back(half(y));
    child.insert(child.end(), normals.begin() + 1, normals.end());
    ValPtr prev = eval(t, child, safes);
    SafeVec hsafes = safes;
    hsafes.push_back(std::move(prev));
    return eval(bit ? *t.h1 : *t.h0, child, hsafes);
  }

  static bool matches_tuple(const Pattern& p, const NormVec& normals, std::size_t width) {
    if (p.size() != width) return false;
    for (std::size_t i = 0; i < width; ++i) {
      const Nat& n = normals[i];
      switch (p[i]) {
        case PatSym::Any: break;
        case PatSym::NonZ:
          if (n.is_zero()) return false;
          break;
        case PatSym::Z:
          if (!n.is_zero()) return false;
          break;
        case PatSym::Bit0:
          if (n.is_zero() || is_odd(n)) return false;
          break;
        case PatSym::Bit1:
          if (!is_odd(n)) return false;
          break;
      }
    }
    return true;
  }

  NormVec apply_prec(const PrecFunction& pf, const NormVec& normals, std::size_t k,
                     std::size_t m, SnrnMode mode) {
    const std::size_t width = mode == SnrnMode::Strict ? k : k + m;
    const PrecRule* rule = nullptr;
    for (const auto& r : pf.rules)
      if (matches_tuple(r.pattern, normals, width)) { rule = &r; break; }
    if (!rule) throw Error("snrn: prec function has no rule for this word");
    NormVec out;
    for (std::size_t i = 0; i < width; ++i) {
      std::uint16_t j = rule->indices[i];
      if (j <= width)
        out.push_back(normals[static_cast<std::size_t>(j - 1)]);
      else
        out.push_back(half(normals[static_cast<std::size_t>(j - width - 1)]));
    }
    for (std::size_t i = width; i < k + m; ++i) out.push_back(normals[i]);
    return out;
  }

  static const ValPtr& pick(int slot, const SafeVec& safes, const ValPtr& fval) {
    return slot < static_cast<int>(safes.size()) ? safes[static_cast<std::size_t>(slot)] : fval;
  }

  bool snrn_base(const Term& t, const NormVec& normals) const {
    for (int i = 0; i < t.rec_k; ++i)
      if (!normals[static_cast<std::size_t>(i)].is_zero()) return false;
    return true;
  }

  const SnrnRow* snrn_row(const Term& t, const NormVec& normals) const {
    const std::size_t width =
        t.mode == SnrnMode::Strict ? static_cast<std::size_t>(t.rec_k)
                                   : static_cast<std::size_t>(t.rec_k + t.pass_m);
    for (const auto& r : t.rows)
      if (matches_tuple(r.pattern, normals, width)) return &r;
    throw Error("snrn: no table row for this word");
  }

  // row lookup and predecessor selection for the current tuple, cached;
  // entries live in a deque so the returned pointer stays valid across
  // later inserts
  const StepCache::Entry* resolve_step(const Term& t, const NormVec& tuple, std::size_t k,
                                       std::size_t m) {
    std::uint64_t h =
        mix(reinterpret_cast<std::uintptr_t>(&t) * 0x9e3779b97f4a7c15ull, norm_hash(tuple));
    if (const StepCache::Entry* e = steps_.find(h, &t, tuple)) return e;
    const SnrnRow* row = snrn_row(t, tuple);
    NormVec v1 = apply_prec(t.prec1, tuple, k, m, t.mode);
    return steps_.insert(h, &t, tuple, row, std::move(v1));
  }

  ValPtr evalSnrn(const Term& t, const NormVec& normals0, const SafeVec& safes) {
    const std::size_t k = static_cast<std::size_t>(t.rec_k);
    const std::size_t m = static_cast<std::size_t>(t.pass_m);
    const int km = t.rec_k + t.pass_m;
    const int l = static_cast<int>(safes.size());
    const bool shared_prec = t.precs_shared;
    const bool fast = shared_prec && !tracing_;

    // pass-through chains resolve iteratively; their cost has a closed form
    NormVec v1_storage;
    const NormVec* tuple = &normals0;
    const NormVec* v1 = nullptr;
    long long passes = 0;
    const SnrnRow* row = nullptr;
    while (true) {
      if (snrn_base(t, *tuple)) {
        row = nullptr;
        break;
      }
      if (fast) {
        const StepCache::Entry* e = resolve_step(t, *tuple, k, m);
        row = e->row;
        v1 = &e->v1;
      } else {
        row = snrn_row(t, *tuple);
        v1_storage = apply_prec(t.prec1, *tuple, k, m, t.mode);
        v1 = &v1_storage;
      }
      if (!row->pass_wiring || !fast) break;
      ++passes;
      tuple = v1;
    }

    Nat before_final = cost_;
    ValPtr result;
    if (!row) {
      bump();
      trace_base(t, *tuple);
      NormVec xs(tuple->begin() + static_cast<long>(k), tuple->end());
      result = eval(*t.g, xs, safes);
    } else {
      result = unfold(t, *tuple, *row, *v1, safes, k, m, km, l);
    }
    if (passes > 0) {
      // each pass step costs (2 + 2l) and triples the inner cost
      Nat pow3 = boost::multiprecision::pow(Nat(3), static_cast<unsigned>(passes));
      Nat inner = cost_ - before_final;
      add_cost((pow3 - 1) * inner + Nat(2 + 2 * l) * ((pow3 - 1) / 2));
    }
    return result;
  }

  ValPtr unfold(const Term& t, const NormVec& normals, const SnrnRow& row, const NormVec& v1,
                const SafeVec& safes, std::size_t k, std::size_t m, int km, int l) {
    // direct-projection picks cost one step each; they are batched into a
    // single counter update per unfolding
    long long picked = 1;  // the unfolding itself
    NormVec v2s, v3s;
    const bool shared_prec = t.precs_shared;
    if (!shared_prec) {
      v2s = apply_prec(t.prec2, normals, k, m, t.mode);
      v3s = apply_prec(t.prec3, normals, k, m, t.mode);
    }
    const NormVec& v2 = shared_prec ? v1 : v2s;
    const NormVec& v3 = shared_prec ? v1 : v3s;
    auto tuples_equal = [&](const NormVec& a, const NormVec& b) {
      return &a == &b || a == b;
    };
    if (tracing_) trace_snrn(t, normals, v1, v2, v3);

    // innermost first: the s-stage, then t, then h
    Nat delta3, delta2;
    ValPtr fv3 = eval_rec(t, v3, safes, delta3);
    SafeVec cs;
    {
      SafeVec args;
      bool generic = false;
      for (int slot : row.s_slots)
        if (slot < 0) generic = true;
      if (generic) {
        args = safes;
        args.push_back(fv3);
      }
      for (int i = 0; i < l; ++i) {
        int slot = row.s_slots[static_cast<std::size_t>(i)];
        if (slot >= 0) {
          ++picked;
          cs.push_back(pick(slot, safes, fv3));
        } else {
          cs.push_back(eval(*row.s[static_cast<std::size_t>(i)], v3, args));
        }
      }
    }
    ValPtr fv2;
    if (tuples_equal(v2, v3) && same_ptrs(cs, safes)) {
      add_cost(delta3);
      delta2 = delta3;
      fv2 = fv3;
    } else {
      fv2 = eval_rec(t, v2, cs, delta2);
    }
    SafeVec bs;
    {
      SafeVec args;
      bool generic = false;
      for (int slot : row.t_slots)
        if (slot < 0) generic = true;
      if (generic) {
        args = safes;
        args.push_back(fv2);
      }
      for (int i = 0; i < l; ++i) {
        int slot = row.t_slots[static_cast<std::size_t>(i)];
        if (slot >= 0) {
          ++picked;
          bs.push_back(pick(slot, safes, fv2));
        } else {
          bs.push_back(eval(*row.t[static_cast<std::size_t>(i)], v2, args));
        }
      }
    }
    ValPtr fv1;
    if (tuples_equal(v1, v2) && same_ptrs(bs, cs)) {
      add_cost(delta2);
      fv1 = fv2;
    } else if (tuples_equal(v1, v3) && same_ptrs(bs, safes)) {
      add_cost(delta3);
      fv1 = fv3;
    } else {
      Nat delta1;
      fv1 = eval_rec(t, v1, bs, delta1);
    }
    if (row.h_slot >= 0) {
      add_cost(Nat(picked + 1));
      return pick(row.h_slot, safes, fv1);
    }
    add_cost(Nat(picked));
    SafeVec args = safes;
    args.push_back(std::move(fv1));
    return eval(*row.h, v1, args);
  }

  void trace_base(const Term& t, const NormVec& normals) {
    if (!tracing_) return;
    if (!mark(t, normals)) return;
    TraceEvent ev;
    ev.node = &t;
    ev.base = true;
    ev.normals.assign(normals.begin(), normals.end());
    ev.measure = measure_of(t, normals);
    events_.push_back(std::move(ev));
  }

  void trace_srn(const Term& t, const NormVec& normals) {
    if (!tracing_) return;
    if (!mark(t, normals)) return;
    TraceEvent ev;
    ev.node = &t;
    ev.base = false;
    ev.normals.assign(normals.begin(), normals.end());
    ev.measure = measure_of(t, normals);
    events_.push_back(std::move(ev));
  }

  void trace_snrn(const Term& t, const NormVec& normals, const NormVec& v1, const NormVec& v2,
                  const NormVec& v3) {
    if (!tracing_) return;
    Nat here = measure_of(t, normals);
    // termination witness, checked on every traced unfolding
    for (const NormVec* v : {&v1, &v2, &v3})
      if (measure_of(t, *v) >= here)
        throw Error("termination measure failed to decrease at an unfolding");
    if (!mark(t, normals)) return;
    TraceEvent ev;
    ev.node = &t;
    ev.base = false;
    ev.normals.assign(normals.begin(), normals.end());
    std::vector<Nat> ys(normals.begin(), normals.begin() + t.rec_k);
    std::vector<Nat> all(normals.begin(), normals.end());
    ev.word = t.mode == SnrnMode::Strict ? type_word(ys) : type_word(all);
    for (const NormVec* v : {&v1, &v2, &v3})
      ev.preds.push_back(std::vector<Nat>(v->begin(), v->end()));
    ev.measure = std::move(here);
    events_.push_back(std::move(ev));
  }

  Nat measure_of(const Term& t, const NormVec& normals) {
    std::size_t k = t.kind == TermKind::Snrn ? static_cast<std::size_t>(t.rec_k) : 1;
    std::vector<Nat> ys(normals.begin(), normals.begin() + static_cast<long>(k));
    std::vector<Nat> xs(normals.begin() + static_cast<long>(k), normals.end());
    return sum_measure(static_cast<long long>(normals.size()), ys, xs);
  }

  bool mark(const Term& t, const NormVec& normals) {
    std::uint64_t h = reinterpret_cast<std::uintptr_t>(&t);
    for (const auto& n : normals) h = mix(h, hash_nat(n));
    return traced_.insert(h).second;
  }
};

}  // namespace detail

inline EvalOutcome eval(const TermPtr& t, const std::vector<Nat>& xs,
                        const std::vector<Nat>& as, const EvalLimits& lim = {}) {
  detail::Evaluator ev(lim, false);
  auto v = ev.run(t, xs, as);
  return {v->n, ev.cost(), ev.peak_bits()};
}

struct TraceResult {
  EvalOutcome outcome;
  std::vector<TraceEvent> events;
  std::vector<NodePath> paths;  // parallel to events
};

inline TraceResult trace(const TermPtr& t, const std::vector<Nat>& xs,
                         const std::vector<Nat>& as, const EvalLimits& lim = {}) {
  detail::Evaluator ev(lim, true);
  auto v = ev.run(t, xs, as);
  TraceResult r;
  r.outcome = {v->n, ev.cost(), ev.peak_bits()};
  r.events = ev.take_events();
  for (auto& e : r.events) r.paths.push_back(ev.path_of(e.node));
  return r;
}

}  // namespace snrn
