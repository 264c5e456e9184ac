#pragma once

#include <algorithm>
#include <atomic>
#include <thread>
#include <string>
#include <unordered_map>
#include <vector>

#include "snrn/eval.hpp"
#include "snrn/measure.hpp"

namespace snrn {

// Constants attached to a term: |f(x;a)| <= 2^(lengthC * (Sigma + 1)) + max|a|
// and cost(f) <= 2^(timeC * (Sigma_d + 1)) * max(2, |a|). Derived
// structurally, validated empirically; deliberately over-approximate.
struct BoundCertificate {
  Nat length_c = 1;
  Nat time_c = 1;
  Nat time_d = 1;
  std::vector<std::string> provenance;
};

namespace detail {

struct CertDeriver {
  std::unordered_map<const Term*, Nat> length_memo;
  std::unordered_map<const Term*, std::pair<Nat, Nat>> time_memo;
  std::vector<std::string>* trace = nullptr;

  Nat length(const TermPtr& t) {
    auto it = length_memo.find(t.get());
    if (it != length_memo.end()) return it->second;
    Nat c;
    switch (t->kind) {
      case TermKind::Zero:
      case TermKind::Proj:
      case TermKind::Succ:
      case TermKind::Pred:
      case TermKind::Cond:
        c = 1;
        break;
      case TermKind::Comp: {
        c = length(t->g) + 1;
        for (auto& h : t->safe_args) c += length(h);
        break;
      }
      case TermKind::Srn: {
        Nat m = length(t->g);
        m = std::max(m, length(t->h0));
        m = std::max(m, length(t->h1));
        c = m + 2;
        break;
      }
      case TermKind::Snrn: {
        Nat m = length(t->g);
        for (auto& row : t->rows) {
          m = std::max(m, length(row.h));
          for (auto& x : row.t) m = std::max(m, length(x));
          for (auto& x : row.s) m = std::max(m, length(x));
        }
        c = m + 2;
        break;
      }
    }
    if (trace)
      trace->push_back(std::string(kind_name(t->kind)) + " length_c=" + c.str());
    length_memo.emplace(t.get(), c);
    return c;
  }

  std::pair<Nat, Nat> time(const TermPtr& t) {
    auto it = time_memo.find(t.get());
    if (it != time_memo.end()) return it->second;
    const Nat arity = t->sig.normals + t->sig.safes;
    std::pair<Nat, Nat> cd;
    switch (t->kind) {
      case TermKind::Zero:
      case TermKind::Proj:
      case TermKind::Succ:
      case TermKind::Pred:
      case TermKind::Cond:
        cd = {1, std::max<Nat>(arity, 1)};
        break;
      case TermKind::Comp: {
        auto g = time(t->g);
        Nat c = g.first + length(t) + 1;
        Nat d = std::max(g.second, arity);
        for (auto& h : t->safe_args) {
          auto hc = time(h);
          c += hc.first;
          d = std::max(d, hc.second);
        }
        cd = {c, d};
        break;
      }
      case TermKind::Srn:
      case TermKind::Snrn: {
        const Nat l = t->sig.safes;
        Nat c = std::max<Nat>(l + 1, length(t) + 1);
        Nat d = arity;
        auto fold = [&](const TermPtr& x) {
          auto xc = time(x);
          c = std::max(c, xc.first);
          d = std::max(d, xc.second);
        };
        fold(t->g);
        if (t->kind == TermKind::Srn) {
          fold(t->h0);
          fold(t->h1);
        } else {
          for (auto& row : t->rows) {
            fold(row.h);
            for (auto& x : row.t) fold(x);
            for (auto& x : row.s) fold(x);
          }
        }
        cd = {2 * c, 2 * d};
        break;
      }
    }
    if (trace)
      trace->push_back(std::string(kind_name(t->kind)) + " time_c=" + cd.first.str() +
                       " time_d=" + cd.second.str());
    time_memo.emplace(t.get(), cd);
    return cd;
  }
};

}  // namespace detail

inline BoundCertificate derive_length_certificate(const TermPtr& t, bool with_trace = false) {
  detail::CertDeriver d;
  BoundCertificate cert;
  if (with_trace) d.trace = &cert.provenance;
  cert.length_c = d.length(t);
  return cert;
}

inline BoundCertificate derive_time_certificate(const TermPtr& t, bool with_trace = false) {
  detail::CertDeriver d;
  BoundCertificate cert;
  if (with_trace) d.trace = &cert.provenance;
  cert.length_c = d.length(t);
  auto cd = d.time(t);
  cert.time_c = cd.first;
  cert.time_d = cd.second;
  return cert;
}

struct SampleBox {
  Nat normal_limit = 8;  // exclusive
  Nat safe_limit = 16;   // exclusive
  EvalLimits limits;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct BoundWitness {
  std::vector<Nat> normals, safes;
  Nat observed;  // value length (length check) or cost (time check)
};

struct BoundReport {
  bool ok = true;
  Nat points = 0;
  Nat min_headroom = 0;  // bits of slack at the tightest point
  bool headroom_set = false;
  std::vector<BoundWitness> violations;
};

namespace detail {

inline std::vector<std::vector<Nat>> box_tuples(int arity, const Nat& limit) {
  std::vector<std::vector<Nat>> out;
  std::vector<Nat> cur(static_cast<std::size_t>(arity), Nat(0));
  while (true) {
    out.push_back(cur);
    std::size_t i = 0;
    for (; i < cur.size(); ++i) {
      if (++cur[i] < limit) break;
      cur[i] = 0;
    }
    if (i == cur.size()) break;
  }
  return out;
}

inline void note_headroom(BoundReport& rep, const Nat& have, const Nat& need) {
  Nat head = have > need ? have - need : Nat(0);
  if (!rep.headroom_set || head < rep.min_headroom) {
    rep.min_headroom = head;
    rep.headroom_set = true;
  }
}

// Sample points are independent; shards run on worker threads and the
// reports merge deterministically.
template <typename PointFn>
BoundReport sharded_box_check(int k, int l, const SampleBox& box, PointFn&& fn) {
  auto normals = detail::box_tuples(k, box.normal_limit);
  auto safes = detail::box_tuples(l, box.safe_limit);
  unsigned workers = box.threads ? box.threads : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(normals.size())));
  std::vector<BoundReport> parts(workers);
  std::atomic<std::size_t> next{0};
  auto run = [&](unsigned w) {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= normals.size()) break;
      for (const auto& as : safes) fn(parts[w], normals[i], as);
    }
  };
  if (workers == 1) {
    run(0);
    return parts[0];
  }
  std::vector<std::thread> ts;
  for (unsigned w = 0; w < workers; ++w) ts.emplace_back(run, w);
  for (auto& t : ts) t.join();
  BoundReport rep;
  for (auto& p : parts) {
    rep.ok = rep.ok && p.ok;
    rep.points += p.points;
    if (p.headroom_set) note_headroom(rep, p.min_headroom, Nat(0));
    rep.violations.insert(rep.violations.end(), p.violations.begin(), p.violations.end());
  }
  return rep;
}

}  // namespace detail

// |f(x;a)| <= 2^(c (Sigma(k,x)+1)) + max|a| over the whole box.
inline BoundReport check_length_bound(const TermPtr& t, const BoundCertificate& cert,
                                      const SampleBox& box) {
  const int k = t->sig.normals, l = t->sig.safes;
  return detail::sharded_box_check(
      k, l, box, [&](BoundReport& rep, const std::vector<Nat>& xs, const std::vector<Nat>& as) {
        auto out = eval(t, xs, as, box.limits);
        Nat value_len = bit_length(out.value);
        Nat max_a = 0;
        for (auto& a : as) max_a = std::max(max_a, Nat(bit_length(a)));
        Nat exponent = cert.length_c * (sum_measure(k, xs, {}) + 1);
        ++rep.points;
        Nat excess = value_len > max_a ? value_len - max_a : Nat(0);
        bool ok = le_pow2(excess, exponent);
        Nat need = excess.is_zero() ? Nat(0) : Nat(bit_length(excess - 1));
        detail::note_headroom(rep, exponent, need);
        if (!ok) {
          rep.ok = false;
          rep.violations.push_back({xs, as, value_len});
        }
      });
}

// cost(f) <= 2^(c (Sigma(d,x)+1)) * max(2,|a|) over the whole box.
inline BoundReport check_time_bound(const TermPtr& t, const BoundCertificate& cert,
                                    const SampleBox& box) {
  const int k = t->sig.normals, l = t->sig.safes;
  if (cert.time_d < k) throw ArgumentError("check_time_bound: d below the arity");
  long long d = cert.time_d.convert_to<long long>();
  return detail::sharded_box_check(
      k, l, box, [&](BoundReport& rep, const std::vector<Nat>& xs, const std::vector<Nat>& as) {
        auto out = eval(t, xs, as, box.limits);
        Nat max2 = 2;
        for (auto& a : as) max2 = std::max(max2, Nat(bit_length(a)));
        Nat exponent = cert.time_c * (sum_measure(d, xs, {}) + 1);
        Nat q = (out.cost + max2 - 1) / max2;  // ceil
        ++rep.points;
        bool ok = le_pow2(q, exponent);
        Nat need = q <= 1 ? Nat(0) : Nat(bit_length(q - 1));
        detail::note_headroom(rep, exponent, need);
        if (!ok) {
          rep.ok = false;
          rep.violations.push_back({xs, as, out.cost});
        }
      });
}

struct PredDecreaseReport {
  bool ok = true;
  unsigned long long tuples = 0;
  unsigned long long predecessors = 0;
  std::vector<std::pair<std::vector<Nat>, std::vector<Nat>>> violations;
};

// Exhaustively enumerates the predecessor set of every (y,x) tuple with
// entries < limit and asserts the measure strictly decreases at d.
inline PredDecreaseReport check_pred_decrease(int k, int m, long long d,
                                              unsigned long long limit) {
  if (d < k + m) throw ArgumentError("check_pred_decrease: d must be >= k+m");
  PredDecreaseReport rep;
  const int K = k + m;
  std::vector<unsigned long long> tup(static_cast<std::size_t>(K), 0);
  auto len = [](unsigned long long v) {
    int b = 0;
    while (v) { ++b; v >>= 1; }
    return b;
  };
  auto measure = [&](const std::vector<unsigned long long>& t) {
    unsigned long long X = 0;
    for (auto v : t) X = std::max<unsigned long long>(X, static_cast<unsigned long long>(len(v)));
    X += 1;
    // X^(d-i) stays small for the exhaustive ranges this is used with
    std::vector<unsigned long long> pw(static_cast<std::size_t>(d + 1), 1);
    for (long long i = 1; i <= d; ++i)
      pw[static_cast<std::size_t>(i)] = pw[static_cast<std::size_t>(i - 1)] * X;
    unsigned long long sum = 0;
    for (int i = 1; i <= k; ++i)
      sum += pw[static_cast<std::size_t>(d - i)] *
             static_cast<unsigned long long>(len(t[static_cast<std::size_t>(i - 1)]));
    for (int i = 1; i <= m; ++i)
      sum += pw[static_cast<std::size_t>(d - k - i)] *
             static_cast<unsigned long long>(len(t[static_cast<std::size_t>(k + i - 1)]));
    return sum;
  };
  auto to_nat = [](const std::vector<unsigned long long>& t) {
    std::vector<Nat> out;
    for (auto v : t) out.push_back(Nat(v));
    return out;
  };
  std::vector<unsigned long long> cand(static_cast<std::size_t>(K));
  while (true) {
    bool some_y = false;
    for (int i = 0; i < k; ++i) some_y = some_y || tup[static_cast<std::size_t>(i)] != 0;
    if (some_y) {
      ++rep.tuples;
      unsigned long long here = measure(tup);
      // universe of fill values (deduplicated)
      std::vector<unsigned long long> y_univ, full_univ;
      for (int i = 0; i < K; ++i) {
        unsigned long long v = tup[static_cast<std::size_t>(i)];
        if (i < k) {
          y_univ.push_back(v);
          y_univ.push_back(v >> 1);
        }
        full_univ.push_back(v);
        full_univ.push_back(v >> 1);
      }
      auto dedupe = [](std::vector<unsigned long long>& u) {
        std::sort(u.begin(), u.end());
        u.erase(std::unique(u.begin(), u.end()), u.end());
      };
      dedupe(y_univ);
      dedupe(full_univ);
      for (int n = 0; n < k; ++n) {
        if (tup[static_cast<std::size_t>(n)] == 0) continue;
        for (int i = 0; i < n; ++i) cand[static_cast<std::size_t>(i)] = tup[static_cast<std::size_t>(i)];
        cand[static_cast<std::size_t>(n)] = tup[static_cast<std::size_t>(n)] >> 1;
        auto fill = [&](auto&& self, int pos) -> void {
          if (pos == K) {
            ++rep.predecessors;
            if (measure(cand) >= here) {
              rep.ok = false;
              if (rep.violations.size() < 8)
                rep.violations.push_back({to_nat(cand), to_nat(tup)});
            }
            return;
          }
          const auto& univ = pos < k ? y_univ : full_univ;
          for (auto v : univ) {
            cand[static_cast<std::size_t>(pos)] = v;
            self(self, pos + 1);
          }
        };
        fill(fill, n + 1);
      }
    }
    int i = 0;
    for (; i < K; ++i) {
      if (++tup[static_cast<std::size_t>(i)] < limit) break;
      tup[static_cast<std::size_t>(i)] = 0;
    }
    if (i == K) break;
  }
  return rep;
}

}  // namespace snrn
