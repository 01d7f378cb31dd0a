#pragma once
// Terminating decision procedure for IPC:
//  * contraction-free sequent calculus (G4ip) for provability, in a fast
//    boolean variant with memoisation and a proof-term-extracting variant;
//  * a saturation tableau that constructs finite rooted countermodels.
// The two sides cross-check each other inside decide_ipc.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "formula.hpp"
#include "kripke.hpp"
#include "nd.hpp"

namespace iptk {

// ---------------------------------------------------------------------------
// boolean G4ip with global (per-instance) memo

class G4Prover {
 public:
  bool provable(Formula goal) { return prove({}, goal); }

  bool provable_from(std::vector<Formula> ctx, Formula goal) {
    std::sort(ctx.begin(), ctx.end());
    ctx.erase(std::unique(ctx.begin(), ctx.end()), ctx.end());
    return prove(std::move(ctx), goal);
  }

  size_t cache_size() const { return memo_.size(); }

 private:
  struct Key {
    std::vector<uint64_t> ids;  // sorted ctx ids then goal id
    bool operator==(const Key& o) const { return ids == o.ids; }
  };
  struct KeyHash {
    size_t operator()(const Key& k) const {
      size_t h = 1469598103934665603ull;
      for (uint64_t x : k.ids) h = (h ^ x) * 1099511628211ull;
      return h;
    }
  };

  bool prove(std::vector<Formula> ctx, Formula goal) {
    // saturate invertible steps
    for (;;) {
      for (auto& c : ctx)
        if (c == goal || c.is_bot()) return true;
      if (goal.is_imp()) {
        insert(ctx, goal.left());
        goal = goal.right();
        continue;
      }
      if (goal.is_and())
        return prove(ctx, goal.left()) && prove(ctx, goal.right());
      bool changed = false;
      for (size_t i = 0; i < ctx.size() && !changed; ++i) {
        Formula c = ctx[i];
        if (c.is_and()) {
          ctx.erase(ctx.begin() + i);
          insert(ctx, c.left());
          insert(ctx, c.right());
          changed = true;
        } else if (c.is_imp()) {
          Formula A = c.left(), B = c.right();
          if (A.is_bot()) {
            ctx.erase(ctx.begin() + i);
            changed = true;
          } else if (A.is_var() && has(ctx, A)) {
            ctx.erase(ctx.begin() + i);
            insert(ctx, B);
            changed = true;
          } else if (A.is_and()) {
            ctx.erase(ctx.begin() + i);
            insert(ctx, Formula::imp(A.left(), Formula::imp(A.right(), B)));
            changed = true;
          } else if (A.is_or()) {
            ctx.erase(ctx.begin() + i);
            insert(ctx, Formula::imp(A.left(), B));
            insert(ctx, Formula::imp(A.right(), B));
            changed = true;
          }
        }
      }
      if (changed) continue;
      // invertible disjunction split on the left
      for (size_t i = 0; i < ctx.size(); ++i) {
        if (ctx[i].is_or()) {
          Formula c = ctx[i];
          auto ctx1 = ctx;
          ctx1.erase(ctx1.begin() + i);
          auto ctx2 = ctx1;
          insert(ctx1, c.left());
          insert(ctx2, c.right());
          return prove(std::move(ctx1), goal) && prove(std::move(ctx2), goal);
        }
      }
      break;
    }
    // stable: memo lookup
    Key key;
    key.ids.reserve(ctx.size() + 1);
    for (auto& c : ctx) key.ids.push_back(c.id());
    key.ids.push_back(goal.id());
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;

    bool res = false;
    if (goal.is_or())
      res = prove(ctx, goal.left()) || prove(ctx, goal.right());
    if (!res) {
      // L->-> : context entries (A->B)->C with A->B non-atomic premise
      for (size_t i = 0; i < ctx.size() && !res; ++i) {
        Formula c = ctx[i];
        if (c.is_imp() && c.left().is_imp()) {
          Formula AB = c.left(), C = c.right();
          auto ctx1 = ctx;
          ctx1.erase(ctx1.begin() + i);
          auto ctx2 = ctx1;
          insert(ctx1, Formula::imp(AB.right(), C));
          insert(ctx2, C);
          res = prove(std::move(ctx1), AB) && prove(std::move(ctx2), goal);
        }
      }
    }
    if (memo_.size() > kMaxMemo) memo_.clear();
    memo_.emplace(std::move(key), res);
    return res;
  }

  static bool has(const std::vector<Formula>& ctx, Formula f) {
    return std::binary_search(ctx.begin(), ctx.end(), f);
  }
  static void insert(std::vector<Formula>& ctx, Formula f) {
    auto it = std::lower_bound(ctx.begin(), ctx.end(), f);
    if (it == ctx.end() || *it != f) ctx.insert(it, f);
  }

  static constexpr size_t kMaxMemo = 1u << 22;
  std::unordered_map<Key, bool, KeyHash> memo_;
};

// ---------------------------------------------------------------------------
// proof-term extraction (same search, context carries terms)

class G4TermProver {
 public:
  // returns a closed term proving goal (given hypothesis terms in ctx), or null
  std::optional<Tm> prove_term(Formula goal) { return prove({}, goal); }

  std::optional<Tm> prove_term_from(std::vector<std::pair<Formula, Tm>> ctx,
                                    Formula goal) {
    return prove(std::move(ctx), goal);
  }

 private:
  using Ctx = std::vector<std::pair<Formula, Tm>>;

  std::optional<Tm> prove(Ctx ctx, Formula goal) {
    if (!fast_.provable_from(fmls(ctx), goal)) return std::nullopt;
    for (;;) {
      for (auto& [f, t] : ctx) {
        if (f == goal) return t;
        if (f.is_bot()) return abort(t, goal);
      }
      if (goal.is_imp()) {
        int id;
        Tm h = hg_.fresh(goal.left(), id);
        Ctx c2 = ctx;
        c2.push_back({goal.left(), h});
        auto body = prove(std::move(c2), goal.right());
        if (!body) return std::nullopt;
        return lam(h, *body);
      }
      if (goal.is_and()) {
        auto a = prove(ctx, goal.left());
        if (!a) return std::nullopt;
        auto b = prove(ctx, goal.right());
        if (!b) return std::nullopt;
        return pair(*a, *b);
      }
      bool changed = false;
      for (size_t i = 0; i < ctx.size() && !changed; ++i) {
        Formula f = ctx[i].first;
        Tm t = ctx[i].second;
        if (f.is_and()) {
          ctx.erase(ctx.begin() + i);
          ctx.push_back({f.left(), fst(t)});
          ctx.push_back({f.right(), snd(t)});
          changed = true;
        } else if (f.is_imp()) {
          Formula A = f.left(), B = f.right();
          if (A.is_bot()) {
            ctx.erase(ctx.begin() + i);
            changed = true;
          } else if (A.is_var()) {
            for (auto& [g, gt] : ctx) {
              if (g == A) {
                Tm bt = app(t, gt);
                ctx.erase(ctx.begin() + i);
                ctx.push_back({B, bt});
                changed = true;
                break;
              }
            }
          } else if (A.is_and()) {
            int ia, ib;
            Tm ha = hg_.fresh(A.left(), ia), hb = hg_.fresh(A.right(), ib);
            Tm t2 = lam(ha, lam(hb, app(t, pair(ha, hb))));
            ctx.erase(ctx.begin() + i);
            ctx.push_back({t2->type, t2});
            changed = true;
          } else if (A.is_or()) {
            int ia, ib;
            Tm ha = hg_.fresh(A.left(), ia), hb = hg_.fresh(A.right(), ib);
            Tm t1 = lam(ha, app(t, inl(ha, A.right())));
            Tm t2 = lam(hb, app(t, inr(hb, A.left())));
            ctx.erase(ctx.begin() + i);
            ctx.push_back({t1->type, t1});
            ctx.push_back({t2->type, t2});
            changed = true;
          }
        }
      }
      if (changed) continue;
      for (size_t i = 0; i < ctx.size(); ++i) {
        if (ctx[i].first.is_or()) {
          Formula f = ctx[i].first;
          Tm t = ctx[i].second;
          Ctx base = ctx;
          base.erase(base.begin() + i);
          int ia, ib;
          Tm ha = hg_.fresh(f.left(), ia), hb = hg_.fresh(f.right(), ib);
          Ctx c1 = base, c2 = base;
          c1.push_back({f.left(), ha});
          c2.push_back({f.right(), hb});
          auto t1 = prove(std::move(c1), goal);
          if (!t1) return std::nullopt;
          auto t2 = prove(std::move(c2), goal);
          if (!t2) return std::nullopt;
          return cases(t, lam(ha, *t1), lam(hb, *t2));
        }
      }
      break;
    }
    if (goal.is_or()) {
      if (fast_.provable_from(fmls(ctx), goal.left())) {
        auto a = prove(ctx, goal.left());
        if (a) return inl(*a, goal.right());
      }
      if (fast_.provable_from(fmls(ctx), goal.right())) {
        auto b = prove(ctx, goal.right());
        if (b) return inr(*b, goal.left());
      }
    }
    for (size_t i = 0; i < ctx.size(); ++i) {
      Formula f = ctx[i].first;
      if (f.is_imp() && f.left().is_imp()) {
        Formula AB = f.left(), C = f.right();
        Tm t = ctx[i].second;
        Ctx base = ctx;
        base.erase(base.begin() + i);
        // g : B->C  built from t
        int ibv, iav;
        Tm hb = hg_.fresh(AB.right(), ibv);
        Tm ha2 = hg_.fresh(AB.left(), iav);
        Tm g = lam(hb, app(t, lam(ha2, hb)));
        Ctx c1 = base;
        c1.push_back({g->type, g});
        if (!fast_.provable_from(fmls(c1), AB)) continue;
        auto t1 = prove(std::move(c1), AB);
        if (!t1) continue;
        Tm ct = app(t, *t1);
        Ctx c2 = base;
        c2.push_back({C, ct});
        if (!fast_.provable_from(fmls(c2), goal)) continue;
        auto t2 = prove(std::move(c2), goal);
        if (t2) return t2;
      }
    }
    return std::nullopt;
  }

  static std::vector<Formula> fmls(const Ctx& ctx) {
    std::vector<Formula> v;
    v.reserve(ctx.size());
    for (auto& [f, t] : ctx) v.push_back(f);
    return v;
  }

  HypGen hg_;
  G4Prover fast_;
};

// ---------------------------------------------------------------------------
// countermodel construction by saturation tableau

class CounterModelBuilder {
 public:
  // build a rooted model where every formula of gamma is forced at the root
  // and goal is not; nullopt if none exists (i.e. gamma |- goal in IPC)
  std::optional<KripkeModel> build(const std::vector<Formula>& gamma,
                                   Formula goal) {
    worlds_.clear();
    children_.clear();
    expanded_.clear();
    std::set<Formula> G(gamma.begin(), gamma.end());
    auto w = sat(G, {goal});
    if (!w) return std::nullopt;
    return assemble(*w);
  }

 private:
  struct World {
    std::set<Formula> truths;
  };

  // returns a world index forcing all of T and none of F, or nullopt
  std::optional<int> sat(std::set<Formula> T, std::set<Formula> F) {
    // deterministic saturation
    for (;;) {
      for (auto& f : T)
        if (f.is_bot()) return std::nullopt;
      for (auto& f : T)
        if (F.count(f)) return std::nullopt;
      bool changed = false;
      for (auto f : T) {
        if (f.is_and() && (!T.count(f.left()) || !T.count(f.right()))) {
          T.insert(f.left());
          T.insert(f.right());
          changed = true;
          break;
        }
        if (f.is_imp() && T.count(f.left()) && !T.count(f.right())) {
          T.insert(f.right());
          changed = true;
          break;
        }
      }
      if (changed) continue;
      for (auto f : F) {
        if (f.is_or() && (!F.count(f.left()) || !F.count(f.right()))) {
          F.insert(f.left());
          F.insert(f.right());
          changed = true;
          break;
        }
      }
      if (changed) continue;
      // nondeterministic expansions
      for (auto f : T) {
        if (f.is_or() && !T.count(f.left()) && !T.count(f.right())) {
          auto T1 = T;
          T1.insert(f.left());
          if (auto w = sat(T1, F)) return w;
          auto T2 = T;
          T2.insert(f.right());
          return sat(T2, F);
        }
        if (f.is_imp() && !T.count(f.right()) && !F.count(f.left())) {
          // either the antecedent is false here or the consequent true
          auto F1 = F;
          F1.insert(f.left());
          if (auto w = sat(T, F1)) return w;
          auto T2 = T;
          T2.insert(f.right());
          return sat(T2, F);
        }
      }
      for (auto f : F) {
        if (f.is_and() && !F.count(f.left()) && !F.count(f.right())) {
          auto F1 = F;
          F1.insert(f.left());
          if (auto w = sat(T, F1)) return w;
          auto F2 = F;
          F2.insert(f.right());
          return sat(T, F2);
        }
      }
      break;
    }
    // fully expanded: spawn children for false implications.  Identical
    // saturated constraint sets collapse into a single world (this also
    // guards against non-terminating descent through repeated antecedents).
    auto key = std::make_pair(T, F);
    auto hit = expanded_.find(key);
    if (hit != expanded_.end()) {
      if (hit->second < 0) return std::nullopt;  // known unsatisfiable
      return hit->second;                        // reuse (possibly an ancestor)
    }
    worlds_.push_back({T});
    children_.push_back({});
    int idx = (int)worlds_.size() - 1;
    expanded_[key] = idx;
    for (auto f : F) {
      if (f.is_imp()) {
        auto Tc = T;
        Tc.insert(f.left());
        auto child = sat(Tc, {f.right()});
        if (!child) {
          expanded_[key] = -1;  // implication actually forced here
          return std::nullopt;
        }
        if (*child != idx) children_[idx].push_back(*child);
      }
    }
    return idx;
  }

  KripkeModel assemble(int root) {
    // collect reachable worlds
    std::vector<int> order;
    std::set<int> seen;
    std::function<void(int)> dfs = [&](int w) {
      if (seen.count(w)) return;
      seen.insert(w);
      order.push_back(w);
      for (int c : children_[w]) dfs(c);
    };
    dfs(root);
    std::map<int, size_t> idx;
    for (size_t i = 0; i < order.size(); ++i) idx[order[i]] = i;
    size_t n = order.size();
    // reachability closure over child edges
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (size_t i = 0; i < n; ++i) {
      reach[i][i] = true;
      for (int c : children_[order[i]]) reach[i][idx[c]] = true;
    }
    for (size_t k = 0; k < n; ++k)
      for (size_t i = 0; i < n; ++i)
        if (reach[i][k])
          for (size_t j = 0; j < n; ++j)
            if (reach[k][j]) reach[i][j] = true;
    // collapse mutually reachable worlds (their truth sets coincide and the
    // falsity constraints are downward-inherited, so merging is sound)
    std::vector<size_t> rep(n);
    for (size_t i = 0; i < n; ++i) {
      rep[i] = i;
      for (size_t j = 0; j < i; ++j)
        if (reach[i][j] && reach[j][i]) {
          rep[i] = rep[j];
          break;
        }
    }
    std::vector<size_t> reps;
    std::vector<size_t> newid(n);
    for (size_t i = 0; i < n; ++i)
      if (rep[i] == i) {
        newid[i] = reps.size();
        reps.push_back(i);
      }
    for (size_t i = 0; i < n; ++i) newid[i] = newid[rep[i]];
    size_t m = reps.size();
    KripkeModel M;
    for (size_t i = 0; i < m; ++i) M.points.push_back("w" + std::to_string(i));
    M.leq.assign(m, std::vector<bool>(m, false));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        if (reach[i][j]) M.leq[newid[i]][newid[j]] = true;
    // variables
    std::set<std::string> vars;
    for (int w : order)
      for (auto& f : worlds_[w].truths)
        if (f.is_var()) vars.insert(f.name());
    for (auto& v : vars) {
      std::vector<bool> tv(m, false);
      for (size_t i = 0; i < n; ++i)
        if (worlds_[order[i]].truths.count(Formula::var(v))) tv[newid[i]] = true;
      for (size_t a = 0; a < m; ++a)
        for (size_t b = 0; b < m; ++b)
          if (M.leq[a][b] && tv[a]) tv[b] = true;
      M.val[v] = tv;
    }
    return M;
  }

  std::vector<World> worlds_;
  std::vector<std::vector<int>> children_;
  std::map<std::pair<std::set<Formula>, std::set<Formula>>, int> expanded_;
};

// greedy shrink: drop points while the model still forces gamma at root and
// refutes goal at root
inline KripkeModel shrink_countermodel(KripkeModel M,
                                       const std::vector<Formula>& gamma,
                                       Formula goal) {
  auto refutes = [&](const KripkeModel& m) {
    int r = m.root();
    if (r < 0) return false;
    for (auto& g : gamma)
      if (!forces(m, r, g)) return false;
    return !forces(m, r, goal);
  };
  if (!refutes(M)) return M;  // shouldn't happen; leave untouched
  bool progress = true;
  while (progress && M.size() > 1) {
    progress = false;
    for (size_t drop = 0; drop < M.size(); ++drop) {
      KripkeModel m2;
      for (size_t i = 0; i < M.size(); ++i)
        if (i != drop) m2.points.push_back(M.points[i]);
      size_t n2 = m2.points.size();
      m2.leq.assign(n2, std::vector<bool>(n2, false));
      size_t a2 = 0;
      for (size_t a = 0; a < M.size(); ++a) {
        if (a == drop) continue;
        size_t b2 = 0;
        for (size_t b = 0; b < M.size(); ++b) {
          if (b == drop) continue;
          m2.leq[a2][b2] = M.leq[a][b];
          ++b2;
        }
        ++a2;
      }
      for (auto& [v, tv] : M.val) {
        std::vector<bool> t2;
        for (size_t i = 0; i < M.size(); ++i)
          if (i != drop) t2.push_back(tv[i]);
        m2.val[v] = t2;
      }
      std::string why;
      if (m2.well_formed(&why) && refutes(m2)) {
        M = m2;
        progress = true;
        break;
      }
    }
  }
  return M;
}

}  // namespace iptk
