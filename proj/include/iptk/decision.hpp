#pragma once
// Decision oracles: a terminating procedure for IPC and a bounded,
// certificate-producing procedure for axiomatic extensions.

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "algebra.hpp"
#include "calculus.hpp"
#include "formula.hpp"
#include "kripke.hpp"
#include "nd.hpp"
#include "posets.hpp"
#include "prover.hpp"

namespace iptk {

struct Verdict {
  enum Kind { Provable, Refuted, Unknown } kind = Unknown;
  std::optional<Proof> proof;                 // Provable
  std::optional<KripkeModel> countermodel;    // Refuted (Kripke)
  std::optional<FiniteAlgebra> algebra_countermodel;  // Refuted (algebraic)
  std::string note;

  bool provable() const { return kind == Provable; }
  bool refuted() const { return kind == Refuted; }
  bool unknown() const { return kind == Unknown; }
};

// never Unknown; Provable comes with a checkable Frege proof when requested
inline Verdict decide_ipc(Formula phi, bool want_proof = true) {
  G4Prover pr;
  Verdict v;
  if (pr.provable(phi)) {
    v.kind = Verdict::Provable;
    if (want_proof) {
      G4TermProver tp;
      auto t = tp.prove_term(phi);
      if (!t) throw std::logic_error("decision procedures disagree (term)");
      v.proof = to_proof(*t);
      if (v.proof->conclusion() != phi)
        throw std::logic_error("extracted proof proves the wrong formula");
    }
    return v;
  }
  CounterModelBuilder cm;
  auto M = cm.build({}, phi);
  if (!M) throw std::logic_error("decision procedures disagree (model)");
  KripkeModel S = shrink_countermodel(*M, {}, phi);
  int r = S.root();
  if (r < 0 || forces(S, (size_t)r, phi))
    throw std::logic_error("countermodel fails to refute");
  v.kind = Verdict::Refuted;
  v.countermodel = std::move(S);
  return v;
}

inline bool provable_ipc(Formula phi) {
  G4Prover pr;
  return pr.provable(phi);
}

inline bool equiv_ipc(Formula a, Formula b) {
  G4Prover pr;
  return pr.provable(Formula::imp(a, b)) && pr.provable(Formula::imp(b, a));
}

// ---------------------------------------------------------------------------
// bounded decision for IPC + proper axioms

struct Effort {
  int depth = 4;                 // proper-axiom chaining depth
  size_t max_instances = 2000;   // flat substitution instances fed to the prover
  int max_frame_points = 5;      // Kripke frame search bound
  std::vector<FiniteAlgebra> algebras;  // algebraic countermodel candidates
  std::function<void(const std::string&)> progress;
  std::optional<std::chrono::steady_clock::time_point> deadline;

  bool expired() const {
    return deadline && std::chrono::steady_clock::now() > *deadline;
  }
  void report(const std::string& s) const {
    if (progress) progress(s);
  }
};

namespace detail {

inline std::vector<Formula> subformula_pool(const std::vector<Formula>& axioms,
                                            Formula phi) {
  std::set<Formula> s;
  std::function<void(Formula)> go = [&](Formula f) {
    if (s.count(f)) return;
    s.insert(f);
    if (!f.is_atom()) {
      go(f.left());
      go(f.right());
    }
  };
  go(phi);
  for (auto& a : axioms) go(a);
  return {s.begin(), s.end()};
}

// enumerate substitutions of tmpl's variables into pool, up to cap instances
inline void enumerate_instances(
    Formula tmpl, const std::vector<Formula>& pool, size_t cap,
    const std::function<void(const Substitution&, Formula)>& emit) {
  if (pool.empty()) return;
  auto vars = vars_of(tmpl);
  std::vector<std::string> vs(vars.begin(), vars.end());
  std::vector<size_t> c(vs.size(), 0);
  size_t count = 0;
  for (;;) {
    Substitution s;
    for (size_t i = 0; i < vs.size(); ++i) s.set(vs[i], pool[c[i]]);
    emit(s, substitute(s, tmpl));
    if (++count >= cap) return;
    size_t i = 0;
    for (; i < vs.size(); ++i) {
      if (++c[i] < pool.size()) break;
      c[i] = 0;
    }
    if (i == vs.size() || vs.empty()) return;
  }
}

// bounded proof search in IPC + axioms.  Two engines:
//  * flat: feed substitution instances (variables mapped to subformulas)
//    as hypotheses to the sequent prover;
//  * chaining, for axioms of the shape (A->r)->(B->r)->r: apply the axiom
//    with r := current goal and variables mapped to goal/context variables,
//    recursing on the two strengthened premises.
class ExtProver {
 public:
  ExtProver(const std::vector<Formula>& axioms, const Effort& effort)
      : axioms_(axioms), effort_(effort) {}

  std::optional<Tm> search(Formula phi) {
    // flat instance search: single instances, then capped pairs.  Feeding
    // many nested-implication instances to the sequent prover at once makes
    // its left-implication rule explode, so the context is kept tiny.
    std::vector<Formula> pool = subformula_pool(axioms_, phi);
    std::vector<std::pair<Formula, Tm>> inst;
    std::set<Formula> seen;
    for (auto& ax_f : axioms_) {
      size_t space = 1;
      for (size_t k = vars_of(ax_f).size(); k > 0; --k) {
        space *= pool.size();
        if (space > effort_.max_instances) break;
      }
      if (space > effort_.max_instances) continue;
      enumerate_instances(ax_f, pool, effort_.max_instances,
                          [&](const Substitution& s, Formula f) {
                            if (seen.insert(f).second)
                              inst.push_back({f, ax_proper(ax_f, s)});
                          });
    }
    if (!inst.empty()) {
      effort_.report("flat search: " + std::to_string(inst.size()) +
                     " instances");
      for (auto& [f, t] : inst) {
        if (effort_.expired()) break;
        if (quick_.provable_from({f}, phi)) {
          G4TermProver tp;
          if (auto r = tp.prove_term_from({{f, t}}, phi)) return r;
        }
      }
      size_t pair_budget = effort_.max_instances;
      for (size_t i = 0; i < inst.size() && pair_budget; ++i)
        for (size_t j = i + 1; j < inst.size() && pair_budget; ++j) {
          if (effort_.expired()) return std::nullopt;
          --pair_budget;
          if (quick_.provable_from({inst[i].first, inst[j].first}, phi)) {
            G4TermProver tp;
            if (auto r = tp.prove_term_from({inst[i], inst[j]}, phi)) return r;
          }
        }
    }
    effort_.report("chaining search");
    return chain({}, phi, effort_.depth);
  }

 private:
  using Ctx = std::vector<std::pair<Formula, Tm>>;

  std::optional<Tm> chain(Ctx c, Formula goal, int depth) {
    if (effort_.expired()) return std::nullopt;
    std::vector<Formula> cf;
    for (auto& [f, t] : c) cf.push_back(f);
    if (quick_.provable_from(cf, goal)) {
      G4TermProver tp;
      return tp.prove_term_from(c, goal);
    }
    if (goal.is_imp()) {
      int id;
      Tm h = hg_.fresh(goal.left(), id);
      c.push_back({goal.left(), h});
      auto body = chain(std::move(c), goal.right(), depth);
      if (!body) return std::nullopt;
      return lam(h, *body);
    }
    if (depth == 0) return std::nullopt;
    // memoised failures
    FailKey key;
    for (auto& f : cf) key.ids.push_back(f.id());
    std::sort(key.ids.begin(), key.ids.end());
    key.ids.push_back(goal.id());
    key.depth = depth;
    if (failed_.count(key)) return std::nullopt;

    std::set<std::string> vset = vars_of(goal);
    for (auto& f : cf) {
      auto s = vars_of(f);
      vset.insert(s.begin(), s.end());
    }
    std::vector<Formula> pool;
    for (auto& v : vset) pool.push_back(Formula::var(v));

    for (auto& ax_f : axioms_) {
      auto [prem, hd] = head(ax_f);
      if (prem.size() != 2 || !hd.is_var()) continue;
      if (!prem[0].is_imp() || prem[0].right() != hd) continue;
      if (!prem[1].is_imp() || prem[1].right() != hd) continue;
      Formula A = prem[0].left(), B = prem[1].left();
      std::set<std::string> other = vars_of(A);
      auto vb = vars_of(B);
      other.insert(vb.begin(), vb.end());
      other.erase(hd.name());
      std::vector<std::string> vs(other.begin(), other.end());
      std::vector<size_t> ci(vs.size(), 0);
      for (;;) {
        if (effort_.expired()) break;
        Substitution s;
        s.set(hd.name(), goal);
        bool degenerate = false;
        for (size_t i = 0; i < vs.size(); ++i) {
          s.set(vs[i], pool[ci[i]]);
          for (size_t j = 0; j < i; ++j)
            if (ci[j] == ci[i]) degenerate = true;  // e.g. p<=p splits
        }
        if (!degenerate) {
          auto p1 = chain(c, Formula::imp(substitute(s, A), goal), depth - 1);
          if (p1) {
            auto p2 = chain(c, Formula::imp(substitute(s, B), goal), depth - 1);
            if (p2) return app(app(ax_proper(ax_f, s), *p1), *p2);
          }
        }
        size_t i = 0;
        for (; i < vs.size(); ++i) {
          if (++ci[i] < pool.size()) break;
          ci[i] = 0;
        }
        if (i == vs.size() || vs.empty()) break;
      }
    }
    failed_.insert(key);
    return std::nullopt;
  }

  struct FailKey {
    std::vector<uint64_t> ids;
    int depth;
    bool operator<(const FailKey& o) const {
      return std::tie(depth, ids) < std::tie(o.depth, o.ids);
    }
  };

  const std::vector<Formula>& axioms_;
  const Effort& effort_;
  G4Prover quick_;
  HypGen hg_;
  std::set<FailKey> failed_;
};

}  // namespace detail

// Provable/Refuted only when certified; otherwise Unknown.
inline Verdict decide_ext(const std::vector<Formula>& axioms, Formula phi,
                          const Effort& effort = {}) {
  Verdict v;
  {
    detail::ExtProver ep(axioms, effort);
    auto t = ep.search(phi);
    if (t) {
      Proof pf = to_proof(*t);
      if (pf.conclusion() == phi) {
        v.kind = Verdict::Provable;
        v.proof = std::move(pf);
        return v;
      }
    }
  }
  if (effort.expired()) {
    v.note = "deadline exhausted";
    return v;
  }
  // countermodel search: frames validating all axioms under all valuations
  effort.report("countermodel search");
  auto pvars = vars_of(phi);
  for (auto& frame : rooted_poset_bank(effort.max_frame_points)) {
    if (effort.expired()) break;
    bool axioms_valid = true;
    for (auto& a : axioms)
      if (!frame_valid_all_valuations(frame, a, vars_of(a))) {
        axioms_valid = false;
        break;
      }
    if (!axioms_valid) continue;
    // enumerate valuations of phi's variables looking for a failure
    size_t n = frame.size();
    std::vector<std::vector<bool>> upsets;
    for (uint64_t mask = 0; mask < (1ull << n); ++mask) {
      bool up = true;
      for (size_t a = 0; a < n && up; ++a)
        for (size_t b = 0; b < n && up; ++b)
          if (frame.leq[a][b] && ((mask >> a) & 1) && !((mask >> b) & 1))
            up = false;
      if (up) {
        std::vector<bool> s(n);
        for (size_t a = 0; a < n; ++a) s[a] = (mask >> a) & 1;
        upsets.push_back(s);
      }
    }
    std::vector<std::string> vs(pvars.begin(), pvars.end());
    std::vector<size_t> choice(vs.size(), 0);
    for (;;) {
      KripkeModel M = frame;
      M.val.clear();
      for (size_t i = 0; i < vs.size(); ++i) M.val[vs[i]] = upsets[choice[i]];
      if (!valid_in(M, phi)) {
        v.kind = Verdict::Refuted;
        v.countermodel = std::move(M);
        return v;
      }
      size_t i = 0;
      for (; i < vs.size(); ++i) {
        if (++choice[i] < upsets.size()) break;
        choice[i] = 0;
      }
      if (i == vs.size() || vs.empty()) break;
    }
  }
  for (auto& A : effort.algebras) {
    if (effort.expired()) break;
    try {
      bool ok = true;
      for (auto& a : axioms)
        if (!validates(A, a)) {
          ok = false;
          break;
        }
      if (ok && !validates(A, phi)) {
        v.kind = Verdict::Refuted;
        v.algebra_countermodel = A;
        return v;
      }
    } catch (const AlgebraError&) {
      // formula uses an operation the algebra lacks; not a usable witness
    }
  }
  v.note = "effort bounds exhausted";
  return v;
}

}  // namespace iptk
