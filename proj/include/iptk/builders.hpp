#pragma once
// Reusable proof constructions: structural lemmas, the deduction theorem,
// template instantiation, and the EF <-> CF translations.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "calculus.hpp"
#include "circuit.hpp"
#include "formula.hpp"
#include "nd.hpp"

namespace iptk {

// ---------------------------------------------------------------------------
// structural lemmas

// (Γ→φ)→(Δ→φ) where every member of Γ appears in Δ
inline Proof struct_reorder(const std::vector<Formula>& gamma,
                            const std::vector<Formula>& delta, Formula phi,
                            ProofKind kind = ProofKind::F) {
  HypGen hg;
  int hid;
  Tm h = hg.fresh(join(gamma, phi), hid);
  std::vector<Tm> dh;
  std::vector<int> did;
  for (auto& d : delta) {
    int id;
    dh.push_back(hg.fresh(d, id));
    did.push_back(id);
  }
  Tm body = h;
  for (auto& g : gamma) {
    bool found = false;
    for (size_t i = 0; i < delta.size(); ++i)
      if (delta[i] == g) {
        body = app(body, dh[i]);
        found = true;
        break;
      }
    if (!found)
      throw std::invalid_argument("struct_reorder: " + print(g) +
                                  " not in target context");
  }
  for (auto it = dh.rbegin(); it != dh.rend(); ++it) body = lam(*it, body);
  return to_proof(lam(h, body), kind);
}

// (Δ→φ)→(Γ→ψ_0)→…→(Γ→ψ_{n-1})→(Γ→φ) for Δ = ψ_0,…,ψ_{n-1}
inline Proof struct_compose(const std::vector<Formula>& gamma,
                            const std::vector<Formula>& delta, Formula phi,
                            ProofKind kind = ProofKind::F) {
  HypGen hg;
  int id;
  Tm d = hg.fresh(join(delta, phi), id);
  std::vector<Tm> fs, gs;
  for (auto& psi : delta) {
    int i2;
    fs.push_back(hg.fresh(join(gamma, psi), i2));
  }
  for (auto& g : gamma) {
    int i2;
    gs.push_back(hg.fresh(g, i2));
  }
  Tm body = d;
  for (auto& f : fs) {
    Tm arg = f;
    for (auto& g : gs) arg = app(arg, g);
    body = app(body, arg);
  }
  for (auto it = gs.rbegin(); it != gs.rend(); ++it) body = lam(*it, body);
  for (auto it = fs.rbegin(); it != fs.rend(); ++it) body = lam(*it, body);
  return to_proof(lam(d, body), kind);
}

// ---------------------------------------------------------------------------
// deduction theorem

namespace detail {

// discharge the last hypothesis of a formula-level proof (F or EF)
inline Proof deduce_one(const Proof& pi) {
  Proof out;
  out.kind = pi.kind;
  out.hypotheses.assign(pi.hypotheses.begin(), pi.hypotheses.end() - 1);
  Formula g = pi.hypotheses.back();
  int last = (int)pi.hypotheses.size() - 1;
  std::vector<int> nu(pi.lines.size());  // old line -> line proving g->stmt
  auto push = [&](Line l) {
    out.lines.push_back(std::move(l));
    return (int)out.lines.size() - 1;
  };
  auto imp = [&](Formula a, Formula b) { return Formula::imp(a, b); };
  for (size_t n = 0; n < pi.lines.size(); ++n) {
    const Line& ln = pi.lines[n];
    Formula s = ln.stmt;
    switch (ln.just.k) {
      case Just::Hyp: {
        if (ln.just.i == last) {
          // identity g->g as S K K
          Formula gg = imp(g, g);
          Substitution sS = sub_abc(g, gg, g);
          int a = push(line_ax(Ax::S, sS, substitute(sS, axiom_template(Ax::S))));
          Substitution sK1 = sub_abc(g, gg);
          int b = push(line_ax(Ax::K, sK1, substitute(sK1, axiom_template(Ax::K))));
          int c = push(line_mp(b, a, imp(imp(g, gg), gg)));
          Substitution sK2 = sub_abc(g, g);
          int d = push(line_ax(Ax::K, sK2, substitute(sK2, axiom_template(Ax::K))));
          nu[n] = push(line_mp(d, c, gg));
        } else {
          int a = push(line_hyp(ln.just.i, s));
          Substitution sK = sub_abc(s, g);
          int b = push(line_ax(Ax::K, sK, substitute(sK, axiom_template(Ax::K))));
          nu[n] = push(line_mp(a, b, imp(g, s)));
        }
        break;
      }
      case Just::Ax_:
      case Just::Ext: {
        int a = push(ln);
        Substitution sK = sub_abc(s, g);
        int b = push(line_ax(Ax::K, sK, substitute(sK, axiom_template(Ax::K))));
        nu[n] = push(line_mp(a, b, imp(g, s)));
        break;
      }
      case Just::MP: {
        Formula A = pi.lines[ln.just.i].stmt;
        Substitution sS = sub_abc(g, A, s);
        int a = push(line_ax(Ax::S, sS, substitute(sS, axiom_template(Ax::S))));
        int b = push(line_mp(nu[ln.just.j], a, imp(imp(g, A), imp(g, s))));
        nu[n] = push(line_mp(nu[ln.just.i], b, imp(g, s)));
        break;
      }
      case Just::Subst:
        throw std::invalid_argument("deduction: substitution rule present");
    }
  }
  return out;
}

// gate-level variant for CF proofs
inline Proof deduce_one_cf(const Proof& pi) {
  Proof out;
  out.kind = ProofKind::CF;
  out.circuit = pi.circuit;  // extend a copy of the arena
  Circuit& C = out.circuit;
  out.hyp_gates.assign(pi.hyp_gates.begin(), pi.hyp_gates.end() - 1);
  uint32_t g = pi.hyp_gates.back();
  int last = (int)pi.hyp_gates.size() - 1;
  std::vector<int> nu(pi.lines.size());
  auto push = [&](Line l) {
    out.lines.push_back(std::move(l));
    return (int)out.lines.size() - 1;
  };
  auto gax = [&](Ax a, std::map<std::string, uint32_t> gs, uint32_t gate) {
    Line l;
    l.gate = gate;
    l.just.k = Just::Ax_;
    l.just.ax = a;
    l.just.gsubst = std::move(gs);
    return l;
  };
  auto gmp = [&](int i, int j, uint32_t gate) {
    Line l;
    l.gate = gate;
    l.just.k = Just::MP;
    l.just.i = i;
    l.just.j = j;
    return l;
  };
  for (size_t n = 0; n < pi.lines.size(); ++n) {
    const Line& ln = pi.lines[n];
    uint32_t s = ln.gate;
    switch (ln.just.k) {
      case Just::Hyp: {
        if (ln.just.i == last) {
          uint32_t gg = C.add_imp(g, g);
          uint32_t kgg = C.add_imp(g, gg);
          int a = push(gax(Ax::S, {{"a", g}, {"b", gg}, {"c", g}},
                           C.add_imp(C.add_imp(g, C.add_imp(gg, g)),
                                     C.add_imp(kgg, gg))));
          int b = push(gax(Ax::K, {{"a", g}, {"b", gg}},
                           C.add_imp(g, C.add_imp(gg, g))));
          int c = push(gmp(b, a, C.add_imp(kgg, gg)));
          int d = push(gax(Ax::K, {{"a", g}, {"b", g}}, kgg));
          nu[n] = push(gmp(d, c, gg));
        } else {
          Line h;
          h.gate = s;
          h.just.k = Just::Hyp;
          h.just.i = ln.just.i;
          int a = push(h);
          int b = push(gax(Ax::K, {{"a", s}, {"b", g}},
                           C.add_imp(s, C.add_imp(g, s))));
          nu[n] = push(gmp(a, b, C.add_imp(g, s)));
        }
        break;
      }
      case Just::Ax_:
      case Just::Ext: {
        int a = push(ln);
        int b = push(gax(Ax::K, {{"a", s}, {"b", g}},
                         C.add_imp(s, C.add_imp(g, s))));
        nu[n] = push(gmp(a, b, C.add_imp(g, s)));
        break;
      }
      case Just::MP: {
        uint32_t A = pi.lines[ln.just.i].gate;
        uint32_t gA = C.add_imp(g, A), gs = C.add_imp(g, s);
        int a = push(gax(Ax::S, {{"a", g}, {"b", A}, {"c", s}},
                         C.add_imp(C.add_imp(g, C.add_imp(A, s)),
                                   C.add_imp(gA, gs))));
        int b = push(gmp(nu[ln.just.j], a, C.add_imp(gA, gs)));
        nu[n] = push(gmp(nu[ln.just.i], b, gs));
        break;
      }
      case Just::Subst:
        throw std::invalid_argument("deduction: substitution rule present");
    }
  }
  return out;
}

}  // namespace detail

// Γ-free proof of Γ→φ from a proof of φ under hypotheses Γ
inline Proof deduction(const RuleSet& rs, Proof pi) {
  (void)rs;
  if (pi.kind == ProofKind::SF)
    throw std::invalid_argument("deduction: SF input rejected");
  if (pi.kind == ProofKind::CF) {
    while (!pi.hyp_gates.empty()) pi = detail::deduce_one_cf(pi);
    return pi;
  }
  while (!pi.hypotheses.empty()) pi = detail::deduce_one(pi);
  return pi;
}

// ---------------------------------------------------------------------------
// substitution into whole proofs

inline Proof instantiate_template(const RuleSet& rs, const Proof& tpl,
                                  const Substitution& sigma) {
  if (sigma.empty()) return tpl;
  // fresh-variable collisions: sigma must not touch extension variables,
  // nor may its range mention them
  for (auto& ln : tpl.lines)
    if (ln.just.k == Just::Ext) {
      if (sigma.get(ln.just.ext_var))
        throw std::invalid_argument(
            "instantiate_template: substitution hits extension variable " +
            ln.just.ext_var);
      for (auto& [v, f] : sigma.map)
        if (contains_var(f, ln.just.ext_var))
          throw std::invalid_argument(
              "instantiate_template: range collides with extension variable " +
              ln.just.ext_var);
    }
  if (tpl.kind == ProofKind::SF) {
    // SF has the substitution rule: one extra line
    Proof out = tpl;
    out.lines.push_back(line_subst((int)tpl.lines.size() - 1, sigma,
                                   substitute(sigma, tpl.conclusion())));
    return out;
  }
  if (tpl.kind == ProofKind::CF) {
    Proof out;
    out.kind = ProofKind::CF;
    Circuit& C = out.circuit;
    std::map<uint32_t, uint32_t> remap;
    std::function<uint32_t(uint32_t)> go = [&](uint32_t i) -> uint32_t {
      auto it = remap.find(i);
      if (it != remap.end()) return it->second;
      const Gate& gg = tpl.circuit.gate(i);
      uint32_t r;
      if (gg.k == Conn::Var) {
        auto s = sigma.get(gg.name);
        r = s ? C.add_formula(*s) : C.add_var(gg.name);
      } else if (gg.k == Conn::Bot) {
        r = C.add_bot();
      } else {
        uint32_t a = go(gg.a), b = go(gg.b);
        r = C.add_bin(gg.k, a, b);
      }
      remap.emplace(i, r);
      return r;
    };
    for (uint32_t hg : tpl.hyp_gates) out.hyp_gates.push_back(go(hg));
    for (auto& ln : tpl.lines) {
      Line l = ln;
      l.gate = go(ln.gate);
      if (l.just.k == Just::Ax_)
        for (auto& [v, g] : l.just.gsubst) g = go(g);
      if (l.just.k == Just::Ext) l.just.ext_def_gate = go(ln.just.ext_def_gate);
      out.lines.push_back(std::move(l));
    }
    return out;
  }
  Proof out;
  out.kind = tpl.kind;
  for (auto& h : tpl.hypotheses) out.hypotheses.push_back(substitute(sigma, h));
  for (auto& ln : tpl.lines) {
    Line l = ln;
    l.stmt = substitute(sigma, ln.stmt);
    if (l.just.k == Just::Ax_) l.just.subst = compose(sigma, ln.just.subst);
    if (l.just.k == Just::Ext) l.just.ext_def = substitute(sigma, ln.just.ext_def);
    out.lines.push_back(std::move(l));
  }
  (void)rs;
  return out;
}

// ---------------------------------------------------------------------------
// EF <-> CF

// hoist extension-axiom lines to the front, in dependency order of their
// definitions, rewriting premise indices
inline void reorder_ext_front(Proof& pf) {
  std::vector<std::string> order;      // ext vars, first-appearance order
  std::map<std::string, Formula> def;  // EF defs (for dependency edges)
  for (auto& ln : pf.lines)
    if (ln.just.k == Just::Ext && !def.count(ln.just.ext_var)) {
      order.push_back(ln.just.ext_var);
      def[ln.just.ext_var] = ln.just.ext_def;
    }
  if (order.empty()) return;
  // stable topological sort: q before anything whose definition mentions q
  std::vector<std::string> topo;
  std::set<std::string> done;
  std::function<void(const std::string&)> visit = [&](const std::string& q) {
    if (done.count(q)) return;
    done.insert(q);
    for (auto& p : order)
      if (p != q && !def[q].null() && contains_var(def[q], p)) visit(p);
    topo.push_back(q);
  };
  for (auto& q : order) visit(q);
  // new line order: per topo var its ext lines (original order), then the rest
  std::vector<int> sched;
  std::vector<bool> taken(pf.lines.size(), false);
  for (auto& q : topo)
    for (size_t i = 0; i < pf.lines.size(); ++i)
      if (!taken[i] && pf.lines[i].just.k == Just::Ext &&
          pf.lines[i].just.ext_var == q) {
        sched.push_back((int)i);
        taken[i] = true;
      }
  for (size_t i = 0; i < pf.lines.size(); ++i)
    if (!taken[i]) sched.push_back((int)i);
  std::vector<int> newpos(pf.lines.size());
  for (size_t i = 0; i < sched.size(); ++i) newpos[sched[i]] = (int)i;
  std::vector<Line> lines;
  for (int i : sched) {
    Line l = pf.lines[i];
    if (l.just.k == Just::MP) {
      l.just.i = newpos[l.just.i];
      l.just.j = newpos[l.just.j];
    } else if (l.just.k == Just::Subst) {
      l.just.i = newpos[l.just.i];
    }
    lines.push_back(std::move(l));
  }
  pf.lines = std::move(lines);
}

// EF -> CF: extension variables become shared gates; extension axiom lines
// become identity derivations over the definition gate
inline Proof ef_to_cf(const Proof& pi) {
  if (pi.kind != ProofKind::EF && pi.kind != ProofKind::F)
    throw std::invalid_argument("ef_to_cf expects an EF (or F) proof");
  Proof out;
  out.kind = ProofKind::CF;
  Circuit& C = out.circuit;
  std::map<std::string, uint32_t> sigma;  // ext var -> definition gate
  std::unordered_map<Formula, uint32_t, FormulaHash> memo;
  std::function<uint32_t(Formula)> gate_of = [&](Formula f) -> uint32_t {
    auto it = memo.find(f);
    if (it != memo.end()) return it->second;
    uint32_t r;
    switch (f.kind()) {
      case Conn::Var: {
        auto s = sigma.find(f.name());
        r = (s != sigma.end()) ? s->second : C.add_var(f.name());
        break;
      }
      case Conn::Bot: r = C.add_bot(); break;
      default: {
        uint32_t a = gate_of(f.left());
        uint32_t b = gate_of(f.right());
        r = C.add_bin(f.kind(), a, b);
      }
    }
    memo.emplace(f, r);
    return r;
  };
  // register all extension definitions up front (first-appearance order is
  // dependency order), so every mention of an extension variable shares the
  // definition gate
  for (auto& ln : pi.lines)
    if (ln.just.k == Just::Ext && !sigma.count(ln.just.ext_var)) {
      uint32_t g = gate_of(ln.just.ext_def);
      sigma[ln.just.ext_var] = g;
      memo[Formula::var(ln.just.ext_var)] = g;
    }
  for (auto& h : pi.hypotheses) out.hyp_gates.push_back(gate_of(h));
  std::vector<int> nu(pi.lines.size());
  std::map<uint32_t, int> ident;  // identity-proof lines by gate
  auto push = [&](Line l) {
    out.lines.push_back(std::move(l));
    return (int)out.lines.size() - 1;
  };
  auto gax = [&](Ax a, std::map<std::string, uint32_t> gs, uint32_t gate) {
    Line l;
    l.gate = gate;
    l.just.k = Just::Ax_;
    l.just.ax = a;
    l.just.gsubst = std::move(gs);
    return l;
  };
  auto gmp = [&](int i, int j, uint32_t gate) {
    Line l;
    l.gate = gate;
    l.just.k = Just::MP;
    l.just.i = i;
    l.just.j = j;
    return l;
  };
  for (size_t n = 0; n < pi.lines.size(); ++n) {
    const Line& ln = pi.lines[n];
    switch (ln.just.k) {
      case Just::Ext: {
        // the axiom collapses to psi -> psi over the definition gate
        uint32_t g = sigma.at(ln.just.ext_var);
        auto it = ident.find(g);
        if (it != ident.end()) {
          nu[n] = it->second;
          break;
        }
        uint32_t gg = C.add_imp(g, g);
        uint32_t kgg = C.add_imp(g, gg);
        int a = push(gax(Ax::S, {{"a", g}, {"b", gg}, {"c", g}},
                         C.add_imp(C.add_imp(g, C.add_imp(gg, g)),
                                   C.add_imp(kgg, gg))));
        int b = push(gax(Ax::K, {{"a", g}, {"b", gg}},
                         C.add_imp(g, C.add_imp(gg, g))));
        int c = push(gmp(b, a, C.add_imp(kgg, gg)));
        int d = push(gax(Ax::K, {{"a", g}, {"b", g}}, kgg));
        nu[n] = push(gmp(d, c, gg));
        ident[g] = nu[n];
        break;
      }
      case Just::Ax_: {
        std::map<std::string, uint32_t> gs;
        for (auto& [v, f] : ln.just.subst.map) gs[v] = gate_of(f);
        nu[n] = push(gax(ln.just.ax, std::move(gs), gate_of(ln.stmt)));
        break;
      }
      case Just::Hyp: {
        Line l;
        l.gate = gate_of(ln.stmt);
        l.just.k = Just::Hyp;
        l.just.i = ln.just.i;
        nu[n] = push(l);
        break;
      }
      case Just::MP:
        nu[n] = push(gmp(nu[ln.just.i], nu[ln.just.j], gate_of(ln.stmt)));
        break;
      case Just::Subst:
        throw std::invalid_argument("ef_to_cf: substitution rule present");
    }
  }
  return out;
}

// CF -> EF: shared internal gates become extension variables; each line is
// restated over the partially-collapsed view of its gate
inline Proof cf_to_ef(const Proof& pi, const RuleSet& rs = RuleSet::ipc(),
                      uint64_t unfold_bound = 1u << 20) {
  if (pi.kind != ProofKind::CF)
    throw std::invalid_argument("cf_to_ef expects a CF proof");
  const Circuit& C = pi.circuit;
  // cone of gates reachable from line/hypothesis gates
  std::vector<bool> reach(C.size(), false);
  std::function<void(uint32_t)> mark = [&](uint32_t g) {
    if (reach[g]) return;
    reach[g] = true;
    const Gate& gg = C.gate(g);
    if (gg.k != Conn::Var && gg.k != Conn::Bot) {
      mark(gg.a);
      mark(gg.b);
    }
  };
  for (auto& ln : pi.lines) mark(ln.gate);
  for (uint32_t h : pi.hyp_gates) mark(h);
  // fanout within the cone; shared = non-atomic with >= 2 structural parents
  std::vector<int> fanout(C.size(), 0);
  for (uint32_t g = 0; g < C.size(); ++g) {
    if (!reach[g]) continue;
    const Gate& gg = C.gate(g);
    if (gg.k != Conn::Var && gg.k != Conn::Bot) {
      fanout[gg.a]++;
      fanout[gg.b]++;
    }
  }
  std::set<std::string> avoid;
  for (uint32_t g = 0; g < C.size(); ++g)
    if (reach[g] && C.gate(g).k == Conn::Var) avoid.insert(C.gate(g).name);
  FreshGen fresh(avoid);
  std::map<uint32_t, std::string> qvar;  // shared gate -> extension variable
  for (uint32_t g = 0; g < C.size(); ++g) {
    if (!reach[g]) continue;
    const Gate& gg = C.gate(g);
    if (gg.k != Conn::Var && gg.k != Conn::Bot && fanout[g] >= 2)
      qvar[g] = fresh.fresh_name();
  }
  // rep(g): the view of g with shared gates collapsed to their variables
  std::map<uint32_t, Formula> repm;
  std::function<Formula(uint32_t, bool)> rep = [&](uint32_t g,
                                                   bool collapse) -> Formula {
    if (collapse) {
      auto q = qvar.find(g);
      if (q != qvar.end()) return Formula::var(q->second);
    }
    auto it = repm.find(g);
    if (it != repm.end()) return it->second;
    const Gate& gg = C.gate(g);
    Formula r;
    switch (gg.k) {
      case Conn::Var: r = Formula::var(gg.name); break;
      case Conn::Bot: r = Formula::bot(); break;
      default: {
        Formula a = rep(gg.a, true), b = rep(gg.b, true);
        r = gg.k == Conn::Impl  ? Formula::imp(a, b)
            : gg.k == Conn::And ? Formula::land(a, b)
                                : Formula::lor(a, b);
      }
    }
    repm.emplace(g, r);
    return r;
  };
  auto view = [&](uint32_t g) { return rep(g, true); };   // q_g if shared
  auto defn = [&](uint32_t g) { return rep(g, false); };  // one level opened
  auto fwd = [&](uint32_t g) { return ext_ax(qvar.at(g), defn(g), true); };
  auto bwd = [&](uint32_t g) { return ext_ax(qvar.at(g), defn(g), false); };

  // iso pair between a view formula X of gate g and view(g)
  HypGen hg;
  struct Pair {
    Tm to;    // X -> view(g)
    Tm from;  // view(g) -> X
  };
  std::map<std::pair<Formula, uint32_t>, Pair> iso_memo;
  std::function<Pair(Formula, uint32_t)> iso = [&](Formula X,
                                                   uint32_t g) -> Pair {
    Formula V = view(g);
    auto key = std::make_pair(X, g);
    auto it = iso_memo.find(key);
    if (it != iso_memo.end()) return it->second;
    Pair r;
    if (X == V) {
      r = {combI(X), combI(X)};
    } else if (qvar.count(g)) {
      // V = q_g ; bridge X with the opened definition, then the ext axioms
      const Gate& gg = C.gate(g);
      (void)gg;
      Formula D = defn(g);
      Pair inner = (X == D) ? Pair{combI(X), combI(X)} : Pair{};
      if (X != D) {
        // recurse structurally against the opened definition
        // (X and D share the top connective; children are views of children)
        const Gate& gd = C.gate(g);
        if (X.kind() != gd.k)
          throw std::logic_error("cf_to_ef: view shape mismatch");
        Pair pa = iso(X.left(), gd.a);
        Pair pb = iso(X.right(), gd.b);
        Formula Xa = X.left(), Xb = X.right();
        Formula Va = view(gd.a), Vb = view(gd.b);
        int i1, i2;
        switch (X.kind()) {
          case Conn::Impl: {
            Tm h = hg.fresh(X, i1), x = hg.fresh(Va, i2);
            inner.to = lam(h, lam(x, app(pb.to, app(h, app(pa.from, x)))));
            Tm h2 = hg.fresh(D, i1), x2 = hg.fresh(Xa, i2);
            inner.from = lam(h2, lam(x2, app(pb.from, app(h2, app(pa.to, x2)))));
            break;
          }
          case Conn::And: {
            Tm h = hg.fresh(X, i1);
            inner.to = lam(h, pair(app(pa.to, fst(h)), app(pb.to, snd(h))));
            Tm h2 = hg.fresh(D, i1);
            inner.from =
                lam(h2, pair(app(pa.from, fst(h2)), app(pb.from, snd(h2))));
            break;
          }
          case Conn::Or: {
            Tm h = hg.fresh(X, i1);
            Tm xa = hg.fresh(Xa, i2);
            int i3;
            Tm xb = hg.fresh(Xb, i3);
            inner.to = lam(h, cases(h, lam(xa, inl(app(pa.to, xa), Vb)),
                                    lam(xb, inr(app(pb.to, xb), Va))));
            Tm h2 = hg.fresh(D, i1);
            Tm va = hg.fresh(Va, i2);
            Tm vb = hg.fresh(Vb, i3);
            inner.from = lam(h2, cases(h2, lam(va, inl(app(pa.from, va), Xb)),
                                       lam(vb, inr(app(pb.from, vb), Xa))));
            break;
          }
          default:
            throw std::logic_error("cf_to_ef: atomic view mismatch");
        }
      }
      int i1;
      Tm hx = hg.fresh(X, i1);
      r.to = lam(hx, app(bwd(g), app(inner.to, hx)));
      Tm hq = hg.fresh(V, i1);
      r.from = lam(hq, app(inner.from, app(fwd(g), hq)));
    } else {
      // V opened at the top; recurse structurally as above
      const Gate& gd = C.gate(g);
      if (X.kind() != gd.k) throw std::logic_error("cf_to_ef: shape mismatch");
      Pair pa = iso(X.left(), gd.a);
      Pair pb = iso(X.right(), gd.b);
      Formula Xa = X.left(), Xb = X.right();
      Formula Va = view(gd.a), Vb = view(gd.b);
      int i1, i2;
      switch (X.kind()) {
        case Conn::Impl: {
          Tm h = hg.fresh(X, i1), x = hg.fresh(Va, i2);
          r.to = lam(h, lam(x, app(pb.to, app(h, app(pa.from, x)))));
          Tm h2 = hg.fresh(V, i1), x2 = hg.fresh(Xa, i2);
          r.from = lam(h2, lam(x2, app(pb.from, app(h2, app(pa.to, x2)))));
          break;
        }
        case Conn::And: {
          Tm h = hg.fresh(X, i1);
          r.to = lam(h, pair(app(pa.to, fst(h)), app(pb.to, snd(h))));
          Tm h2 = hg.fresh(V, i1);
          r.from = lam(h2, pair(app(pa.from, fst(h2)), app(pb.from, snd(h2))));
          break;
        }
        case Conn::Or: {
          Tm h = hg.fresh(X, i1);
          Tm xa = hg.fresh(Xa, i2);
          int i3;
          Tm xb = hg.fresh(Xb, i3);
          r.to = lam(h, cases(h, lam(xa, inl(app(pa.to, xa), Vb)),
                              lam(xb, inr(app(pb.to, xb), Va))));
          Tm h2 = hg.fresh(V, i1);
          Tm va = hg.fresh(Va, i2);
          Tm vb = hg.fresh(Vb, i3);
          r.from = lam(h2, cases(h2, lam(va, inl(app(pa.from, va), Xb)),
                                 lam(vb, inr(app(pb.from, vb), Xa))));
          break;
        }
        default: throw std::logic_error("cf_to_ef: atomic view mismatch");
      }
    }
    iso_memo.emplace(key, r);
    return r;
  };

  // translate lines to terms over views; hypotheses stay full formulas
  std::vector<std::pair<int, Formula>> hyp_order;
  std::vector<Tm> hyp_tm;
  for (uint32_t h : pi.hyp_gates) {
    Formula F = C.to_formula(h, unfold_bound);
    int id;
    Tm t = hg.fresh(F, id);
    hyp_order.push_back({id, F});
    hyp_tm.push_back(app(iso(F, h).to, t));
  }

  std::vector<Tm> tm(pi.lines.size());
  for (size_t n = 0; n < pi.lines.size(); ++n) {
    const Line& ln = pi.lines[n];
    switch (ln.just.k) {
      case Just::Ax_: {
        Substitution s;
        for (auto& [v, g] : ln.just.gsubst) s.set(v, view(g));
        Formula inst = substitute(s, rs.tmpl(ln.just.ax));
        Tm base = (ln.just.ax == Ax::Proper) ? ax_proper(rs.tmpl(Ax::Proper), s)
                                             : ax(ln.just.ax, s);
        tm[n] = app(iso(inst, ln.gate).to, base);
        break;
      }
      case Just::Hyp: tm[n] = hyp_tm[ln.just.i]; break;
      case Just::MP: {
        const Gate& gj = C.gate(pi.lines[ln.just.j].gate);
        Formula open = Formula::imp(view(gj.a), view(gj.b));
        Tm f = app(iso(open, pi.lines[ln.just.j].gate).from, tm[ln.just.j]);
        tm[n] = app(f, tm[ln.just.i]);
        break;
      }
      case Just::Ext: {
        // input extension variable: redefine it over views
        uint32_t d = ln.just.ext_def_gate;
        Tm e = ext_ax(ln.just.ext_var, view(d), ln.just.ext_fwd);
        tm[n] = app(iso(e->type, ln.gate).to, e);
        break;
      }
      case Just::Subst:
        throw std::invalid_argument("cf_to_ef: substitution rule present");
    }
  }
  // conclusion: expand the final view back to the full formula
  uint32_t root = pi.lines.back().gate;
  Formula full = C.to_formula(root, unfold_bound);
  Tm final_tm = app(iso(full, root).from, tm.back());
  Proof out = to_proof(final_tm, ProofKind::EF, hyp_order);
  reorder_ext_front(out);
  return out;
}

}  // namespace iptk
