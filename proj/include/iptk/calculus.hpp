#pragma once
// Standard Frege systems for fragments L_C, proof objects for F/EF/CF/SF and
// the independent checker.
//
// Axiom templates over metavariables a,b,c (modus ponens is the only rule):
//   S:      (a->b->c)->(a->b)->a->c
//   K:      a->b->a
//   AndE1:  a&b->a
//   AndE2:  a&b->b
//   AndI:   a->b->a&b
//   OrI1:   a->a|b
//   OrI2:   b->a|b
//   OrE:    a|b->(a->c)->(b->c)->c
//   Efq:    F->c

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "circuit.hpp"
#include "formula.hpp"

namespace iptk {

enum class Ax : int {
  S = 0,
  K = 1,
  AndE1 = 2,
  AndE2 = 3,
  AndI = 4,
  OrI1 = 5,
  OrI2 = 6,
  OrE = 7,
  Efq = 8,
  Proper = 100,  // the rule set's proper axiom
};

inline Formula axiom_template(Ax a) {
  static Formula va = Formula::var("a"), vb = Formula::var("b"),
                 vc = Formula::var("c");
  using F = Formula;
  switch (a) {
    case Ax::S:
      return F::imp(F::imp(va, F::imp(vb, vc)),
                    F::imp(F::imp(va, vb), F::imp(va, vc)));
    case Ax::K: return F::imp(va, F::imp(vb, va));
    case Ax::AndE1: return F::imp(F::land(va, vb), va);
    case Ax::AndE2: return F::imp(F::land(va, vb), vb);
    case Ax::AndI: return F::imp(va, F::imp(vb, F::land(va, vb)));
    case Ax::OrI1: return F::imp(va, F::lor(va, vb));
    case Ax::OrI2: return F::imp(vb, F::lor(va, vb));
    case Ax::OrE:
      return F::imp(F::lor(va, vb),
                    F::imp(F::imp(va, vc), F::imp(F::imp(vb, vc), vc)));
    case Ax::Efq: return F::imp(F::bot(), vc);
    default: throw std::invalid_argument("proper axiom has no fixed template");
  }
}

struct RuleSet {
  Fragment fragment;
  std::vector<Ax> axioms;               // standard templates, fragment-filtered
  std::optional<Formula> proper_axiom;  // single extra C-formula
  std::string name = "IPC";

  static RuleSet standard(const Fragment& fr,
                          std::optional<Formula> proper = std::nullopt,
                          const std::string& name = "IPC") {
    RuleSet rs;
    rs.fragment = fr;
    rs.name = name;
    rs.axioms = {Ax::S, Ax::K};
    if (fr.has_and) {
      rs.axioms.push_back(Ax::AndE1);
      rs.axioms.push_back(Ax::AndE2);
      rs.axioms.push_back(Ax::AndI);
    }
    if (fr.has_or) {
      rs.axioms.push_back(Ax::OrI1);
      rs.axioms.push_back(Ax::OrI2);
      rs.axioms.push_back(Ax::OrE);
    }
    if (fr.has_bot) rs.axioms.push_back(Ax::Efq);
    if (proper && !fr.allows(*proper))
      throw std::invalid_argument("proper axiom outside fragment");
    rs.proper_axiom = proper;
    return rs;
  }
  static RuleSet ipc() { return standard(Fragment::full()); }
  static RuleSet ipc_imp() { return standard(Fragment::imp_only()); }

  bool has_axiom(Ax a) const {
    for (Ax x : axioms)
      if (x == a) return true;
    return false;
  }
  Formula tmpl(Ax a) const {
    if (a == Ax::Proper) {
      if (!proper_axiom) throw std::invalid_argument("no proper axiom");
      return *proper_axiom;
    }
    return axiom_template(a);
  }
};

enum class ProofKind { F, EF, CF, SF };

struct Just {
  enum K { Ax_, MP, Hyp, Ext, Subst } k;
  // Ax_: which + subst (gsubst for CF)
  iptk::Ax ax = iptk::Ax::S;
  Substitution subst;
  std::map<std::string, uint32_t> gsubst;  // CF axiom instances
  // MP: i = line proving A, j = line proving A->B; Subst: i = source line;
  // Hyp: i = hypothesis index
  int i = -1, j = -1;
  // Ext: extension variable, its definition, and which implication this is
  std::string ext_var;
  Formula ext_def;
  uint32_t ext_def_gate = 0;  // CF
  bool ext_fwd = true;        // true: q -> def ; false: def -> q
};

struct Line {
  Formula stmt;       // F/EF/SF
  uint32_t gate = 0;  // CF: root gate in the proof's arena
  Just just;
};

struct Proof {
  ProofKind kind = ProofKind::F;
  std::vector<Formula> hypotheses;
  std::vector<uint32_t> hyp_gates;  // CF
  std::vector<Line> lines;
  Circuit circuit;  // CF only: shared arena

  Formula conclusion() const {
    if (lines.empty()) throw std::invalid_argument("empty proof");
    if (kind == ProofKind::CF)
      throw std::invalid_argument("CF conclusion is a circuit; unfold explicitly");
    return lines.back().stmt;
  }
  uint32_t conclusion_gate() const { return lines.back().gate; }

  size_t num_lines() const { return lines.size(); }  // k_P
  uint64_t total_size() const {                      // s_P
    if (kind == ProofKind::CF) return circuit.size() + lines.size();
    uint64_t s = 0;
    for (auto& l : lines) s += l.stmt.size_polish();
    return s;
  }
};

struct CheckOptions {
  // lines satisfying this predicate are exempt from the fragment purity scan
  std::function<bool(Formula)> purity_allowance;
  bool skip_purity = false;
};

struct CheckReport {
  bool ok = true;
  int first_failing_line = -1;
  std::string reason;
  size_t lines = 0;       // k_P
  uint64_t total_size = 0;  // s_P
  explicit operator bool() const { return ok; }
};

namespace detail {
inline bool pure_for(const Fragment& fr, Formula f) { return fr.allows(f); }
}

inline CheckReport check(const RuleSet& rs, const Proof& pi,
                         const CheckOptions& opt = {}) {
  CheckReport rep;
  rep.lines = pi.num_lines();
  rep.total_size = pi.total_size();
  auto fail = [&](int line, const std::string& why) {
    rep.ok = false;
    rep.first_failing_line = line;
    rep.reason = why;
    return rep;
  };
  if (pi.lines.empty()) return fail(-1, "empty proof");
  const bool cf = pi.kind == ProofKind::CF;
  if (pi.kind == ProofKind::SF && !pi.hypotheses.empty())
    return fail(-1, "SF proofs have no hypotheses");

  // EF extension-variable bookkeeping
  std::vector<std::pair<std::string, Formula>> ext_order;       // formula form
  std::vector<std::pair<std::string, uint32_t>> ext_order_cf;   // CF form
  auto ext_index = [&](const std::string& q) -> int {
    for (size_t i = 0; i < ext_order.size(); ++i)
      if (ext_order[i].first == q) return (int)i;
    for (size_t i = 0; i < ext_order_cf.size(); ++i)
      if (ext_order_cf[i].first == q) return (int)i;
    return -1;
  };

  for (size_t n = 0; n < pi.lines.size(); ++n) {
    const Line& ln = pi.lines[n];
    const Just& js = ln.just;
    switch (js.k) {
      case Just::Ax_: {
        if (js.ax == Ax::Proper) {
          if (!rs.proper_axiom) return fail((int)n, "no proper axiom in rule set");
        } else if (!rs.has_axiom(js.ax)) {
          return fail((int)n, "axiom not in rule set");
        }
        Formula t = rs.tmpl(js.ax);
        if (!cf) {
          if (substitute(js.subst, t) != ln.stmt)
            return fail((int)n, "axiom instance mismatch");
        } else {
          // instantiate template into the arena and compare roots
          std::unordered_map<std::string, uint32_t> sigma(js.gsubst.begin(),
                                                          js.gsubst.end());
          Circuit& arena = const_cast<Circuit&>(pi.circuit);
          uint32_t troot = arena.add_formula(t);
          std::unordered_map<uint32_t, uint32_t> memo;
          uint32_t inst = arena.subst_gate(troot, sigma, memo);
          if (inst != ln.gate) return fail((int)n, "axiom instance mismatch (CF)");
        }
        break;
      }
      case Just::MP: {
        if (js.i < 0 || js.j < 0 || js.i >= (int)n || js.j >= (int)n)
          return fail((int)n, "MP premise index out of range");
        if (!cf) {
          Formula maj = pi.lines[js.j].stmt;
          if (!maj.is_imp() || maj.left() != pi.lines[js.i].stmt ||
              maj.right() != ln.stmt)
            return fail((int)n, "MP mismatch");
        } else {
          const Gate& maj = pi.circuit.gate(pi.lines[js.j].gate);
          if (maj.k != Conn::Impl || maj.a != pi.lines[js.i].gate ||
              maj.b != ln.gate)
            return fail((int)n, "MP mismatch (CF)");
        }
        break;
      }
      case Just::Hyp: {
        if (pi.kind == ProofKind::SF) return fail((int)n, "hypothesis in SF proof");
        if (!cf) {
          if (js.i < 0 || js.i >= (int)pi.hypotheses.size() ||
              pi.hypotheses[js.i] != ln.stmt)
            return fail((int)n, "hypothesis mismatch");
        } else {
          if (js.i < 0 || js.i >= (int)pi.hyp_gates.size() ||
              pi.hyp_gates[js.i] != ln.gate)
            return fail((int)n, "hypothesis mismatch (CF)");
        }
        break;
      }
      case Just::Ext: {
        if (pi.kind != ProofKind::EF && pi.kind != ProofKind::CF)
          return fail((int)n, "extension axiom outside EF/CF");
        if (js.ext_var.empty()) return fail((int)n, "empty extension variable");
        int idx = ext_index(js.ext_var);
        if (!cf) {
          if (idx < 0) {
            // first appearance: register and verify side conditions
            for (auto& [q, d] : ext_order) {
              (void)d;
              if (q == js.ext_var) return fail((int)n, "duplicate extension variable");
            }
            if (contains_var(js.ext_def, js.ext_var))
              return fail((int)n, "extension variable occurs in its definition");
            for (auto& [q, d] : ext_order)
              if (contains_var(d, js.ext_var))
                return fail((int)n, "extension variable occurs in earlier definition");
            ext_order.push_back({js.ext_var, js.ext_def});
          } else if (ext_order[idx].second != js.ext_def) {
            return fail((int)n, "extension variable redefined");
          }
          Formula q = Formula::var(js.ext_var);
          Formula want = js.ext_fwd ? Formula::imp(q, js.ext_def)
                                    : Formula::imp(js.ext_def, q);
          if (ln.stmt != want) return fail((int)n, "extension axiom mismatch");
        } else {
          Circuit& arena = const_cast<Circuit&>(pi.circuit);
          uint32_t qg = arena.add_var(js.ext_var);
          if (idx < 0) {
            ext_order_cf.push_back({js.ext_var, js.ext_def_gate});
          } else if (ext_order_cf[idx].second != js.ext_def_gate) {
            return fail((int)n, "extension variable redefined (CF)");
          }
          uint32_t want = js.ext_fwd ? arena.add_imp(qg, js.ext_def_gate)
                                     : arena.add_imp(js.ext_def_gate, qg);
          if (ln.gate != want) return fail((int)n, "extension axiom mismatch (CF)");
        }
        break;
      }
      case Just::Subst: {
        if (pi.kind != ProofKind::SF)
          return fail((int)n, "substitution rule outside SF");
        if (js.i < 0 || js.i >= (int)n)
          return fail((int)n, "substitution premise out of range");
        if (substitute(js.subst, pi.lines[js.i].stmt) != ln.stmt)
          return fail((int)n, "substitution mismatch");
        break;
      }
    }
    // connective purity
    if (!opt.skip_purity) {
      if (!cf) {
        if (!detail::pure_for(rs.fragment, ln.stmt) &&
            !(opt.purity_allowance && opt.purity_allowance(ln.stmt)))
          return fail((int)n, "line uses connective outside fragment");
      }
    }
  }

  // remaining EF side conditions: q_i absent from conclusion and hypotheses
  if (!ext_order.empty() || !ext_order_cf.empty()) {
    if (!cf) {
      for (auto& [q, d] : ext_order) {
        (void)d;
        if (contains_var(pi.lines.back().stmt, q))
          return fail((int)pi.lines.size() - 1,
                      "extension variable occurs in conclusion");
        for (auto& h : pi.hypotheses)
          if (contains_var(h, q))
            return fail(-1, "extension variable occurs in hypothesis");
      }
    }
  }
  if (cf && !opt.skip_purity) {
    // purity scan over the arena portion reachable from lines
    std::vector<bool> seen(pi.circuit.size(), false);
    std::function<bool(uint32_t)> scan = [&](uint32_t g) -> bool {
      if (seen[g]) return true;
      seen[g] = true;
      const Gate& gg = pi.circuit.gate(g);
      if (gg.k == Conn::Var) return true;
      if (!rs.fragment.allows(gg.k)) return false;
      if (gg.k == Conn::Bot) return true;
      return scan(gg.a) && scan(gg.b);
    };
    for (size_t n = 0; n < pi.lines.size(); ++n)
      if (!scan(pi.lines[n].gate))
        return fail((int)n, "line uses connective outside fragment (CF)");
  }
  return rep;
}

// --- convenience constructors -----------------------------------------------

inline Line line_ax(Ax a, const Substitution& s, Formula stmt) {
  Line l;
  l.stmt = stmt;
  l.just.k = Just::Ax_;
  l.just.ax = a;
  l.just.subst = s;
  return l;
}
inline Line line_mp(int i, int j, Formula stmt) {
  Line l;
  l.stmt = stmt;
  l.just.k = Just::MP;
  l.just.i = i;
  l.just.j = j;
  return l;
}
inline Line line_hyp(int k, Formula stmt) {
  Line l;
  l.stmt = stmt;
  l.just.k = Just::Hyp;
  l.just.i = k;
  return l;
}
inline Line line_ext(const std::string& q, Formula def, bool fwd) {
  Line l;
  l.just.k = Just::Ext;
  l.just.ext_var = q;
  l.just.ext_def = def;
  l.just.ext_fwd = fwd;
  Formula qv = Formula::var(q);
  l.stmt = fwd ? Formula::imp(qv, def) : Formula::imp(def, qv);
  return l;
}
inline Line line_subst(int i, const Substitution& s, Formula stmt) {
  Line l;
  l.stmt = stmt;
  l.just.k = Just::Subst;
  l.just.i = i;
  l.just.subst = s;
  return l;
}

}  // namespace iptk
