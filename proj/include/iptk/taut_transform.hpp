#pragma once
// Tautology translations with certificates:
//   bar_basic / bar_essential : implicational form with disjunction premises
//   plus                      : bot-free form (bot emulated by a fresh variable)
//   tilde                     : lor-free form (joins emulated by fresh variables)
//   hat                       : plus then tilde, purely implicational
// Each operation returns the translated formula, the reverse substitution and
// explicit Frege certificates.  The plus/tilde/hat forward directions exist
// only relative to a given proof and are provided as proof transports.

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "calculus.hpp"
#include "nd.hpp"
#include "negtrans.hpp"

namespace iptk {

struct Translation {
  Formula input, output;
  Substitution back_subst;
  Proof forward;   // input -> output; empty when only a transport applies
  Proof backward;  // back_subst(output) -> input
  int lor_premises = 0;  // number of disjunction premises in the output
  bool has_forward() const { return !forward.lines.empty(); }
};

namespace detail {

// x |-> outer(inner(x)), also keeping outer's own entries
inline Substitution compose_subst(const Substitution& outer,
                                  const Substitution& inner) {
  Substitution s = outer;
  for (auto& [v, f] : inner.map) s.map[v] = substitute(outer, f);
  return s;
}

// a name prefix that no variable in vs starts with
inline std::string fresh_prefix(const std::set<std::string>& vs,
                                std::string base) {
  for (;;) {
    bool clash = false;
    for (auto& v : vs)
      if (v.rfind(base, 0) == 0) {
        clash = true;
        break;
      }
    if (!clash) return base;
    base = "_" + base;
  }
}

inline bool imp_bot_only(Formula f) {
  if (f.is_var() || f.is_bot()) return true;
  if (f.is_imp()) return imp_bot_only(f.left()) && imp_bot_only(f.right());
  return false;
}

}  // namespace detail

// apply a substitution to every line of an F proof; sound as a meta-operation
// (axiom instances stay instances, modus ponens is preserved)
inline Proof subst_proof(const Substitution& s, const Proof& pi) {
  Proof out = pi;
  for (auto& h : out.hypotheses) h = substitute(s, h);
  for (auto& ln : out.lines) {
    if (ln.just.k == Just::Ext || ln.just.k == Just::Subst)
      throw std::invalid_argument("subst_proof: F lines only");
    ln.stmt = substitute(s, ln.stmt);
    if (ln.just.k == Just::Ax_)
      ln.just.subst = detail::compose_subst(s, ln.just.subst);
  }
  return out;
}

// ---------------------------------------------------------------------------
// classical {->,F} normal form, used inside negations

inline Formula cl_imp(Formula f) {
  if (f.is_atom()) return f;
  Formula a = cl_imp(f.left()), b = cl_imp(f.right());
  switch (f.kind()) {
    case Conn::Impl: return Formula::imp(a, b);
    case Conn::And: return Formula::neg(Formula::imp(a, Formula::neg(b)));
    case Conn::Or: return Formula::imp(Formula::neg(a), b);
    default: return f;
  }
}

// rewrite the body of every negation to its classical {->,F} normal form
inline Formula neg_scope_rewrite(Formula f) {
  if (f.is_atom()) return f;
  if (f.is_imp() && f.right().is_bot())
    return Formula::neg(cl_imp(f.left()));
  Formula a = neg_scope_rewrite(f.left()), b = neg_scope_rewrite(f.right());
  switch (f.kind()) {
    case Conn::Impl: return Formula::imp(a, b);
    case Conn::And: return Formula::land(a, b);
    default: return Formula::lor(a, b);
  }
}

namespace detail {

// double-negation bridges across cl_imp: fwd : a -> ~~cl(a), bwd : cl(a) -> ~~a
struct DnPair {
  Tm fwd, bwd;
};

class DnBuilder {
 public:
  explicit DnBuilder(TmGen& tg) : tg_(tg) {}

  const DnPair& get(Formula a) {
    auto it = memo_.find(a);
    if (it != memo_.end()) return it->second;
    DnPair r = build(a);
    return memo_.emplace(a, r).first->second;
  }

 private:
  static Formula nn(Formula x) { return Formula::neg(Formula::neg(x)); }

  DnPair build(Formula a) {
    Formula A = cl_imp(a);
    if (a.is_atom()) {
      Tm x = tg_(a), n = tg_(Formula::neg(a));
      Tm t = lam(x, lam(n, app(n, x)));
      return {t, t};
    }
    Formula a0 = a.left(), a1 = a.right();
    const DnPair d0 = get(a0), d1 = get(a1);
    Formula A0 = cl_imp(a0), A1 = cl_imp(a1);
    switch (a.kind()) {
      case Conn::And: {
        // A = ~(A0 -> ~A1)
        Tm p = tg_(a), n = tg_(Formula::neg(A));
        Tm u = tg_(Formula::imp(A0, Formula::neg(A1)));
        Tm x = tg_(A0), y = tg_(A1);
        Tm cl = lam(u, app(d0.fwd, fst(p),
                           lam(x, app(d1.fwd, snd(p), lam(y, app(u, x, y))))));
        Tm fwd = lam(p, lam(n, app(n, cl)));
        Tm c = tg_(A), m = tg_(Formula::neg(a));
        Tm v = tg_(a0), w = tg_(a1);
        Tm bwd = lam(
            c, lam(m, app(c, lam(x, lam(y, app(d0.bwd, x,
                                               lam(v, app(d1.bwd, y,
                                                          lam(w, app(m, pair(v, w)))))))))));
        return {fwd, bwd};
      }
      case Conn::Or: {
        // A = ~A0 -> A1
        Tm d = tg_(a), n = tg_(Formula::neg(A));
        Tm x = tg_(a0), y = tg_(a1), na = tg_(Formula::neg(A0)), b = tg_(A1);
        Tm f1 = lam(x, app(n, lam(na, abort(app(d0.fwd, x, na), A1))));
        Tm f2 = lam(y, app(d1.fwd, y, lam(b, app(n, lam(na, b)))));
        Tm fwd = lam(d, lam(n, cases(d, f1, f2)));
        Tm c = tg_(A), m = tg_(Formula::neg(a));
        Tm xa = tg_(A0), u = tg_(a0), v = tg_(a1);
        Tm bwd = lam(
            c, lam(m, app(d1.bwd,
                          app(c, lam(xa, app(d0.bwd, xa,
                                             lam(u, app(m, inl(u, a1)))))),
                          lam(v, app(m, inr(v, a0))))));
        return {fwd, bwd};
      }
      default: {
        // A = A0 -> A1
        Tm h = tg_(a), n = tg_(Formula::neg(A));
        Tm x = tg_(A0), u = tg_(a0), b = tg_(A1), x2 = tg_(A0);
        Tm fwd = lam(
            h, lam(n, app(n, lam(x, abort(app(d0.bwd, x,
                                              lam(u, app(d1.fwd, app(h, u),
                                                         lam(b, app(n, lam(x2, b)))))),
                                          A1)))));
        Tm c = tg_(A), m = tg_(Formula::neg(a));
        Tm u2 = tg_(a0), xa = tg_(A0), v = tg_(a1), u3 = tg_(a0);
        Tm bwd = lam(
            c, lam(m, app(m, lam(u2, abort(app(d0.fwd, u2,
                                               lam(xa, app(d1.bwd, app(c, xa),
                                                           lam(v, app(m, lam(u3, v)))))),
                                           a1)))));
        return {fwd, bwd};
      }
    }
  }

  TmGen& tg_;
  std::map<Formula, DnPair> memo_;
};

// congruence terms for neg_scope_rewrite: fwd : f -> f', bwd : f' -> f
struct CongPair {
  Tm fwd, bwd;
};

class CongBuilder {
 public:
  explicit CongBuilder(TmGen& tg) : tg_(tg), dn_(tg) {}

  const CongPair& get(Formula f) {
    auto it = memo_.find(f);
    if (it != memo_.end()) return it->second;
    CongPair r = build(f);
    return memo_.emplace(f, r).first->second;
  }

 private:
  CongPair build(Formula f) {
    Formula g = neg_scope_rewrite(f);
    if (g == f) return {combI(f), combI(f)};
    if (f.is_imp() && f.right().is_bot()) {
      const DnPair& d = dn_.get(f.left());
      Formula A = cl_imp(f.left());
      Tm m = tg_(f), x = tg_(A);
      Tm fwd = lam(m, lam(x, app(d.bwd, x, m)));
      Tm m2 = tg_(g), u = tg_(f.left());
      Tm bwd = lam(m2, lam(u, app(d.fwd, u, m2)));
      return {fwd, bwd};
    }
    const CongPair cl = get(f.left()), cr = get(f.right());
    Formula gl = neg_scope_rewrite(f.left()), gr = neg_scope_rewrite(f.right());
    switch (f.kind()) {
      case Conn::Impl: {
        Tm h = tg_(f), x = tg_(gl);
        Tm fwd = lam(h, lam(x, app(cr.fwd, app(h, app(cl.bwd, x)))));
        Tm h2 = tg_(g), y = tg_(f.left());
        Tm bwd = lam(h2, lam(y, app(cr.bwd, app(h2, app(cl.fwd, y)))));
        return {fwd, bwd};
      }
      case Conn::And: {
        Tm p = tg_(f);
        Tm fwd = lam(p, pair(app(cl.fwd, fst(p)), app(cr.fwd, snd(p))));
        Tm q = tg_(g);
        Tm bwd = lam(q, pair(app(cl.bwd, fst(q)), app(cr.bwd, snd(q))));
        return {fwd, bwd};
      }
      default: {
        Tm d = tg_(f), x = tg_(f.left()), y = tg_(f.right());
        Tm fwd = lam(d, cases(d, lam(x, inl(app(cl.fwd, x), gr)),
                              lam(y, inr(app(cr.fwd, y), gl))));
        Tm d2 = tg_(g), x2 = tg_(gl), y2 = tg_(gr);
        Tm bwd = lam(d2, cases(d2, lam(x2, inl(app(cl.bwd, x2), f.right())),
                               lam(y2, inr(app(cr.bwd, y2), f.left()))));
        return {fwd, bwd};
      }
    }
  }

  TmGen& tg_;
  DnBuilder dn_;
  std::map<Formula, CongPair> memo_;
};

// ---------------------------------------------------------------------------
// the implicational translation

class BarBuilder {
 public:
  explicit BarBuilder(bool essential) : essential_(essential) {}

  void run(Formula root) {
    root_ = root;
    auto vs = vars_of(root);
    pfx_ = fresh_prefix(vs, "_b");
    qfx_ = fresh_prefix(vs, "_q");
    dplus_root_ = demand(root, true);
    // fixed premise order: the bot row, then disjunction rows in discovery
    // (leftmost-innermost) order, then the remaining rows in post-order
    std::stable_sort(rows_.begin(), rows_.end(),
                     [](const Row& a, const Row& b) { return a.cat < b.cat; });
  }

  Formula output() const {
    std::vector<Formula> xs;
    for (auto& r : rows_) xs.push_back(r.xi);
    return join(xs, pvar_const(root_));
  }
  int lor_premises() const {
    int m = 0;
    for (auto& r : rows_) m += r.cat == 1;
    return m;
  }
  const Substitution& sigma() const { return sigma_; }

  // forward : root -> output, given through pre/post composition hooks
  Tm forward_term(Formula outer_input, Tm pre /* outer_input -> root */) {
    Tm h = tg_(outer_input);
    std::vector<Tm> hyps;
    for (auto& r : rows_) hyps.push_back(r.hyp);
    Tm body = app(dplus_root_, app(pre, h));
    return lam(h, lam_seq(hyps, body));
  }
  // backward : sigma(output) -> outer_input, post : root -> outer_input
  Tm backward_term(Tm post) {
    Tm h = tg_(substitute(sigma_, output()));
    std::vector<Tm> backs;
    for (auto& r : rows_) backs.push_back(r.back);
    return lam(h, app(post, app_seq(h, backs)));
  }

 private:
  struct Row {
    Formula xi;
    int cat;  // 0: bot, 1: disjunction, 2: rest
    Tm hyp, back;
  };

  Formula pvar(Formula psi) {
    if (psi.is_var()) return psi;
    auto it = pvar_.find(psi);
    if (it != pvar_.end()) return it->second;
    Formula v = Formula::var(pfx_ + std::to_string(pvar_.size()));
    pvar_.emplace(psi, v);
    sigma_.set(v.name(), psi);
    return v;
  }
  Formula pvar_const(Formula psi) const {
    if (psi.is_var()) return psi;
    return pvar_.at(psi);
  }

  Tm add_row(Formula xi, int cat, Tm back) {
    Row r;
    r.xi = xi;
    r.cat = cat;
    r.back = back;
    r.hyp = tg_(xi);
    rows_.push_back(r);
    return r.hyp;
  }

  // demand(psi, true)  : term psi -> p_psi
  // demand(psi, false) : term p_psi -> psi
  Tm demand(Formula psi, bool pos) {
    auto key = std::make_pair(psi, pos);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    Tm t = build(psi, pos);
    memo_.emplace(key, t);
    return t;
  }

  Tm build(Formula psi, bool pos) {
    if (psi.is_var()) return combI(psi);
    Formula p = pvar(psi);
    if (psi.is_bot()) {
      if (pos) {
        Tm x = tg_(psi);
        return lam(x, abort(x, p));
      }
      return add_row(Formula::imp(p, psi), 0, combI(Formula::bot()));
    }
    Formula l = psi.left(), r = psi.right();
    Formula pl = pvar(l), pr = pvar(r);
    switch (psi.kind()) {
      case Conn::Impl: {
        if (pos) return pos_imp(psi);
        Tm da = demand(l, true), db = demand(r, false);
        Tm row = add_row(Formula::imp(p, Formula::imp(pl, pr)), 2, combI(psi));
        Tm x = tg_(p), a = tg_(l);
        return lam(x, lam(a, app(db, app(row, x, app(da, a)))));
      }
      case Conn::And: {
        if (pos) {
          Tm d0 = demand(l, true), d1 = demand(r, true);
          Tm u = tg_(l), v = tg_(r);
          Tm back = lam(u, lam(v, pair(u, v)));
          Tm row = add_row(Formula::imp(pl, Formula::imp(pr, p)), 2, back);
          Tm c = tg_(psi);
          return lam(c, app(row, app(d0, fst(c)), app(d1, snd(c))));
        }
        Tm d0 = demand(l, false), d1 = demand(r, false);
        Tm c1 = tg_(psi), c2 = tg_(psi);
        Tm r1 = add_row(Formula::imp(p, pl), 2, lam(c1, fst(c1)));
        Tm r2 = add_row(Formula::imp(p, pr), 2, lam(c2, snd(c2)));
        Tm x = tg_(p);
        return lam(x, pair(app(d0, app(r1, x)), app(d1, app(r2, x))));
      }
      default: {  // Or
        if (pos) {
          Tm d0 = demand(l, true), d1 = demand(r, true);
          Tm u = tg_(l), v = tg_(r);
          Tm ra = add_row(Formula::imp(pl, p), 2, lam(u, inl(u, r)));
          Tm rb = add_row(Formula::imp(pr, p), 2, lam(v, inr(v, l)));
          Tm d = tg_(psi), x = tg_(l), y = tg_(r);
          return lam(d, cases(d, lam(x, app(ra, app(d0, x))),
                              lam(y, app(rb, app(d1, y)))));
        }
        Tm d0 = demand(l, false), d1 = demand(r, false);
        Tm row =
            add_row(Formula::imp(p, Formula::lor(pl, pr)), 1, combI(psi));
        Tm x = tg_(p), a = tg_(pl), b = tg_(pr);
        return lam(x, cases(app(row, x), lam(a, inl(app(d0, a), r)),
                            lam(b, inr(app(d1, b), l))));
      }
    }
  }

  // positively occurring implication gamma = A -> B.  The antecedent's
  // top-most and/or skeleton gets one variable per node with intended meaning
  // node -> B; the skeleton rows are disjunction-free.  With essential_ off
  // the skeleton is the single hole A, which is the standard table row.
  Tm pos_imp(Formula gamma) {
    Formula A = gamma.left(), B = gamma.right();
    Formula pg = pvar(gamma), pb = pvar(B);
    Tm db = demand(B, true);
    // skel(node) : term (node -> p_B) -> q_node, with q_A = p_gamma
    std::function<std::pair<Formula, Tm>(Formula)> skel =
        [&](Formula node) -> std::pair<Formula, Tm> {
      bool hole = !essential_ || !(node.is_and() || node.is_or());
      Formula q;
      if (node == A) {
        q = pg;
      } else {
        q = Formula::var(qfx_ + std::to_string(qcount_++));
        sigma_.set(q.name(), Formula::imp(node, B));
      }
      if (hole) {
        Tm dneg = demand(node, false);
        Formula pa = pvar(node);
        Tm row = add_row(Formula::imp(Formula::imp(pa, pb), q), 2,
                         combI(Formula::imp(node, B)));
        Tm h = tg_(Formula::imp(node, pb)), a = tg_(pa);
        return {q, lam(h, app(row, lam(a, app(h, app(dneg, a)))))};
      }
      auto [q1, e1] = skel(node.left());
      auto [q2, e2] = skel(node.right());
      Formula n1 = node.left(), n2 = node.right();
      if (node.is_or()) {
        Formula inner = Formula::imp(q1, Formula::imp(q2, pb));
        Tm H = tg_(Formula::imp(Formula::imp(Formula::imp(n1, B),
                                             Formula::imp(Formula::imp(n2, B), B)),
                                B));
        Tm d = tg_(node), u = tg_(Formula::imp(n1, B)), w = tg_(Formula::imp(n2, B));
        Tm back = lam(H, lam(d, app(H, lam(u, lam(w, cases(d, u, w))))));
        Tm row = add_row(
            Formula::imp(Formula::imp(inner, pb), q), 2, back);
        Tm h = tg_(Formula::imp(node, pb)), wq = tg_(inner);
        Tm x = tg_(n1), y = tg_(n2);
        return {q, lam(h, app(row, lam(wq, app(wq,
                                               app(e1, lam(x, app(h, inl(x, n2)))),
                                               app(e2, lam(y, app(h, inr(y, n1))))))))};
      }
      // And node
      Formula inner = Formula::imp(Formula::imp(q1, pb), q2);
      Tm H = tg_(Formula::imp(Formula::imp(Formula::imp(n1, B), B),
                              Formula::imp(n2, B)));
      Tm c = tg_(node), u = tg_(Formula::imp(n1, B));
      Tm back = lam(H, lam(c, app(H, lam(u, app(u, fst(c))), snd(c))));
      Tm row = add_row(Formula::imp(inner, q), 2, back);
      Tm h = tg_(Formula::imp(node, pb)), z = tg_(Formula::imp(q1, pb));
      Tm y = tg_(n2), x = tg_(n1);
      return {q, lam(h, app(row, lam(z, app(e2, lam(y, app(z, app(e1,
                            lam(x, app(h, pair(x, y))))))))))};
    };
    auto [qa, ea] = skel(A);
    (void)qa;
    Tm g = tg_(gamma), m = tg_(A);
    return lam(g, app(ea, lam(m, app(db, app(g, m)))));
  }

  bool essential_;
  Formula root_;
  std::string pfx_, qfx_;
  int qcount_ = 0;
  TmGen tg_;
  std::map<Formula, Formula> pvar_;
  Substitution sigma_;
  std::vector<Row> rows_;
  std::map<std::pair<Formula, bool>, Tm> memo_;
  Tm dplus_root_;
};

inline Translation bar_impl(Formula phi, bool essential) {
  Translation t;
  t.input = phi;
  TmGen tg;
  CongBuilder cong(tg);
  Formula work = essential ? neg_scope_rewrite(phi) : phi;
  BarBuilder bb(essential);
  bb.run(work);
  t.output = bb.output();
  t.back_subst = bb.sigma();
  t.lor_premises = bb.lor_premises();
  Tm pre = essential ? cong.get(phi).fwd : combI(phi);
  Tm post = essential ? cong.get(phi).bwd : combI(phi);
  t.forward = to_proof(bb.forward_term(phi, pre));
  t.backward = to_proof(bb.backward_term(post));
  return t;
}

}  // namespace detail

inline Translation bar_basic(Formula phi) { return detail::bar_impl(phi, false); }
inline Translation bar_essential(Formula phi) {
  return detail::bar_impl(phi, true);
}

// ---------------------------------------------------------------------------
// distinct-subformula counts matching the bar premise counts (one premise per
// distinct disjunction, thanks to interning)

inline int negative_disjunction_count(Formula phi) {
  std::set<Formula> m;
  for (auto& o : polarity_map(phi))
    if (o.sub.is_or() && !o.positive) m.insert(o.sub);
  return (int)m.size();
}

inline int essential_disjunction_count(Formula phi) {
  std::set<Formula> m;
  for (auto& p : essential_disjunctions(phi)) m.insert(at_path(phi, p));
  return (int)m.size();
}

// ---------------------------------------------------------------------------
// the bot-free translation

namespace detail {

inline std::string plus_fresh_r(Formula phi) {
  auto vs = vars_of(phi);
  if (!vs.count("r")) return "r";
  for (int k = 0;; ++k) {
    std::string c = "_r" + std::to_string(k);
    if (!vs.count(c)) return c;
  }
}

inline Formula replace_bot(Formula f, Formula r) {
  if (f.is_bot()) return r;
  if (f.is_var()) return f;
  Formula a = replace_bot(f.left(), r), b = replace_bot(f.right(), r);
  switch (f.kind()) {
    case Conn::Impl: return Formula::imp(a, b);
    case Conn::And: return Formula::land(a, b);
    default: return Formula::lor(a, b);
  }
}

}  // namespace detail

inline Translation plus(Formula phi) {
  Translation t;
  t.input = phi;
  Formula r = Formula::var(detail::plus_fresh_r(phi));
  std::vector<Formula> prems;
  auto vset = vars_of(phi);
  std::vector<std::string> vs(vset.begin(), vset.end());
  for (auto& v : vs) prems.push_back(Formula::imp(r, Formula::var(v)));
  t.output = join(prems, detail::replace_bot(phi, r));
  t.back_subst.set(r.name(), Formula::bot());
  detail::TmGen tg;
  Tm h = tg(substitute(t.back_subst, t.output));
  std::vector<Tm> efq;
  for (auto& v : vs) {
    Tm x = tg(Formula::bot());
    efq.push_back(lam(x, abort(x, Formula::var(v))));
  }
  t.backward = to_proof(lam(h, detail::app_seq(h, efq)));
  return t;
}

namespace detail {

// F/EF transport: replace bot (and auxiliary variables) by r throughout the
// proof, patch ex-falso instances, and discharge the r -> p_i assumptions
inline Proof plus_transport_fef(const RuleSet& rs, const Proof& pi) {
  Formula phi = pi.conclusion();
  Formula r = Formula::var(plus_fresh_r(phi));
  std::map<std::string, Formula> extdef;
  std::vector<std::pair<std::string, Formula>> extorder;
  for (auto& ln : pi.lines)
    if (ln.just.k == Just::Ext && !extdef.count(ln.just.ext_var)) {
      extdef[ln.just.ext_var] = ln.just.ext_def;
      extorder.push_back({ln.just.ext_var, ln.just.ext_def});
    }
  std::set<std::string> keep = vars_of(phi);
  std::function<Formula(Formula)> tau = [&](Formula f) -> Formula {
    if (f.is_bot()) return r;
    if (f.is_var())
      return (keep.count(f.name()) || extdef.count(f.name())) ? f : r;
    Formula a = tau(f.left()), b = tau(f.right());
    switch (f.kind()) {
      case Conn::Impl: return Formula::imp(a, b);
      case Conn::And: return Formula::land(a, b);
      default: return Formula::lor(a, b);
    }
  };
  TmGen tg;
  std::map<std::string, Tm> hr;
  std::vector<std::string> vs(keep.begin(), keep.end());
  for (auto& v : vs) hr[v] = tg(Formula::imp(r, Formula::var(v)));
  // derive(chi) : term r -> chi, for tau-images chi
  std::map<Formula, Tm> dmemo;
  std::function<Tm(Formula)> derive = [&](Formula chi) -> Tm {
    auto it = dmemo.find(chi);
    if (it != dmemo.end()) return it->second;
    Tm t;
    if (chi == r) {
      t = combI(r);
    } else if (chi.is_var()) {
      auto h = hr.find(chi.name());
      if (h != hr.end()) {
        t = h->second;
      } else {
        // extension variable: go through its definition
        Formula def = tau(extdef.at(chi.name()));
        Tm x = tg(r);
        t = lam(x, app(ext_ax(chi.name(), def, false), app(derive(def), x)));
      }
    } else if (chi.is_imp()) {
      Tm x = tg(r), y = tg(chi.left());
      t = lam(x, lam(y, app(derive(chi.right()), x)));
    } else if (chi.is_and()) {
      Tm x = tg(r);
      t = lam(x, pair(app(derive(chi.left()), x), app(derive(chi.right()), x)));
    } else {
      Tm x = tg(r);
      t = lam(x, inl(app(derive(chi.left()), x), chi.right()));
    }
    dmemo.emplace(chi, t);
    return t;
  };
  std::vector<Tm> lt;
  for (auto& ln : pi.lines) {
    switch (ln.just.k) {
      case Just::Ax_: {
        if (ln.just.ax == Ax::Efq) {
          lt.push_back(derive(tau(ln.stmt.right())));
          break;
        }
        Substitution s;
        for (auto& [v, f] : ln.just.subst.map) s.set(v, tau(f));
        Tm a = ln.just.ax == Ax::Proper ? ax_proper(rs.tmpl(Ax::Proper), s)
                                        : ax(ln.just.ax, s);
        if (a->type != tau(ln.stmt))
          throw std::logic_error("plus_transport: axiom image mismatch");
        lt.push_back(a);
        break;
      }
      case Just::MP:
        lt.push_back(app(lt[ln.just.j], lt[ln.just.i]));
        break;
      case Just::Ext:
        lt.push_back(ext_ax(ln.just.ext_var, tau(ln.just.ext_def),
                            ln.just.ext_fwd));
        break;
      default:
        throw std::invalid_argument("plus_transport: unsupported line kind");
    }
    if (lt.back()->type != tau(ln.stmt))
      throw std::logic_error("plus_transport: line image mismatch");
  }
  std::vector<Tm> hyps;
  for (auto& v : vs) hyps.push_back(hr[v]);
  Proof out = to_proof(lam_seq(hyps, lt.back()), pi.kind);
  if (!extorder.empty()) {
    Proof shifted;
    shifted.kind = out.kind;
    for (auto& [q, d] : extorder) shifted.lines.push_back(line_ext(q, tau(d), true));
    int off = (int)shifted.lines.size();
    for (auto ln : out.lines) {
      if (ln.just.k == Just::MP) {
        ln.just.i += off;
        ln.just.j += off;
      }
      shifted.lines.push_back(ln);
    }
    out = std::move(shifted);
  }
  return out;
}

}  // namespace detail

inline Proof plus_transport(const RuleSet& rs, const Proof& pi);  // below

// ---------------------------------------------------------------------------
// the lor-free translation

namespace detail {

inline void collect_disj(Formula f, std::vector<Formula>& out,
                         std::set<Formula>& seen) {
  if (f.is_atom() || seen.count(f)) return;
  seen.insert(f);
  collect_disj(f.left(), out, seen);
  collect_disj(f.right(), out, seen);
  if (f.is_or()) out.push_back(f);
}

struct TildeParts {
  std::vector<Formula> disj;        // post-order, leftmost-innermost
  std::map<Formula, Formula> rvar;  // disjunction -> its variable
  std::vector<Formula> V;           // variables, r-variables, then bot
  bool drop_bot = false;
  std::vector<Formula> delta;       // premise rows in order
  struct RowId {
    int kind;  // 0: psi*->r, 1: chi*->r, 2: join row for V[v]
    Formula d;
    Formula v;
  };
  std::vector<RowId> rows;
  std::map<Formula, Formula> star_memo;
  Formula core;

  Formula star(Formula f) {
    auto rv = rvar.find(f);
    if (rv != rvar.end()) return rv->second;
    if (f.is_atom()) return f;
    auto it = star_memo.find(f);
    if (it != star_memo.end()) return it->second;
    Formula a = star(f.left()), b = star(f.right());
    Formula res = f.is_imp() ? Formula::imp(a, b) : Formula::land(a, b);
    star_memo.emplace(f, res);
    return res;
  }
  Formula join_row(Formula d, Formula v) {
    return Formula::imp(
        rvar.at(d),
        Formula::imp(Formula::imp(star(d.left()), v),
                     Formula::imp(Formula::imp(star(d.right()), v), v)));
  }
};

inline TildeParts tilde_parts(Formula phi) {
  TildeParts tp;
  std::set<Formula> seen;
  collect_disj(phi, tp.disj, seen);
  std::string pfx = fresh_prefix(vars_of(phi), "_r");
  for (size_t i = 0; i < tp.disj.size(); ++i)
    tp.rvar[tp.disj[i]] = Formula::var(pfx + std::to_string(i));
  for (auto& v : vars_of(phi)) tp.V.push_back(Formula::var(v));
  for (auto& d : tp.disj) tp.V.push_back(tp.rvar[d]);
  tp.drop_bot = is_positive(phi);
  if (!tp.drop_bot) tp.V.push_back(Formula::bot());
  for (auto& d : tp.disj) {
    tp.delta.push_back(Formula::imp(tp.star(d.left()), tp.rvar[d]));
    tp.rows.push_back({0, d, Formula()});
    tp.delta.push_back(Formula::imp(tp.star(d.right()), tp.rvar[d]));
    tp.rows.push_back({1, d, Formula()});
    for (auto& v : tp.V) {
      tp.delta.push_back(tp.join_row(d, v));
      tp.rows.push_back({2, d, v});
    }
  }
  tp.core = join(tp.delta, tp.star(phi));
  return tp;
}

}  // namespace detail

inline Translation tilde(Formula phi) {
  Translation t;
  t.input = phi;
  auto tp = detail::tilde_parts(phi);
  Substitution sig;
  for (auto& d : tp.disj) sig.set(tp.rvar[d].name(), d);
  // backward for the lor-free core: sig(core) -> phi
  detail::TmGen tg;
  Tm h = tg(substitute(sig, tp.core));
  std::vector<Tm> args;
  for (auto& ri : tp.rows) {
    Formula psi = ri.d.left(), chi = ri.d.right();
    if (ri.kind == 0) {
      Tm x = tg(psi);
      args.push_back(lam(x, inl(x, chi)));
    } else if (ri.kind == 1) {
      Tm y = tg(chi);
      args.push_back(lam(y, inr(y, psi)));
    } else {
      Formula sv = substitute(sig, ri.v);
      Tm z = tg(ri.d), u = tg(Formula::imp(psi, sv)), w = tg(Formula::imp(chi, sv));
      args.push_back(lam(z, lam(u, lam(w, cases(z, u, w)))));
    }
  }
  Tm core_bwd = lam(h, detail::app_seq(h, args));  // sig(core) -> phi
  if (detail::imp_bot_only(tp.core)) {
    t.output = tp.core;
    t.back_subst = sig;
    t.backward = to_proof(core_bwd);
    if (tp.disj.empty()) t.forward = to_proof(combI(phi));
    return t;
  }
  Translation bar = bar_basic(tp.core);
  t.output = bar.output;
  t.back_subst = detail::compose_subst(sig, bar.back_subst);
  // sig(bar backward) : sig(bar_sigma(output)) -> sig(core), then the core
  // backward reaches phi
  auto p1 = std::make_shared<const Proof>(subst_proof(sig, bar.backward));
  Tm hh = tg(substitute(t.back_subst, t.output));
  t.backward = to_proof(lam(hh, app(core_bwd, app(lemma(p1), hh))));
  if (tp.disj.empty()) {
    // no disjunctions: phi -> core is the identity, so the bar certificate
    // already gives the forward direction
    t.forward = bar.forward;
  }
  return t;
}

namespace detail {

// EF transport of a proof of phi into a proof of the lor-free core of phi,
// with every disjunction in the proof emulated by a variable: hypotheses for
// the subformula disjunctions, extension variables for the rest
inline Proof tilde_transport_ef(const RuleSet& rs, const Proof& pi_in) {
  Formula phi = pi_in.conclusion();
  TildeParts tp = tilde_parts(phi);

  // rename proof variables that clash with the fresh r-variables, and map
  // auxiliary variables to bot so that every plain variable is from phi
  std::set<std::string> extvars;
  for (auto& ln : pi_in.lines)
    if (ln.just.k == Just::Ext) extvars.insert(ln.just.ext_var);
  std::set<std::string> keep = vars_of(phi);
  Substitution pre;
  for (auto& ln : pi_in.lines)
    for (auto& v : vars_of(ln.stmt))
      if (!keep.count(v) && !extvars.count(v) && !pre.map.count(v))
        pre.set(v, Formula::bot());
  Proof pi = pi_in;
  if (!pre.empty()) {
    for (auto& ln : pi.lines) {
      ln.stmt = substitute(pre, ln.stmt);
      if (ln.just.k == Just::Ax_) ln.just.subst = compose_subst(pre, ln.just.subst);
      if (ln.just.k == Just::Ext) ln.just.ext_def = substitute(pre, ln.just.ext_def);
    }
  }
  for (auto& v : extvars)
    if (tp.rvar.end() !=
        std::find_if(tp.rvar.begin(), tp.rvar.end(),
                     [&](auto& kv) { return kv.second.name() == v; }))
      throw std::invalid_argument("tilde_transport: extension variable clash");

  // disjunctions appearing anywhere in the proof
  std::vector<Formula> alldisj;
  {
    std::set<Formula> seen;
    for (auto& d : tp.disj) seen.insert(d);
    for (auto& ln : pi.lines) {
      collect_disj(ln.stmt, alldisj, seen);
      if (ln.just.k == Just::Ext) collect_disj(ln.just.ext_def, alldisj, seen);
    }
  }
  std::set<std::string> allnames = extvars;
  for (auto& ln : pi.lines)
    for (auto& v : vars_of(ln.stmt)) allnames.insert(v);
  std::string epfx = fresh_prefix(allnames, "_x");
  int ecount = 0;
  std::map<Formula, std::string> extname;  // non-subformula disjunction -> ext var
  for (auto& d : alldisj) extname[d] = epfx + std::to_string(ecount++);
  for (auto& [d, nm] : extname) tp.rvar[d] = Formula::var(nm);

  // V for the extension definitions always includes bot
  std::vector<Formula> Vext;
  for (auto& v : vars_of(phi)) Vext.push_back(Formula::var(v));
  for (auto& d : tp.disj) Vext.push_back(tp.rvar[d]);
  Vext.push_back(Formula::bot());

  auto e14_def = [&](Formula d) {
    std::vector<Formula> cs;
    for (auto& v : Vext)
      cs.push_back(Formula::imp(Formula::imp(tp.star(d.left()), v),
                                Formula::imp(Formula::imp(tp.star(d.right()), v),
                                             v)));
    return big_and(cs);
  };

  TmGen tg;
  std::map<Formula, Tm> rowhyp;  // delta row formula -> hypothesis term
  std::vector<Tm> hyps;
  for (auto& row : tp.delta) {
    Tm h = tg(row);
    hyps.push_back(h);
    rowhyp.emplace(row, h);
  }

  // join-row access: r_d -> (psi*->v) -> (chi*->v) -> v
  std::map<std::pair<Formula, Formula>, Tm> jr_memo;
  std::function<Tm(Formula, Formula)> join_row = [&](Formula d,
                                                     Formula v) -> Tm {
    auto key = std::make_pair(d, v);
    auto it = jr_memo.find(key);
    if (it != jr_memo.end()) return it->second;
    Tm t;
    Formula ps = tp.star(d.left()), cs = tp.star(d.right());
    if (!extname.count(d)) {
      if (v.is_bot() && tp.drop_bot) {
        // with a positive target the bot rows are redundant: the remaining
        // rows rebuild the positive chi* and refute it
        Tm rho = tg(tp.rvar[d]);
        Tm np = tg(Formula::imp(ps, Formula::bot()));
        Tm nc = tg(Formula::imp(cs, Formula::bot()));
        std::function<Tm(Formula)> epos = [&](Formula xi) -> Tm {
          if (xi.is_imp()) {
            Tm x = tg(xi.left());
            return lam(x, epos(xi.right()));
          }
          if (xi.is_and()) return pair(epos(xi.left()), epos(xi.right()));
          Tm s1 = tg(ps), s2 = tg(cs);
          return app(join_row(d, xi), rho,
                     lam(s1, abort(app(np, s1), xi)),
                     lam(s2, abort(app(nc, s2), xi)));
        };
        t = lam(rho, lam(np, lam(nc, app(nc, epos(cs)))));
      } else {
        t = rowhyp.at(tp.join_row(d, v));
      }
    } else {
      // project the v-conjunct of the extension definition
      Formula def = e14_def(d);
      Tm z = tg(tp.rvar[d]);
      Tm body = app(ext_ax(extname[d], def, true), z);
      size_t idx = 0;
      for (; idx < Vext.size(); ++idx)
        if (Vext[idx] == v) break;
      if (idx == Vext.size())
        throw std::logic_error("tilde_transport: value outside V");
      // big_and is left-nested: peel from the right
      for (size_t k = Vext.size() - 1; k > idx; --k) body = fst(body);
      if (idx > 0) body = snd(body);
      t = lam(z, body);
    }
    jr_memo.emplace(key, t);
    return t;
  };

  auto inj_row = [&](Formula d, bool left) -> Tm {
    Formula side = left ? tp.star(d.left()) : tp.star(d.right());
    if (!extname.count(d))
      return rowhyp.at(Formula::imp(side, tp.rvar[d]));
    Formula def = e14_def(d);
    Tm a = tg(side);
    std::vector<Tm> cs;
    for (auto& v : Vext) {
      Tm u = tg(Formula::imp(tp.star(d.left()), v));
      Tm w = tg(Formula::imp(tp.star(d.right()), v));
      cs.push_back(lam(u, lam(w, app(left ? u : w, a))));
    }
    Tm conj = cs[0];
    for (size_t i = 1; i < cs.size(); ++i) conj = pair(conj, cs[i]);
    return lam(a, app(ext_ax(extname[d], def, false), conj));
  };

  // the elimination-rule patch: r_d -> (psi*->xi) -> (chi*->xi) -> xi for
  // lor-free xi, by induction on xi (through extension definitions)
  std::map<std::string, Formula> extdef;  // current ext var -> starred def
  std::map<std::pair<Formula, Formula>, Tm> fx_memo;
  std::function<Tm(Formula, Formula)> fix13 = [&](Formula d, Formula xi) -> Tm {
    auto key = std::make_pair(d, xi);
    auto it = fx_memo.find(key);
    if (it != fx_memo.end()) return it->second;
    Formula ps = tp.star(d.left()), cs = tp.star(d.right());
    Formula rd = tp.rvar[d];
    Tm t;
    bool base = xi.is_bot();
    if (xi.is_var()) {
      base = keep.count(xi.name()) ||
             std::any_of(tp.disj.begin(), tp.disj.end(),
                         [&](Formula dd) { return tp.rvar[dd] == xi; });
    }
    if (base) {
      t = join_row(d, xi);
    } else if (xi.is_var()) {
      // extension variable (original or introduced): go through the definition
      auto ed = extdef.find(xi.name());
      Formula dstar;
      std::string q = xi.name();
      if (ed != extdef.end()) {
        dstar = ed->second;
      } else {
        // one of the new e14 variables
        Formula dd;
        for (auto& [df, nm] : extname)
          if (nm == q) dd = df;
        if (dd.null())
          throw std::logic_error("tilde_transport: unknown variable " + q);
        dstar = e14_def(dd);
      }
      Tm i0 = fix13(d, dstar);
      Tm rho = tg(rd), u = tg(Formula::imp(ps, xi)), w = tg(Formula::imp(cs, xi));
      Tm a = tg(ps), b = tg(cs);
      Tm fwd = ext_ax(q, dstar, true), bwd = ext_ax(q, dstar, false);
      t = lam(rho, lam(u, lam(w,
              app(bwd, app(i0, rho, lam(a, app(fwd, app(u, a))),
                           lam(b, app(fwd, app(w, b))))))));
    } else if (xi.is_imp()) {
      Tm i1 = fix13(d, xi.right());
      Tm rho = tg(rd), u = tg(Formula::imp(ps, xi)), w = tg(Formula::imp(cs, xi));
      Tm x = tg(xi.left()), a = tg(ps), b = tg(cs);
      t = lam(rho, lam(u, lam(w, lam(x,
              app(i1, rho, lam(a, app(app(u, a), x)),
                  lam(b, app(app(w, b), x)))))));
    } else if (xi.is_and()) {
      Tm i0 = fix13(d, xi.left()), i1 = fix13(d, xi.right());
      Tm rho = tg(rd), u = tg(Formula::imp(ps, xi)), w = tg(Formula::imp(cs, xi));
      Tm a1 = tg(ps), b1 = tg(cs), a2 = tg(ps), b2 = tg(cs);
      t = lam(rho, lam(u, lam(w, pair(
              app(i0, rho, lam(a1, fst(app(u, a1))), lam(b1, fst(app(w, b1)))),
              app(i1, rho, lam(a2, snd(app(u, a2))), lam(b2, snd(app(w, b2))))))));
    } else {
      throw std::logic_error("tilde_transport: disjunction in lor-free patch");
    }
    fx_memo.emplace(key, t);
    return t;
  };

  // translate the proof line by line into a term DAG
  std::vector<Tm> lt;
  std::vector<std::pair<std::string, Formula>> extorder;  // starred defs, in order
  for (auto& ln : pi.lines) {
    Formula target = tp.star(ln.stmt);
    Tm t;
    switch (ln.just.k) {
      case Just::Ax_: {
        if (ln.just.ax == Ax::OrI1 || ln.just.ax == Ax::OrI2 ||
            ln.just.ax == Ax::OrE) {
          Formula d = ln.just.ax == Ax::OrE ? ln.stmt.left()
                                            : ln.stmt.right();
          if (ln.just.ax == Ax::OrI1) {
            t = inj_row(d, true);
          } else if (ln.just.ax == Ax::OrI2) {
            t = inj_row(d, false);
          } else {
            Formula gamma = ln.stmt.right().right().right();
            t = fix13(d, tp.star(gamma));
          }
        } else {
          Substitution s;
          for (auto& [v, f] : ln.just.subst.map) s.set(v, tp.star(f));
          t = ln.just.ax == Ax::Proper ? ax_proper(rs.tmpl(Ax::Proper), s)
                                       : ax(ln.just.ax, s);
        }
        break;
      }
      case Just::MP:
        t = app(lt[ln.just.j], lt[ln.just.i]);
        break;
      case Just::Ext: {
        Formula def = tp.star(ln.just.ext_def);
        if (!extdef.count(ln.just.ext_var)) {
          extdef[ln.just.ext_var] = def;
          // extension variables for disjunctions inside the definition must
          // be introduced first
          std::vector<Formula> ds;
          std::set<Formula> seen2;
          collect_disj(ln.just.ext_def, ds, seen2);
          for (auto& dd : ds)
            if (extname.count(dd) && !extdef.count(extname[dd])) {
              extdef[extname[dd]] = Formula();  // marker: ordered
              extorder.push_back({extname[dd], e14_def(dd)});
            }
          extorder.push_back({ln.just.ext_var, def});
        }
        t = ext_ax(ln.just.ext_var, def, ln.just.ext_fwd);
        break;
      }
      default:
        throw std::invalid_argument("tilde_transport: unsupported line kind");
    }
    if (t->type != target)
      throw std::logic_error("tilde_transport: line image mismatch, want " +
                             print(target) + " got " + print(t->type));
    lt.push_back(t);
  }
  // remaining e14 variables, in discovery order
  for (auto& d : alldisj)
    if (!extdef.count(extname[d])) {
      extdef[extname[d]] = Formula();
      extorder.push_back({extname[d], e14_def(d)});
    }

  Proof out = to_proof(lam_seq(hyps, lt.back()), ProofKind::EF);
  if (!extorder.empty()) {
    Proof shifted;
    shifted.kind = ProofKind::EF;
    for (auto& [q, dref] : extorder) shifted.lines.push_back(line_ext(q, dref, true));
    int off = (int)shifted.lines.size();
    for (auto ln : out.lines) {
      if (ln.just.k == Just::MP) {
        ln.just.i += off;
        ln.just.j += off;
      }
      shifted.lines.push_back(ln);
    }
    out = std::move(shifted);
  }
  if (out.conclusion() != tp.core)
    throw std::logic_error("tilde_transport: wrong core");
  return out;
}

}  // namespace detail

inline Proof tilde_transport(const RuleSet& rs, const Proof& pi);  // below

// ---------------------------------------------------------------------------
// SF transports

namespace detail {

// append a hypothesis-free subproof, offsetting premise indices
struct SfEmitter {
  Proof out;
  explicit SfEmitter() { out.kind = ProofKind::SF; }
  int splice(const Proof& sub) {
    int base = (int)out.lines.size();
    for (auto ln : sub.lines) {
      switch (ln.just.k) {
        case Just::MP:
          ln.just.i += base;
          ln.just.j += base;
          break;
        case Just::Subst: ln.just.i += base; break;
        case Just::Hyp:
          throw std::invalid_argument("SF splice: hypothesis line");
        default: break;
      }
      out.lines.push_back(ln);
    }
    return (int)out.lines.size() - 1;
  }
  int splice(const Tm& t) { return splice(to_proof(t)); }
  int mp(int i, int j) {
    Formula maj = out.lines[j].stmt;
    out.lines.push_back(line_mp(i, j, maj.right()));
    return (int)out.lines.size() - 1;
  }
  int sub(int i, const Substitution& s) {
    out.lines.push_back(
        line_subst(i, s, substitute(s, out.lines[i].stmt)));
    return (int)out.lines.size() - 1;
  }
};

// rename a set of variables throughout an SF proof (meta-level, bijective)
inline Proof rename_vars_sf(const Proof& pi,
                            const std::map<std::string, std::string>& ren) {
  Substitution rho;
  for (auto& [a, b] : ren) rho.set(a, Formula::var(b));
  Proof out = pi;
  for (auto& ln : out.lines) {
    ln.stmt = substitute(rho, ln.stmt);
    if (ln.just.k == Just::Ax_) {
      ln.just.subst = compose_subst(rho, ln.just.subst);
    } else if (ln.just.k == Just::Subst) {
      Substitution ns;
      for (auto& [q, f] : ln.just.subst.map) {
        auto r = ren.find(q);
        ns.set(r == ren.end() ? q : r->second, substitute(rho, f));
      }
      ln.just.subst = ns;
    }
  }
  return out;
}

inline Proof plus_transport_sf(const RuleSet& rs, const Proof& pi_in) {
  Formula phi = pi_in.conclusion();
  Formula r = Formula::var(plus_fresh_r(phi));
  Proof pi = pi_in;
  {
    std::set<std::string> all;
    for (auto& ln : pi.lines)
      for (auto& v : vars_of(ln.stmt)) all.insert(v);
    if (all.count(r.name())) {
      std::string fresh = fresh_prefix(all, "_v") + "0";
      pi = rename_vars_sf(pi, {{r.name(), fresh}});
    }
  }
  auto tau = [&](Formula f) { return replace_bot(f, r); };
  auto gam = [&](Formula f) {
    std::vector<Formula> g;
    for (auto& v : vars_of(f)) g.push_back(Formula::imp(r, Formula::var(v)));
    return g;
  };
  TmGen tg;
  // derive r -> chi from hypothesis terms for r -> v
  std::function<Tm(Formula, std::map<std::string, Tm>&)> derive =
      [&](Formula chi, std::map<std::string, Tm>& hr) -> Tm {
    if (chi == r) return combI(r);
    if (chi.is_var()) return hr.at(chi.name());
    if (chi.is_imp()) {
      Tm x = tg(r), y = tg(chi.left());
      return lam(x, lam(y, app(derive(chi.right(), hr), x)));
    }
    if (chi.is_and()) {
      Tm x = tg(r);
      return lam(x, pair(app(derive(chi.left(), hr), x),
                         app(derive(chi.right(), hr), x)));
    }
    Tm x = tg(r);
    return lam(x, inl(app(derive(chi.left(), hr), x), chi.right()));
  };
  SfEmitter em;
  std::vector<int> idx(pi.lines.size(), -1);
  for (size_t n = 0; n < pi.lines.size(); ++n) {
    const Line& ln = pi.lines[n];
    std::vector<Formula> Gj = gam(ln.stmt);
    Formula body = tau(ln.stmt);
    switch (ln.just.k) {
      case Just::Ax_: {
        Tm a;
        if (ln.just.ax == Ax::Efq) {
          std::map<std::string, Tm> hr;
          std::vector<Tm> hs;
          for (auto& g : Gj) {
            Tm h = tg(g);
            hr[g.right().name()] = h;
            hs.push_back(h);
          }
          a = lam_seq(hs, derive(body.right(), hr));
        } else {
          Substitution s;
          for (auto& [v, f] : ln.just.subst.map) s.set(v, tau(f));
          Tm inst = ln.just.ax == Ax::Proper
                        ? ax_proper(rs.tmpl(Ax::Proper), s)
                        : ax(ln.just.ax, s);
          std::vector<Tm> hs;
          for (auto& g : Gj) hs.push_back(tg(g));
          a = lam_seq(hs, inst);
        }
        idx[n] = em.splice(a);
        break;
      }
      case Just::MP: {
        int k = ln.just.i, l = ln.just.j;
        Formula fk = pi.lines[k].stmt, fl = pi.lines[l].stmt;
        std::vector<Formula> Gk = gam(fk), Gl = gam(fl);
        // widen the minor premise to the major's variable set
        int wk = idx[k];
        if (Gk != Gl) {
          Tm u = tg(join(Gk, tau(fk)));
          std::map<std::string, Tm> hr;
          std::vector<Tm> hs;
          for (auto& g : Gl) {
            Tm h = tg(g);
            hr[g.right().name()] = h;
            hs.push_back(h);
          }
          std::vector<Tm> sel;
          for (auto& g : Gk) sel.push_back(hr.at(g.right().name()));
          int lw = em.splice(lam(u, lam_seq(hs, app_seq(u, sel))));
          wk = em.mp(idx[k], lw);
        }
        // distribute modus ponens under the premises
        {
          Formula A = tau(fk), B = body;
          Tm u = tg(join(Gl, A)), v = tg(join(Gl, Formula::imp(A, B)));
          std::vector<Tm> hs;
          for (auto& g : Gl) hs.push_back(tg(g));
          Tm dist = lam(u, lam(v, lam_seq(hs, app(app_seq(v, hs),
                                                  app_seq(u, hs)))));
          int di = em.splice(dist);
          int cur = em.mp(idx[l], em.mp(wk, di));
          // drop premises for variables absent from the conclusion
          std::set<std::string> want = vars_of(ln.stmt);
          std::vector<Formula> Gcur = Gl;
          bool shrink = false;
          Substitution drop;
          for (auto& g : Gl)
            if (!want.count(g.right().name())) {
              drop.set(g.right().name(), r);
              shrink = true;
            }
          if (shrink) {
            cur = em.sub(cur, drop);
            Tm u2 = tg(em.out.lines[cur].stmt);
            std::map<std::string, Tm> hr;
            std::vector<Tm> hs2;
            for (auto& g : Gj) {
              Tm h = tg(g);
              hr[g.right().name()] = h;
              hs2.push_back(h);
            }
            std::vector<Tm> fill;
            for (auto& g : Gcur) {
              auto w = hr.find(g.right().name());
              fill.push_back(w != hr.end() ? w->second : combI(r));
            }
            int ad = em.splice(lam(u2, lam_seq(hs2, app_seq(u2, fill))));
            cur = em.mp(cur, ad);
          }
          idx[n] = cur;
        }
        break;
      }
      case Just::Subst: {
        int k = ln.just.i;
        Formula fk = pi.lines[k].stmt;
        std::vector<Formula> Gk = gam(fk);
        Substitution st;
        for (auto& [q, f] : ln.just.subst.map) st.set(q, tau(f));
        int cur = em.sub(idx[k], st);
        // premises are now r -> st(q); rebuild them from the target premises
        std::vector<Formula> pim;
        for (auto& g : Gk)
          pim.push_back(Formula::imp(r, substitute(st, g.right())));
        Tm u = tg(join(pim, body));
        std::map<std::string, Tm> hr;
        std::vector<Tm> hs;
        for (auto& g : Gj) {
          Tm h = tg(g);
          hr[g.right().name()] = h;
          hs.push_back(h);
        }
        std::vector<Tm> fill;
        for (auto& p : pim) fill.push_back(derive(p.right(), hr));
        int ad = em.splice(lam(u, lam_seq(hs, app_seq(u, fill))));
        idx[n] = em.mp(cur, ad);
        break;
      }
      default:
        throw std::invalid_argument("plus_transport: unsupported SF line");
    }
    if (em.out.lines[idx[n]].stmt != join(Gj, body))
      throw std::logic_error("plus_transport: SF line image mismatch");
  }
  return em.out;
}

}  // namespace detail

inline Proof plus_transport(const RuleSet& rs, const Proof& pi) {
  if (pi.kind == ProofKind::CF)
    throw std::invalid_argument("plus_transport: CF proofs not supported");
  if (!pi.hypotheses.empty())
    throw std::invalid_argument("plus_transport: proof must be hypothesis-free");
  if (rs.proper_axiom && !is_positive(*rs.proper_axiom))
    throw std::invalid_argument("plus_transport: proper axiom must be positive");
  if (!check(rs, pi))
    throw std::invalid_argument("plus_transport: input proof does not check");
  Proof out = pi.kind == ProofKind::SF ? detail::plus_transport_sf(rs, pi)
                                       : detail::plus_transport_fef(rs, pi);
  if (out.conclusion() != plus(pi.conclusion()).output)
    throw std::logic_error("plus_transport: wrong conclusion");
  return out;
}

namespace detail {

// SF transport: every line phi_j is translated to its own lor-free core
// Delta_j -> phi_j*, with one emulation variable per disjunction subformula.
// Substitution lines rename the emulation variables along; modus ponens first
// widens to the major's rows, then eliminates rows for disjunctions absent
// from the conclusion by substituting the row conjunction for their variable.
inline Proof tilde_transport_sf(const RuleSet& rs, const Proof& pi_in) {
  Formula phi = pi_in.conclusion();
  TildeParts tp = tilde_parts(phi);
  std::string pfx = fresh_prefix(vars_of(phi), "_r");
  Proof pi = pi_in;
  {
    // proof variables clashing with the emulation prefix get renamed away
    std::set<std::string> all;
    for (auto& ln : pi.lines)
      for (auto& v : vars_of(ln.stmt)) all.insert(v);
    std::map<std::string, std::string> ren;
    std::string safe = fresh_prefix(all, "_v");
    int c = 0;
    for (auto& v : all)
      if (v.rfind(pfx, 0) == 0) ren[v] = safe + std::to_string(c++);
    if (!ren.empty()) pi = rename_vars_sf(pi, ren);
  }
  std::map<Formula, Formula> rvar = tp.rvar;
  int rcount = (int)tp.disj.size();
  auto rv = [&](Formula d) -> Formula {
    auto it = rvar.find(d);
    if (it != rvar.end()) return it->second;
    Formula v = Formula::var(pfx + std::to_string(rcount++));
    rvar.emplace(d, v);
    return v;
  };
  std::map<Formula, Formula> star_memo;
  std::function<Formula(Formula)> star = [&](Formula f) -> Formula {
    if (f.is_or()) return rv(f);
    if (f.is_atom()) return f;
    auto it = star_memo.find(f);
    if (it != star_memo.end()) return it->second;
    Formula a = star(f.left()), b = star(f.right());
    Formula res = f.is_imp() ? Formula::imp(a, b) : Formula::land(a, b);
    star_memo.emplace(f, res);
    return res;
  };
  auto row17 = [&](Formula d, Formula v) {
    return Formula::imp(
        rv(d), Formula::imp(Formula::imp(star(d.left()), v),
                            Formula::imp(Formula::imp(star(d.right()), v), v)));
  };
  struct Core {
    std::vector<Formula> disj, V, delta;
    Formula head, stmt;
  };
  auto make_core = [&](Formula f) {
    Core c;
    std::set<Formula> seen;
    collect_disj(f, c.disj, seen);
    for (auto& v : vars_of(f)) c.V.push_back(Formula::var(v));
    for (auto& d : c.disj) c.V.push_back(rv(d));
    c.V.push_back(Formula::bot());
    for (auto& d : c.disj) {
      c.delta.push_back(Formula::imp(star(d.left()), rv(d)));
      c.delta.push_back(Formula::imp(star(d.right()), rv(d)));
      for (auto& v : c.V) c.delta.push_back(row17(d, v));
    }
    c.head = star(f);
    c.stmt = join(c.delta, c.head);
    return c;
  };
  struct RR {
    int kind;  // 0: psi*->r, 1: chi*->r, 2: join row for v
    Formula d, v, f;
  };
  auto rows_for = [&](const std::vector<Formula>& D,
                      const std::vector<Formula>& V) {
    std::vector<RR> rs_;
    for (auto& d : D) {
      rs_.push_back({0, d, Formula(), Formula::imp(star(d.left()), rv(d))});
      rs_.push_back({1, d, Formula(), Formula::imp(star(d.right()), rv(d))});
      for (auto& v : V) rs_.push_back({2, d, v, row17(d, v)});
    }
    return rs_;
  };
  TmGen tg;
  using HypMap = std::map<Formula, Tm>;
  // r_d -> (psi*->xi) -> (chi*->xi) -> xi for lor-free xi, from the join rows
  std::function<Tm(Formula, Formula, const HypMap&)> fix13 =
      [&](Formula d, Formula xi, const HypMap& hm) -> Tm {
    auto row = hm.find(row17(d, xi));
    if (row != hm.end()) return row->second;
    Formula ps = star(d.left()), cs = star(d.right());
    Formula rd = rv(d);
    if (xi.is_imp()) {
      Tm i1 = fix13(d, xi.right(), hm);
      Tm rho = tg(rd), u = tg(Formula::imp(ps, xi)), w = tg(Formula::imp(cs, xi));
      Tm x = tg(xi.left()), a = tg(ps), b = tg(cs);
      return lam(rho, lam(u, lam(w, lam(x,
              app(i1, rho, lam(a, app(app(u, a), x)),
                  lam(b, app(app(w, b), x)))))));
    }
    if (xi.is_and()) {
      Tm i0 = fix13(d, xi.left(), hm), i1 = fix13(d, xi.right(), hm);
      Tm rho = tg(rd), u = tg(Formula::imp(ps, xi)), w = tg(Formula::imp(cs, xi));
      Tm a1 = tg(ps), b1 = tg(cs), a2 = tg(ps), b2 = tg(cs);
      return lam(rho, lam(u, lam(w, pair(
              app(i0, rho, lam(a1, fst(app(u, a1))), lam(b1, fst(app(w, b1)))),
              app(i1, rho, lam(a2, snd(app(u, a2))), lam(b2, snd(app(w, b2))))))));
    }
    throw std::logic_error("tilde_transport: missing row for " + print(xi));
  };
  SfEmitter em;
  // reduce a line of statement join(rows(D,V), head) to the canonical rows of
  // the target core, eliminating extra disjunctions largest first
  auto eliminate = [&](int cur, std::vector<Formula> D, std::vector<Formula> V,
                       Formula head, const Core& tgt) -> int {
    std::set<Formula> keepD(tgt.disj.begin(), tgt.disj.end());
    std::vector<Formula> extra;
    for (auto& d : D)
      if (!keepD.count(d)) extra.push_back(d);
    std::sort(extra.begin(), extra.end(), [](Formula a, Formula b) {
      return a.size_polish() > b.size_polish();
    });
    std::vector<RR> rows = rows_for(D, V);
    for (auto& d : extra) {
      std::vector<Formula> Vn, Dn;
      for (auto& v : V)
        if (!(v == rv(d))) Vn.push_back(v);
      for (auto& dd : D)
        if (!(dd == d)) Dn.push_back(dd);
      std::vector<Formula> bodies;
      for (auto& v : Vn)
        bodies.push_back(
            Formula::imp(Formula::imp(star(d.left()), v),
                         Formula::imp(Formula::imp(star(d.right()), v), v)));
      Formula xi = big_and(bodies);
      Substitution s;
      s.set(rv(d).name(), xi);
      cur = em.sub(cur, s);
      std::vector<RR> nrows = rows_for(Dn, Vn);
      std::vector<Formula> src;
      for (auto& r : rows) src.push_back(substitute(s, r.f));
      Tm u = tg(join(src, head));
      HypMap hm;
      std::vector<Tm> hs;
      for (auto& r : nrows) {
        Tm h = tg(r.f);
        hm.emplace(r.f, h);
        hs.push_back(h);
      }
      std::vector<Tm> args;
      for (auto& r : rows) {
        if (r.d == d) {
          if (r.kind <= 1) {
            Formula side = r.kind == 0 ? star(d.left()) : star(d.right());
            Tm a = tg(side);
            std::vector<Tm> cs_;
            for (auto& v : Vn) {
              Tm uu = tg(Formula::imp(star(d.left()), v));
              Tm ww = tg(Formula::imp(star(d.right()), v));
              cs_.push_back(lam(uu, lam(ww, app(r.kind == 0 ? uu : ww, a))));
            }
            Tm conj = cs_[0];
            for (size_t i = 1; i < cs_.size(); ++i) conj = pair(conj, cs_[i]);
            args.push_back(lam(a, conj));
          } else if (r.v == rv(d)) {
            Tm z = tg(xi), uu = tg(Formula::imp(star(d.left()), xi)),
               ww = tg(Formula::imp(star(d.right()), xi));
            args.push_back(lam(z, lam(uu, lam(ww, z))));
          } else {
            size_t pos = 0;
            for (; pos < Vn.size(); ++pos)
              if (Vn[pos] == r.v) break;
            Tm z = tg(xi);
            Tm body = z;
            for (size_t k = Vn.size() - 1; k > pos; --k) body = fst(body);
            if (pos > 0) body = snd(body);
            args.push_back(lam(z, body));
          }
        } else if (r.kind == 2 && r.v == rv(d)) {
          args.push_back(fix13(r.d, xi, hm));
        } else {
          args.push_back(hm.at(r.f));
        }
      }
      cur = em.mp(cur, em.splice(lam(u, lam_seq(hs, app_seq(u, args)))));
      D = Dn;
      V = Vn;
      rows = nrows;
    }
    // surviving variables absent from the target only occur as values
    std::set<Formula> keepV(tgt.V.begin(), tgt.V.end());
    Substitution drop;
    for (auto& v : V)
      if (v.is_var() && !keepV.count(v)) drop.set(v.name(), Formula::bot());
    if (!drop.empty()) cur = em.sub(cur, drop);
    std::vector<Formula> src;
    for (auto& r : rows) src.push_back(substitute(drop, r.f));
    if (src != tgt.delta) {
      Tm u = tg(join(src, head));
      HypMap hm;
      std::vector<Tm> hs;
      for (auto& f : tgt.delta) {
        Tm h = tg(f);
        hm.emplace(f, h);
        hs.push_back(h);
      }
      std::vector<Tm> args;
      for (auto& f : src) args.push_back(hm.at(f));
      cur = em.mp(cur, em.splice(lam(u, lam_seq(hs, app_seq(u, args)))));
    }
    return cur;
  };

  std::vector<int> idx(pi.lines.size(), -1);
  std::vector<Core> cores(pi.lines.size());
  for (size_t n = 0; n < pi.lines.size(); ++n) {
    const Line& ln = pi.lines[n];
    Core cj = make_core(ln.stmt);
    switch (ln.just.k) {
      case Just::Ax_: {
        HypMap hm;
        std::vector<Tm> hs;
        for (auto& row : cj.delta) {
          Tm h = tg(row);
          hm.emplace(row, h);
          hs.push_back(h);
        }
        Tm body;
        if (ln.just.ax == Ax::OrI1 || ln.just.ax == Ax::OrI2) {
          Formula d = ln.stmt.right();
          Formula side = ln.just.ax == Ax::OrI1 ? d.left() : d.right();
          body = hm.at(Formula::imp(star(side), rv(d)));
        } else if (ln.just.ax == Ax::OrE) {
          Formula d = ln.stmt.left();
          body = fix13(d, star(ln.stmt.right().right().right()), hm);
        } else {
          Substitution s;
          for (auto& [v, f] : ln.just.subst.map) s.set(v, star(f));
          body = ln.just.ax == Ax::Proper ? ax_proper(rs.tmpl(Ax::Proper), s)
                                          : ax(ln.just.ax, s);
        }
        idx[n] = em.splice(lam_seq(hs, body));
        break;
      }
      case Just::MP: {
        int k = ln.just.i, l = ln.just.j;
        const Core &ck = cores[k], &cl = cores[l];
        int wk = idx[k];
        if (ck.delta != cl.delta) {
          // widen the minor premise to the major's rows
          Tm u = tg(ck.stmt);
          HypMap hm;
          std::vector<Tm> hs;
          for (auto& row : cl.delta) {
            Tm h = tg(row);
            hm.emplace(row, h);
            hs.push_back(h);
          }
          std::vector<Tm> sel;
          for (auto& row : ck.delta) sel.push_back(hm.at(row));
          int a = em.splice(lam(u, lam_seq(hs, app_seq(u, sel))));
          wk = em.mp(wk, a);
        }
        // distribute modus ponens under the rows
        Tm u = tg(join(cl.delta, ck.head)), v = tg(cl.stmt);
        std::vector<Tm> hs;
        for (auto& row : cl.delta) hs.push_back(tg(row));
        Tm dist = lam(u, lam(v, lam_seq(hs, app(app_seq(v, hs),
                                                app_seq(u, hs)))));
        int cur = em.mp(idx[l], em.mp(wk, em.splice(dist)));
        idx[n] = eliminate(cur, cl.disj, cl.V, cj.head, cj);
        break;
      }
      case Just::Subst: {
        int k = ln.just.i;
        const Core& ck = cores[k];
        Substitution st;
        for (auto& [q, f] : ln.just.subst.map) st.set(q, star(f));
        for (auto& d : ck.disj)
          st.set(rv(d).name(), rv(substitute(ln.just.subst, d)));
        int cur = em.sub(idx[k], st);
        std::vector<RR> rows = rows_for(ck.disj, ck.V);
        Tm u = tg(em.out.lines[cur].stmt);
        HypMap hm;
        std::vector<Tm> hs;
        for (auto& f : cj.delta) {
          Tm h = tg(f);
          hm.emplace(f, h);
          hs.push_back(h);
        }
        std::vector<Tm> args;
        for (auto& r : rows) {
          Formula fr = substitute(st, r.f);
          auto it = hm.find(fr);
          if (it != hm.end()) {
            args.push_back(it->second);
          } else if (r.kind == 2) {
            args.push_back(fix13(substitute(ln.just.subst, r.d),
                                 substitute(st, r.v), hm));
          } else {
            throw std::logic_error("tilde_transport: unmatched row");
          }
        }
        idx[n] = em.mp(cur, em.splice(lam(u, lam_seq(hs, app_seq(u, args)))));
        break;
      }
      default:
        throw std::invalid_argument("tilde_transport: unsupported SF line");
    }
    if (em.out.lines[idx[n]].stmt != cj.stmt)
      throw std::logic_error("tilde_transport: SF line image mismatch");
    cores[n] = std::move(cj);
  }
  int last = idx.back();
  if (tp.drop_bot) {
    // with a positive conclusion the bot rows are redundant: the remaining
    // rows rebuild the positive chi* and refute it
    const Core& cn = cores.back();
    Tm u = tg(cn.stmt);
    HypMap hm;
    std::vector<Tm> hs;
    for (auto& f : tp.delta) {
      Tm h = tg(f);
      hm.emplace(f, h);
      hs.push_back(h);
    }
    auto redun = [&](Formula d) -> Tm {
      Formula ps = star(d.left()), cs = star(d.right());
      Tm rho = tg(rv(d));
      Tm np = tg(Formula::imp(ps, Formula::bot()));
      Tm nc = tg(Formula::imp(cs, Formula::bot()));
      std::function<Tm(Formula)> epos = [&](Formula x) -> Tm {
        if (x.is_imp()) {
          Tm h = tg(x.left());
          return lam(h, epos(x.right()));
        }
        if (x.is_and()) return pair(epos(x.left()), epos(x.right()));
        Tm s1 = tg(ps), s2 = tg(cs);
        return app(hm.at(row17(d, x)), rho, lam(s1, abort(app(np, s1), x)),
                   lam(s2, abort(app(nc, s2), x)));
      };
      return lam(rho, lam(np, lam(nc, app(nc, epos(cs)))));
    };
    std::vector<Tm> args;
    for (auto& r : rows_for(cn.disj, cn.V))
      args.push_back(r.kind == 2 && r.v.is_bot() ? redun(r.d) : hm.at(r.f));
    last = em.mp(last, em.splice(lam(u, lam_seq(hs, app_seq(u, args)))));
  }
  if (em.out.conclusion() != tp.core)
    throw std::logic_error("tilde_transport: wrong SF core");
  return em.out;
}

}  // namespace detail

inline Proof tilde_transport(const RuleSet& rs, const Proof& pi) {
  if (pi.kind == ProofKind::CF)
    throw std::invalid_argument("tilde_transport: CF proofs not supported");
  if (!pi.hypotheses.empty())
    throw std::invalid_argument("tilde_transport: proof must be hypothesis-free");
  if (rs.proper_axiom && contains_conn(*rs.proper_axiom, Conn::Or))
    throw std::invalid_argument("tilde_transport: proper axiom must be lor-free");
  if (!check(rs, pi))
    throw std::invalid_argument("tilde_transport: input proof does not check");
  Formula phi = pi.conclusion();
  Proof core_pf = pi.kind == ProofKind::SF
                      ? detail::tilde_transport_sf(rs, pi)
                      : detail::tilde_transport_ef(rs, pi);
  auto tp = detail::tilde_parts(phi);
  if (detail::imp_bot_only(tp.core)) return core_pf;
  // finish with the implicational stage: splice the bar forward certificate
  Translation bar = bar_basic(tp.core);
  Proof out = core_pf;
  int base = (int)out.lines.size();
  for (auto ln : bar.forward.lines) {
    if (ln.just.k == Just::MP) {
      ln.just.i += base;
      ln.just.j += base;
    }
    out.lines.push_back(ln);
  }
  out.lines.push_back(line_mp(base - 1, (int)out.lines.size() - 1, bar.output));
  if (out.conclusion() != tilde(phi).output)
    throw std::logic_error("tilde_transport: wrong conclusion");
  return out;
}

// ---------------------------------------------------------------------------
// the composition: bot-free then lor-free, purely implicational

inline Translation hat(Formula phi) {
  Translation t;
  t.input = phi;
  Translation p = plus(phi);
  Translation q = tilde(p.output);
  t.output = q.output;
  if (!is_implicational(t.output))
    throw std::logic_error("hat: output not implicational");
  t.back_subst = detail::compose_subst(p.back_subst, q.back_subst);
  auto p1 = std::make_shared<const Proof>(subst_proof(p.back_subst, q.backward));
  auto p2 = std::make_shared<const Proof>(p.backward);
  detail::TmGen tg;
  Tm h = tg(substitute(t.back_subst, t.output));
  t.backward = to_proof(lam(h, app(lemma(p2), app(lemma(p1), h))));
  return t;
}

inline Proof hat_transport(const RuleSet& rs, const Proof& pi) {
  if (rs.proper_axiom && !is_implicational(*rs.proper_axiom))
    throw std::invalid_argument("hat_transport: proper axiom must be implicational");
  return tilde_transport(rs, plus_transport(rs, pi));
}

}  // namespace iptk
