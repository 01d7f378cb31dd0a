#pragma once
// Typed proof terms (lambda calculus over the standard axioms) and their
// compilation to Hilbert-style proofs by bracket abstraction.  Every proof
// construction in the toolkit goes through this engine: build a term whose
// type is the target formula, then compile.  Terms proving implicational
// formulas with implicational axiom constants compile to purely implicational
// Frege proofs (only S/K are introduced by abstraction).

#include <atomic>
#include <cassert>
#include <memory>
#include <unordered_map>
#include <unordered_set>

#include "calculus.hpp"
#include "formula.hpp"

namespace iptk {

struct Term;
using Tm = std::shared_ptr<const Term>;

struct Term {
  enum K { HypK, LamK, AppK, AxK, ExtK, LemmaK } k;
  Formula type;
  // HypK / LamK binder
  int hyp_id = -1;
  Formula bind_type;
  // LamK: body in a; AppK: a applied to b
  Tm a, b;
  // AxK
  iptk::Ax ax = iptk::Ax::S;
  Substitution subst;
  // ExtK: extension axiom q <-> def, one direction
  std::string ext_var;
  Formula ext_def;
  bool ext_fwd = true;
  // LemmaK: a closed proof spliced verbatim
  std::shared_ptr<const Proof> lemma;
};

inline Tm hyp(int id, Formula ty) {
  auto t = std::make_shared<Term>();
  t->k = Term::HypK;
  t->hyp_id = id;
  t->type = ty;
  return t;
}
inline Tm lam(int id, Formula ty, Tm body) {
  auto t = std::make_shared<Term>();
  t->k = Term::LamK;
  t->hyp_id = id;
  t->bind_type = ty;
  t->a = body;
  t->type = Formula::imp(ty, body->type);
  return t;
}
inline Tm app(Tm f, Tm x) {
  if (!f->type.is_imp() || f->type.left() != x->type)
    throw std::invalid_argument("ill-typed application: fun " + print(f->type) +
                                " arg " + print(x->type));
  auto t = std::make_shared<Term>();
  t->k = Term::AppK;
  t->a = f;
  t->b = x;
  t->type = f->type.right();
  return t;
}
inline Tm app(Tm f, Tm x, Tm y) { return app(app(f, x), y); }
inline Tm app(Tm f, Tm x, Tm y, Tm z) { return app(app(app(f, x), y), z); }
inline Tm ax(iptk::Ax a, const Substitution& s) {
  auto t = std::make_shared<Term>();
  t->k = Term::AxK;
  t->ax = a;
  t->subst = s;
  t->type = substitute(s, axiom_template(a));
  return t;
}
// instance of a rule set's proper axiom
inline Tm ax_proper(Formula tmpl, const Substitution& s) {
  auto t = std::make_shared<Term>();
  t->k = Term::AxK;
  t->ax = Ax::Proper;
  t->subst = s;
  t->type = substitute(s, tmpl);
  return t;
}
// extension axiom constant: q -> def (fwd) or def -> q (bwd)
inline Tm ext_ax(const std::string& q, Formula def, bool fwd) {
  auto t = std::make_shared<Term>();
  t->k = Term::ExtK;
  t->ext_var = q;
  t->ext_def = def;
  t->ext_fwd = fwd;
  Formula qv = Formula::var(q);
  t->type = fwd ? Formula::imp(qv, def) : Formula::imp(def, qv);
  return t;
}
inline Tm lemma(std::shared_ptr<const Proof> p) {
  if (!p->hypotheses.empty())
    throw std::invalid_argument("lemma must be hypothesis-free");
  auto t = std::make_shared<Term>();
  t->k = Term::LemmaK;
  t->lemma = p;
  t->type = p->lines.back().stmt;
  return t;
}

inline Substitution sub_abc(Formula a, Formula b, Formula c = Formula()) {
  Substitution s;
  s.set("a", a);
  s.set("b", b);
  if (!c.null()) s.set("c", c);
  return s;
}

// standard combinators / intro-elim helpers
inline Tm ax_S(Formula a, Formula b, Formula c) { return ax(Ax::S, sub_abc(a, b, c)); }
inline Tm ax_K(Formula a, Formula b) { return ax(Ax::K, sub_abc(a, b)); }
inline Tm combI(Formula a) {
  // I = S K K : a -> a
  return app(ax_S(a, Formula::imp(a, a), a), ax_K(a, Formula::imp(a, a)),
             ax_K(a, a));
}
inline Tm pair(Tm x, Tm y) {
  return app(ax(Ax::AndI, sub_abc(x->type, y->type)), x, y);
}
inline Tm fst(Tm x) {
  if (!x->type.is_and()) throw std::invalid_argument("fst of non-conjunction");
  return app(ax(Ax::AndE1, sub_abc(x->type.left(), x->type.right())), x);
}
inline Tm snd(Tm x) {
  if (!x->type.is_and()) throw std::invalid_argument("snd of non-conjunction");
  return app(ax(Ax::AndE2, sub_abc(x->type.left(), x->type.right())), x);
}
inline Tm inl(Tm x, Formula b) { return app(ax(Ax::OrI1, sub_abc(x->type, b)), x); }
inline Tm inr(Tm y, Formula a) { return app(ax(Ax::OrI2, sub_abc(a, y->type)), y); }
// cases : from t : a|b, f : a->c, g : b->c
inline Tm cases(Tm t, Tm f, Tm g) {
  if (!t->type.is_or()) throw std::invalid_argument("cases of non-disjunction");
  Formula a = t->type.left(), b = t->type.right();
  if (!f->type.is_imp() || f->type.left() != a || !g->type.is_imp() ||
      g->type.left() != b || f->type.right() != g->type.right())
    throw std::invalid_argument("ill-typed cases");
  return app(ax(Ax::OrE, sub_abc(a, b, f->type.right())), t, f, g);
}
inline Tm abort(Tm t, Formula c) {
  if (!t->type.is_bot()) throw std::invalid_argument("abort of non-bot");
  Substitution s;
  s.set("c", c);
  return app(ax(Ax::Efq, s), t);
}

// fresh hypothesis ids; globally unique so terms from different generators
// can be mixed without capture
class HypGen {
 public:
  int next() { return counter_++; }
  Tm fresh(Formula ty, int& id_out) {
    id_out = next();
    return hyp(id_out, ty);
  }

 private:
  inline static std::atomic<int> counter_{0};
};

// convenience: lam over a hyp term
inline Tm lam(Tm h, Tm body) {
  assert(h->k == Term::HypK);
  return lam(h->hyp_id, h->type, body);
}
inline Tm lam(Tm h1, Tm h2, Tm body) { return lam(h1, lam(h2, body)); }
inline Tm lam(Tm h1, Tm h2, Tm h3, Tm body) { return lam(h1, lam(h2, lam(h3, body))); }

// ---------------------------------------------------------------------------
// Bracket abstraction: eliminate all lambdas, producing an applicative term
// over axioms, lemmas, and free hypotheses.

namespace detail {

struct FvCache {
  std::unordered_map<const Term*, std::shared_ptr<std::unordered_set<int>>> memo;
  const std::unordered_set<int>& fv(const Tm& t) {
    auto it = memo.find(t.get());
    if (it != memo.end()) return *it->second;
    auto s = std::make_shared<std::unordered_set<int>>();
    switch (t->k) {
      case Term::HypK: s->insert(t->hyp_id); break;
      case Term::LamK: {
        *s = fv(t->a);
        s->erase(t->hyp_id);
        break;
      }
      case Term::AppK: {
        *s = fv(t->a);
        const auto& s2 = fv(t->b);
        s->insert(s2.begin(), s2.end());
        break;
      }
      default: break;
    }
    memo.emplace(t.get(), s);
    return *s;
  }
};

class Abstractor {
 public:
  Tm eliminate(const Tm& t) {
    auto it = elim_memo_.find(t.get());
    if (it != elim_memo_.end()) return it->second;
    Tm r;
    switch (t->k) {
      case Term::LamK: r = bracket(t->hyp_id, t->bind_type, eliminate(t->a)); break;
      case Term::AppK: {
        Tm a = eliminate(t->a), b = eliminate(t->b);
        r = (a == t->a && b == t->b) ? t : app(a, b);
        break;
      }
      default: r = t;
    }
    elim_memo_.emplace(t.get(), r);
    return r;
  }

 private:
  // t is lambda-free; build a term of type (xt -> t.type)
  Tm bracket(int x, Formula xt, const Tm& t) {
    auto key = std::make_pair(t.get(), x);
    auto it = br_memo_.find(key);
    if (it != br_memo_.end()) return it->second;
    Tm r;
    if (t->k == Term::HypK && t->hyp_id == x) {
      r = combI(xt);
    } else if (!fv_.fv(t).count(x)) {
      r = app(ax_K(t->type, xt), t);
    } else if (t->k == Term::AppK) {
      // eta: [x](f x) = f when x not free in f
      if (t->b->k == Term::HypK && t->b->hyp_id == x && !fv_.fv(t->a).count(x)) {
        r = t->a;
      } else {
        Tm f = bracket(x, xt, t->a), g = bracket(x, xt, t->b);
        r = app(ax_S(xt, t->b->type, t->type), f, g);
      }
    } else {
      throw std::logic_error("bracket: unexpected binder under abstraction");
    }
    br_memo_.emplace(key, r);
    return r;
  }

  struct PairHash {
    size_t operator()(const std::pair<const Term*, int>& p) const {
      return std::hash<const void*>()(p.first) * 1000003 + p.second;
    }
  };
  FvCache fv_;
  std::unordered_map<const Term*, Tm> elim_memo_;
  std::unordered_map<std::pair<const Term*, int>, Tm, PairHash> br_memo_;
};

}  // namespace detail

// Compile a term into a Hilbert proof.  hyp_order gives the hypothesis list
// of the resulting proof: hyp ids not bound by lambdas must appear here.
inline Proof to_proof(const Tm& t, ProofKind kind = ProofKind::F,
                      const std::vector<std::pair<int, Formula>>& hyp_order = {}) {
  detail::Abstractor ab;
  Tm u = ab.eliminate(t);

  Proof pf;
  pf.kind = kind;
  std::unordered_map<int, int> hyp_idx;
  for (size_t i = 0; i < hyp_order.size(); ++i) {
    pf.hypotheses.push_back(hyp_order[i].second);
    hyp_idx[hyp_order[i].first] = (int)i;
  }

  std::unordered_map<const Term*, int> line_of;
  std::unordered_map<const Proof*, int> lemma_base;
  // dedup identical axiom / extension lines
  std::map<std::pair<int, Formula>, int> ax_line;
  std::map<std::pair<std::string, bool>, int> ext_line;

  std::function<int(const Tm&)> emit = [&](const Tm& s) -> int {
    auto it = line_of.find(s.get());
    if (it != line_of.end()) return it->second;
    int idx = -1;
    switch (s->k) {
      case Term::AxK: {
        auto key = std::make_pair((int)s->ax, s->type);
        auto ai = ax_line.find(key);
        if (ai != ax_line.end()) {
          idx = ai->second;
        } else {
          pf.lines.push_back(line_ax(s->ax, s->subst, s->type));
          idx = (int)pf.lines.size() - 1;
          ax_line.emplace(key, idx);
        }
        break;
      }
      case Term::ExtK: {
        auto key = std::make_pair(s->ext_var, s->ext_fwd);
        auto ei = ext_line.find(key);
        if (ei != ext_line.end()) {
          idx = ei->second;
        } else {
          pf.lines.push_back(line_ext(s->ext_var, s->ext_def, s->ext_fwd));
          idx = (int)pf.lines.size() - 1;
          ext_line.emplace(key, idx);
        }
        break;
      }
      case Term::HypK: {
        auto h = hyp_idx.find(s->hyp_id);
        if (h == hyp_idx.end())
          throw std::invalid_argument("unbound hypothesis not in hyp_order");
        pf.lines.push_back(line_hyp(h->second, s->type));
        idx = (int)pf.lines.size() - 1;
        break;
      }
      case Term::AppK: {
        int i = emit(s->b);
        int j = emit(s->a);
        pf.lines.push_back(line_mp(i, j, s->type));
        idx = (int)pf.lines.size() - 1;
        break;
      }
      case Term::LemmaK: {
        const Proof* lp = s->lemma.get();
        auto lb = lemma_base.find(lp);
        if (lb != lemma_base.end()) {
          idx = lb->second;
        } else {
          int base = (int)pf.lines.size();
          for (auto& ln : lp->lines) {
            Line copy = ln;
            if (copy.just.k == Just::MP) {
              copy.just.i += base;
              copy.just.j += base;
            } else if (copy.just.k == Just::Subst) {
              copy.just.i += base;
            } else if (copy.just.k == Just::Hyp) {
              throw std::invalid_argument("lemma with hypothesis line");
            }
            pf.lines.push_back(copy);
          }
          idx = (int)pf.lines.size() - 1;
          lemma_base.emplace(lp, idx);
        }
        break;
      }
      case Term::LamK:
        throw std::logic_error("lambda survived abstraction");
    }
    line_of.emplace(s.get(), idx);
    return idx;
  };
  emit(u);
  return pf;
}

// hypothesis-free wrapper returning a shared proof, for lemma() reuse
inline std::shared_ptr<const Proof> to_lemma(const Tm& t) {
  return std::make_shared<const Proof>(to_proof(t));
}

}  // namespace iptk
