#pragma once
// Negative formulas, monotone negation, the NAND refutation calculus with its
// purely implicational Glivenko-style translation, the monotone-negation
// lemma library, and the SF separation-proof generator.

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "builders.hpp"
#include "calculus.hpp"
#include "formula.hpp"
#include "nd.hpp"

namespace iptk {

// ---------------------------------------------------------------------------
// negative formulas: Γ→⊥ with Γ variables and negative formulas

inline bool is_negative(Formula f) {
  if (f.is_bot()) return true;
  if (!f.is_imp()) return false;
  return (f.left().is_var() || is_negative(f.left())) && is_negative(f.right());
}

struct NegativeFormula {
  Formula f;
  explicit NegativeFormula(Formula g) : f(g) {
    if (!is_negative(g))
      throw std::invalid_argument("not a negative formula: " + print(g));
  }
  operator Formula() const { return f; }
};

// antecedent list Γ of a negative formula Γ→⊥
inline std::vector<Formula> nand_ants(Formula f) {
  if (!is_negative(f)) throw std::invalid_argument("nand_ants: not negative");
  std::vector<Formula> r;
  while (f.is_imp()) {
    r.push_back(f.left());
    f = f.right();
  }
  return r;
}

// φ^u: replace ⊥ with u (u may be a compound formula, cf. the v→u superscript)
inline Formula to_u(Formula phi, Formula u) {
  if (!is_negative(phi)) throw std::invalid_argument("to_u: not negative");
  for (auto& x : vars_of(u))
    if (contains_var(phi, x))
      throw std::invalid_argument("to_u: " + x + " occurs in the formula");
  std::function<Formula(Formula)> go = [&](Formula f) -> Formula {
    if (f.is_bot()) return u;
    if (f.is_var()) return f;
    return Formula::imp(go(f.left()), go(f.right()));
  };
  return go(phi);
}
inline Formula to_u(Formula phi, const std::string& u) {
  return to_u(phi, Formula::var(u));
}

// ---------------------------------------------------------------------------
// monotone negation.  Monotone inputs are built from ∧,∨,⊥ and variables; the
// reserved variable $top stands for ⊤ (the parser desugars ⊤ into an
// implication, which is not monotone).  $top never survives into the output.

inline Formula mono_top() { return Formula::var("$top"); }
inline bool is_mono_top(Formula f) { return f.is_var() && f.name() == "$top"; }

inline Formula nneg(Formula phi) {
  Formula bot = Formula::bot();
  switch (phi.kind()) {
    case Conn::Var:
      return is_mono_top(phi) ? bot : Formula::imp(phi, bot);
    case Conn::Bot: return Formula::imp(bot, bot);
    case Conn::Or:
      return Formula::imp(
          Formula::imp(nneg(phi.left()), Formula::imp(nneg(phi.right()), bot)),
          bot);
    case Conn::And:
      return Formula::imp(
          Formula::imp(nneg(phi.left()), bot),
          Formula::imp(Formula::imp(nneg(phi.right()), bot), bot));
    default:
      throw std::invalid_argument("nneg: non-monotone input " + print(phi));
  }
}

namespace detail {

// (nneg φ)^x computed directly, optionally with one variable s substituted by
// τ (giving exactly the image of the substitution {s↦τ, x-spots} on the plain
// translation — used by the SF substitution steps).
struct NegSub {
  std::string s;
  Formula tau;
};

inline Formula nx(Formula phi, Formula x, const NegSub* sub = nullptr);

inline std::vector<Formula> nx_ants(Formula phi, Formula x,
                                    const NegSub* sub = nullptr) {
  switch (phi.kind()) {
    case Conn::Var:
      if (is_mono_top(phi)) return {};
      if (sub && phi.name() == sub->s) return {sub->tau};
      return {phi};
    case Conn::Bot: return {x};
    case Conn::Or:
      return {join({nx(phi.left(), x, sub), nx(phi.right(), x, sub)}, x)};
    case Conn::And:
      return {Formula::imp(nx(phi.left(), x, sub), x),
              Formula::imp(nx(phi.right(), x, sub), x)};
    default:
      throw std::invalid_argument("nx: non-monotone input");
  }
}

inline Formula nx(Formula phi, Formula x, const NegSub* sub) {
  return join(nx_ants(phi, x, sub), x);
}

// --- small term utilities ---------------------------------------------------

inline Tm lam_seq(const std::vector<Tm>& hs, Tm body) {
  for (auto it = hs.rbegin(); it != hs.rend(); ++it) body = lam(*it, body);
  return body;
}
inline Tm app_seq(Tm f, const std::vector<Tm>& xs) {
  for (auto& x : xs) f = app(f, x);
  return f;
}

struct TmGen {
  HypGen hg;
  Tm operator()(Formula t) {
    int i;
    return hg.fresh(t, i);
  }
  std::vector<Tm> seq(const std::vector<Formula>& ts) {
    std::vector<Tm> r;
    for (auto& t : ts) r.push_back((*this)(t));
    return r;
  }
};

// --- the monotone-negation lemma builders -----------------------------------
// All produce closed, purely implicational terms; nx-shapes throughout.

// (((nneg φ)^x → x) → x) → (nneg φ)^x
inline Tm t25f(Formula phi, Formula x, const NegSub* sub = nullptr) {
  TmGen H;
  Formula n = nx(phi, x, sub);
  Tm h = H(Formula::imp(Formula::imp(n, x), x));
  auto gs = H.seq(nx_ants(phi, x, sub));
  Tm b = H(n);
  return lam(h, lam_seq(gs, app(h, lam(b, app_seq(b, gs)))));
}
// (nneg φ)^x → ((nneg φ)^x → x) → x
inline Tm t25b(Formula phi, Formula x, const NegSub* sub = nullptr) {
  TmGen H;
  Formula n = nx(phi, x, sub);
  Tm b = H(n), f = H(Formula::imp(n, x));
  return lam(b, lam(f, app(f, b)));
}
// (nneg(φ∨ψ))^x → (nneg φ)^x   and the right projection
inline Tm t28(Formula phi, Formula psi, Formula x, bool left_side,
              const NegSub* sub = nullptr) {
  TmGen H;
  Formula np = nx(phi, x, sub), nq = nx(psi, x, sub);
  Tm h = H(nx(Formula::lor(phi, psi), x, sub));
  Formula side = left_side ? phi : psi;
  auto gs = H.seq(nx_ants(side, x, sub));
  Tm a = H(np), b = H(nq);
  Tm pick = left_side ? a : b;
  return lam(h, lam_seq(gs, app(h, lam(a, lam(b, app_seq(pick, gs))))));
}
// (nneg φ)^x → (nneg ψ)^x → (nneg(φ∨ψ))^x
inline Tm t29(Formula phi, Formula psi, Formula x,
              const NegSub* sub = nullptr) {
  TmGen H;
  Formula np = nx(phi, x, sub), nq = nx(psi, x, sub);
  Tm a = H(np), b = H(nq);
  Tm k = H(join({np, nq}, x));
  return lam(a, lam(b, lam(k, app(app(k, a), b))));
}
// (nneg φ)^x → (nneg(φ∧ψ))^x   and the right injection
inline Tm t26(Formula phi, Formula psi, Formula x, bool left_side,
              const NegSub* sub = nullptr) {
  TmGen H;
  Formula np = nx(phi, x, sub), nq = nx(psi, x, sub);
  Tm t = H(left_side ? np : nq);
  Tm f = H(Formula::imp(np, x)), g = H(Formula::imp(nq, x));
  return lam(t, lam(f, lam(g, app(left_side ? f : g, t))));
}

struct TmPair {
  Tm fwd, bwd;
};

// (nneg φ)^{w→x} ↔ (w → (nneg φ)^x), by structural recursion
inline TmPair t24(Formula phi, Formula w, Formula x,
                  const NegSub* sub = nullptr) {
  TmGen H;
  Formula X = Formula::imp(w, x);
  auto cw = [&](Tm t) { return lam(H(w), t); };  // constant function over w
  switch (phi.kind()) {
    case Conn::Var: {
      if (is_mono_top(phi)) {
        Tm i = combI(X);
        return {i, i};
      }
      Formula q = (sub && phi.name() == sub->s) ? sub->tau : phi;
      Tm h = H(Formula::imp(q, X)), w1 = H(w), p1 = H(q);
      Tm fwd = lam(h, lam(w1, lam(p1, app(app(h, p1), w1))));
      Tm h2 = H(Formula::imp(w, Formula::imp(q, x)));
      Tm p2 = H(q), w2 = H(w);
      Tm bwd = lam(h2, lam(p2, lam(w2, app(app(h2, w2), p2))));
      return {fwd, bwd};
    }
    case Conn::Bot: {
      Tm h = H(Formula::imp(X, X)), w1 = H(w);
      Tm fwd = lam(h, lam(w1, combI(x)));
      Tm h2 = H(Formula::imp(w, Formula::imp(x, x)));
      Tm k = H(X), w2 = H(w);
      Tm bwd = lam(h2, lam(k, lam(w2, app(app(h2, w2), app(k, w2)))));
      return {fwd, bwd};
    }
    case Conn::Or: {
      Formula l = phi.left(), r = phi.right();
      auto L = t24(l, w, x, sub), R = t24(r, w, x, sub);
      Formula nL = nx(l, x, sub), nR = nx(r, x, sub);
      Formula nLX = nx(l, X, sub), nRX = nx(r, X, sub);
      Formula A = join({nL, nR}, x), AX = join({nLX, nRX}, X);
      Tm h = H(Formula::imp(AX, X)), w1 = H(w), a = H(A);
      Tm l1 = H(nLX), r1 = H(nRX), w2 = H(w);
      Tm inner = lam(
          l1, lam(r1, lam(w2, app(app(a, app(app(L.fwd, l1), w2)),
                                  app(app(R.fwd, r1), w2)))));
      Tm fwd = lam(h, lam(w1, lam(a, app(app(h, inner), w1))));
      Tm h2 = H(Formula::imp(w, Formula::imp(A, x)));
      Tm aw = H(AX), w3 = H(w);
      Tm l2 = H(nL), r2 = H(nR);
      Tm inner2 = lam(
          l2, lam(r2, app(app(app(aw, app(L.bwd, cw(l2))),
                              app(R.bwd, cw(r2))),
                          w3)));
      Tm bwd = lam(h2, lam(aw, lam(w3, app(app(h2, w3), inner2))));
      return {fwd, bwd};
    }
    case Conn::And: {
      Formula l = phi.left(), r = phi.right();
      auto L = t24(l, w, x, sub), R = t24(r, w, x, sub);
      Formula nL = nx(l, x, sub), nR = nx(r, x, sub);
      Formula nLX = nx(l, X, sub), nRX = nx(r, X, sub);
      Formula nXfull = nx(phi, X, sub);
      Tm h = H(nXfull), w1 = H(w);
      Tm f = H(Formula::imp(nL, x)), g = H(Formula::imp(nR, x));
      Tm lw = H(nLX), w2 = H(w), rw = H(nRX), w3 = H(w);
      Tm fwd = lam(
          h, lam(w1, lam(f, lam(g,
              app(app(app(h, lam(lw, lam(w2, app(f, app(app(L.fwd, lw), w2))))),
                      lam(rw, lam(w3, app(g, app(app(R.fwd, rw), w3))))),
                  w1)))));
      Tm h2 = H(Formula::imp(w, nx(phi, x, sub)));
      Tm F = H(Formula::imp(nLX, X)), G = H(Formula::imp(nRX, X));
      Tm w4 = H(w), l2 = H(nL), r2 = H(nR);
      Tm bwd = lam(
          h2, lam(F, lam(G, lam(w4,
              app(app(app(h2, w4),
                      lam(l2, app(app(F, app(L.bwd, cw(l2))), w4))),
                  lam(r2, app(app(G, app(R.bwd, cw(r2))), w4)))))));
      return {fwd, bwd};
    }
    default:
      throw std::invalid_argument("t24: non-monotone input");
  }
}

// (nneg φ)^x → s → (nneg φ[s↦τ])^x : bridging a substituted translation.
// Covariant throughout, so plain structural recursion suffices.
inline Tm subst_bridge(Formula phi, const std::string& s, Formula tau,
                       Formula x) {
  TmGen H;
  NegSub sb{s, tau};
  Formula sv = Formula::var(s);
  switch (phi.kind()) {
    case Conn::Var: {
      if (phi.name() == s) {
        Tm h = H(Formula::imp(sv, x)), s1 = H(sv), t1 = H(tau);
        return lam(h, lam(s1, lam(t1, app(h, s1))));
      }
      Tm h = H(nx(phi, x)), s1 = H(sv);
      return lam(h, lam(s1, h));
    }
    case Conn::Bot: {
      Tm h = H(nx(phi, x)), s1 = H(sv);
      return lam(h, lam(s1, h));
    }
    case Conn::Or: {
      Formula l = phi.left(), r = phi.right();
      Tm bL = subst_bridge(l, s, tau, x), bR = subst_bridge(r, s, tau, x);
      Formula nL = nx(l, x), nR = nx(r, x);
      Formula Js = join({nx(l, x, &sb), nx(r, x, &sb)}, x);
      Tm h = H(nx(phi, x)), s1 = H(sv), js = H(Js);
      Tm l1 = H(nL), r1 = H(nR);
      Tm inner = lam(l1, lam(r1, app(app(js, app(app(bL, l1), s1)),
                                     app(app(bR, r1), s1))));
      return lam(h, lam(s1, lam(js, app(h, inner))));
    }
    case Conn::And: {
      Formula l = phi.left(), r = phi.right();
      Tm bL = subst_bridge(l, s, tau, x), bR = subst_bridge(r, s, tau, x);
      Formula nL = nx(l, x), nR = nx(r, x);
      Tm h = H(nx(phi, x)), s1 = H(sv);
      Tm F = H(Formula::imp(nx(l, x, &sb), x));
      Tm G = H(Formula::imp(nx(r, x, &sb), x));
      Tm l1 = H(nL), r1 = H(nR);
      return lam(h, lam(s1, lam(F, lam(G,
          app(app(h, lam(l1, app(F, app(app(bL, l1), s1)))),
              lam(r1, app(G, app(app(bR, r1), s1))))))));
    }
    default:
      throw std::invalid_argument("subst_bridge: non-monotone input");
  }
}

// --- eq. (22) via the Γ_ψ subformula-occurrence induction -------------------

// ψ_*^x = Γ_ψ^x → (nneg ψ)^x for a context of earlier ∧-left siblings
inline Formula star_ctx(Formula psi, const std::vector<Formula>& ctx,
                        Formula x) {
  std::vector<Formula> pre;
  for (auto& c : ctx) pre.push_back(Formula::imp(nx(c, x), x));
  return join(pre, nx(psi, x));
}

// (v→u) → ψ_*^v → ψ_*^u
inline Tm t27(Formula psi, const std::vector<Formula>& ctx, Formula v,
              Formula u, std::map<std::string, Tm>& memo) {
  std::string key = print(psi);
  for (auto& c : ctx) key += '\x01' + print(c);
  auto mi = memo.find(key);
  if (mi != memo.end()) return mi->second;
  TmGen H;
  auto ctx_hyps = [&](Formula x) {
    std::vector<Formula> pre;
    for (auto& c : ctx) pre.push_back(Formula::imp(nx(c, x), x));
    return H.seq(pre);
  };
  Tm e = H(Formula::imp(v, u));
  Tm r;
  switch (psi.kind()) {
    case Conn::And: {
      Formula L = psi.left(), R = psi.right();
      std::vector<Formula> ctx2 = ctx;
      ctx2.push_back(L);
      Tm inner = t27(R, ctx2, v, u, memo);
      auto convf = [&](Formula x) {  // ψ_*^x → R_*^x
        Tm h = H(star_ctx(psi, ctx, x));
        auto gs = ctx_hyps(x);
        Tm X = H(Formula::imp(nx(L, x), x));
        Tm k = H(Formula::imp(nx(R, x), x));
        Tm body = app(t25f(R, x), lam(k, app(app(app_seq(h, gs), X), k)));
        return lam(h, lam_seq(gs, lam(X, body)));
      };
      auto convb = [&](Formula x) {  // R_*^x → ψ_*^x
        Tm h = H(star_ctx(R, ctx2, x));
        auto gs = ctx_hyps(x);
        Tm X = H(Formula::imp(nx(L, x), x));
        Tm Y = H(Formula::imp(nx(R, x), x));
        Tm body = app(Y, app(app_seq(h, gs), X));
        return lam(h, lam_seq(gs, lam(X, lam(Y, body))));
      };
      Tm h = H(star_ctx(psi, ctx, v));
      r = lam(e, lam(h, app(convb(u), app(app(inner, e), app(convf(v), h)))));
      break;
    }
    case Conn::Or: {
      Formula L = psi.left(), R = psi.right();
      Tm tL = t27(L, ctx, v, u, memo), tR = t27(R, ctx, v, u, memo);
      auto proj = [&](Formula x, bool left_side) {  // ψ_*^x → side_*^x
        Tm h = H(star_ctx(psi, ctx, x));
        auto gs = ctx_hyps(x);
        Tm body = app(t28(L, R, x, left_side), app_seq(h, gs));
        return lam(h, lam_seq(gs, body));
      };
      Tm h = H(star_ctx(psi, ctx, v));
      auto gu = ctx_hyps(u);
      Tm lu = app_seq(app(app(tL, e), app(proj(v, true), h)), gu);
      Tm ru = app_seq(app(app(tR, e), app(proj(v, false), h)), gu);
      r = lam(e, lam(h, lam_seq(gu, app(app(t29(L, R, u), lu), ru))));
      break;
    }
    case Conn::Bot: {
      Tm h = H(star_ctx(psi, ctx, v));
      auto gu = ctx_hyps(u);
      r = lam(e, lam(h, lam_seq(gu, combI(u))));
      break;
    }
    case Conn::Var: {
      if (ctx.empty()) {
        Tm h = H(star_ctx(psi, ctx, v));
        if (is_mono_top(psi)) {
          r = lam(e, lam(h, app(e, h)));
        } else {
          Tm p = H(psi);
          r = lam(e, lam(h, lam(p, app(e, app(h, p)))));
        }
        break;
      }
      Formula chi = ctx.back();
      std::vector<Formula> pre(ctx.begin(), ctx.end() - 1);
      Tm tchi = t27(chi, pre, v, u, memo);
      auto pre_hyps = [&](Formula x) {
        std::vector<Formula> ps;
        for (auto& c : pre) ps.push_back(Formula::imp(nx(c, x), x));
        return H.seq(ps);
      };
      if (is_mono_top(psi)) {
        auto fwd = [&](Formula x) {  // ψ_*^x → χ_*^x
          Tm h = H(star_ctx(psi, ctx, x));
          auto gs = pre_hyps(x);
          Tm X = H(Formula::imp(nx(chi, x), x));
          Tm body = app(t25f(chi, x), lam(X, app(app_seq(h, gs), X)));
          return lam(h, lam_seq(gs, body));
        };
        auto bwd = [&](Formula x) {  // χ_*^x → ψ_*^x
          Tm f = H(star_ctx(chi, pre, x));
          auto gs = pre_hyps(x);
          Tm X = H(Formula::imp(nx(chi, x), x));
          Tm body = app(X, app_seq(f, gs));
          return lam(f, lam_seq(gs, lam(X, body)));
        };
        Tm h = H(star_ctx(psi, ctx, v));
        r = lam(e, lam(h, app(bwd(u), app(app(tchi, e), app(fwd(v), h)))));
        break;
      }
      auto fwd = [&](Formula x) {  // ψ_*^x → p → χ_*^x
        Tm h = H(star_ctx(psi, ctx, x));
        Tm p = H(psi);
        auto gs = pre_hyps(x);
        Tm X = H(Formula::imp(nx(chi, x), x));
        Tm body = app(t25f(chi, x), lam(X, app(app(app_seq(h, gs), X), p)));
        return lam(h, lam(p, lam_seq(gs, body)));
      };
      auto bwd = [&](Formula x) {  // (p → χ_*^x) → ψ_*^x
        Tm f = H(Formula::imp(psi, star_ctx(chi, pre, x)));
        auto gs = pre_hyps(x);
        Tm X = H(Formula::imp(nx(chi, x), x));
        Tm p = H(psi);
        Tm body = app(X, app_seq(app(f, p), gs));
        return lam(f, lam_seq(gs, lam(X, lam(p, body))));
      };
      Tm h = H(star_ctx(psi, ctx, v));
      Tm p = H(psi);
      Tm arg = lam(p, app(app(tchi, e), app(app(fwd(v), h), p)));
      r = lam(e, lam(h, app(bwd(u), arg)));
      break;
    }
    default:
      throw std::invalid_argument("t27: non-monotone input");
  }
  memo.emplace(key, r);
  return r;
}

// (v→u) → (nneg φ)^v → (nneg φ)^u
inline Tm t22(Formula phi, Formula v, Formula u) {
  std::map<std::string, Tm> memo;
  return t27(phi, {}, v, u, memo);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// the NAND refutation calculus: sequents of NAND formulas (variables and
// negative formulas), refuted by structural rules, initial sequents, and cuts

using NandSequent = std::vector<Formula>;

inline bool is_nand_formula(Formula f) { return f.is_var() || is_negative(f); }

struct NandStep {
  enum K { Init, Struct, Cut } k = Init;
  NandSequent seq;
  int i = -1, j = -1;          // premises: Struct uses i; Cut uses i (left), j
  std::vector<Formula> pivot;  // Cut: Φ; left adds Φ, right adds Φ→⊥
};

struct NandRefutation {
  std::vector<NandStep> steps;
};

inline bool check_refutation(const NandRefutation& rho, const NandSequent& goal,
                             std::string* why = nullptr) {
  auto fail = [&](const std::string& r) {
    if (why) *why = r;
    return false;
  };
  if (rho.steps.empty()) return fail("empty refutation");
  auto fset = [](const NandSequent& s) {
    return std::set<Formula>(s.begin(), s.end());
  };
  for (size_t n = 0; n < rho.steps.size(); ++n) {
    const NandStep& st = rho.steps[n];
    if (st.seq.empty()) return fail("empty sequent");
    for (auto& f : st.seq)
      if (!is_nand_formula(f)) return fail("not a NAND formula: " + print(f));
    switch (st.k) {
      case NandStep::Init: {
        if (!is_negative(st.seq[0])) return fail("initial sequent malformed");
        auto ants = nand_ants(st.seq[0]);
        if (NandSequent(st.seq.begin() + 1, st.seq.end()) != ants)
          return fail("initial sequent malformed");
        break;
      }
      case NandStep::Struct: {
        if (st.i < 0 || st.i >= (int)n) return fail("premise out of range");
        auto here = fset(st.seq);
        for (auto& f : rho.steps[st.i].seq)
          if (!here.count(f)) return fail("structural step loses a formula");
        break;
      }
      case NandStep::Cut: {
        if (st.i < 0 || st.i >= (int)n || st.j < 0 || st.j >= (int)n)
          return fail("premise out of range");
        if (st.pivot.empty()) return fail("empty cut pivot");
        for (auto& f : st.pivot)
          if (!is_nand_formula(f)) return fail("bad cut pivot");
        NandSequent left = st.seq, right = st.seq;
        left.insert(left.end(), st.pivot.begin(), st.pivot.end());
        right.push_back(join(st.pivot, Formula::bot()));
        if (fset(rho.steps[st.i].seq) != fset(left))
          return fail("cut left premise mismatch");
        if (fset(rho.steps[st.j].seq) != fset(right))
          return fail("cut right premise mismatch");
        break;
      }
    }
  }
  if (rho.steps.back().seq != goal) return fail("last sequent is not the goal");
  return true;
}

struct SatisfiableInput : std::runtime_error {
  std::map<std::string, bool> assignment;
  explicit SatisfiableInput(std::map<std::string, bool> a)
      : std::runtime_error("sequent is classically satisfiable"),
        assignment(std::move(a)) {}
};
struct EffortExceeded : std::runtime_error {
  EffortExceeded() : std::runtime_error("refutation search effort exceeded") {}
};

// DPLL-style refutation search.  Branching maps to cuts: asserting a compound
// formula false expands its antecedents (a compound cut whose right premise
// closes immediately); otherwise split on an unassigned atom.
inline NandRefutation refute_nand(const NandSequent& goal,
                                  uint64_t effort = 1u << 20) {
  if (goal.empty()) throw std::invalid_argument("refute_nand: empty sequent");
  for (auto& f : goal)
    if (!is_nand_formula(f))
      throw std::invalid_argument("refute_nand: not a NAND formula: " +
                                  print(f));
  // atom closure: members and, recursively, antecedents of negative formulas
  std::vector<Formula> atoms_v, atoms_c;  // variables first for branching
  std::set<Formula> seen;
  std::function<void(Formula)> close = [&](Formula f) {
    if (!seen.insert(f).second) return;
    if (f.is_var()) {
      atoms_v.push_back(f);
      return;
    }
    atoms_c.push_back(f);
    for (auto& a : nand_ants(f)) close(a);
  };
  for (auto& f : goal) close(f);
  std::vector<Formula> atoms = atoms_v;
  atoms.insert(atoms.end(), atoms_c.begin(), atoms_c.end());

  NandRefutation rho;
  uint64_t nodes = 0;
  auto neg = [](Formula f) { return Formula::imp(f, Formula::bot()); };

  // index of a conflicting member (negative with all antecedents present)
  auto conflict = [&](const NandSequent& S,
                      const std::set<Formula>& in) -> int {
    for (size_t k = 0; k < S.size(); ++k) {
      if (S[k].is_var()) continue;
      bool all = true;
      for (auto& a : nand_ants(S[k]))
        if (!in.count(a)) {
          all = false;
          break;
        }
      if (all) return (int)k;
    }
    return -1;
  };

  // content-addressed emission: each emitted step keeps only the members its
  // subderivation needs (conflict-set pruning), and identical pruned steps
  // collapse to one index
  std::map<std::string, int> emitted;
  auto emit = [&](NandStep st) {
    std::string key(1, (char)('0' + (int)st.k));
    for (auto& f : st.seq) key += ',' + std::to_string(f.id());
    key += ';' + std::to_string(st.i) + ';' + std::to_string(st.j) + ';';
    for (auto& f : st.pivot) key += ',' + std::to_string(f.id());
    auto it = emitted.find(key);
    if (it != emitted.end()) return it->second;
    rho.steps.push_back(std::move(st));
    int idx = (int)rho.steps.size() - 1;
    emitted.emplace(key, idx);
    return idx;
  };

  // returns a step whose sequent is a subset of S
  std::function<int(const NandSequent&)> go =
      [&](const NandSequent& S) -> int {
    if (++nodes > effort) throw EffortExceeded();
    std::set<Formula> in(S.begin(), S.end());
    int ci = conflict(S, in);
    if (ci >= 0) {
      NandStep init;
      init.k = NandStep::Init;
      init.seq.push_back(S[ci]);
      for (auto& a : nand_ants(S[ci])) init.seq.push_back(a);
      return emit(std::move(init));
    }
    auto cut = [&](std::vector<Formula> pivot) {
      Formula pbar = join(pivot, Formula::bot());
      NandSequent L = S, R = S;
      L.insert(L.end(), pivot.begin(), pivot.end());
      R.push_back(pbar);
      int li = go(L), ri = go(R);
      std::set<Formula> ls(rho.steps[li].seq.begin(),
                           rho.steps[li].seq.end());
      std::set<Formula> rs(rho.steps[ri].seq.begin(),
                           rho.steps[ri].seq.end());
      // a premise that ignores the cut already refutes a subset of S
      if (!rs.count(pbar)) return ri;
      bool luses = false;
      for (auto& f : pivot)
        if (ls.count(f)) luses = true;
      if (!luses) return li;
      std::set<Formula> need = ls;
      for (auto& f : pivot) need.erase(f);
      for (auto& f : rs) need.insert(f);
      need.erase(pbar);
      if (need.empty()) need.insert(S.front());
      auto widen = [&](int idx, const std::set<Formula>& target) {
        std::set<Formula> have(rho.steps[idx].seq.begin(),
                               rho.steps[idx].seq.end());
        if (have == target) return idx;
        NandStep st;
        st.k = NandStep::Struct;
        st.seq.assign(target.begin(), target.end());
        st.i = idx;
        return emit(std::move(st));
      };
      std::set<Formula> lneed = need, rneed = need;
      for (auto& f : pivot) lneed.insert(f);
      rneed.insert(pbar);
      NandStep st;
      st.k = NandStep::Cut;
      st.seq.assign(need.begin(), need.end());
      st.i = widen(li, lneed);
      st.j = widen(ri, rneed);
      st.pivot = std::move(pivot);
      return emit(std::move(st));
    };
    // expand a falsified compound: χ̄ ∈ S with some antecedent of χ missing;
    // the right premise (S,χ) conflicts immediately via χ̄
    for (auto& chi : atoms_c) {
      if (in.count(chi) || !in.count(neg(chi))) continue;
      auto ants = nand_ants(chi);
      bool missing = false;
      for (auto& a : ants)
        if (!in.count(a)) missing = true;
      if (missing) return cut(ants);
    }
    // unit lookahead: an atom one of whose sides conflicts immediately
    for (auto& chi : atoms) {
      if (in.count(chi) || in.count(neg(chi))) continue;
      auto in2 = in;
      in2.insert(chi);
      NandSequent S2 = S;
      S2.push_back(chi);
      if (conflict(S2, in2) >= 0) return cut({chi});
      auto in3 = in;
      in3.insert(neg(chi));
      S2.back() = neg(chi);
      if (conflict(S2, in3) >= 0) return cut({chi});
    }
    // genuine split on an unassigned atom, variables first
    for (auto& chi : atoms)
      if (!in.count(chi) && !in.count(neg(chi))) return cut({chi});
    // everything assigned and consistent: read off a classical assignment
    std::map<std::string, bool> v;
    for (auto& p : atoms_v) v[p.name()] = in.count(p) > 0;
    std::function<bool(Formula)> ev = [&](Formula f) -> bool {
      if (f.is_bot()) return false;
      if (f.is_var()) return v.count(f.name()) && v[f.name()];
      return !ev(f.left()) || ev(f.right());
    };
    for (auto& f : S)
      if (!ev(f)) throw std::logic_error("refute_nand: search invariant");
    throw SatisfiableInput(std::move(v));
  };
  int last = go(goal);
  if (last != (int)rho.steps.size() - 1 || rho.steps[last].seq != goal) {
    NandStep st;
    st.k = NandStep::Struct;
    st.seq = goal;
    st.i = last;
    rho.steps.push_back(st);
  }
  return rho;
}

// Translate a checked refutation of Γ into an Fr IPC_→ proof of Γ^u→u.
inline Proof glivenko_impl(const NandRefutation& rho, const std::string& u) {
  if (rho.steps.empty()) throw std::invalid_argument("empty refutation");
  std::string why;
  if (!check_refutation(rho, rho.steps.back().seq, &why))
    throw std::invalid_argument("glivenko_impl: invalid refutation: " + why);
  Formula U = Formula::var(u);
  auto member_u = [&](Formula f) {
    return f.is_var() ? f : to_u(f, U);
  };
  // resolve a premise-sequent proof against a wider context, first match
  auto resolve = [&](Tm t, const NandSequent& prem,
                     const std::vector<Formula>& ctx,
                     const std::vector<Tm>& cts) {
    for (auto& m : prem) {
      size_t k = 0;
      while (k < ctx.size() && ctx[k] != m) ++k;
      if (k == ctx.size())
        throw std::logic_error("glivenko_impl: unresolved premise member");
      t = app(t, cts[k]);
    }
    return t;
  };
  detail::TmGen H;
  std::vector<Tm> memo(rho.steps.size());
  std::function<Tm(int)> term = [&](int n) -> Tm {
    if (memo[n]) return memo[n];
    const NandStep& st = rho.steps[n];
    std::vector<Tm> gs;
    for (auto& f : st.seq) gs.push_back(H(member_u(f)));
    Tm body;
    switch (st.k) {
      case NandStep::Init:
        body = detail::app_seq(gs[0],
                               std::vector<Tm>(gs.begin() + 1, gs.end()));
        break;
      case NandStep::Struct: {
        std::vector<Formula> ctx = st.seq;
        body = resolve(term(st.i), rho.steps[st.i].seq, ctx, gs);
        break;
      }
      case NandStep::Cut: {
        std::vector<Tm> fs;
        for (auto& f : st.pivot) fs.push_back(H(member_u(f)));
        std::vector<Formula> lctx = st.seq;
        lctx.insert(lctx.end(), st.pivot.begin(), st.pivot.end());
        std::vector<Tm> lcts = gs;
        lcts.insert(lcts.end(), fs.begin(), fs.end());
        Tm lv = resolve(term(st.i), rho.steps[st.i].seq, lctx, lcts);
        Tm w = detail::lam_seq(fs, lv);  // Φ^u → u, i.e. (Φ→⊥)^u
        std::vector<Formula> rctx = st.seq;
        rctx.push_back(join(st.pivot, Formula::bot()));
        std::vector<Tm> rcts = gs;
        rcts.push_back(w);
        body = resolve(term(st.j), rho.steps[st.j].seq, rctx, rcts);
        break;
      }
    }
    return memo[n] = detail::lam_seq(gs, body);
  };
  for (auto& st : rho.steps)
    for (auto& f : st.seq)
      if (contains_var(f, u))
        throw std::invalid_argument("glivenko_impl: " + u + " is not fresh");
  return to_proof(term((int)rho.steps.size() - 1));
}

// ---------------------------------------------------------------------------
// the monotone-negation lemma library (all checked Fr IPC_→)

inline std::map<std::string, Proof> neg_mon_library(Formula phi, Formula psi,
                                                    const std::string& u,
                                                    const std::string& v) {
  if (!is_monotone(phi) || !is_monotone(psi))
    throw std::invalid_argument("neg_mon_library: non-monotone input");
  if (u == v || contains_var(phi, u) || contains_var(phi, v) ||
      contains_var(psi, u) || contains_var(psi, v))
    throw std::invalid_argument("neg_mon_library: variables not fresh");
  Formula U = Formula::var(u), V = Formula::var(v);
  std::map<std::string, Proof> m;
  m["eq25_fwd"] = to_proof(detail::t25f(phi, U));
  m["eq25_bwd"] = to_proof(detail::t25b(phi, U));
  m["eq28_l"] = to_proof(detail::t28(phi, psi, U, true));
  m["eq28_r"] = to_proof(detail::t28(phi, psi, U, false));
  m["eq29"] = to_proof(detail::t29(phi, psi, U));
  m["eq26_l"] = to_proof(detail::t26(phi, psi, U, true));
  m["eq26_r"] = to_proof(detail::t26(phi, psi, U, false));
  auto p = detail::t24(phi, V, U);
  m["eq24_fwd"] = to_proof(p.fwd);
  m["eq24_bwd"] = to_proof(p.bwd);
  m["eq22"] = to_proof(detail::t22(phi, V, U));
  return m;
}

// ---------------------------------------------------------------------------
// the separation formulas and their SF proofs

namespace detail {

// right-nested conjunction / disjunction; empty conjunction is ⊤
inline Formula conjr(const std::vector<Formula>& fs) {
  if (fs.empty()) return mono_top();
  Formula f = fs.back();
  for (auto it = fs.rbegin() + 1; it != fs.rend(); ++it)
    f = Formula::land(*it, f);
  return f;
}
inline Formula disjr(const std::vector<Formula>& fs) {
  if (fs.empty()) throw std::invalid_argument("empty disjunction");
  Formula f = fs.back();
  for (auto it = fs.rbegin() + 1; it != fs.rend(); ++it)
    f = Formula::lor(*it, f);
  return f;
}

struct SepParts {
  int n;
  Formula gamma, delta;
  std::vector<Formula> orP, orS, orR;
  Formula P, S, R;
};

inline SepParts sep_parts(int n, Formula gamma, Formula delta) {
  if (n < 1) throw std::invalid_argument("sep: n must be positive");
  if (!is_strict_monotone(gamma) || !is_strict_monotone(delta))
    throw std::invalid_argument("sep: bodies must be strict monotone");
  SepParts sp;
  sp.n = n;
  sp.gamma = gamma;
  sp.delta = delta;
  std::set<std::string> gok, dok;
  for (int i = 0; i < n; ++i) {
    std::string si = std::to_string(i);
    sp.orP.push_back(Formula::lor(Formula::var("p" + si), Formula::var("pp" + si)));
    sp.orS.push_back(Formula::lor(Formula::var("s" + si), Formula::var("ss" + si)));
    sp.orR.push_back(Formula::lor(Formula::var("r" + si), Formula::var("rr" + si)));
    gok.insert({"p" + si, "s" + si, "ss" + si});
    dok.insert({"pp" + si, "r" + si, "rr" + si});
  }
  for (auto& x : vars_of(gamma))
    if (!gok.count(x))
      throw std::invalid_argument("sep: gamma uses unexpected variable " + x);
  for (auto& x : vars_of(delta))
    if (!dok.count(x))
      throw std::invalid_argument("sep: delta uses unexpected variable " + x);
  sp.P = conjr(sp.orP);
  sp.S = conjr(sp.orS);
  sp.R = conjr(sp.orR);
  return sp;
}

// flattening of a right-spine conjunction block under the translation:
// (nneg(c_0∧(c_1∧…)))^x ↔ (nx c_0→x)→(nx c_1→x)→…→x
inline Tm flat_fwd(Formula st, Formula x) {
  TmGen H;
  if (is_mono_top(st)) return combI(x);
  if (!st.is_and()) {
    Tm h = H(nx(st, x)), a = H(Formula::imp(nx(st, x), x));
    return lam(h, lam(a, app(a, h)));
  }
  Formula L = st.left(), rest = st.right();
  Tm inner = flat_fwd(rest, x);
  Tm h = H(nx(st, x)), a = H(Formula::imp(nx(L, x), x));
  std::vector<Formula> rest_pre;
  {
    Formula t = inner->type.right();  // flat type of rest
    while (t != x) {
      rest_pre.push_back(t.left());
      t = t.right();
    }
  }
  auto gs = H.seq(rest_pre);
  Tm r = H(nx(rest, x));
  Tm body = app(app(h, a), lam(r, app_seq(app(inner, r), gs)));
  return lam(h, lam(a, lam_seq(gs, body)));
}
inline Tm flat_bwd(Formula st, Formula x) {
  TmGen H;
  if (is_mono_top(st)) return combI(x);
  if (!st.is_and()) return t25f(st, x);
  Formula L = st.left(), rest = st.right();
  Tm inner = flat_bwd(rest, x);
  Tm f = H(Formula::imp(Formula::imp(nx(L, x), x), inner->type.left()));
  Tm a = H(Formula::imp(nx(L, x), x));
  Tm R = H(Formula::imp(nx(rest, x), x));
  return lam(f, lam(a, lam(R, app(R, app(inner, app(f, a))))));
}

}  // namespace detail

// the classical core of the separation instance, as a NAND sequent
inline NandSequent sep_core(int n, Formula gamma, Formula delta) {
  auto sp = detail::sep_parts(n, gamma, delta);
  Formula bot = Formula::bot();
  return {Formula::imp(nneg(sp.P), bot), Formula::imp(nneg(sp.S), bot),
          Formula::imp(nneg(sp.R), bot), nneg(gamma), nneg(delta)};
}

// the separation formula itself (purely implicational)
inline Formula sep_target(int n, Formula gamma, Formula delta) {
  auto sp = detail::sep_parts(n, gamma, delta);
  Formula U = Formula::var("u"), V = Formula::var("v"), W = Formula::var("w");
  using detail::nx;
  return join({Formula::imp(nx(sp.P, U), U), Formula::imp(nx(sp.S, V), U),
               Formula::imp(nx(sp.R, W), U), nx(gamma, V), nx(delta, W)},
              U);
}

// default monotone bodies making the core classically unsatisfiable:
// γ = (⋁p_i) ∧ ⋀(s_i∨s'_i), δ = (⋁p'_i) ∧ ⋀(r_i∨r'_i)
inline std::pair<Formula, Formula> sep_default_bodies(int n) {
  std::vector<Formula> p, pp;
  for (int i = 0; i < n; ++i) {
    p.push_back(Formula::var("p" + std::to_string(i)));
    pp.push_back(Formula::var("pp" + std::to_string(i)));
  }
  std::vector<Formula> orS, orR;
  for (int i = 0; i < n; ++i) {
    std::string si = std::to_string(i);
    orS.push_back(Formula::lor(Formula::var("s" + si), Formula::var("ss" + si)));
    orR.push_back(Formula::lor(Formula::var("r" + si), Formula::var("rr" + si)));
  }
  return {Formula::land(detail::disjr(p), detail::conjr(orS)),
          Formula::land(detail::disjr(pp), detail::conjr(orR))};
}

// SF IPC_→ proof of sep_target(n, γ, δ) from a refutation of the core
inline Proof sep_proof(int n, Formula gamma, Formula delta,
                       const NandRefutation& rho) {
  using namespace detail;
  auto sp = sep_parts(n, gamma, delta);
  NandSequent core = sep_core(n, gamma, delta);
  std::string why;
  if (!check_refutation(rho, core, &why))
    throw std::invalid_argument("sep_proof: invalid refutation: " + why);

  Formula U = Formula::var("u"), V = Formula::var("v"), W = Formula::var("w");
  Formula tau = Formula::imp(U, U);
  Formula A1 = Formula::imp(nx(sp.P, U), U);
  Formula A2u = Formula::imp(nx(sp.S, U), U);
  Formula A3u = Formula::imp(nx(sp.R, U), U);
  Formula A2 = Formula::imp(nx(sp.S, V), U);
  Formula A3 = Formula::imp(nx(sp.R, W), U);
  Formula NuG = nx(gamma, U), NuD = nx(delta, U);
  Formula NvG = nx(gamma, V), NwD = nx(delta, W);

  Tm core20 = lemma(std::make_shared<const Proof>(glivenko_impl(rho, "u")));

  Proof sf;
  sf.kind = ProofKind::SF;
  // append with global deduplication: repeated axiom instances and repeated
  // modus ponens derivations across spliced blocks collapse to one line
  std::map<std::tuple<int, uint64_t, uint64_t>, int> dedup;
  auto put = [&](Line ln) {
    std::tuple<int, uint64_t, uint64_t> key;
    bool dedupable = true;
    if (ln.just.k == Just::Ax_)
      key = {(int)ln.just.ax, ln.stmt.id(), 0};
    else if (ln.just.k == Just::MP)
      key = {-1, (uint64_t)ln.just.i, (uint64_t)ln.just.j};
    else
      dedupable = false;
    if (dedupable) {
      auto it = dedup.find(key);
      if (it != dedup.end()) return it->second;
    }
    sf.lines.push_back(std::move(ln));
    int idx = (int)sf.lines.size() - 1;
    if (dedupable) dedup.emplace(key, idx);
    return idx;
  };
  auto splice = [&](const Proof& block) {
    std::vector<int> remap(block.lines.size());
    int last = -1;
    for (size_t n = 0; n < block.lines.size(); ++n) {
      Line ln = block.lines[n];
      if (ln.just.k == Just::MP) {
        ln.just.i = remap[ln.just.i];
        ln.just.j = remap[ln.just.j];
      } else if (ln.just.k == Just::Subst) {
        ln.just.i = remap[ln.just.i];
      } else if (ln.just.k == Just::Hyp || ln.just.k == Just::Ext) {
        throw std::logic_error("sep_proof: impure block");
      }
      last = remap[n] = put(std::move(ln));
    }
    return last;
  };
  auto mp = [&](int arg, int fun) {
    return put(line_mp(arg, fun, sf.lines[fun].stmt.right()));
  };

  // one induction phase: from a line proving
  //   pre → (nneg body)^X → ((nneg ⋀ors)^u → u) → ((X)→u) → u
  // to a line proving pre → (nneg body)^X → ((nneg ⋀ors)^X → u) → u,
  // eliminating the u-level block pair by pair through SF substitutions
  auto run_phase = [&](int base_idx, const std::vector<Formula>& pre,
                       Formula body, const std::vector<Formula>& ors,
                       const std::vector<std::array<std::string, 2>>& pairs,
                       Formula X) {
    Formula NxB = nx(body, X);
    auto C = [&](int j) {
      return conjr(std::vector<Formula>(ors.begin() + j, ors.end()));
    };
    std::vector<Formula> D(n + 1);
    D[0] = mono_top();
    for (int j = 0; j < n; ++j) D[j + 1] = Formula::land(ors[j], D[j]);
    auto Fj = [&](int j) {
      return join(pre,
                  Formula::imp(NxB,
                      Formula::imp(Formula::imp(nx(C(j), U), U),
                          Formula::imp(Formula::imp(nx(D[j], X), U), U))));
    };
    int cur = base_idx;
    for (int j = 0; j < n; ++j) {
      Formula NuCj1 = nx(C(j + 1), U);
      Formula NxDj = nx(D[j], X);
      std::array<int, 2> branch_lines;
      for (int b = 0; b < 2; ++b) {
        const std::string& piv = pairs[j][b];
        const std::string& oth = pairs[j][1 - b];
        Formula va = Formula::var(piv), vb = Formula::var(oth);
        NegSub sb{piv, tau};
        Formula Xp = Formula::imp(va, X);
        Substitution sig;
        sig.set(piv, tau);
        sig.set(X.name(), Xp);
        Formula sFj = substitute(sig, Fj(j));
        sf.lines.push_back(line_subst(cur, sig, sFj));
        int subidx = (int)sf.lines.size() - 1;
        // block: σ(F_j) → I_b
        Formula Ib = join(pre,
            Formula::imp(NxB,
                Formula::imp(Formula::imp(NuCj1, U),
                    Formula::imp(
                        Formula::imp(Formula::imp(va, NxDj), U), U))));
        TmGen H;
        Tm h = H(sFj);
        auto ps = H.seq(pre);
        Tm g = H(NxB);
        Tm c = H(Formula::imp(NuCj1, U));
        Tm k = H(Formula::imp(Formula::imp(va, NxDj), U));
        // σ-image of the body premise, from the plain one
        Tm br = subst_bridge(body, piv, tau, X);
        auto p24 = t24(body, va, X, &sb);
        Tm a1h = H(va);
        Tm Gsig = app(p24.bwd, lam(a1h, app(app(br, g), a1h)));
        // σ-image of the u-level conjunction premise; τ = u→u is provable,
        // and the pivot sits left or right in its pair depending on b
        Tm q1 = H(Formula::imp(tau, U)), z1 = H(Formula::imp(vb, U));
        Tm tJ = b == 0 ? lam(q1, lam(z1, app(q1, combI(U))))
                       : lam(z1, lam(q1, app(q1, combI(U))));
        Formula sNuOr = nx(ors[j], U, &sb);
        Tm mh = H(nx(C(j), U, &sb));
        Tm econv;
        if (j == n - 1) {
          econv = app(mh, tJ);  // (nneg ⊤)^u = u
        } else {
          auto gB = H.seq(nx_ants(C(j + 1), U));
          Tm aa = H(sNuOr), bb = H(NuCj1);
          econv = lam_seq(gB, app(app(mh, lam(aa, app(aa, tJ))),
                                  lam(bb, app_seq(bb, gB))));
        }
        Tm Ctm = lam(mh, app(c, econv));
        // σ-image of the X-level block premise via eq. (24)
        auto d24 = t24(D[j], va, X);
        Tm mh2 = H(nx(D[j], Xp));
        Tm Ktm = lam(mh2, app(k, app(d24.fwd, mh2)));
        Tm body_tm = app(app(app(app_seq(h, ps), Gsig), Ctm), Ktm);
        Tm block = lam(h, lam_seq(ps, lam(g, lam(c, lam(k, body_tm)))));
        if (block->type != Formula::imp(sFj, Ib))
          throw std::logic_error("sep_proof: block type mismatch");
        int bi = splice(to_proof(block));
        branch_lines[b] = mp(subidx, bi);
      }
      // combine both branches into F_{j+1}
      {
        Formula va = Formula::var(pairs[j][0]), vb = Formula::var(pairs[j][1]);
        Formula NxDj1 = nx(D[j + 1], X);
        Formula NxOr = nx(ors[j], X);
        Formula Y = join({Formula::imp(va, X), Formula::imp(vb, X)}, X);
        TmGen H;
        Tm hs = H(sf.lines[branch_lines[0]].stmt);
        Tm ht = H(sf.lines[branch_lines[1]].stmt);
        auto ps = H.seq(pre);
        Tm g = H(NxB);
        Tm c = H(Formula::imp(NuCj1, U));
        Tm m = H(Formula::imp(NxDj1, U));
        Tm f = H(Formula::imp(va, NxDj));
        Tm f2 = H(Formula::imp(vb, NxDj));
        Tm A = H(Formula::imp(NxOr, X));
        Tm B = H(Formula::imp(NxDj, X));
        Tm y = H(Y);
        Tm s1 = H(va), t1 = H(vb);
        Tm mkD = lam(f, lam(f2, lam(A, lam(B,
            app(A, lam(y, app(app(y, lam(s1, app(B, app(f, s1)))),
                              lam(t1, app(B, app(f2, t1))))))))));
        Tm hs_app = app(app(app_seq(hs, ps), g), c);
        Tm ht_app = app(app(app_seq(ht, ps), g), c);
        Tm body_tm =
            app(hs_app,
                lam(f, app(ht_app,
                           lam(f2, app(m, app(app(mkD, f), f2))))));
        Tm comb = lam(hs, lam(ht, lam_seq(ps, lam(g, lam(c, lam(m, body_tm))))));
        if (comb->type.right().right() != Fj(j + 1))
          throw std::logic_error("sep_proof: combine type mismatch");
        int ci = splice(to_proof(comb));
        int t1i = mp(branch_lines[0], ci);
        cur = mp(branch_lines[1], t1i);
      }
    }
    // wrap: discharge the now-trivial u-level premise and reorder the
    // accumulated X-level block into the displayed conjunction
    {
      Formula C0 = C(0);
      Formula T = join(pre, Formula::imp(NxB,
          Formula::imp(Formula::imp(nx(C0, X), U), U)));
      TmGen H;
      Tm hn = H(Fj(n));
      auto ps = H.seq(pre);
      Tm g = H(NxB);
      Tm q = H(Formula::imp(nx(C0, X), U));
      Tm m = H(nx(D[n], X));
      // reorder via the flattened forms: D[n] lists the ors in reverse
      Tm fd = flat_fwd(D[n], X);
      std::vector<Tm> as;
      for (auto& o : ors) as.push_back(H(Formula::imp(nx(o, X), X)));
      std::vector<Tm> rev(as.rbegin(), as.rend());
      Tm val = app_seq(app(fd, m), rev);
      Tm reord = app(flat_bwd(C0, X), lam_seq(as, val));
      Tm fn_app = app(app(app_seq(hn, ps), g), combI(U));
      Tm body2 = app(fn_app, lam(m, app(q, reord)));
      Tm wrap = lam(hn, lam_seq(ps, lam(g, lam(q, body2))));
      if (wrap->type != Formula::imp(Fj(n), T))
        throw std::logic_error("sep_proof: wrap type mismatch");
      int wi = splice(to_proof(wrap));
      cur = mp(cur, wi);
    }
    return cur;
  };

  std::vector<std::array<std::string, 2>> spairs, rpairs;
  for (int i = 0; i < n; ++i) {
    std::string si = std::to_string(i);
    spairs.push_back({"s" + si, "ss" + si});
    rpairs.push_back({"r" + si, "rr" + si});
  }

  // γ phase base: F_0 from the translated core refutation
  {
    TmGen H;
    Tm a1 = H(A1), a3 = H(A3u), d = H(NuD), g = H(NvG);
    Tm c = H(A2u), e = H(Formula::imp(V, U));
    Tm gU = app(app(t22(gamma, V, U), e), g);
    Tm body = app(app(app(app(app(core20, a1), c), a3), gU), d);
    Tm T0 = lam(a1, lam(a3, lam(d, lam(g, lam(c, lam(e, body))))));
    splice(to_proof(T0));
  }
  int base_g = (int)sf.lines.size() - 1;
  int tg = run_phase(base_g, {A1, A3u, NuD}, gamma, sp.orS, spairs, V);
  // δ phase base from the γ-phase endpoint
  {
    TmGen H;
    Tm t = H(sf.lines[tg].stmt);
    Tm a1 = H(A1), a2 = H(A2), g = H(NvG), d = H(NwD);
    Tm c = H(A3u), e = H(Formula::imp(W, U));
    Tm dU = app(app(t22(delta, W, U), e), d);
    Tm body = app(app(app(app(app(t, a1), c), dU), g), a2);
    Tm T0p = lam(t, lam(a1, lam(a2, lam(g, lam(d, lam(c, lam(e, body)))))));
    int i0 = splice(to_proof(T0p));
    tg = mp(tg, i0);
  }
  int td = run_phase(tg, {A1, A2, NvG}, delta, sp.orR, rpairs, W);
  // final premise arrangement
  {
    TmGen H;
    Tm t = H(sf.lines[td].stmt);
    Tm a1 = H(A1), a2 = H(A2), a3 = H(A3), g = H(NvG), d = H(NwD);
    Tm body = app(app(app(app(app(t, a1), a2), g), d), a3);
    Tm fin = lam(t, lam(a1, lam(a2, lam(a3, lam(g, lam(d, body))))));
    int fi = splice(to_proof(fin));
    td = mp(td, fi);
  }
  if (sf.lines.back().stmt != sep_target(n, gamma, delta))
    throw std::logic_error("sep_proof: conclusion mismatch");
  return sf;
}

inline Proof sep_proof(int n, Formula gamma, Formula delta,
                       uint64_t effort = 1u << 20) {
  return sep_proof(n, gamma, delta,
                   refute_nand(sep_core(n, gamma, delta), effort));
}

}  // namespace iptk
