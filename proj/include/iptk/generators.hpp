#pragma once
// Tautology families: the alpha hierarchy and its conjunction squares, the
// conjunction-expansion substitution, Rieger-Nishimura circuits, the
// premise-block separation shapes, and shipped proper axioms.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "circuit.hpp"
#include "negtrans.hpp"

namespace iptk {

// α_0 = p0, α_{n+1} = α_n → p_{n+1}
inline Formula alpha(int n) {
  if (n < 0) throw std::invalid_argument("alpha: n must be nonnegative");
  Formula a = Formula::var("p0");
  for (int i = 1; i <= n; ++i)
    a = Formula::imp(a, Formula::var("p" + std::to_string(i)));
  return a;
}

// α_n with p_i replaced by p_{i,0} ∧ p_{i,1} for i < n
inline Formula alpha_conj2(int n) {
  Substitution s;
  for (int i = 0; i < n; ++i) {
    std::string p = "p" + std::to_string(i);
    s.set(p, Formula::land(Formula::var(p + "0"), Formula::var(p + "1")));
  }
  return substitute(s, alpha(n));
}

// implicational equivalent of α_n^{∧2} by doubling the head variable at each
// level; size is exactly 2^{n+2}−3
inline Formula alpha_conj2_impl(int n) {
  if (n < 0) throw std::invalid_argument("alpha_conj2_impl: n nonnegative");
  Formula a = Formula::var("p0");
  for (int i = 1; i <= n; ++i) {
    std::string h = "p" + std::to_string(i - 1);
    Substitution s0, s1;
    s0.set(h, Formula::var(h + "0"));
    s1.set(h, Formula::var(h + "1"));
    a = Formula::imp(substitute(s0, a),
                     Formula::imp(substitute(s1, a),
                                  Formula::var("p" + std::to_string(i))));
  }
  return a;
}

// conjunction expansion: ξ_n(p_i) = ⋀_{j<n} p_{in+j}
inline Formula xi(int n, Formula phi) {
  if (n < 1) throw std::invalid_argument("xi: n must be positive");
  Substitution s;
  for (auto& x : vars_of(phi)) {
    if (x.size() < 2 || x[0] != 'p' ||
        x.find_first_not_of("0123456789", 1) != std::string::npos)
      throw std::invalid_argument("xi: variables must be p-indexed, got " + x);
    long long i = std::stoll(x.substr(1));
    std::vector<Formula> parts;
    for (int j = 0; j < n; ++j)
      parts.push_back(Formula::var("p" + std::to_string(i * n + j)));
    s.set(x, big_and(parts));
  }
  return substitute(s, phi);
}

// Rieger-Nishimura formulas as a linear-size circuit:
// rn_0 = ⊥, rn_1 = p, rn_2 = ¬p, rn_{2n+3} = rn_{2n+1} ∨ rn_{2n+2},
// rn_{2n+4} = rn_{2n+2} → rn_{2n+1}
inline Circuit rn(int k) {
  if (k < 0) throw std::invalid_argument("rn: k must be nonnegative");
  Circuit c;
  std::vector<uint32_t> g;
  g.push_back(c.add_bot());
  g.push_back(c.add_var("p"));
  g.push_back(c.add_imp(g[1], g[0]));
  for (int i = 3; i <= k; ++i)
    g.push_back(i % 2 ? c.add_or(g[i - 2], g[i - 1])
                      : c.add_imp(g[i - 2], g[i - 3]));
  c.set_root(g[k]);
  return c;
}

// ⋀_{i<n}(p_i∨p'_i) → (⋀(s_j∨s'_j)→γ) ∨ (⋀(r_k∨r'_k)→δ)
inline Formula family_eq2(int n, Formula gamma, Formula delta) {
  auto sp = detail::sep_parts(n, gamma, delta);
  return Formula::imp(
      detail::conjr(sp.orP),
      Formula::lor(Formula::imp(detail::conjr(sp.orS), gamma),
                   Formula::imp(detail::conjr(sp.orR), delta)));
}

// the implicational form via the monotone-negation translation
inline Formula family_eq6(int n, Formula gamma, Formula delta) {
  return sep_target(n, gamma, delta);
}

// Default γ/δ pair: an (n+2)-clique versus a two-colouring, over the
// m = (n+2)(n+1)/2 edge blocks of the complete graph.  γ says the graph has
// every edge (and a clique certificate is chosen); δ says some edge is absent
// or the r/r'-colouring is proper — impossible for a clique of size ≥ 3, so
// the corresponding separation core is classically unsatisfiable.
inline std::pair<Formula, Formula> default_clique_colour(int n) {
  if (n < 1) throw std::invalid_argument("default_clique_colour: n >= 1");
  int k = n + 2, m = k * (k - 1) / 2;
  std::vector<Formula> ps, pps, orS, colour;
  for (int e = 0; e < m; ++e) {
    std::string se = std::to_string(e);
    ps.push_back(Formula::var("p" + se));
    pps.push_back(Formula::var("pp" + se));
    orS.push_back(
        Formula::lor(Formula::var("s" + se), Formula::var("ss" + se)));
  }
  for (int u = 0; u < k; ++u)
    for (int v = u + 1; v < k; ++v) {
      Formula ru = Formula::var("r" + std::to_string(u));
      Formula rru = Formula::var("rr" + std::to_string(u));
      Formula rv = Formula::var("r" + std::to_string(v));
      Formula rrv = Formula::var("rr" + std::to_string(v));
      colour.push_back(
          Formula::lor(Formula::land(ru, rrv), Formula::land(rru, rv)));
    }
  Formula gamma = Formula::land(detail::conjr(ps), detail::conjr(orS));
  Formula delta =
      Formula::lor(detail::disjr(pps), detail::conjr(colour));
  return {gamma, delta};
}

// proper axioms used throughout: KC, Gödel–Dummett LC in its disjunctive and
// implicational axiomatizations, and the simplified conjunction square of the
// implicational one
inline std::map<std::string, Formula> shipped_axioms() {
  std::map<std::string, Formula> m;
  m["KC"] = parse("(p->F) | ((p->F)->F)");
  m["LC"] = parse("(p->q) | (q->p)");
  m["LC_impl"] = parse("((p->q)->r) -> ((q->p)->r) -> r");
  m["LC_impl_conj2"] =
      parse("((p->pp->q) -> (p->pp->qq) -> r) ->"
            "((q->qq->p) -> (q->qq->pp) -> r) -> r");
  return m;
}

}  // namespace iptk
