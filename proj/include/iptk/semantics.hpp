#pragma once
// The infinite two-ladder model M, canonical classification of formulas in M,
// formula forests for land-free formulas, monotone CNF, and a brute-force
// minimal-equivalent search.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "decision.hpp"
#include "formula.hpp"
#include "kripke.hpp"

namespace iptk {

// ---------------------------------------------------------------------------
// the model M: points x_0,x_1,... and y_1,y_2,... with
//   x_n < x_{n-1},  x_{n+1} < y_n < x_{n-1},
//   y_1 |= p_0,  x_n,y_n |= p_{n+1}
// Every point has a finite up-set, so forcing is decidable directly.

struct ModelMPoint {
  bool is_y = false;
  int k = 0;  // x_k (k >= 0) or y_k (k >= 1)

  bool operator==(const ModelMPoint& o) const {
    return is_y == o.is_y && k == o.k;
  }
  bool operator<(const ModelMPoint& o) const {
    return std::tie(is_y, k) < std::tie(o.is_y, o.k);
  }
};

inline ModelMPoint m_x(int k) {
  if (k < 0) throw std::invalid_argument("x_k needs k >= 0");
  return {false, k};
}
inline ModelMPoint m_y(int k) {
  if (k < 1) throw std::invalid_argument("y_k needs k >= 1");
  return {true, k};
}

// a <= b in M
inline bool model_M_leq(ModelMPoint a, ModelMPoint b) {
  if (!a.is_y) {
    // up(x_n) = {x_m : m <= n} u {y_m : 1 <= m <= n-1}
    return b.is_y ? (b.k >= 1 && b.k <= a.k - 1) : b.k <= a.k;
  }
  // up(y_n) = {y_n} u {x_m : m <= n-1} u {y_m : 1 <= m <= n-2}
  if (b.is_y) return b.k == a.k || (b.k >= 1 && b.k <= a.k - 2);
  return b.k <= a.k - 1;
}

inline std::vector<ModelMPoint> model_M_upset(ModelMPoint u) {
  std::vector<ModelMPoint> r;
  int top = u.is_y ? u.k - 1 : u.k;
  for (int m = 0; m <= top; ++m) r.push_back(m_x(m));
  int ytop = u.is_y ? u.k - 2 : u.k - 1;
  for (int m = 1; m <= ytop; ++m) r.push_back(m_y(m));
  if (u.is_y) r.push_back(u);
  return r;
}

namespace detail {
// variables of M are p_0, p_1, ...; parse "p<i>"
inline std::optional<int> m_var_index(const std::string& name) {
  if (name.size() < 2 || name[0] != 'p') return std::nullopt;
  for (size_t i = 1; i < name.size(); ++i)
    if (!isdigit((unsigned char)name[i])) return std::nullopt;
  return std::stoi(name.substr(1));
}

// p_0 holds at {x_0, y_1}; p_n (n>=1) holds at up(x_{n-1}) u up(y_{n-1})
inline bool m_forces_var(ModelMPoint u, int n) {
  if (n == 0) return u == m_x(0) || u == m_y(1);
  if (!u.is_y) return u.k <= n - 1;
  return u.k >= 1 && u.k <= n - 1;
}
}  // namespace detail

inline bool model_M_eval(ModelMPoint pt, Formula phi) {
  std::map<std::pair<ModelMPoint, Formula>, bool> memo;
  std::function<bool(ModelMPoint, Formula)> go = [&](ModelMPoint u,
                                                     Formula f) -> bool {
    auto key = std::make_pair(u, f);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    bool r;
    switch (f.kind()) {
      case Conn::Var: {
        auto n = detail::m_var_index(f.name());
        if (!n)
          throw std::invalid_argument("model M has no variable " + f.name());
        r = detail::m_forces_var(u, *n);
        break;
      }
      case Conn::Bot: r = false; break;
      case Conn::And: r = go(u, f.left()) && go(u, f.right()); break;
      case Conn::Or: r = go(u, f.left()) || go(u, f.right()); break;
      case Conn::Impl: {
        r = true;
        for (auto v : model_M_upset(u))
          if (go(v, f.left()) && !go(v, f.right())) {
            r = false;
            break;
          }
      }
    }
    memo.emplace(key, r);
    return r;
  };
  return go(pt, phi);
}

// ---------------------------------------------------------------------------
// canonical classification in M of land-free formulas:
// Top, Bot, p_n, alpha_n, or beta_n (n >= 1);
// alpha_0 = p_0, beta_1 = p_0, beta_0 = Top are reported in the former classes

struct MClass {
  enum Kind { Top, Bot, P, Alpha, Beta } kind;
  int n = 0;

  bool operator==(const MClass& o) const { return kind == o.kind && n == o.n; }

  Formula formula() const {
    auto alpha = [](int m) {
      Formula a = Formula::var("p0");
      for (int i = 1; i <= m; ++i)
        a = Formula::imp(a, Formula::var("p" + std::to_string(i)));
      return a;
    };
    switch (kind) {
      case Top: {
        Formula p0 = Formula::var("p0");
        return Formula::imp(p0, p0);
      }
      case Bot: return Formula::bot();
      case P: return Formula::var("p" + std::to_string(n));
      case Alpha: return alpha(n);
      case Beta:
        return Formula::imp(alpha(n), Formula::var("p" + std::to_string(n)));
    }
    throw std::logic_error("unreachable");
  }

  std::string str() const {
    switch (kind) {
      case Top: return "T";
      case Bot: return "F";
      case P: return "p" + std::to_string(n);
      case Alpha: return "alpha_" + std::to_string(n);
      case Beta: return "beta_" + std::to_string(n);
    }
    throw std::logic_error("unreachable");
  }
};

inline MClass classify_in_M(Formula phi) {
  int maxv = -1;
  for (auto& v : vars_of(phi)) {
    auto n = detail::m_var_index(v);
    if (!n) throw std::invalid_argument("model M has no variable " + v);
    maxv = std::max(maxv, *n);
    (void)v;
  }
  {
    // reject conjunctions
    std::function<void(Formula)> scan = [&](Formula f) {
      if (f.is_and())
        throw std::invalid_argument("classify_in_M expects a land-free formula");
      if (f.is_imp() || f.is_or()) {
        scan(f.left());
        scan(f.right());
      }
    };
    scan(phi);
  }
  int K = maxv + 2;
  std::vector<ModelMPoint> pts;
  for (int m = 0; m <= K; ++m) pts.push_back(m_x(m));
  for (int m = 1; m <= K; ++m) pts.push_back(m_y(m));

  // semantic up-sets of the candidate classes
  auto cand_holds = [&](MClass c, ModelMPoint u) -> bool {
    switch (c.kind) {
      case MClass::Top: return true;
      case MClass::Bot: return false;
      case MClass::P: return detail::m_forces_var(u, c.n);
      case MClass::Alpha: return model_M_leq(m_y(c.n + 1), u);
      case MClass::Beta:
        return model_M_leq(m_y(c.n), u) || model_M_leq(m_y(c.n - 1), u);
    }
    throw std::logic_error("unreachable");
  };
  // classes reachable from p_0..p_maxv: alpha index <= maxv (needs p_n on the
  // right), beta index <= maxv+1
  std::vector<MClass> cands = {{MClass::Top, 0}, {MClass::Bot, 0}};
  for (int n = 0; n <= maxv; ++n) cands.push_back({MClass::P, n});
  for (int n = 1; n <= maxv; ++n) cands.push_back({MClass::Alpha, n});
  for (int n = 2; n <= maxv + 1; ++n) cands.push_back({MClass::Beta, n});

  std::vector<bool> val;
  for (auto u : pts) val.push_back(model_M_eval(u, phi));
  std::optional<MClass> hit;
  for (auto& c : cands) {
    bool all = true;
    for (size_t i = 0; i < pts.size(); ++i)
      if (cand_holds(c, pts[i]) != val[i]) {
        all = false;
        break;
      }
    if (all) {
      if (hit) throw std::logic_error("classify_in_M: ambiguous class");
      hit = c;
    }
  }
  if (!hit) throw std::logic_error("classify_in_M: no class matched");
  return *hit;
}

// ---------------------------------------------------------------------------
// formula forests of land-free formulas

struct ForestNode {
  Formula label;  // a variable or bot
  std::vector<ForestNode> kids;
};

struct FormulaForest {
  std::vector<ForestNode> trees;

  size_t node_count() const {
    std::function<size_t(const ForestNode&)> go = [&](const ForestNode& t) {
      size_t s = 1;
      for (auto& k : t.kids) s += go(k);
      return s;
    };
    size_t s = 0;
    for (auto& t : trees) s += go(t);
    return s;
  }
};

inline FormulaForest formula_forest(Formula phi) {
  switch (phi.kind()) {
    case Conn::Var:
    case Conn::Bot: return {{ForestNode{phi, {}}}};
    case Conn::Or: {
      FormulaForest a = formula_forest(phi.left());
      FormulaForest b = formula_forest(phi.right());
      for (auto& t : b.trees) a.trees.push_back(std::move(t));
      return a;
    }
    case Conn::Impl: {
      FormulaForest prem = formula_forest(phi.left());
      FormulaForest con = formula_forest(phi.right());
      for (auto& t : con.trees) {
        std::function<void(ForestNode&)> attach = [&](ForestNode& n) {
          for (auto& p : prem.trees) n.kids.push_back(p);
        };
        attach(t);
      }
      return con;
    }
    case Conn::And:
      throw std::invalid_argument("formula_forest expects a land-free formula");
  }
  throw std::logic_error("unreachable");
}

// all label sequences from a node up to its root (node first, root last)
inline std::vector<std::vector<Formula>> paths(const FormulaForest& T) {
  std::vector<std::vector<Formula>> out;
  std::vector<Formula> stack;  // root ... current
  std::function<void(const ForestNode&)> go = [&](const ForestNode& n) {
    stack.push_back(n.label);
    out.emplace_back(stack.rbegin(), stack.rend());
    for (auto& k : n.kids) go(k);
    stack.pop_back();
  };
  for (auto& t : T.trees) go(t);
  return out;
}

// unnested occurrences: U(atom) = {atom}; U(a->b) = {a->b} u U(b);
// U(a|b) = {a|b} u U(a) u U(b)
inline std::set<Formula> unnested(Formula phi) {
  std::set<Formula> out;
  std::function<void(Formula)> go = [&](Formula f) {
    out.insert(f);
    switch (f.kind()) {
      case Conn::Impl: go(f.right()); break;
      case Conn::Or:
        go(f.left());
        go(f.right());
        break;
      case Conn::And:
        throw std::invalid_argument("unnested expects a land-free formula");
      default: break;
    }
  };
  go(phi);
  return out;
}

// ---------------------------------------------------------------------------
// unique irredundant monotone CNF: clauses are the minimal variable sets C
// such that the assignment making exactly C false falsifies phi

inline std::set<std::set<std::string>> monotone_cnf(Formula phi) {
  if (!is_monotone(phi))
    throw std::invalid_argument("monotone_cnf expects a monotone formula");
  auto vset = vars_of(phi);
  std::vector<std::string> vars(vset.begin(), vset.end());
  if (vars.size() > 20) throw std::invalid_argument("too many variables");
  std::function<bool(Formula, uint32_t)> ev = [&](Formula f,
                                                  uint32_t mask) -> bool {
    switch (f.kind()) {
      case Conn::Var: {
        size_t i =
            std::find(vars.begin(), vars.end(), f.name()) - vars.begin();
        return mask >> i & 1;
      }
      case Conn::And: return ev(f.left(), mask) && ev(f.right(), mask);
      case Conn::Or: return ev(f.left(), mask) || ev(f.right(), mask);
      default: throw std::logic_error("non-monotone connective");
    }
  };
  uint32_t full = (uint32_t)((1u << vars.size()) - 1);
  std::vector<uint32_t> implicates;  // subsets C with phi(~C) false
  for (uint32_t c = 0; c <= full; ++c)
    if (!ev(phi, full & ~c)) implicates.push_back(c);
  std::set<std::set<std::string>> out;
  for (uint32_t c : implicates) {
    bool minimal = true;
    for (uint32_t d : implicates)
      if (d != c && (d & c) == d) {
        minimal = false;
        break;
      }
    if (!minimal) continue;
    std::set<std::string> clause;
    for (size_t i = 0; i < vars.size(); ++i)
      if (c >> i & 1) clause.insert(vars[i]);
    out.insert(std::move(clause));
  }
  return out;
}

// ---------------------------------------------------------------------------
// brute-force minimal equivalent formula in a fragment

struct BruteForceResult {
  std::optional<Formula> witness;  // smallest equivalent found
  bool exhausted = true;           // the whole size range was searched
  uint64_t tried = 0;
};

inline BruteForceResult brute_force_min_equivalent(
    Formula target, const Fragment& fr, const std::vector<std::string>& vars,
    int max_size, std::function<bool(Formula, Formula)> equiv = {},
    uint64_t budget = 2000000) {
  if (!equiv)
    equiv = [](Formula a, Formula b) { return equiv_ipc(a, b); };
  // classical prefilter: IPC-equivalence implies equal truth tables
  std::vector<std::string> tv(vars);
  for (auto& v : vars_of(target))
    if (std::find(tv.begin(), tv.end(), v) == tv.end()) tv.push_back(v);
  auto truth = [&](Formula f) -> std::vector<bool> {
    std::function<bool(Formula, uint32_t)> ev = [&](Formula g,
                                                    uint32_t m) -> bool {
      switch (g.kind()) {
        case Conn::Var: {
          size_t i = std::find(tv.begin(), tv.end(), g.name()) - tv.begin();
          return m >> i & 1;
        }
        case Conn::Bot: return false;
        case Conn::And: return ev(g.left(), m) && ev(g.right(), m);
        case Conn::Or: return ev(g.left(), m) || ev(g.right(), m);
        case Conn::Impl: return !ev(g.left(), m) || ev(g.right(), m);
      }
      return false;
    };
    std::vector<bool> t;
    for (uint32_t m = 0; m < (1u << tv.size()); ++m) t.push_back(ev(f, m));
    return t;
  };
  if (tv.size() > 16) throw std::invalid_argument("too many variables");
  std::vector<bool> want = truth(target);

  BruteForceResult res;
  std::map<int, std::vector<Formula>> by_size;
  {
    std::vector<Formula>& atoms = by_size[1];
    for (auto& v : vars) atoms.push_back(Formula::var(v));
    if (fr.has_bot) atoms.push_back(Formula::bot());
  }
  std::vector<Conn> ops;
  ops.push_back(Conn::Impl);
  if (fr.has_and) ops.push_back(Conn::And);
  if (fr.has_or) ops.push_back(Conn::Or);

  for (int s = 1; s <= max_size; ++s) {
    if (s >= 3) {
      auto& bucket = by_size[s];
      for (int sl = 1; sl <= s - 2; ++sl) {
        int sr = s - 1 - sl;
        for (auto& a : by_size[sl])
          for (auto& b : by_size[sr])
            for (Conn op : ops) {
              if (res.tried >= budget) {
                res.exhausted = false;
                return res;
              }
              bucket.push_back(op == Conn::Impl  ? Formula::imp(a, b)
                               : op == Conn::And ? Formula::land(a, b)
                                                 : Formula::lor(a, b));
            }
      }
    }
    for (auto& f : by_size[s]) {
      ++res.tried;
      if (res.tried >= budget) {
        res.exhausted = false;
        return res;
      }
      if (truth(f) != want) continue;
      if (equiv(f, target)) {
        res.witness = f;
        return res;
      }
    }
  }
  return res;
}

}  // namespace iptk
