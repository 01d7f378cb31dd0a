#pragma once
// Finite Hilbert/BCK-style algebras: validity evaluation, characteristic
// formulas, filters/quotients, and the shipped fragment counterexamples.

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "formula.hpp"

namespace iptk {

class AlgebraError : public std::runtime_error {
 public:
  explicit AlgebraError(const std::string& m) : std::runtime_error(m) {}
};

struct FiniteAlgebra {
  std::vector<std::string> elems;  // index = element id
  int one = -1;
  std::vector<std::vector<int>> imp;                 // required
  std::optional<std::vector<std::vector<int>>> meet;  // optional
  std::optional<std::vector<std::vector<int>>> join;  // optional
  std::optional<int> bot;

  size_t size() const { return elems.size(); }
  int idx(const std::string& name) const {
    for (size_t i = 0; i < elems.size(); ++i)
      if (elems[i] == name) return (int)i;
    throw AlgebraError("unknown element " + name);
  }
  bool le(int a, int b) const { return imp[a][b] == one; }

  // Hilbert-algebra laws and coherence of the optional operations
  void validate_laws() const {
    size_t n = size();
    if (one < 0 || (size_t)one >= n) throw AlgebraError("bad unit");
    if (imp.size() != n) throw AlgebraError("imp table dimension");
    for (size_t a = 0; a < n; ++a) {
      if (imp[a].size() != n) throw AlgebraError("imp table dimension");
      if (imp[a][a] != one) throw AlgebraError("a->a != 1");
      if (imp[one][a] != (int)a) throw AlgebraError("1->a != a");
    }
    // order: a<=b iff a->b=1 must be a partial order
    for (size_t a = 0; a < n; ++a)
      for (size_t b = 0; b < n; ++b) {
        if (a != b && le(a, b) && le(b, a)) throw AlgebraError("order not antisymmetric");
        for (size_t c = 0; c < n; ++c)
          if (le(a, b) && le(b, c) && !le(a, c))
            throw AlgebraError("order not transitive");
      }
    if (meet) {
      for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b) {
          int m = (*meet)[a][b];
          if (!le(m, a) || !le(m, b)) throw AlgebraError("meet not a lower bound");
          for (size_t c = 0; c < n; ++c)
            if (le(c, a) && le(c, b) && !le(c, m))
              throw AlgebraError("meet not greatest lower bound");
        }
    }
    if (join) {
      for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b) {
          int j = (*join)[a][b];
          if (!le(a, j) || !le(b, j)) throw AlgebraError("join not an upper bound");
          for (size_t c = 0; c < n; ++c)
            if (le(a, c) && le(b, c) && !le(j, c))
              throw AlgebraError("join not least upper bound");
        }
    }
    if (bot) {
      for (size_t a = 0; a < n; ++a)
        if (!le(*bot, a)) throw AlgebraError("bot not least");
    }
  }

  int eval(Formula f, const std::map<std::string, int>& v) const {
    switch (f.kind()) {
      case Conn::Var: {
        auto it = v.find(f.name());
        if (it == v.end()) throw AlgebraError("unassigned variable " + f.name());
        return it->second;
      }
      case Conn::Bot:
        if (!bot) throw AlgebraError("algebra has no bottom");
        return *bot;
      case Conn::Impl: return imp[eval(f.left(), v)][eval(f.right(), v)];
      case Conn::And:
        if (!meet) throw AlgebraError("algebra has no meet");
        return (*meet)[eval(f.left(), v)][eval(f.right(), v)];
      case Conn::Or:
        if (!join) throw AlgebraError("algebra has no join");
        return (*join)[eval(f.left(), v)][eval(f.right(), v)];
    }
    throw AlgebraError("unreachable");
  }

  // largest element strictly below 1, if any (makes the algebra sdi)
  std::optional<int> opremum() const {
    for (size_t o = 0; o < size(); ++o) {
      if ((int)o == one) continue;
      bool ok = true;
      for (size_t a = 0; a < size(); ++a)
        if ((int)a != one && !le(a, o)) ok = false;
      if (ok) return (int)o;
    }
    return std::nullopt;
  }
};

// brute force over all |A|^k valuations
inline bool validates(const FiniteAlgebra& A, Formula f) {
  auto vars = vars_of(f);
  std::vector<std::string> vs(vars.begin(), vars.end());
  if (vs.size() > 6) throw AlgebraError("too many variables for brute force");
  std::map<std::string, int> v;
  std::vector<size_t> c(vs.size(), 0);
  for (;;) {
    for (size_t i = 0; i < vs.size(); ++i) v[vs[i]] = (int)c[i];
    if (A.eval(f, v) != A.one) return false;
    size_t i = 0;
    for (; i < vs.size(); ++i) {
      if (++c[i] < A.size()) break;
      c[i] = 0;
    }
    if (i == vs.size() || vs.empty()) break;
  }
  return true;
}

struct CharacteristicFormula {
  Formula formula;
  std::map<std::string, int> canonical_valuation;  // p_a -> a
};

inline std::string elem_var(const FiniteAlgebra& A, int a) {
  return "p_" + A.elems[a];
}

// φ_A = Ξ_A -> p_o with Ξ_A = {(p_a->p_b)->p_{a->b}, p_{a->b}->(p_a->p_b)}
inline CharacteristicFormula characteristic_formula(const FiniteAlgebra& A) {
  auto o = A.opremum();
  if (!o) throw AlgebraError("algebra is not subdirectly irreducible (no opremum)");
  std::vector<Formula> xi;
  for (size_t a = 0; a < A.size(); ++a)
    for (size_t b = 0; b < A.size(); ++b) {
      Formula pa = Formula::var(elem_var(A, (int)a));
      Formula pb = Formula::var(elem_var(A, (int)b));
      Formula pab = Formula::var(elem_var(A, A.imp[a][b]));
      xi.push_back(Formula::imp(Formula::imp(pa, pb), pab));
      xi.push_back(Formula::imp(pab, Formula::imp(pa, pb)));
    }
  CharacteristicFormula cf;
  cf.formula = join(xi, Formula::var(elem_var(A, *o)));
  for (size_t a = 0; a < A.size(); ++a)
    cf.canonical_valuation[elem_var(A, (int)a)] = (int)a;
  return cf;
}

// quotient by the principal filter a↑ : x ~ y iff x->y and y->x are in a↑
inline FiniteAlgebra quotient_by_principal_filter(const FiniteAlgebra& A, int a) {
  auto in_filter = [&](int x) { return A.le(a, x); };
  size_t n = A.size();
  std::vector<int> cls(n, -1);
  std::vector<int> reps;
  for (size_t x = 0; x < n; ++x) {
    for (size_t r = 0; r < reps.size(); ++r) {
      int y = reps[r];
      if (in_filter(A.imp[x][y]) && in_filter(A.imp[y][x])) {
        cls[x] = (int)r;
        break;
      }
    }
    if (cls[x] < 0) {
      cls[x] = (int)reps.size();
      reps.push_back((int)x);
    }
  }
  FiniteAlgebra Q;
  for (int r : reps) Q.elems.push_back(A.elems[r]);
  Q.one = cls[A.one];
  Q.imp.assign(reps.size(), std::vector<int>(reps.size(), 0));
  for (size_t i = 0; i < reps.size(); ++i)
    for (size_t j = 0; j < reps.size(); ++j)
      Q.imp[i][j] = cls[A.imp[reps[i]][reps[j]]];
  // well-definedness: all members of a class must agree up to the congruence
  for (size_t x = 0; x < n; ++x)
    for (size_t y = 0; y < n; ++y)
      if (cls[A.imp[x][y]] != Q.imp[cls[x]][cls[y]])
        throw AlgebraError("filter congruence not compatible with ->");
  if (A.bot) Q.bot = cls[*A.bot];
  return Q;
}

// ---------------------------------------------------------------------------
// Heyting algebras from posets (for the parent algebras B) and subalgebras

// build a Heyting algebra from cover relations; meet/join/imp derived
inline FiniteAlgebra heyting_from_covers(
    const std::vector<std::string>& elems,
    const std::vector<std::pair<std::string, std::string>>& covers,
    const std::string& bot, const std::string& top) {
  FiniteAlgebra A;
  A.elems = elems;
  size_t n = elems.size();
  auto id = [&](const std::string& s) { return A.idx(s); };
  std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
  for (size_t i = 0; i < n; ++i) le[i][i] = true;
  for (auto& [x, y] : covers) le[id(x)][id(y)] = true;
  for (size_t k = 0; k < n; ++k)
    for (size_t i = 0; i < n; ++i)
      if (le[i][k])
        for (size_t j = 0; j < n; ++j)
          if (le[k][j]) le[i][j] = true;
  A.one = id(top);
  A.bot = id(bot);
  auto glb = [&](int x, int y) -> int {
    int best = -1;
    for (size_t c = 0; c < n; ++c)
      if (le[c][x] && le[c][y] && (best < 0 || le[best][c])) best = (int)c;
    // verify it is really the glb
    for (size_t c = 0; c < n; ++c)
      if (le[c][x] && le[c][y] && !le[c][best])
        throw AlgebraError("not a meet-semilattice");
    return best;
  };
  auto lub = [&](int x, int y) -> int {
    int best = -1;
    for (size_t c = 0; c < n; ++c)
      if (le[x][c] && le[y][c] && (best < 0 || le[c][best])) best = (int)c;
    for (size_t c = 0; c < n; ++c)
      if (le[x][c] && le[y][c] && !le[best][c])
        throw AlgebraError("not a join-semilattice");
    return best;
  };
  A.meet.emplace(n, std::vector<int>(n, 0));
  A.join.emplace(n, std::vector<int>(n, 0));
  A.imp.assign(n, std::vector<int>(n, 0));
  for (size_t x = 0; x < n; ++x)
    for (size_t y = 0; y < n; ++y) {
      (*A.meet)[x][y] = glb((int)x, (int)y);
      (*A.join)[x][y] = lub((int)x, (int)y);
    }
  for (size_t x = 0; x < n; ++x)
    for (size_t y = 0; y < n; ++y) {
      // relative pseudocomplement: max {c : c∧x <= y}
      int best = -1;
      for (size_t c = 0; c < n; ++c)
        if (le[(*A.meet)[c][x]][y] && (best < 0 || le[best][c])) best = (int)c;
      for (size_t c = 0; c < n; ++c)
        if (le[(*A.meet)[c][x]][y] && !le[c][best])
          throw AlgebraError("not a Heyting algebra");
      A.imp[x][y] = best;
    }
  A.validate_laws();
  return A;
}

// subalgebra on a subset of elements, keeping only the requested operations;
// throws if the subset is not closed under a kept operation
inline FiniteAlgebra subalgebra(const FiniteAlgebra& B,
                                const std::set<std::string>& keep,
                                bool with_meet, bool with_join, bool with_bot) {
  FiniteAlgebra A;
  std::vector<int> old_idx;
  for (size_t i = 0; i < B.size(); ++i)
    if (keep.count(B.elems[i])) {
      A.elems.push_back(B.elems[i]);
      old_idx.push_back((int)i);
    }
  auto new_of = [&](int old) -> int {
    for (size_t i = 0; i < old_idx.size(); ++i)
      if (old_idx[i] == old) return (int)i;
    throw AlgebraError("subset not closed under operation");
  };
  A.one = new_of(B.one);
  size_t n = A.elems.size();
  A.imp.assign(n, std::vector<int>(n, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      A.imp[i][j] = new_of(B.imp[old_idx[i]][old_idx[j]]);
  if (with_meet) {
    if (!B.meet) throw AlgebraError("parent has no meet");
    A.meet.emplace(n, std::vector<int>(n, 0));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        (*A.meet)[i][j] = new_of((*B.meet)[old_idx[i]][old_idx[j]]);
  }
  if (with_join) {
    if (!B.join) throw AlgebraError("parent has no join");
    A.join.emplace(n, std::vector<int>(n, 0));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        (*A.join)[i][j] = new_of((*B.join)[old_idx[i]][old_idx[j]]);
  }
  if (with_bot) {
    if (!B.bot) throw AlgebraError("parent has no bottom");
    A.bot = new_of(*B.bot);
  }
  A.validate_laws();
  return A;
}

// ---------------------------------------------------------------------------
// the three shipped counterexample algebras

struct ShippedAlgebra {
  std::string name;
  FiniteAlgebra parent;   // the Heyting algebra B
  FiniteAlgebra algebra;  // the fragment subalgebra A
  std::string fragment;   // which operations A supports
};

inline std::vector<ShippedAlgebra> shipped_counterexamples() {
  std::vector<ShippedAlgebra> out;
  {
    // (i) bot < c < b < o < 1, bot < d < a < o, d < b ; A = B \ {d}
    auto B = heyting_from_covers(
        {"1", "o", "a", "b", "c", "d", "bot"},
        {{"bot", "c"}, {"bot", "d"}, {"c", "b"}, {"d", "b"}, {"d", "a"},
         {"b", "o"}, {"a", "o"}, {"o", "1"}},
        "bot", "1");
    auto A = subalgebra(B, {"1", "o", "a", "b", "c", "bot"}, false, true, true);
    out.push_back({"frag-i", B, A, "->,|,F"});
  }
  {
    // (ii) bot < {a,b} < o < 1 ; A = B \ {bot}
    auto B = heyting_from_covers(
        {"1", "o", "a", "b", "bot"},
        {{"bot", "a"}, {"bot", "b"}, {"a", "o"}, {"b", "o"}, {"o", "1"}},
        "bot", "1");
    auto A = subalgebra(B, {"1", "o", "a", "b"}, false, true, false);
    out.push_back({"frag-ii", B, A, "->,|"});
  }
  {
    // (iii) bot < {c,d} < m < {a,b} < o < 1 ; A = B \ {m}
    auto B = heyting_from_covers(
        {"1", "o", "a", "b", "m", "c", "d", "bot"},
        {{"bot", "c"}, {"bot", "d"}, {"c", "m"}, {"d", "m"}, {"m", "a"},
         {"m", "b"}, {"a", "o"}, {"b", "o"}, {"o", "1"}},
        "bot", "1");
    auto A = subalgebra(B, {"1", "o", "a", "b", "c", "d", "bot"}, false, false, true);
    out.push_back({"frag-iii", B, A, "->,F"});
  }
  return out;
}

}  // namespace iptk
