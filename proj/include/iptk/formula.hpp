#pragma once
// Formula AST for fragments of intuitionistic propositional logic.
// Nodes are interned globally, so equality is pointer equality and
// structural sharing is free.

#include <cctype>
#include <cstdint>
#include <cstring>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace iptk {

enum class Conn : uint8_t { Var, Bot, Impl, And, Or };

class Formula;

namespace detail {
struct Node {
  Conn k;
  std::string name;          // Var only
  const Node* l = nullptr;   // binary only
  const Node* r = nullptr;
  uint64_t id = 0;           // creation order, usable as a total order
  uint32_t size = 1;         // Polish symbol count
};
}  // namespace detail

class Formula {
 public:
  Formula() : n_(nullptr) {}

  static Formula var(const std::string& name);
  static Formula bot();
  static Formula imp(Formula a, Formula b) { return mk(Conn::Impl, a, b); }
  static Formula land(Formula a, Formula b) { return mk(Conn::And, a, b); }
  static Formula lor(Formula a, Formula b) { return mk(Conn::Or, a, b); }
  static Formula neg(Formula a) { return imp(a, bot()); }

  bool null() const { return n_ == nullptr; }
  Conn kind() const { return n_->k; }
  bool is_var() const { return n_->k == Conn::Var; }
  bool is_bot() const { return n_->k == Conn::Bot; }
  bool is_imp() const { return n_->k == Conn::Impl; }
  bool is_and() const { return n_->k == Conn::And; }
  bool is_or() const { return n_->k == Conn::Or; }
  bool is_atom() const { return is_var() || is_bot(); }
  const std::string& name() const { return n_->name; }
  Formula left() const { return Formula(n_->l); }
  Formula right() const { return Formula(n_->r); }
  uint64_t id() const { return n_->id; }
  uint32_t size_polish() const { return n_->size; }

  bool operator==(const Formula& o) const { return n_ == o.n_; }
  bool operator!=(const Formula& o) const { return n_ != o.n_; }
  bool operator<(const Formula& o) const { return n_->id < o.n_->id; }

  const detail::Node* raw() const { return n_; }

 private:
  explicit Formula(const detail::Node* n) : n_(n) {}
  static Formula mk(Conn k, Formula a, Formula b);
  const detail::Node* n_;
  friend struct FormulaHash;
  friend class Interner;
};

struct FormulaHash {
  size_t operator()(const Formula& f) const {
    return std::hash<const void*>()(f.n_);
  }
};

namespace detail {
struct Key {
  Conn k;
  std::string name;
  const Node* l;
  const Node* r;
  bool operator==(const Key& o) const {
    return k == o.k && name == o.name && l == o.l && r == o.r;
  }
};
struct KeyHash {
  size_t operator()(const Key& x) const {
    size_t h = std::hash<int>()((int)x.k);
    h = h * 1000003 + std::hash<std::string>()(x.name);
    h = h * 1000003 + std::hash<const void*>()(x.l);
    h = h * 1000003 + std::hash<const void*>()(x.r);
    return h;
  }
};
}  // namespace detail

class Interner {
 public:
  static Interner& inst() {
    static Interner g;
    return g;
  }
  const detail::Node* intern(Conn k, const std::string& name,
                             const detail::Node* l, const detail::Node* r) {
    std::lock_guard<std::mutex> lk(mu_);
    detail::Key key{k, name, l, r};
    auto it = table_.find(key);
    if (it != table_.end()) return it->second;
    auto node = std::make_unique<detail::Node>();
    node->k = k;
    node->name = name;
    node->l = l;
    node->r = r;
    node->id = next_id_++;
    node->size = 1 + (l ? l->size : 0) + (r ? r->size : 0);
    const detail::Node* p = node.get();
    store_.push_back(std::move(node));
    table_.emplace(key, p);
    return p;
  }

 private:
  std::mutex mu_;
  uint64_t next_id_ = 1;
  std::unordered_map<detail::Key, const detail::Node*, detail::KeyHash> table_;
  std::vector<std::unique_ptr<detail::Node>> store_;
};

inline Formula Formula::var(const std::string& name) {
  if (name.empty()) throw std::invalid_argument("empty variable name");
  return Formula(Interner::inst().intern(Conn::Var, name, nullptr, nullptr));
}
inline Formula Formula::bot() {
  return Formula(Interner::inst().intern(Conn::Bot, "", nullptr, nullptr));
}
inline Formula Formula::mk(Conn k, Formula a, Formula b) {
  if (a.null() || b.null()) throw std::invalid_argument("null subformula");
  return Formula(Interner::inst().intern(k, "", a.n_, b.n_));
}

// ---------------------------------------------------------------------------
// Fragment

struct Fragment {
  bool has_and = true, has_or = true, has_bot = true;  // -> always present
  static Fragment full() { return {true, true, true}; }
  static Fragment imp_only() { return {false, false, false}; }
  static Fragment imp_bot() { return {false, false, true}; }
  static Fragment imp_and() { return {true, false, false}; }
  static Fragment imp_or() { return {false, true, false}; }
  static Fragment positive() { return {true, true, false}; }
  bool allows(Conn c) const {
    switch (c) {
      case Conn::And: return has_and;
      case Conn::Or: return has_or;
      case Conn::Bot: return has_bot;
      default: return true;
    }
  }
  bool allows(Formula f) const;
  std::string str() const {
    std::string s = "->";
    if (has_and) s += ",&";
    if (has_or) s += ",|";
    if (has_bot) s += ",F";
    return s;
  }
  static Fragment parse(const std::string& s);
  bool operator==(const Fragment& o) const {
    return has_and == o.has_and && has_or == o.has_or && has_bot == o.has_bot;
  }
};

inline bool Fragment::allows(Formula f) const {
  if (f.is_atom()) return !f.is_bot() || has_bot;
  return allows(f.kind()) && allows(f.left()) && allows(f.right());
}

inline Fragment Fragment::parse(const std::string& s) {
  Fragment fr{false, false, false};
  std::string tok;
  std::stringstream ss(s);
  while (std::getline(ss, tok, ',')) {
    if (tok == "->" || tok.empty()) continue;
    else if (tok == "&") fr.has_and = true;
    else if (tok == "|") fr.has_or = true;
    else if (tok == "F") fr.has_bot = true;
    else throw std::invalid_argument("bad fragment token: " + tok);
  }
  return fr;
}

// top(fragment): (F->F) when the fragment has bottom, else (x->x) for the
// reserved variable "x".
inline Formula top(const Fragment& fr) {
  if (fr.has_bot) return Formula::imp(Formula::bot(), Formula::bot());
  Formula x = Formula::var("x");
  return Formula::imp(x, x);
}

// ---------------------------------------------------------------------------
// Parser / printer

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)),
        pos(pos) {}
  size_t pos;
};

namespace detail {
class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}
  Formula run() {
    Formula f = formula();
    skip_ws();
    if (i_ < s_.size()) throw ParseError("trailing input", i_);
    return f;
  }

 private:
  Formula formula() {
    Formula d = disj();
    skip_ws();
    if (try_arrow()) return Formula::imp(d, formula());
    return d;
  }
  Formula disj() {
    Formula c = conj();
    for (;;) {
      skip_ws();
      if (try_tok("|") || try_utf8("∨")) c = Formula::lor(c, conj());
      else return c;
    }
  }
  Formula conj() {
    Formula a = atom();
    for (;;) {
      skip_ws();
      if (try_tok("&") || try_utf8("∧")) a = Formula::land(a, atom());
      else return a;
    }
  }
  Formula atom() {
    skip_ws();
    if (i_ >= s_.size()) throw ParseError("unexpected end of input", i_);
    if (s_[i_] == '(') {
      ++i_;
      Formula f = formula();
      skip_ws();
      if (i_ >= s_.size() || s_[i_] != ')')
        throw ParseError("expected ')'", i_);
      ++i_;
      return f;
    }
    if (try_utf8("⊥")) return Formula::bot();
    if (isalpha((unsigned char)s_[i_]) || s_[i_] == '_') {
      size_t j = i_;
      while (j < s_.size() &&
             (isalnum((unsigned char)s_[j]) || s_[j] == '_' || s_[j] == '\''))
        ++j;
      std::string name = s_.substr(i_, j - i_);
      i_ = j;
      if (name == "F") return Formula::bot();
      return Formula::var(name);
    }
    throw ParseError("unexpected character", i_);
  }
  bool try_arrow() { return try_tok("->") || try_utf8("→"); }
  bool try_tok(const char* t) {
    size_t n = strlen(t);
    if (s_.compare(i_, n, t) == 0) {
      i_ += n;
      return true;
    }
    return false;
  }
  bool try_utf8(const char* t) { return try_tok(t); }
  void skip_ws() {
    while (i_ < s_.size() && isspace((unsigned char)s_[i_])) ++i_;
  }
  const std::string& s_;
  size_t i_ = 0;
};
}  // namespace detail

inline Formula parse(const std::string& text) {
  return detail::Parser(text).run();
}

// print: canonical minimal bracketing; parse(print(f)) == f.
// Precedence: -> (lowest, right assoc) < | < & ; atoms highest.
namespace detail {
inline void print_rec(Formula f, int parent_prec, std::string& out) {
  // prec: -> = 0, | = 1, & = 2, atom = 3
  switch (f.kind()) {
    case Conn::Var: out += f.name(); return;
    case Conn::Bot: out += 'F'; return;
    case Conn::Impl: {
      bool par = parent_prec > 0;
      if (par) out += '(';
      print_rec(f.left(), 1, out);  // left side of -> needs prec >= |
      out += " -> ";
      print_rec(f.right(), 0, out);  // right assoc
      if (par) out += ')';
      return;
    }
    case Conn::Or: {
      bool par = parent_prec > 1;
      if (par) out += '(';
      print_rec(f.left(), 1, out);  // left assoc: allow same level on left
      out += " | ";
      print_rec(f.right(), 2, out);
      if (par) out += ')';
      return;
    }
    case Conn::And: {
      bool par = parent_prec > 2;
      if (par) out += '(';
      print_rec(f.left(), 2, out);
      out += " & ";
      print_rec(f.right(), 3, out);
      if (par) out += ')';
      return;
    }
  }
}
}  // namespace detail

inline std::string print(Formula f) {
  std::string out;
  detail::print_rec(f, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Substitution

struct Substitution {
  std::map<std::string, Formula> map;
  bool empty() const { return map.empty(); }
  void set(const std::string& v, Formula f) { map[v] = f; }
  std::optional<Formula> get(const std::string& v) const {
    auto it = map.find(v);
    if (it == map.end()) return std::nullopt;
    return it->second;
  }
  bool operator==(const Substitution& o) const { return map == o.map; }
};

inline Formula substitute(const Substitution& s, Formula f) {
  if (s.empty()) return f;
  std::unordered_map<Formula, Formula, FormulaHash> memo;
  std::function<Formula(Formula)> go = [&](Formula g) -> Formula {
    if (g.is_bot()) return g;
    if (g.is_var()) {
      auto r = s.get(g.name());
      return r ? *r : g;
    }
    auto it = memo.find(g);
    if (it != memo.end()) return it->second;
    Formula a = go(g.left()), b = go(g.right());
    Formula res = (a == g.left() && b == g.right())
                      ? g
                      : (g.is_imp() ? Formula::imp(a, b)
                         : g.is_and() ? Formula::land(a, b)
                                      : Formula::lor(a, b));
    memo.emplace(g, res);
    return res;
  };
  return go(f);
}

// compose: apply (s_outer after s_inner), i.e. substitute(compose, f) ==
// substitute(s_outer, substitute(s_inner, f))
inline Substitution compose(const Substitution& outer,
                            const Substitution& inner) {
  Substitution r;
  for (auto& [v, f] : inner.map) r.set(v, substitute(outer, f));
  for (auto& [v, f] : outer.map)
    if (!inner.get(v)) r.set(v, f);
  return r;
}

// ---------------------------------------------------------------------------
// Heads, variables, measures

// φ = Γ→ξ with ξ not an implication.
inline std::pair<std::vector<Formula>, Formula> head(Formula f) {
  std::vector<Formula> prem;
  while (f.is_imp()) {
    prem.push_back(f.left());
    f = f.right();
  }
  return {prem, f};
}

// join(Γ, ξ) = Γ→ξ
inline Formula join(const std::vector<Formula>& prem, Formula h) {
  Formula f = h;
  for (auto it = prem.rbegin(); it != prem.rend(); ++it)
    f = Formula::imp(*it, f);
  return f;
}

inline void collect_vars(Formula f, std::set<std::string>& out) {
  if (f.is_var()) out.insert(f.name());
  else if (!f.is_bot()) {
    collect_vars(f.left(), out);
    collect_vars(f.right(), out);
  }
}
inline std::set<std::string> vars_of(Formula f) {
  std::set<std::string> s;
  collect_vars(f, s);
  return s;
}
inline bool contains_var(Formula f, const std::string& v) {
  if (f.is_var()) return f.name() == v;
  if (f.is_bot()) return false;
  return contains_var(f.left(), v) || contains_var(f.right(), v);
}
inline bool contains_conn(Formula f, Conn c) {
  if (f.kind() == c) return true;
  if (f.is_atom()) return false;
  return contains_conn(f.left(), c) || contains_conn(f.right(), c);
}
inline bool contains_sub(Formula f, Formula sub) {
  if (f == sub) return true;
  if (f.is_atom()) return false;
  return contains_sub(f.left(), sub) || contains_sub(f.right(), sub);
}
inline bool is_implicational(Formula f) {
  if (f.is_var()) return true;
  if (f.is_imp()) return is_implicational(f.left()) && is_implicational(f.right());
  return false;
}
// positive: no occurrence of ⊥
inline bool is_positive(Formula f) { return !contains_conn(f, Conn::Bot); }
// monotone: built from ∧,∨,⊥,⊤(not a node, so just ∧,∨,⊥) and variables
inline bool is_monotone(Formula f) {
  if (f.is_atom()) return true;
  if (f.is_imp()) return false;
  return is_monotone(f.left()) && is_monotone(f.right());
}
inline bool is_strict_monotone(Formula f) {
  if (f.is_var()) return true;
  if (f.is_bot() || f.is_imp()) return false;
  return is_strict_monotone(f.left()) && is_strict_monotone(f.right());
}

inline uint32_t size_polish(Formula f) { return f.size_polish(); }

// left-nesting implication depth
inline uint32_t limd(Formula f) {
  if (f.is_atom()) return 0;
  if (f.is_imp()) return std::max(limd(f.left()) + 1, limd(f.right()));
  return std::max(limd(f.left()), limd(f.right()));
}

// ---------------------------------------------------------------------------
// Occurrences and polarity

struct OccurrencePath {
  std::vector<int> steps;  // 0 = left, 1 = right
  bool operator==(const OccurrencePath& o) const { return steps == o.steps; }
  bool operator<(const OccurrencePath& o) const { return steps < o.steps; }
  std::string str() const {
    std::string s;
    for (int d : steps) s += (d ? 'R' : 'L');
    return s.empty() ? "." : s;
  }
};

inline Formula at_path(Formula f, const OccurrencePath& p) {
  for (int d : p.steps) {
    if (f.is_atom()) throw std::invalid_argument("bad path");
    f = d ? f.right() : f.left();
  }
  return f;
}

// replace the subformula at path p by g
inline Formula replace_at(Formula f, const OccurrencePath& p, Formula g,
                          size_t i = 0) {
  if (i == p.steps.size()) return g;
  if (p.steps[i]) {
    return f.is_imp()   ? Formula::imp(f.left(), replace_at(f.right(), p, g, i + 1))
           : f.is_and() ? Formula::land(f.left(), replace_at(f.right(), p, g, i + 1))
                        : Formula::lor(f.left(), replace_at(f.right(), p, g, i + 1));
  }
  return f.is_imp()   ? Formula::imp(replace_at(f.left(), p, g, i + 1), f.right())
         : f.is_and() ? Formula::land(replace_at(f.left(), p, g, i + 1), f.right())
                      : Formula::lor(replace_at(f.left(), p, g, i + 1), f.right());
}

struct Occurrence {
  OccurrencePath path;
  bool positive;
  Formula sub;
};

// every node of φ with its polarity (antecedent steps flip)
inline std::vector<Occurrence> polarity_map(Formula f) {
  std::vector<Occurrence> out;
  std::function<void(Formula, OccurrencePath&, bool)> go =
      [&](Formula g, OccurrencePath& p, bool pos) {
        out.push_back({p, pos, g});
        if (g.is_atom()) return;
        p.steps.push_back(0);
        go(g.left(), p, g.is_imp() ? !pos : pos);
        p.steps.back() = 1;
        go(g.right(), p, pos);
        p.steps.pop_back();
      };
  OccurrencePath p;
  go(f, p, true);
  return out;
}

// essential disjunction classifier.
// An occurrence of ψ∨χ is inessential iff
//  (a) it is positive, or
//  (b) it lies inside some subformula α→⊥ (inside α), or
//  (c) walking up, only ∧/∨ nodes separate it from an antecedent child of
//      an implication (j=0 allowed: the disjunction is itself the antecedent).
inline std::vector<OccurrencePath> essential_disjunctions(Formula f) {
  std::vector<OccurrencePath> out;
  struct Frame {
    Formula node;
    int child;  // which child we descended into
  };
  std::vector<Frame> stack;
  std::function<void(Formula, OccurrencePath&, bool)> go =
      [&](Formula g, OccurrencePath& p, bool pos) {
        if (g.is_or() && !pos) {
          // clause (b): inside α of some α→⊥ above us
          bool in_neg = false;
          for (size_t i = 0; i < stack.size(); ++i) {
            if (stack[i].node.is_imp() && stack[i].child == 0 &&
                stack[i].node.right().is_bot()) {
              in_neg = true;
              break;
            }
          }
          // clause (c): walk up through ∧/∨ only until an antecedent edge
          bool skeleton = false;
          for (size_t i = stack.size(); i-- > 0;) {
            const Frame& fr = stack[i];
            if (fr.node.is_and() || fr.node.is_or()) continue;
            if (fr.node.is_imp() && fr.child == 0) skeleton = true;
            break;
          }
          if (!in_neg && !skeleton) out.push_back(p);
        }
        if (g.is_atom()) return;
        stack.push_back({g, 0});
        p.steps.push_back(0);
        go(g.left(), p, g.is_imp() ? !pos : pos);
        stack.back().child = 1;
        p.steps.back() = 1;
        go(g.right(), p, pos);
        p.steps.pop_back();
        stack.pop_back();
      };
  OccurrencePath p;
  go(f, p, true);
  return out;
}

// ---------------------------------------------------------------------------
// ∧-free decomposition: φ is IPC-equivalent to the conjunction of the result.
inline std::vector<Formula> conj_free_decompose(Formula f) {
  if (f.is_atom()) return {f};
  if (f.is_and()) {
    auto a = conj_free_decompose(f.left());
    auto b = conj_free_decompose(f.right());
    a.insert(a.end(), b.begin(), b.end());
    return a;
  }
  if (f.is_or()) {
    auto a = conj_free_decompose(f.left());
    auto b = conj_free_decompose(f.right());
    std::vector<Formula> out;
    for (auto& x : a)
      for (auto& y : b) out.push_back(Formula::lor(x, y));
    return out;
  }
  // implication: (⋀φ_i → ⋀ψ_j) ≡ ⋀_j (φ_0→…→φ_{n-1}→ψ_j)
  auto ant = conj_free_decompose(f.left());
  auto con = conj_free_decompose(f.right());
  std::vector<Formula> out;
  for (auto& y : con) out.push_back(join(ant, y));
  return out;
}

// ---------------------------------------------------------------------------
// Fresh variable generation: "_t<counter>" within a per-call namespace.

class FreshGen {
 public:
  explicit FreshGen(const std::set<std::string>& avoid) {
    for (auto& v : avoid)
      if (v.rfind("_t", 0) == 0)
        throw std::invalid_argument("input variable collides with fresh namespace: " + v);
  }
  explicit FreshGen(Formula f) : FreshGen(vars_of(f)) {}
  FreshGen() = default;
  Formula fresh() { return Formula::var("_t" + std::to_string(n_++)); }
  std::string fresh_name() { return "_t" + std::to_string(n_++); }

 private:
  uint64_t n_ = 0;
};

inline Formula big_and(const std::vector<Formula>& fs) {
  if (fs.empty()) throw std::invalid_argument("empty conjunction");
  Formula f = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) f = Formula::land(f, fs[i]);
  return f;
}
inline Formula big_or(const std::vector<Formula>& fs) {
  if (fs.empty()) throw std::invalid_argument("empty disjunction");
  Formula f = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) f = Formula::lor(f, fs[i]);
  return f;
}
inline Formula iff(Formula a, Formula b) {
  return Formula::land(Formula::imp(a, b), Formula::imp(b, a));
}

}  // namespace iptk
