#pragma once
// Shared-DAG representation of formulas. Gates are hash-consed within a
// circuit arena and immutable after creation; indices are acyclic (children
// have strictly smaller indices).

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "formula.hpp"

namespace iptk {

class BlowUp : public std::runtime_error {
 public:
  explicit BlowUp(const std::string& m) : std::runtime_error(m) {}
};

struct Gate {
  Conn k;
  std::string name;  // Var only
  uint32_t a = 0, b = 0;
  bool operator==(const Gate& o) const {
    return k == o.k && name == o.name && a == o.a && b == o.b;
  }
};

struct GateHash {
  size_t operator()(const Gate& g) const {
    size_t h = std::hash<int>()((int)g.k);
    h = h * 1000003 + std::hash<std::string>()(g.name);
    h = h * 1000003 + g.a;
    h = h * 1000003 + g.b;
    return h;
  }
};

// Arena of gates. A Circuit is an arena plus a root index; CF proofs keep one
// shared arena with each line pointing at a root gate.
class Circuit {
 public:
  uint32_t add_var(const std::string& n) { return add({Conn::Var, n, 0, 0}); }
  uint32_t add_bot() { return add({Conn::Bot, "", 0, 0}); }
  uint32_t add_imp(uint32_t a, uint32_t b) { return add_bin(Conn::Impl, a, b); }
  uint32_t add_and(uint32_t a, uint32_t b) { return add_bin(Conn::And, a, b); }
  uint32_t add_or(uint32_t a, uint32_t b) { return add_bin(Conn::Or, a, b); }
  uint32_t add_bin(Conn k, uint32_t a, uint32_t b) {
    if (a >= gates_.size() || b >= gates_.size())
      throw std::invalid_argument("gate index out of range");
    return add({k, "", a, b});
  }

  const Gate& gate(uint32_t i) const { return gates_.at(i); }
  uint32_t size() const { return (uint32_t)gates_.size(); }
  uint32_t root() const { return root_; }
  void set_root(uint32_t r) {
    if (r >= gates_.size()) throw std::invalid_argument("bad root");
    root_ = r;
  }

  uint32_t add_formula(Formula f) {
    auto it = fmemo_.find(f);
    if (it != fmemo_.end()) return it->second;
    uint32_t g;
    switch (f.kind()) {
      case Conn::Var: g = add_var(f.name()); break;
      case Conn::Bot: g = add_bot(); break;
      default: {
        uint32_t a = add_formula(f.left());
        uint32_t b = add_formula(f.right());
        g = add_bin(f.kind(), a, b);
      }
    }
    fmemo_.emplace(f, g);
    return g;
  }

  // substitution of variables by formulas, applied below gate i; memoised
  uint32_t subst_gate(uint32_t i, const std::unordered_map<std::string, uint32_t>& sigma,
                      std::unordered_map<uint32_t, uint32_t>& memo) {
    auto it = memo.find(i);
    if (it != memo.end()) return it->second;
    const Gate g = gates_[i];
    uint32_t r;
    if (g.k == Conn::Var) {
      auto s = sigma.find(g.name);
      r = (s == sigma.end()) ? i : s->second;
    } else if (g.k == Conn::Bot) {
      r = i;
    } else {
      uint32_t a = subst_gate(g.a, sigma, memo);
      uint32_t b = subst_gate(g.b, sigma, memo);
      r = add_bin(g.k, a, b);
    }
    memo.emplace(i, r);
    return r;
  }

  // unfold to a formula, guarding against exponential blow-up
  Formula to_formula(uint32_t i, uint64_t size_bound) const {
    uint64_t budget = size_bound;
    return unfold(i, budget);
  }

  uint64_t unfolded_size(uint32_t i, uint64_t cap) const {
    std::unordered_map<uint32_t, uint64_t> memo;
    std::function<uint64_t(uint32_t)> go = [&](uint32_t j) -> uint64_t {
      auto it = memo.find(j);
      if (it != memo.end()) return it->second;
      const Gate& g = gates_[j];
      uint64_t s = 1;
      if (g.k != Conn::Var && g.k != Conn::Bot) {
        uint64_t sa = go(g.a), sb = go(g.b);
        s = 1 + sa + sb;
        if (sa > cap || sb > cap || s > cap) s = cap + 1;  // saturate
      }
      memo.emplace(j, s);
      return s;
    };
    return go(i);
  }

  std::string text() const {
    std::ostringstream os;
    for (uint32_t i = 0; i < gates_.size(); ++i) {
      const Gate& g = gates_[i];
      os << 'g' << i << " := ";
      switch (g.k) {
        case Conn::Var: os << "var(" << g.name << ")"; break;
        case Conn::Bot: os << "bot()"; break;
        case Conn::Impl: os << "imp(g" << g.a << ", g" << g.b << ")"; break;
        case Conn::And: os << "and(g" << g.a << ", g" << g.b << ")"; break;
        case Conn::Or: os << "or(g" << g.a << ", g" << g.b << ")"; break;
      }
      if (i == root_) os << "  # root";
      os << '\n';
    }
    return os.str();
  }

 private:
  uint32_t add(const Gate& g) {
    auto it = memo_.find(g);
    if (it != memo_.end()) return it->second;
    gates_.push_back(g);
    uint32_t i = (uint32_t)gates_.size() - 1;
    memo_.emplace(g, i);
    return i;
  }
  Formula unfold(uint32_t i, uint64_t& budget) const {
    if (budget == 0) throw BlowUp("unfolded size exceeds bound");
    --budget;
    const Gate& g = gates_[i];
    switch (g.k) {
      case Conn::Var: return Formula::var(g.name);
      case Conn::Bot: return Formula::bot();
      default: {
        Formula a = unfold(g.a, budget);
        Formula b = unfold(g.b, budget);
        return g.k == Conn::Impl ? Formula::imp(a, b)
               : g.k == Conn::And ? Formula::land(a, b)
                                  : Formula::lor(a, b);
      }
    }
  }

  std::vector<Gate> gates_;
  std::unordered_map<Gate, uint32_t, GateHash> memo_;
  std::unordered_map<Formula, uint32_t, FormulaHash> fmemo_;
  uint32_t root_ = 0;
};

inline Circuit from_formula(Formula f) {
  Circuit c;
  c.set_root(c.add_formula(f));
  return c;
}

inline Formula to_formula(const Circuit& c, uint64_t size_bound) {
  if (c.unfolded_size(c.root(), size_bound) > size_bound)
    throw BlowUp("unfolded size exceeds bound");
  return c.to_formula(c.root(), size_bound + 1);
}

}  // namespace iptk
