#pragma once
// Finite Kripke models with persistent valuations, and forcing.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "formula.hpp"

namespace iptk {

struct KripkeModel {
  std::vector<std::string> points;          // names; index is the point id
  std::vector<std::vector<bool>> leq;       // leq[a][b]: a <= b
  std::map<std::string, std::vector<bool>> val;  // variable -> true-set

  size_t size() const { return points.size(); }

  bool le(size_t a, size_t b) const { return leq[a][b]; }

  // sanity: reflexive, antisymmetric, transitive; valuation persistent
  bool well_formed(std::string* why = nullptr) const {
    size_t n = points.size();
    auto bad = [&](const std::string& m) {
      if (why) *why = m;
      return false;
    };
    if (leq.size() != n) return bad("leq dimension");
    for (size_t a = 0; a < n; ++a) {
      if (leq[a].size() != n) return bad("leq dimension");
      if (!leq[a][a]) return bad("not reflexive");
      for (size_t b = 0; b < n; ++b) {
        if (a != b && leq[a][b] && leq[b][a]) return bad("not antisymmetric");
        for (size_t c = 0; c < n; ++c)
          if (leq[a][b] && leq[b][c] && !leq[a][c]) return bad("not transitive");
      }
    }
    for (auto& [v, tv] : val) {
      if (tv.size() != n) return bad("valuation dimension for " + v);
      for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b)
          if (leq[a][b] && tv[a] && !tv[b]) return bad("valuation not persistent");
    }
    return true;
  }

  // least element if any
  int root() const {
    for (size_t r = 0; r < points.size(); ++r) {
      bool all = true;
      for (size_t b = 0; b < points.size(); ++b) all = all && leq[r][b];
      if (all) return (int)r;
    }
    return -1;
  }
};

// forcing with memoisation over subformulas (returns the up-set of φ)
inline std::vector<bool> force_set(const KripkeModel& M, Formula f) {
  size_t n = M.size();
  switch (f.kind()) {
    case Conn::Var: {
      auto it = M.val.find(f.name());
      if (it != M.val.end()) return it->second;
      return std::vector<bool>(n, false);
    }
    case Conn::Bot: return std::vector<bool>(n, false);
    case Conn::And: {
      auto a = force_set(M, f.left()), b = force_set(M, f.right());
      for (size_t i = 0; i < n; ++i) a[i] = a[i] && b[i];
      return a;
    }
    case Conn::Or: {
      auto a = force_set(M, f.left()), b = force_set(M, f.right());
      for (size_t i = 0; i < n; ++i) a[i] = a[i] || b[i];
      return a;
    }
    case Conn::Impl: {
      auto a = force_set(M, f.left()), b = force_set(M, f.right());
      std::vector<bool> r(n, true);
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
          if (M.leq[i][j] && a[j] && !b[j]) {
            r[i] = false;
            break;
          }
      return r;
    }
  }
  return {};
}

inline bool forces(const KripkeModel& M, size_t x, Formula f) {
  return force_set(M, f)[x];
}

inline bool valid_in(const KripkeModel& M, Formula f) {
  auto s = force_set(M, f);
  for (bool b : s)
    if (!b) return false;
  return true;
}

// validity under all valuations of the model's frame, for the given variables
inline bool frame_valid_all_valuations(const KripkeModel& frame, Formula f,
                                       const std::set<std::string>& vars) {
  // enumerate monotone valuations: for each variable pick an up-set
  size_t n = frame.size();
  std::vector<std::vector<bool>> upsets;
  // enumerate all up-sets
  for (uint64_t mask = 0; mask < (1ull << n); ++mask) {
    bool up = true;
    for (size_t a = 0; a < n && up; ++a)
      for (size_t b = 0; b < n && up; ++b)
        if (frame.leq[a][b] && ((mask >> a) & 1) && !((mask >> b) & 1)) up = false;
    if (up) {
      std::vector<bool> s(n);
      for (size_t a = 0; a < n; ++a) s[a] = (mask >> a) & 1;
      upsets.push_back(s);
    }
  }
  std::vector<std::string> vs(vars.begin(), vars.end());
  std::vector<size_t> choice(vs.size(), 0);
  for (;;) {
    KripkeModel M = frame;
    M.val.clear();
    for (size_t i = 0; i < vs.size(); ++i) M.val[vs[i]] = upsets[choice[i]];
    if (!valid_in(M, f)) return false;
    size_t i = 0;
    for (; i < vs.size(); ++i) {
      if (++choice[i] < upsets.size()) break;
      choice[i] = 0;
    }
    if (i == vs.size()) break;
    if (vs.empty()) break;
  }
  if (vs.empty()) return valid_in(frame, f);
  return true;
}

}  // namespace iptk
