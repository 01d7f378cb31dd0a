#pragma once
// Enumeration of finite rooted posets up to isomorphism, as Kripke frames.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

#include "kripke.hpp"

namespace iptk {

namespace detail {

// all posets on k labeled points whose order is compatible with the index
// order (every poset has such a labelling), as strict-order bitmasks over
// pairs (i,j), i<j; canonicalised up to isomorphism
inline std::vector<std::vector<std::vector<bool>>> posets_upto_iso(int k) {
  std::vector<std::vector<std::vector<bool>>> out;
  if (k == 0) {
    out.push_back({});
    return out;
  }
  int npairs = k * (k - 1) / 2;
  auto pair_idx = [&](int i, int j) {  // i < j
    return i * k + j;  // sparse but simple
  };
  std::set<std::vector<uint8_t>> seen;  // canonical flattened le-matrix
  std::vector<int> perm(k);
  for (uint32_t mask = 0; mask < (1u << npairs); ++mask) {
    // unpack into le
    std::vector<std::vector<bool>> le(k, std::vector<bool>(k, false));
    int b = 0;
    for (int i = 0; i < k; ++i) {
      le[i][i] = true;
      for (int j = i + 1; j < k; ++j, ++b)
        if ((mask >> b) & 1) le[i][j] = true;
    }
    (void)pair_idx;
    // transitivity check
    bool ok = true;
    for (int a = 0; a < k && ok; ++a)
      for (int c = 0; c < k && ok; ++c)
        if (le[a][c])
          for (int d = 0; d < k; ++d)
            if (le[c][d] && !le[a][d]) {
              ok = false;
              break;
            }
    if (!ok) continue;
    // canonical form: lexicographically least le-matrix over all permutations
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<uint8_t> best;
    do {
      std::vector<uint8_t> flat;
      flat.reserve(k * k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
          flat.push_back(le[perm[i]][perm[j]] ? 1 : 0);
      if (best.empty() || flat < best) best = std::move(flat);
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (seen.insert(best).second) {
      std::vector<std::vector<bool>> canon(k, std::vector<bool>(k));
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) canon[i][j] = best[i * k + j] != 0;
      out.push_back(std::move(canon));
    }
  }
  return out;
}

}  // namespace detail

// all rooted posets (least element) with at most max_points points, up to
// isomorphism; returned as valuation-free Kripke frames with root at index 0
inline std::vector<KripkeModel> rooted_poset_bank(int max_points) {
  std::vector<KripkeModel> out;
  for (int k = 0; k + 1 <= max_points; ++k) {
    for (auto& le : detail::posets_upto_iso(k)) {
      KripkeModel M;
      int n = k + 1;
      for (int i = 0; i < n; ++i) M.points.push_back("w" + std::to_string(i));
      M.leq.assign(n, std::vector<bool>(n, false));
      M.leq[0][0] = true;
      for (int j = 1; j < n; ++j) M.leq[0][j] = true;  // fresh bottom
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) M.leq[i + 1][j + 1] = le[i][j];
      out.push_back(std::move(M));
    }
  }
  return out;
}

}  // namespace iptk
