#pragma once

#include <algorithm>
#include <numeric>
#include <set>
#include <tuple>
#include <vector>

#include "sprout/main_tree.hpp"

namespace sprout::testing {

struct LabeledDigraph {
  int n = 0;
  std::multiset<std::tuple<int, int, int>> arcs;  // (from, to, label)
};

// G_T of the fig7 sprout:
// vertex 0 is P, 1 is QA = φ2(P) = φ4(P), 2 is QB = φ3(P) = φ5(P).
inline LabeledDigraph fig7_gt_expected() {
  return {3, {{0, 1, 2}, {0, 1, 4}, {0, 2, 3}, {0, 2, 5}, {1, 2, 3}, {2, 1, 4}}};
}

inline LabeledDigraph eq_graph(const TransformationGraph& g) {
  LabeledDigraph d;
  d.n = static_cast<int>(g.vq.size());
  for (const auto& a : g.eq) d.arcs.insert({a.from, a.to, a.label});
  return d;
}

// Label-preserving isomorphism by trying every vertex permutation.
inline bool isomorphic(const LabeledDigraph& a, const LabeledDigraph& b) {
  if (a.n != b.n || a.arcs.size() != b.arcs.size()) return false;
  std::vector<int> perm(a.n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::multiset<std::tuple<int, int, int>> mapped;
    for (auto [f, t, l] : a.arcs) mapped.insert({perm[f], perm[t], l});
    if (mapped == b.arcs) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

}  // namespace sprout::testing
