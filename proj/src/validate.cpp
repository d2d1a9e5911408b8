#include "sprout/validate.hpp"

#include <numeric>
#include <set>

namespace sprout {

std::vector<int> sprout_boundary(const Sprout& s) {
  std::vector<char> in(s.boundary_size(), 0);
  std::vector<int> frontier;
  auto absorb = [&](int black) {
    for (int e : s.black_edges(black)) {
      int l = s.edge(e).label;
      if (!in[l]) {
        in[l] = 1;
        frontier.push_back(l);
      }
    }
  };
  for (int b = 0; b < s.black_count(); ++b) {
    if (s.black_degree(b) > 1) absorb(b);
  }
  while (!frontier.empty()) {
    int l = frontier.back();
    frontier.pop_back();
    absorb(s.boundary_black(l));
  }
  std::vector<int> out;
  for (int l = 0; l < s.boundary_size(); ++l) {
    if (in[l]) out.push_back(l);
  }
  return out;
}

ValidationReport validate(const Sprout& s) {
  ValidationReport r;
  auto add = [&](std::string rule, std::string witness, std::string msg) {
    r.violations.push_back({std::move(rule), std::move(witness), std::move(msg)});
  };

  const int nw = s.white_count();
  const int nb = s.black_count();
  bool tree_ok = true;
  if (s.edge_count() != nw + nb - 1) {
    tree_ok = false;
    add("tree.edge-count", "",
        "#edges = " + std::to_string(s.edge_count()) + " but #whites + #blacks - 1 = " +
            std::to_string(nw + nb - 1));
  }
  // union-find over whites [0,nw) and blacks [nw, nw+nb)
  std::vector<int> parent(nw + nb);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Edge& e : s.edges()) {
    int a = find(e.white), b = find(nw + e.black);
    if (a == b) {
      tree_ok = false;
      add("tree.acyclic", s.white_name(e.white) + "-" + s.black_name(e.black),
          "edge closes a cycle");
    } else {
      parent[a] = b;
    }
  }
  for (int v = 1; v < nw + nb; ++v) {
    if (find(v) != find(0)) {
      tree_ok = false;
      add("tree.connected", v < nw ? s.white_name(v) : s.black_name(v - nw),
          "vertex is not connected to " +
              (nw > 0 ? s.white_name(0) : s.black_name(0)));
    }
  }

  bool labels_ok = true;
  for (int w = 0; w < nw; ++w) {
    std::set<int> seen;
    for (int e : s.white_edges(w)) {
      if (!seen.insert(s.edge(e).label).second) {
        labels_ok = false;
        add("label.injective", s.white_name(w),
            "label " + s.boundary_name(s.edge(e).label) + " repeats at this white");
      }
    }
  }
  std::vector<char> used(s.boundary_size(), 0);
  for (const Edge& e : s.edges()) used[e.label] = 1;
  for (int l = 0; l < s.boundary_size(); ++l) {
    if (!used[l]) {
      labels_ok = false;
      add("label.surjective", s.boundary_name(l), "boundary point is never a label");
    }
  }
  if (nw == 0) {
    tree_ok = false;
    add("tree.nonempty", "", "sprout has no white vertex");
  }
  r.structural_ok = tree_ok && labels_ok;

  for (int b = 0; b < nb; ++b) {
    if (s.black_degree(b) > 1) r.critical_set.push_back(b);
  }
  r.sprout_boundary = sprout_boundary(s);
  r.is_correct = static_cast<int>(r.sprout_boundary.size()) == s.boundary_size();
  if (!r.is_correct) {
    std::vector<char> in(s.boundary_size(), 0);
    for (int l : r.sprout_boundary) in[l] = 1;
    for (int l = 0; l < s.boundary_size(); ++l) {
      if (!in[l]) {
        add("boundary.correct", s.boundary_name(l),
            "not correctly defined: point is not in the boundary generated by the "
            "critical set");
      }
    }
  }

  bool degrees_ok = true;
  for (int w = 0; w < nw; ++w) {
    if (s.white_degree(w) <= 1) {
      degrees_ok = false;
      add("regular.white-degree", s.white_name(w), "white vertex has degree <= 1");
    }
  }
  for (int b = 0; b < nb; ++b) {
    if (!s.is_boundary(b) && s.black_degree(b) <= 1) {
      degrees_ok = false;
      add("regular.black-degree", s.black_name(b),
          "non-boundary black vertex has degree <= 1");
    }
  }
  r.is_regular = r.structural_ok && r.is_correct && degrees_ok;

  for (const Edge& e : s.edges()) {
    if (s.is_boundary(e.black)) r.degenerate_incidences.push_back(e);
  }
  return r;
}

}  // namespace sprout
