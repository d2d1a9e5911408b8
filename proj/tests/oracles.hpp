#pragma once

// Brute-force references used by the property checks. They only read the
// raw edge list of a sprout and never call into the analysis code.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "sprout/sprout.hpp"

namespace sprout::oracle {

// φ_i(p) by walking the tree path from p up to w_i (i is 1-based).
inline std::vector<int> phi_map(const Sprout& s, int i) {
  const int m = s.white_count();
  const int n = m + s.black_count();
  std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbour, edge)
  for (int e = 0; e < s.edge_count(); ++e) {
    adj[s.edge(e).white].push_back({m + s.edge(e).black, e});
    adj[m + s.edge(e).black].push_back({s.edge(e).white, e});
  }
  std::vector<int> up(n, -2), via(n, -1);
  std::vector<int> stack{i - 1};
  up[i - 1] = -1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (auto [u, e] : adj[v]) {
      if (up[u] != -2) continue;
      up[u] = v;
      via[u] = e;
      stack.push_back(u);
    }
  }
  std::vector<int> out(s.boundary_size());
  for (int p = 0; p < s.boundary_size(); ++p) {
    int v = m + s.boundary_black(p);
    int last = -1;
    while (up[v] != -1) {
      last = via[v];
      v = up[v];
    }
    out[p] = s.edge(last).label;
  }
  return out;
}

inline std::set<int> image(const std::vector<int>& f, const std::set<int>& q) {
  std::set<int> r;
  for (int p : q) r.insert(f[p]);
  return r;
}

// #φ_{α|n}(P) for n = 0..len, α = pre·per^∞.
inline std::vector<int> subset_sizes(const Sprout& s, const std::vector<int>& pre,
                                     const std::vector<int>& per, int len) {
  std::vector<std::vector<int>> maps;
  for (int i = 1; i <= s.white_count(); ++i) maps.push_back(phi_map(s, i));
  std::set<int> q;
  for (int p = 0; p < s.boundary_size(); ++p) q.insert(p);
  std::vector<int> sizes{static_cast<int>(q.size())};
  for (int n = 0; n < len; ++n) {
    int letter = n < static_cast<int>(pre.size()) ? pre[n] : per[(n - pre.size()) % per.size()];
    q = image(maps[letter - 1], q);
    sizes.push_back(static_cast<int>(q.size()));
  }
  return sizes;
}

// Arcs of the index diagram straight from the edge list: (from, label, to).
struct Arcs {
  int n = 0;
  std::vector<std::vector<std::pair<int, int>>> out;  // (label, to)
};

inline Arcs index_arcs(const Sprout& s) {
  Arcs a;
  a.n = s.boundary_size();
  a.out.resize(a.n);
  for (const Edge& e : s.edges()) {
    int from = s.boundary_position(e.black);
    if (from >= 0) a.out[from].push_back({e.white + 1, e.label});
  }
  return a;
}

// Vertices from which an infinite walk starts.
inline std::vector<char> extendable(const Arcs& a) {
  std::vector<char> alive(a.n, 1);
  for (bool changed = true; changed;) {
    changed = false;
    for (int v = 0; v < a.n; ++v) {
      if (!alive[v]) continue;
      bool any = false;
      for (auto [l, t] : a.out[v]) any = any || alive[t];
      if (!any) {
        alive[v] = 0;
        changed = true;
      }
    }
  }
  return alive;
}

// Number of extendable words of length len from p (saturating).
inline std::uint64_t word_count(const Arcs& a, int p, int len) {
  auto alive = extendable(a);
  std::vector<std::uint64_t> cnt(a.n, 0);
  if (!alive[p]) return 0;
  cnt[p] = 1;
  for (int k = 0; k < len; ++k) {
    std::vector<std::uint64_t> next(a.n, 0);
    for (int v = 0; v < a.n; ++v) {
      if (!cnt[v]) continue;
      for (auto [l, t] : a.out[v]) {
        if (alive[t]) next[t] = std::min<std::uint64_t>(next[t] + cnt[v], 1ull << 60);
      }
    }
    cnt = next;
  }
  std::uint64_t total = 0;
  for (auto c : cnt) total = std::min<std::uint64_t>(total + c, 1ull << 60);
  return total;
}

// Some vertex reachable from p carries two distinct closed walks of one
// length n <= #P^2.
inline bool exponential(const Arcs& a, int p) {
  std::vector<char> reach(a.n, 0);
  std::vector<int> stack{p};
  reach[p] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (auto [l, t] : a.out[v]) {
      if (!reach[t]) {
        reach[t] = 1;
        stack.push_back(t);
      }
    }
  }
  for (int x = 0; x < a.n; ++x) {
    if (!reach[x]) continue;
    std::vector<std::uint64_t> cnt(a.n, 0);
    cnt[x] = 1;
    for (int len = 1; len <= a.n * a.n; ++len) {
      std::vector<std::uint64_t> next(a.n, 0);
      for (int v = 0; v < a.n; ++v) {
        for (auto [l, t] : a.out[v]) next[t] = std::min<std::uint64_t>(next[t] + cnt[v], 1ull << 60);
      }
      cnt = next;
      if (cnt[x] >= 2) return true;
    }
  }
  return false;
}

enum class Kind { Finite, Countable, Uncountable };

struct Classification {
  Kind kind;
  std::uint64_t count;
};

inline Classification classify(const Sprout& s, int p) {
  Arcs a = index_arcs(s);
  if (exponential(a, p)) return {Kind::Uncountable, 0};
  const int P = a.n;
  auto c1 = word_count(a, p, P * P);
  auto c2 = word_count(a, p, 2 * P * P);
  if (c1 == c2) return {Kind::Finite, c1};
  return {Kind::Countable, 0};
}

// Two distinct boundary points read a common word of length #P^2 + 1.
inline bool inadmissible(const Sprout& s) {
  Arcs a = index_arcs(s);
  std::set<std::pair<int, int>> level;
  for (int p = 0; p < a.n; ++p) {
    for (int q = 0; q < a.n; ++q) {
      if (p != q) level.insert({p, q});
    }
  }
  for (int k = 0; k <= a.n * a.n && !level.empty(); ++k) {
    std::set<std::pair<int, int>> next;
    for (auto [p, q] : level) {
      for (auto [l1, t1] : a.out[p]) {
        for (auto [l2, t2] : a.out[q]) {
          if (l1 == l2) next.insert({t1, t2});
        }
      }
    }
    level = std::move(next);
  }
  return !level.empty();
}

}  // namespace sprout::oracle
