#include "sprout/phi.hpp"

#include <deque>
#include <set>
#include <stdexcept>

#include "sprout/validate.hpp"

namespace sprout {

std::vector<int> subset_members(BoundarySubset q) {
  std::vector<int> out;
  for (int p = 0; q; ++p, q >>= 1) {
    if (q & 1) out.push_back(p);
  }
  return out;
}

std::string subset_str(const Sprout& s, BoundarySubset q) {
  std::string out = "{";
  bool first = true;
  for (int p : subset_members(q)) {
    if (!first) out += ",";
    out += s.boundary_name(p);
    first = false;
  }
  return out + "}";
}

BoundaryMap identity_map(int n) {
  BoundaryMap m;
  for (int p = 0; p < n; ++p) m.table.push_back(p);
  return m;
}

BoundaryMap compose(const BoundaryMap& g, const BoundaryMap& f) {
  BoundaryMap out;
  for (int v : f.table) out.table.push_back(g.table[v]);
  return out;
}

namespace {

void require_small(const Sprout& s) {
  if (s.boundary_size() > 64) {
    throw PreconditionError("boundary sets larger than 64 points are not supported");
  }
}

}  // namespace

BoundaryMap phi(const Sprout& s, int i) {
  if (i < 1 || i > s.white_count()) {
    throw std::out_of_range("white index " + std::to_string(i) + " outside 1.." +
                            std::to_string(s.white_count()));
  }
  const int root = i - 1;
  // For each black vertex: label of the edge at w_i leading towards it.
  std::vector<int> via(s.black_count(), -1);
  std::vector<char> seen_white(s.white_count(), 0);
  std::deque<std::pair<VertexId, int>> queue;
  seen_white[root] = 1;
  for (int e : s.white_edges(root)) {
    const Edge& ed = s.edge(e);
    if (via[ed.black] >= 0) continue;
    via[ed.black] = ed.label;
    queue.push_back({{VertexKind::Black, ed.black}, ed.label});
  }
  while (!queue.empty()) {
    auto [v, label] = queue.front();
    queue.pop_front();
    if (v.kind == VertexKind::Black) {
      for (int e : s.black_edges(v.index)) {
        int w = s.edge(e).white;
        if (seen_white[w]) continue;
        seen_white[w] = 1;
        queue.push_back({{VertexKind::White, w}, label});
      }
    } else {
      for (int e : s.white_edges(v.index)) {
        int b = s.edge(e).black;
        if (via[b] >= 0) continue;
        via[b] = label;
        queue.push_back({{VertexKind::Black, b}, label});
      }
    }
  }
  BoundaryMap m;
  for (int p = 0; p < s.boundary_size(); ++p) {
    int l = via[s.boundary_black(p)];
    if (l < 0) throw PreconditionError("sprout is not connected");
    m.table.push_back(l);
  }
  return m;
}

BoundaryMap phi_compose(const Sprout& s, std::span<const int> word) {
  BoundaryMap m = identity_map(s.boundary_size());
  for (int j : word) m = compose(phi(s, j), m);
  return m;
}

BoundarySubset image_subset(const BoundaryMap& m, BoundarySubset q) {
  BoundarySubset out = 0;
  for (int p : subset_members(q)) out |= BoundarySubset{1} << m.table.at(p);
  return out;
}

Subtree steiner_subtree(const Sprout& s, BoundarySubset q) {
  require_small(s);
  if (q == 0) throw std::invalid_argument("steiner_subtree of an empty set");
  Subtree t;
  t.white_in.assign(s.white_count(), 1);
  t.black_in.assign(s.black_count(), 1);
  t.white_degree.resize(s.white_count());
  t.black_degree.resize(s.black_count());
  for (int w = 0; w < s.white_count(); ++w) t.white_degree[w] = s.white_degree(w);
  for (int b = 0; b < s.black_count(); ++b) t.black_degree[b] = s.black_degree(b);
  auto keep = [&](int b) {
    int p = s.boundary_position(b);
    return p >= 0 && subset_has(q, p);
  };
  std::vector<VertexId> leaves;
  for (int w = 0; w < s.white_count(); ++w) {
    if (t.white_degree[w] <= 1) leaves.push_back({VertexKind::White, w});
  }
  for (int b = 0; b < s.black_count(); ++b) {
    if (t.black_degree[b] <= 1 && !keep(b)) leaves.push_back({VertexKind::Black, b});
  }
  while (!leaves.empty()) {
    VertexId v = leaves.back();
    leaves.pop_back();
    if (v.kind == VertexKind::White) {
      if (!t.white_in[v.index]) continue;
      t.white_in[v.index] = 0;
      for (int e : s.white_edges(v.index)) {
        int b = s.edge(e).black;
        if (!t.black_in[b]) continue;
        --t.white_degree[v.index];
        if (--t.black_degree[b] <= 1 && !keep(b)) leaves.push_back({VertexKind::Black, b});
      }
    } else {
      if (!t.black_in[v.index]) continue;
      t.black_in[v.index] = 0;
      for (int e : s.black_edges(v.index)) {
        int w = s.edge(e).white;
        if (!t.white_in[w]) continue;
        --t.black_degree[v.index];
        if (--t.white_degree[w] <= 1) leaves.push_back({VertexKind::White, w});
      }
    }
  }
  for (int e = 0; e < s.edge_count(); ++e) {
    if (t.white_in[s.edge(e).white] && t.black_in[s.edge(e).black]) t.edges.push_back(e);
  }
  return t;
}

bool is_full(const Sprout& s, BoundarySubset q) {
  Subtree t = steiner_subtree(s, q);
  for (int p = 0; p < s.boundary_size(); ++p) {
    if (t.black_in[s.boundary_black(p)] && !subset_has(q, p)) return false;
  }
  return true;
}

int n_phi(const Sprout& s, const Address& a) { return PhiEngine(s).n_phi(a); }

int complement_components(const Sprout& s, int i) {
  if (!validate(s).is_regular) {
    throw PreconditionError("complement_components requires a regular sprout");
  }
  BoundaryMap m = phi(s, i);
  int image = subset_size(image_subset(m, full_set(s.boundary_size())));
  int adjacent = 0;
  for (int e : s.white_edges(i - 1)) {
    if (s.is_boundary(s.edge(e).black)) ++adjacent;
  }
  return image - adjacent;
}

PhiEngine::PhiEngine(const Sprout& s) : s_(&s) {
  require_small(s);
  for (int i = 1; i <= s.white_count(); ++i) maps_.push_back(phi(s, i));
}

BoundarySubset PhiEngine::image(int i, BoundarySubset q) const {
  return image_subset(maps_.at(i - 1), q);
}

BoundarySubset PhiEngine::image(std::span<const int> word, BoundarySubset q) const {
  for (int j : word) q = image(j, q);
  return q;
}

int PhiEngine::n_phi(const Address& a) const {
  BoundarySubset q = image(a.preperiod(), all());
  std::pair key{a.period(), q};
  {
    std::lock_guard lock(mu_);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  }
  std::set<BoundarySubset> seen;
  while (seen.insert(q).second) q = image(a.period(), q);
  int n = subset_size(q);
  std::lock_guard lock(mu_);
  memo_.emplace(std::move(key), n);
  return n;
}

}  // namespace sprout
