#include "sprout/refinement.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

namespace sprout {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

const char* const kTimes = "\xc3\x97";  // ×

}  // namespace

Sprout square(const Sprout& s) {
  const int m = s.white_count();
  const int nb = s.black_count();
  // element w*nb + b is w×b; element m*nb + b is the original b
  UnionFind uf(m * nb + nb);
  for (const Edge& e : s.edges()) {
    uf.unite(e.white * nb + s.boundary_black(e.label), m * nb + e.black);
  }
  std::vector<int> cls(m * nb + nb, -1);
  std::vector<std::string> blacks;
  std::vector<int> root_class(m * nb + nb, -1);
  for (int b = 0; b < nb; ++b) {
    int r = uf.find(m * nb + b);
    if (root_class[r] < 0) {
      root_class[r] = static_cast<int>(blacks.size());
      blacks.push_back(s.black_name(b));
    }
  }
  for (int w = 0; w < m; ++w) {
    for (int b = 0; b < nb; ++b) {
      int r = uf.find(w * nb + b);
      if (root_class[r] < 0) {
        root_class[r] = static_cast<int>(blacks.size());
        blacks.push_back(s.white_name(w) + kTimes + s.black_name(b));
      }
    }
  }
  for (int x = 0; x < m * nb + nb; ++x) cls[x] = root_class[uf.find(x)];

  std::vector<std::string> whites;
  for (int u = 0; u < m; ++u) {
    for (int v = 0; v < m; ++v) whites.push_back(s.white_name(u) + kTimes + s.white_name(v));
  }
  std::vector<int> boundary;
  for (int p : s.boundary()) boundary.push_back(cls[m * nb + p]);
  std::vector<Edge> edges;
  for (int w = 0; w < m; ++w) {
    for (const Edge& e : s.edges()) {
      edges.push_back({w * m + e.white, cls[w * nb + e.black], e.label});
    }
  }
  std::sort(edges.begin(), edges.end());
  return Sprout(std::move(whites), std::move(blacks), std::move(boundary), std::move(edges));
}

Sprout iterate_square(const Sprout& s, int n, std::size_t cap) {
  if (n < 0) throw std::invalid_argument("iterate_square: negative n");
  Sprout cur = s;
  for (int i = 0; i < n; ++i) {
    const auto m = static_cast<std::size_t>(cur.white_count());
    if (m * m > cap) {
      throw SizeCapExceeded("iterate_square: " + std::to_string(m * m) +
                            " whites exceed the cap of " + std::to_string(cap));
    }
    cur = square(cur);
  }
  return cur;
}

namespace {

// Vertex v < m is white v; v >= m is black v - m.
class Canonizer {
 public:
  struct Leaf {
    std::string digest;
    int root = -1;
    std::vector<int> prank;          // P position -> canonical rank
    std::vector<std::string> key;    // per vertex, rooted at root
    std::vector<int> parent;
  };

  explicit Canonizer(const Sprout& s)
      : s_(s), m_(s.white_count()), n_(s.white_count() + s.black_count()), adj_(n_) {
    for (int e = 0; e < s.edge_count(); ++e) {
      const Edge& ed = s.edge(e);
      adj_[ed.white].push_back(e);
      adj_[m_ + ed.black].push_back(e);
    }
    labeled_.resize(s.boundary_size());
    for (int e = 0; e < s.edge_count(); ++e) labeled_[s.edge(e).label].push_back(e);
    centroids_ = centroids();
  }

  Leaf run() {
    std::vector<int> color(n_);
    for (int v = 0; v < n_; ++v) {
      if (v < m_) {
        color[v] = 0;
      } else {
        color[v] = s_.is_boundary(v - m_) ? 2 : 1;
      }
    }
    Leaf best;
    bool have = false;
    search(color, best, have);
    return best;
  }

 private:
  int other(int e, int v) const {
    const Edge& ed = s_.edge(e);
    return v < m_ ? m_ + ed.black : ed.white;
  }
  int pvertex(int label) const { return m_ + s_.boundary_black(label); }

  std::vector<int> refine(std::vector<int> color) const {
    int classes = count_classes(color);
    for (;;) {
      std::vector<std::vector<int>> sig(n_);
      for (int v = 0; v < n_; ++v) {
        std::vector<std::pair<int, int>> nb;
        for (int e : adj_[v]) nb.push_back({color[other(e, v)], color[pvertex(s_.edge(e).label)]});
        std::sort(nb.begin(), nb.end());
        auto& g = sig[v];
        g.push_back(color[v]);
        for (auto [a, b] : nb) {
          g.push_back(a);
          g.push_back(b);
        }
        g.push_back(-1);
        if (v >= m_ && s_.is_boundary(v - m_)) {
          std::vector<std::pair<int, int>> lab;
          for (int e : labeled_[s_.boundary_position(v - m_)]) {
            lab.push_back({color[s_.edge(e).white], color[m_ + s_.edge(e).black]});
          }
          std::sort(lab.begin(), lab.end());
          for (auto [a, b] : lab) {
            g.push_back(a);
            g.push_back(b);
          }
        }
      }
      std::map<std::vector<int>, int> rank;
      for (auto& g : sig) rank.emplace(g, 0);
      int r = 0;
      for (auto& [k, val] : rank) val = r++;
      for (int v = 0; v < n_; ++v) color[v] = rank[sig[v]];
      if (r == classes) return color;
      classes = r;
    }
  }

  static int count_classes(const std::vector<int>& color) {
    std::vector<int> c = color;
    std::sort(c.begin(), c.end());
    return static_cast<int>(std::unique(c.begin(), c.end()) - c.begin());
  }

  void search(std::vector<int> color, Leaf& best, bool& have) const {
    color = refine(std::move(color));
    // first non-singleton cell among boundary vertices
    std::map<int, std::vector<int>> cells;
    for (int p = 0; p < s_.boundary_size(); ++p) cells[color[pvertex(p)]].push_back(pvertex(p));
    for (auto& [c, members] : cells) {
      if (members.size() < 2) continue;
      for (int v : members) {
        std::vector<int> next(n_);
        for (int x = 0; x < n_; ++x) next[x] = 2 * color[x];
        next[v] += 1;
        search(std::move(next), best, have);
      }
      return;
    }
    Leaf leaf = make_leaf(color);
    if (!have || leaf.digest < best.digest) {
      best = std::move(leaf);
      have = true;
    }
  }

  Leaf make_leaf(const std::vector<int>& color) const {
    const int np = s_.boundary_size();
    std::vector<int> order(np);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return color[pvertex(a)] < color[pvertex(b)]; });
    std::vector<int> prank(np);
    for (int r = 0; r < np; ++r) prank[order[r]] = r;

    std::string head = std::to_string(m_) + "," + std::to_string(n_ - m_) + "," +
                       std::to_string(np) + "|";
    Leaf best;
    for (int root : centroids_) {
      Leaf cand;
      cand.root = root;
      cand.prank = prank;
      rooted_keys(root, prank, cand.key, cand.parent);
      cand.digest = head + cand.key[root];
      if (best.root < 0 || cand.digest < best.digest) best = std::move(cand);
    }
    return best;
  }

  std::string node_tag(int v, const std::vector<int>& prank) const {
    if (v < m_) return "W";
    int pos = s_.boundary_position(v - m_);
    return pos < 0 ? std::string("B") : "P" + std::to_string(prank[pos]);
  }

  void rooted_keys(int root, const std::vector<int>& prank, std::vector<std::string>& key,
                   std::vector<int>& parent) const {
    key.assign(n_, {});
    parent.assign(n_, -1);
    std::vector<int> order{root};
    std::vector<int> via(n_, -1);
    parent[root] = root;
    for (std::size_t i = 0; i < order.size(); ++i) {
      int v = order[i];
      for (int e : adj_[v]) {
        int u = other(e, v);
        if (parent[u] >= 0) continue;
        parent[u] = v;
        via[u] = e;
        order.push_back(u);
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      int v = *it;
      std::vector<std::string> kids;
      for (int e : adj_[v]) {
        int u = other(e, v);
        if (parent[u] != v || u == v) continue;
        kids.push_back(child_entry(u, e, prank, key));
      }
      std::sort(kids.begin(), kids.end());
      std::string k = node_tag(v, prank) + "(";
      for (auto& c : kids) k += c;
      k += ")";
      key[v] = std::move(k);
    }
    parent[root] = -1;
  }

  std::string child_entry(int u, int e, const std::vector<int>& prank,
                          const std::vector<std::string>& key) const {
    return std::to_string(prank[s_.edge(e).label]) + ":" + key[u];
  }

  std::vector<int> centroids() const {
    std::vector<int> parent(n_, -1), order{0}, size(n_, 1);
    if (n_ == 0) return {};
    parent[0] = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      int v = order[i];
      for (int e : adj_[v]) {
        int u = other(e, v);
        if (parent[u] >= 0) continue;
        parent[u] = v;
        order.push_back(u);
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      if (*it != 0) size[parent[*it]] += size[*it];
    }
    std::vector<int> out;
    int best = n_ + 1;
    for (int v = 0; v < n_; ++v) {
      int worst = n_ - size[v];
      for (int e : adj_[v]) {
        int u = other(e, v);
        if (u != 0 && parent[u] == v) worst = std::max(worst, size[u]);
      }
      if (worst < best) {
        best = worst;
        out = {v};
      } else if (worst == best) {
        out.push_back(v);
      }
    }
    return out;
  }

  const Sprout& s_;
  int m_;
  int n_;
  std::vector<std::vector<int>> adj_;
  std::vector<std::vector<int>> labeled_;
  std::vector<int> centroids_;

  friend std::optional<SproutIsomorphism> sprout::isomorphic(const Sprout&, const Sprout&);
};

}  // namespace

CanonicalForm canonical_form(const Sprout& s) { return {Canonizer(s).run().digest}; }

bool verify_isomorphism(const Sprout& a, const Sprout& b, const SproutIsomorphism& m) {
  if (a.white_count() != b.white_count() || a.black_count() != b.black_count() ||
      a.boundary_size() != b.boundary_size() || a.edge_count() != b.edge_count()) {
    return false;
  }
  std::vector<int> wmap(a.white_count(), -1), bmap(a.black_count(), -1);
  std::vector<char> wused(b.white_count(), 0), bused(b.black_count(), 0);
  for (int w = 0; w < a.white_count(); ++w) {
    auto it = m.whites.find(a.white_name(w));
    if (it == m.whites.end()) return false;
    auto t = b.find_white(it->second);
    if (!t || wused[*t]) return false;
    wused[*t] = 1;
    wmap[w] = *t;
  }
  for (int x = 0; x < a.black_count(); ++x) {
    auto it = m.blacks.find(a.black_name(x));
    if (it == m.blacks.end()) return false;
    auto t = b.find_black(it->second);
    if (!t || bused[*t]) return false;
    bused[*t] = 1;
    bmap[x] = *t;
    if (a.is_boundary(x) != b.is_boundary(*t)) return false;
  }
  for (int p = 0; p < a.boundary_size(); ++p) {
    auto it = m.boundary.find(a.boundary_name(p));
    if (it == m.boundary.end() || it->second != b.black_name(bmap[a.boundary_black(p)])) {
      return false;
    }
  }
  for (const Edge& e : a.edges()) {
    auto f = b.edge_between(wmap[e.white], bmap[e.black]);
    if (!f) return false;
    if (b.edge(*f).label != b.boundary_position(bmap[a.boundary_black(e.label)])) return false;
  }
  return true;
}

std::optional<SproutIsomorphism> isomorphic(const Sprout& a, const Sprout& b) {
  if (a.white_count() != b.white_count() || a.black_count() != b.black_count() ||
      a.boundary_size() != b.boundary_size() || a.edge_count() != b.edge_count()) {
    return std::nullopt;
  }
  Canonizer ca(a), cb(b);
  auto la = ca.run();
  auto lb = cb.run();
  if (la.digest != lb.digest) return std::nullopt;

  const int n = a.white_count() + a.black_count();
  std::vector<int> map(n, -1);
  // parallel traversal: children matched by equal entry keys in sorted order
  std::vector<std::pair<int, int>> stack{{la.root, lb.root}};
  while (!stack.empty()) {
    auto [x, y] = stack.back();
    stack.pop_back();
    map[x] = y;
    auto kids = [](const Canonizer& c, const Canonizer::Leaf& l, int v) {
      std::vector<std::pair<std::string, int>> out;
      for (int e : c.adj_[v]) {
        int u = c.other(e, v);
        if (l.parent[u] != v) continue;
        out.push_back({c.child_entry(u, e, l.prank, l.key), u});
      }
      std::sort(out.begin(), out.end());
      return out;
    };
    auto kx = kids(ca, la, x);
    auto ky = kids(cb, lb, y);
    if (kx.size() != ky.size()) throw std::logic_error("isomorphic: digest collision");
    for (std::size_t i = 0; i < kx.size(); ++i) {
      if (kx[i].first != ky[i].first) throw std::logic_error("isomorphic: digest collision");
      stack.push_back({kx[i].second, ky[i].second});
    }
  }
  SproutIsomorphism iso;
  const int ma = a.white_count();
  for (int v = 0; v < n; ++v) {
    if (v < ma) {
      iso.whites[a.white_name(v)] = b.white_name(map[v]);
    } else {
      iso.blacks[a.black_name(v - ma)] = b.black_name(map[v] - ma);
    }
  }
  for (int p = 0; p < a.boundary_size(); ++p) {
    iso.boundary[a.boundary_name(p)] = iso.blacks[a.boundary_name(p)];
  }
  if (!verify_isomorphism(a, b, iso)) {
    throw std::logic_error("isomorphic: equal digests without a verifiable mapping");
  }
  return iso;
}

}  // namespace sprout
