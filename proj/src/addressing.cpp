#include "sprout/addressing.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "graph_util.hpp"

namespace sprout {

// ---------------------------------------------------------------- Address

Address::Address(std::vector<int> preperiod, std::vector<int> period)
    : pre_(std::move(preperiod)), per_(std::move(period)) {
  if (per_.empty()) throw std::invalid_argument("address period must be nonempty");
  const std::size_t n = per_.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool ok = true;
    for (std::size_t i = d; i < n && ok; ++i) ok = per_[i] == per_[i - d];
    if (ok) {
      per_.resize(d);
      break;
    }
  }
  while (!pre_.empty() && pre_.back() == per_.back()) {
    pre_.pop_back();
    std::rotate(per_.rbegin(), per_.rbegin() + 1, per_.rend());
  }
}

int Address::at(std::size_t n) const {
  if (n < pre_.size()) return pre_[n];
  return per_[(n - pre_.size()) % per_.size()];
}

Address Address::prefixed(std::span<const int> word) const {
  std::vector<int> pre(word.begin(), word.end());
  pre.insert(pre.end(), pre_.begin(), pre_.end());
  return Address(std::move(pre), per_);
}

Address Address::suffix(std::size_t n) const {
  if (n <= pre_.size()) {
    return Address(std::vector<int>(pre_.begin() + n, pre_.end()), per_);
  }
  std::size_t k = (n - pre_.size()) % per_.size();
  std::vector<int> per(per_.begin() + k, per_.end());
  per.insert(per.end(), per_.begin(), per_.begin() + k);
  return Address({}, std::move(per));
}

namespace {

std::string join_letters(const std::vector<int>& w, int m) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (m > 9 && i > 0) out += '.';
    out += std::to_string(w[i]);
  }
  return out;
}

}  // namespace

std::string Address::str(int m) const {
  std::string out = join_letters(pre_, m);
  if (m > 9 && !pre_.empty()) out += '.';
  return out + "(" + join_letters(per_, m) + ")^∞";
}

std::string Address::expanded(int m, std::size_t count) const {
  std::string out;
  for (std::size_t i = 0; i < count; ++i) {
    if (m > 9 && i > 0) out += '.';
    out += std::to_string(at(i));
  }
  return out + "...";
}

std::strong_ordering operator<=>(const Address& a, const Address& b) {
  std::size_t la = a.per_.size(), lb = b.per_.size();
  std::size_t limit = std::max(a.pre_.size(), b.pre_.size()) + std::lcm(la, lb);
  for (std::size_t i = 0; i < limit; ++i) {
    if (auto c = a.at(i) <=> b.at(i); c != 0) return c;
  }
  return std::strong_ordering::equal;
}

Address parse_address(std::string_view text) {
  auto open = text.find('(');
  auto close = text.find(')');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
    throw ParseError("address must look like j1..jk(i1..il)^inf");
  }
  auto tail = text.substr(close + 1);
  if (tail != "^∞" && tail != "^inf" && !tail.empty()) {
    throw ParseError("address must end with ^inf");
  }
  bool dotted = text.find('.') != std::string_view::npos;
  auto letters = [&](std::string_view part) {
    std::vector<int> out;
    if (part.empty()) return out;
    if (dotted) {
      std::size_t pos = 0;
      while (pos <= part.size()) {
        auto dot = part.find('.', pos);
        auto tok = part.substr(pos, dot == std::string_view::npos ? part.npos : dot - pos);
        if (!tok.empty()) {
          int v = 0;
          for (char c : tok) {
            if (c < '0' || c > '9') throw ParseError("bad address letter");
            v = v * 10 + (c - '0');
          }
          out.push_back(v);
        }
        if (dot == std::string_view::npos) break;
        pos = dot + 1;
      }
    } else {
      for (char c : part) {
        if (c < '1' || c > '9') throw ParseError("bad address letter");
        out.push_back(c - '0');
      }
    }
    return out;
  };
  auto per = letters(text.substr(open + 1, close - open - 1));
  if (per.empty()) throw ParseError("empty period");
  return Address(letters(text.substr(0, open)), std::move(per));
}

// ----------------------------------------------------------- IndexDiagram

void WalkGraph::finalize() {
  std::sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) {
    return std::tie(a.from, a.label, a.to) < std::tie(b.from, b.label, b.to);
  });
  out.assign(n, {});
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    out[arcs[i].from].push_back(static_cast<int>(i));
  }
}

IndexDiagram::IndexDiagram(const Sprout& s)
    : n_(s.boundary_size()), m_(s.white_count()) {
  g_.n = n_;
  for (const Edge& e : s.edges()) {
    int from = s.boundary_position(e.black);
    if (from >= 0) g_.arcs.push_back({from, e.label, e.white + 1});
  }
  g_.finalize();
  in_.resize(n_);
  step_.assign(n_, std::vector<int>(m_ + 1, -1));
  for (std::size_t i = 0; i < g_.arcs.size(); ++i) {
    const Arc& a = g_.arcs[i];
    in_[a.to].push_back(static_cast<int>(i));
    step_[a.from][a.label] = a.to;
  }
  for (int p = 0; p < n_; ++p) {
    names_.push_back(s.boundary_name(p));
    std::vector<int> seen;
    for (int a : in_[p]) seen.push_back(g_.arcs[a].label);
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
      throw std::logic_error("index diagram: in-labels at " + names_[p] +
                             " are not injective");
    }
  }
}

int IndexDiagram::step(int p, int label) const {
  if (label < 1 || label > m_) return -1;
  return step_[p][label];
}

std::vector<int> walk_to_multiindex(const IndexDiagram& d, const Walk& w) {
  std::vector<int> out;
  int at = w.start;
  for (int a : w.arcs) {
    if (a < 0 || a >= static_cast<int>(d.arcs().size())) {
      throw std::invalid_argument("walk uses an unknown arc");
    }
    const Arc& arc = d.arcs()[a];
    if (arc.from != at) throw std::invalid_argument("walk arcs are not contiguous");
    out.push_back(arc.label);
    at = arc.to;
  }
  return out;
}

int read_word(const IndexDiagram& d, int p, std::span<const int> word) {
  for (int k : word) {
    p = d.step(p, k);
    if (p < 0) return -1;
  }
  return p;
}

bool is_address_of(const IndexDiagram& d, int p, const Address& a) {
  p = read_word(d, p, a.preperiod());
  if (p < 0) return false;
  // The period map is a partial function on P; iterate until a repeat.
  std::vector<char> seen(d.size(), 0);
  while (!seen[p]) {
    seen[p] = 1;
    p = read_word(d, p, a.period());
    if (p < 0) return false;
  }
  return true;
}

// ----------------------------------------------------- SCC classification

SccInfo strongly_connected(const WalkGraph& g) {
  std::vector<std::vector<int>> succ(g.n);
  for (const Arc& a : g.arcs) succ[a.from].push_back(a.to);
  SccInfo info;
  info.comp = detail::tarjan(succ, info.count);
  info.internal_arcs.assign(info.count, 0);
  info.vertices.assign(info.count, 0);
  for (int v = 0; v < g.n; ++v) ++info.vertices[info.comp[v]];
  for (const Arc& a : g.arcs) {
    if (info.comp[a.from] == info.comp[a.to]) ++info.internal_arcs[info.comp[a.from]];
  }
  return info;
}

namespace {

// Per-component facts, propagated over the condensation. Components come
// in reverse topological order, so successors are always processed first.
struct Condensed {
  SccInfo scc;
  std::vector<std::vector<int>> comp_succ;
  std::vector<int> branching_below;   // a branching component reachable (incl. self), or -1
  std::vector<int> cyclic_below;      // a cyclic component reachable (incl. self), or -1
  std::vector<std::pair<int, int>> chain_below;  // (c1, c2) cyclic c1 reaches cyclic c2 != c1
  std::vector<long long> count;       // per vertex, valid when neither of the above
};

long long sat_add(long long a, long long b) {
  constexpr long long kMax = std::numeric_limits<long long>::max() / 2;
  return std::min(kMax, a + b);
}

Condensed condense(const WalkGraph& d) {
  Condensed c;
  c.scc = strongly_connected(d);
  const int k = c.scc.count;
  c.comp_succ.assign(k, {});
  for (const Arc& a : d.arcs) {
    int x = c.scc.comp[a.from], y = c.scc.comp[a.to];
    if (x != y) c.comp_succ[x].push_back(y);
  }
  for (auto& v : c.comp_succ) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  c.branching_below.assign(k, -1);
  c.cyclic_below.assign(k, -1);
  c.chain_below.assign(k, {-1, -1});
  for (int x = 0; x < k; ++x) {
    if (c.scc.branching(x)) c.branching_below[x] = x;
    if (c.scc.cyclic(x)) c.cyclic_below[x] = x;
    for (int y : c.comp_succ[x]) {
      if (c.branching_below[x] < 0) c.branching_below[x] = c.branching_below[y];
      if (c.chain_below[x].first < 0) {
        if (c.chain_below[y].first >= 0) {
          c.chain_below[x] = c.chain_below[y];
        } else if (c.scc.cyclic(x) && c.cyclic_below[y] >= 0) {
          c.chain_below[x] = {x, c.cyclic_below[y]};
        }
      }
      if (c.cyclic_below[x] < 0) c.cyclic_below[x] = c.cyclic_below[y];
    }
  }
  // Vertices ordered so that arc targets in other components come first.
  std::vector<int> order(d.n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return c.scc.comp[a] < c.scc.comp[b]; });
  c.count.assign(d.n, 0);
  for (int v : order) {
    int x = c.scc.comp[v];
    if (c.scc.cyclic(x)) {
      // simple cycle whose exits lead to no cycle: exactly one walk
      c.count[v] = 1;
      continue;
    }
    long long n = 0;
    for (int a : d.out[v]) n = sat_add(n, c.count[d.arcs[a].to]);
    c.count[v] = n;
  }
  return c;
}

int first_vertex_of(const WalkGraph& d, const SccInfo& scc, int comp) {
  for (int v = 0; v < d.n; ++v) {
    if (scc.comp[v] == comp) return v;
  }
  return -1;
}

using NameFn = std::function<std::string(int)>;

AddressSetClass classify_with(const WalkGraph& d, const Condensed& c, int p,
                              const NameFn& name) {
  AddressSetClass out;
  int x = c.scc.comp.at(p);
  if (int b = c.branching_below[x]; b >= 0) {
    int v = first_vertex_of(d, c.scc, b);
    out.kind = Cardinality::Uncountable;
    out.witness = {v};
    out.explanation = "reaches " + name(v) +
                      ", whose strongly connected component carries two linked cycles";
    return out;
  }
  if (auto [c1, c2] = c.chain_below[x]; c1 >= 0) {
    int v1 = first_vertex_of(d, c.scc, c1), v2 = first_vertex_of(d, c.scc, c2);
    out.kind = Cardinality::CountablyInfinite;
    out.witness = {v1, v2};
    out.explanation = "the cycle through " + name(v1) + " precedes the cycle through " +
                      name(v2);
    return out;
  }
  out.kind = Cardinality::Finite;
  out.count = c.count[p];
  out.boundary_less = out.count == 0;
  out.explanation = out.boundary_less ? "combinatorially boundary-less: no infinite walk"
                                      : "all reachable cycles are independent";
  return out;
}

}  // namespace

std::string to_string(const AddressSetClass& c) {
  switch (c.kind) {
    case Cardinality::Finite:
      return "Finite(" + std::to_string(c.count) + ")";
    case Cardinality::CountablyInfinite:
      return "CountablyInfinite";
    case Cardinality::Uncountable:
      return "Uncountable";
  }
  return "?";
}

namespace {

NameFn diagram_names(const IndexDiagram& d) {
  return [&d](int v) { return d.name(v); };
}

NameFn plain_names() {
  return [](int v) { return "#" + std::to_string(v); };
}

}  // namespace

AddressSetClass classify_address_set(const IndexDiagram& d, int p) {
  return classify_with(d.graph(), condense(d.graph()), p, diagram_names(d));
}

AddressSetClass classify_walks(const WalkGraph& g, int v) {
  return classify_with(g, condense(g), v, plain_names());
}

namespace {

std::vector<Address> enumerate_with(const WalkGraph& d, const NameFn& name, int p) {
  Condensed c = condense(d);
  AddressSetClass cls = classify_with(d, c, p, name);
  if (cls.kind != Cardinality::Finite) throw InfiniteAddressSet(p, cls);

  std::vector<Address> out;
  std::vector<int> prefix;
  auto cycle_from = [&](int v) {
    std::vector<int> labels;
    int at = v;
    do {
      int next = -1;
      for (int a : d.out[at]) {
        const Arc& arc = d.arcs[a];
        if (c.scc.comp[arc.to] == c.scc.comp[v]) {
          labels.push_back(arc.label);
          next = arc.to;
          break;
        }
      }
      at = next;
    } while (at != v);
    return labels;
  };
  auto dfs = [&](auto&& self, int v) -> void {
    if (c.count[v] == 0) return;
    if (c.scc.cyclic(c.scc.comp[v])) {
      out.emplace_back(prefix, cycle_from(v));
      return;
    }
    for (int a : d.out[v]) {
      prefix.push_back(d.arcs[a].label);
      self(self, d.arcs[a].to);
      prefix.pop_back();
    }
  };
  dfs(dfs, p);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::vector<Address> enumerate_addresses(const IndexDiagram& d, int p) {
  return enumerate_with(d.graph(), diagram_names(d), p);
}

std::vector<Address> enumerate_walks(const WalkGraph& g, int v) {
  return enumerate_with(g, plain_names(), v);
}

InfiniteAddressSet::InfiniteAddressSet(int point_, AddressSetClass cls_)
    : SproutError("address set is infinite (" + to_string(cls_) + ")"),
      point(point_),
      cls(std::move(cls_)) {}

std::optional<long long> uniform_bound(const IndexDiagram& d) {
  Condensed c = condense(d.graph());
  long long best = 0;
  for (int p = 0; p < d.size(); ++p) {
    auto cls = classify_with(d.graph(), c, p, diagram_names(d));
    if (cls.kind != Cardinality::Finite) return std::nullopt;
    best = std::max(best, cls.count);
  }
  return best;
}

// ---------------------------------------------------------- Admissibility

AdmissibilityResult check_admissibility(const IndexDiagram& d) {
  const int n = d.size();
  const int m = d.alphabet();
  auto id = [n](int x, int y) { return x * n + y; };
  std::vector<std::vector<int>> succ(n * n);
  std::vector<std::vector<int>> succ_label(n * n);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (x == y) continue;
      for (int k = 1; k <= m; ++k) {
        int x2 = d.step(x, k), y2 = d.step(y, k);
        if (x2 < 0 || y2 < 0 || x2 == y2) continue;
        succ[id(x, y)].push_back(id(x2, y2));
        succ_label[id(x, y)].push_back(k);
      }
    }
  }
  int count = 0;
  std::vector<int> comp = detail::tarjan(succ, count);
  std::vector<int> internal(count, 0);
  for (int v = 0; v < n * n; ++v) {
    for (int w : succ[v]) {
      if (comp[v] == comp[w]) ++internal[comp[v]];
    }
  }
  auto cyclic = [&](int v) { return internal[comp[v]] > 0; };

  AdmissibilityResult r;
  // Labels of a shortest path from src to the first node satisfying goal.
  auto path_to = [&](int src, auto goal) {
    std::vector<int> prev(n * n, -2), prev_label(n * n, 0);
    std::deque<int> queue{src};
    prev[src] = -1;
    int hit = -1;
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      if (goal(v)) {
        hit = v;
        break;
      }
      for (std::size_t i = 0; i < succ[v].size(); ++i) {
        int w = succ[v][i];
        if (prev[w] != -2) continue;
        prev[w] = v;
        prev_label[w] = succ_label[v][i];
        queue.push_back(w);
      }
    }
    std::vector<int> labels;
    if (hit >= 0) {
      for (int u = hit; u != src; u = prev[u]) labels.push_back(prev_label[u]);
      std::reverse(labels.begin(), labels.end());
    }
    return std::pair{hit, labels};
  };

  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q) {
      auto [hit, prefix] = path_to(id(p, q), cyclic);
      if (hit < 0) continue;
      std::vector<int> cycle;
      for (std::size_t i = 0; i < succ[hit].size(); ++i) {
        int w = succ[hit][i];
        if (comp[w] != comp[hit]) continue;
        auto [back, rest] = path_to(w, [&](int u) { return u == hit; });
        if (back < 0) continue;
        cycle.push_back(succ_label[hit][i]);
        cycle.insert(cycle.end(), rest.begin(), rest.end());
        break;
      }
      if (cycle.empty()) throw std::logic_error("admissibility: cyclic node without a cycle");
      r.admissible = false;
      r.p = p;
      r.q = q;
      r.prefix = prefix;
      r.cycle = cycle;
      return r;
    }
  }
  return r;
}

// --------------------------------------------------------- Cycle relations

CycleCapExceeded::CycleCapExceeded(std::size_t cap)
    : SproutError("more than " + std::to_string(cap) +
                  " simple cycles; use classify_address_set, which never enumerates "
                  "cycles") {}

CycleRelation cycle_relations(const IndexDiagram& d, std::size_t cap) {
  const int n = d.size();
  CycleRelation r;
  std::vector<char> on_path(n, 0);
  std::vector<int> path;
  for (int s = 0; s < n; ++s) {
    auto dfs = [&](auto&& self, int v) -> void {
      for (int a : d.out(v)) {
        int w = d.arcs()[a].to;
        if (w < s) continue;
        if (w == s) {
          path.push_back(a);
          if (r.cycles.size() >= cap) throw CycleCapExceeded(cap);
          r.cycles.push_back(path);
          path.pop_back();
          continue;
        }
        if (on_path[w]) continue;
        on_path[w] = 1;
        path.push_back(a);
        self(self, w);
        path.pop_back();
        on_path[w] = 0;
      }
    };
    on_path[s] = 1;
    dfs(dfs, s);
    on_path[s] = 0;
  }

  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (int p = 0; p < n; ++p) {
    std::vector<int> stack{p};
    reach[p][p] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int a : d.out(v)) {
        int w = d.arcs()[a].to;
        if (!reach[p][w]) {
          reach[p][w] = 1;
          stack.push_back(w);
        }
      }
    }
  }
  auto prec = [&](int a, int b) { return reach[a][b] && !reach[b][a]; };

  const int nc = static_cast<int>(r.cycles.size());
  for (const auto& cyc : r.cycles) {
    std::vector<int> vs;
    for (int a : cyc) vs.push_back(d.arcs()[a].from);
    std::sort(vs.begin(), vs.end());
    r.cycle_vertices.push_back(vs);
  }
  auto contains = [&](int c, int v) {
    return std::binary_search(r.cycle_vertices[c].begin(), r.cycle_vertices[c].end(), v);
  };
  for (int p = 0; p < n; ++p) {
    for (int c = 0; c < nc; ++c) {
      if (contains(c, p)) continue;
      for (int v : r.cycle_vertices[c]) {
        if (prec(p, v)) {
          r.vertex_precedes.push_back({p, c});
          break;
        }
      }
    }
  }
  for (int i = 0; i < nc; ++i) {
    for (int j = 0; j < nc; ++j) {
      if (i == j) continue;
      bool disjoint = true, i_before_j = false, link = false;
      for (int a : r.cycle_vertices[i]) {
        for (int b : r.cycle_vertices[j]) {
          if (a == b) disjoint = false;
          if (prec(a, b)) i_before_j = true;
          if (reach[a][b] && reach[b][a]) link = true;
        }
      }
      if (disjoint && i_before_j) r.precedes.push_back({i, j});
      if (i < j && link) r.linked.push_back({i, j});
    }
  }
  for (int i = 0; i < nc; ++i) {
    for (int j = i + 1; j < nc; ++j) {
      auto has = [&](const auto& v, std::pair<int, int> x) {
        return std::find(v.begin(), v.end(), x) != v.end();
      };
      if (!has(r.linked, {i, j}) && !has(r.precedes, {i, j}) &&
          !has(r.precedes, {j, i})) {
        r.independent.push_back({i, j});
      }
    }
  }
  return r;
}

}  // namespace sprout
