#include "sprout/main_tree.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "graph_util.hpp"
#include "sprout/validate.hpp"

namespace sprout {

// ------------------------------------------------------------------- G_T

std::vector<int> TransformationGraph::out_q(int v) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < eq.size(); ++i) {
    if (eq[i].from == v) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<char> TransformationGraph::cyclic() const {
  std::vector<std::vector<int>> succ(vq.size());
  for (const QArc& a : eq) succ[a.from].push_back(a.to);
  int count = 0;
  auto comp = detail::tarjan(succ, count);
  std::vector<int> internal(count, 0);
  for (const QArc& a : eq) {
    if (comp[a.from] == comp[a.to]) ++internal[comp[a.from]];
  }
  std::vector<char> out(vq.size(), 0);
  for (std::size_t v = 0; v < vq.size(); ++v) out[v] = internal[comp[v]] > 0;
  return out;
}

namespace {

void require_regular(const Sprout& s) {
  auto r = validate(s);
  if (!r.structural_ok) throw PreconditionError("sprout is not structurally valid");
  if (!r.is_correct) throw PreconditionError("sprout is not correctly defined");
  if (!r.is_regular) throw PreconditionError("sprout is not regular");
}

}  // namespace

TransformationGraph transformation_graph(const Sprout& s) {
  require_regular(s);
  PhiEngine eng(s);
  TransformationGraph g;
  const int n = s.boundary_size();
  if (n < 3) return g;

  std::map<BoundarySubset, int> index;
  std::deque<BoundarySubset> queue{eng.all()};
  index[eng.all()] = 0;
  g.vq.push_back(eng.all());
  while (!queue.empty()) {
    BoundarySubset q = queue.front();
    queue.pop_front();
    int from = index[q];
    for (int i = 1; i <= s.white_count(); ++i) {
      BoundarySubset t = eng.image(i, q);
      if (subset_size(t) < 3) continue;
      auto [it, fresh] = index.emplace(t, static_cast<int>(g.vq.size()));
      if (fresh) {
        g.vq.push_back(t);
        queue.push_back(t);
      }
      g.eq.push_back({from, it->second, i});
    }
  }
  std::sort(g.eq.begin(), g.eq.end(), [](const auto& a, const auto& b) {
    return std::tie(a.from, a.label) < std::tie(b.from, b.label);
  });

  for (int b = 0; b < s.black_count(); ++b) {
    if (s.black_degree(b) >= 3) g.vb.push_back(b);
  }
  for (int p = 0; p < n; ++p) {
    if (s.black_degree(s.boundary_black(p)) >= 2) g.vp.push_back(p);
  }
  for (std::size_t v = 0; v < g.vq.size(); ++v) {
    BoundarySubset q = g.vq[v];
    Subtree t = steiner_subtree(s, q);
    for (int b : g.vb) {
      int pos = s.boundary_position(b);
      bool in_q = pos >= 0 && subset_has(q, pos);
      if (!in_q && t.black_degree[b] >= 3) g.eb.push_back({static_cast<int>(v), b});
    }
    for (int p : g.vp) {
      if (subset_has(q, p) && t.black_degree[s.boundary_black(p)] >= 2) {
        g.ep.push_back({static_cast<int>(v), p});
      }
    }
  }

  auto cyc = g.cyclic();
  for (std::size_t v = 0; v < g.vq.size(); ++v) {
    int out_eq = static_cast<int>(g.out_q(static_cast<int>(v)).size());
    int out_other = 0;
    for (auto& [q, b] : g.eb) out_other += q == static_cast<int>(v);
    for (auto& [q, p] : g.ep) out_other += q == static_cast<int>(v);
    if (out_eq + out_other == 0) {
      throw std::logic_error("G_T vertex " + subset_str(s, g.vq[v]) +
                             " has no outgoing arc");
    }
    if (cyc[v] && out_eq != 1) {
      throw std::logic_error("cyclic G_T vertex " + subset_str(s, g.vq[v]) + " has " +
                             std::to_string(out_eq) + " outgoing labeled arcs");
    }
  }
  return g;
}

std::vector<GTWalk> enumerate_gt_walks(const TransformationGraph& g) {
  std::vector<GTWalk> out;
  if (g.empty()) return out;
  auto cyc = g.cyclic();
  for (std::size_t v = 0; v < g.vq.size(); ++v) {
    if (cyc[v] && g.out_q(static_cast<int>(v)).size() != 1) {
      throw std::logic_error("cyclic G_T vertex with several outgoing labeled arcs");
    }
  }
  std::vector<std::vector<int>> out_arcs(g.vq.size());
  for (std::size_t i = 0; i < g.eq.size(); ++i) out_arcs[g.eq[i].from].push_back(i);

  std::vector<int> path{0};
  std::vector<int> labels;
  std::vector<int> on_path(g.vq.size(), -1);
  on_path[0] = 0;
  auto dfs = [&](auto&& self, int v) -> void {
    for (auto [q, b] : g.eb) {
      if (q == v) out.push_back({WalkKind::OmegaB, labels, {}, b, v});
    }
    for (auto [q, p] : g.ep) {
      if (q == v) out.push_back({WalkKind::OmegaP, labels, {}, p, v});
    }
    for (int a : out_arcs[v]) {
      int w = g.eq[a].to;
      labels.push_back(g.eq[a].label);
      if (on_path[w] >= 0) {
        std::vector<int> pre(labels.begin(), labels.begin() + on_path[w]);
        std::vector<int> per(labels.begin() + on_path[w], labels.end());
        GTWalk walk{WalkKind::OmegaQ, labels, Address(pre, per), -1, v};
        out.push_back(std::move(walk));
      } else {
        on_path[w] = static_cast<int>(labels.size());
        path.push_back(w);
        self(self, w);
        path.pop_back();
        on_path[w] = -1;
      }
      labels.pop_back();
    }
  };
  dfs(dfs, 0);
  return out;
}

// ------------------------------------------------------------ point data

std::string Location::name(const Sprout& s) const {
  switch (kind) {
    case Kind::Boundary:
      return s.boundary_name(vertex);
    case Kind::Black: {
      if (word.empty()) return s.black_name(vertex);
      std::string w;
      for (std::size_t i = 0; i < word.size(); ++i) {
        if (s.white_count() > 9 && i > 0) w += '.';
        w += std::to_string(word[i]);
      }
      return "S_" + w + "(" + s.black_name(vertex) + ")";
    }
    case Kind::Address:
      return address.str(s.white_count());
  }
  return "?";
}

namespace {

constexpr std::size_t kAddressCap = 4096;

struct Closure {
  std::vector<Address> addresses;
  bool infinite = false;
  std::string why;
};

class Context {
 public:
  explicit Context(const Sprout& s) : s_(s), d_(s), eng_(s) {
    for (int p = 0; p < s.boundary_size(); ++p) {
      classes_.push_back(classify_address_set(d_, p));
      if (classes_.back().kind == Cardinality::Finite) {
        addrs_.push_back(enumerate_addresses(d_, p));
      } else {
        addrs_.push_back({});
      }
    }
  }

  const Sprout& sprout() const { return s_; }
  const IndexDiagram& diagram() const { return d_; }
  const PhiEngine& engine() const { return eng_; }
  const AddressSetClass& cls(int p) const { return classes_[p]; }
  bool finite(int p) const { return classes_[p].kind == Cardinality::Finite; }

  // Adds every address reachable by re-splitting a suffix through a
  // critical black vertex.
  Closure close(std::vector<Address> seeds, Closure c = {}) const {
    std::set<Address> known(c.addresses.begin(), c.addresses.end());
    std::deque<Address> work;
    for (auto& a : seeds) {
      if (known.insert(a).second) work.push_back(a);
    }
    while (!work.empty() && !c.infinite) {
      Address beta = work.front();
      work.pop_front();
      const std::size_t pre = beta.preperiod().size();
      const std::size_t span = pre + beta.period().size();
      for (std::size_t n = 0; n < span; ++n) {
        int k = beta.at(n);
        Address rest = beta.suffix(n + 1);
        for (int e : s_.white_edges(k - 1)) {
          const Edge& ed = s_.edge(e);
          if (s_.black_degree(ed.black) < 2) continue;
          if (!is_address_of(d_, ed.label, rest)) continue;
          for (int e2 : s_.black_edges(ed.black)) {
            const Edge& other = s_.edge(e2);
            if (other.white == ed.white) continue;
            if (n >= pre) {
              c.infinite = true;
              c.why = "a periodic position splits through " + s_.black_name(ed.black);
            }
            if (!finite(other.label)) {
              c.infinite = true;
              c.why = s_.boundary_name(other.label) + " has infinitely many addresses";
              continue;
            }
            std::vector<int> word;
            for (std::size_t i = 0; i < n; ++i) word.push_back(beta.at(i));
            word.push_back(other.white + 1);
            for (const Address& alpha : addrs_[other.label]) {
              Address a = alpha.prefixed(word);
              if (known.insert(a).second) work.push_back(a);
            }
          }
        }
      }
      if (known.size() > kAddressCap) {
        c.infinite = true;
        c.why = "more than " + std::to_string(kAddressCap) + " addresses";
      }
    }
    c.addresses.assign(known.begin(), known.end());
    return c;
  }

  Closure of(const Location& loc) const {
    switch (loc.kind) {
      case Location::Kind::Boundary: {
        Closure c;
        if (!finite(loc.vertex)) {
          c.infinite = true;
          c.why = to_string(cls(loc.vertex));
        } else {
          c.addresses = addrs_[loc.vertex];
        }
        return c;
      }
      case Location::Kind::Black: {
        Closure c;
        std::vector<Address> seeds;
        int b = loc.vertex;
        for (int e : s_.black_edges(b)) {
          const Edge& ed = s_.edge(e);
          if (!finite(ed.label)) {
            c.infinite = true;
            c.why = s_.boundary_name(ed.label) + " has infinitely many addresses";
            continue;
          }
          std::vector<int> word = loc.word;
          word.push_back(ed.white + 1);
          for (const Address& a : addrs_[ed.label]) seeds.push_back(a.prefixed(word));
        }
        if (int p = s_.boundary_position(b); p >= 0) {
          for (const Address& a : addrs_[p]) seeds.push_back(a.prefixed(loc.word));
        }
        return close(std::move(seeds), std::move(c));
      }
      case Location::Kind::Address:
        return close({loc.address});
    }
    return {};
  }

  bool same(const Address& a, const Address& b) const {
    if (a == b) return true;
    std::size_t la = a.period().size(), lb = b.period().size();
    std::size_t limit =
        std::max(a.preperiod().size(), b.preperiod().size()) + std::lcm(la, lb);
    std::size_t n = 0;
    while (n < limit && a.at(n) == b.at(n)) ++n;
    if (n == limit) return true;
    int k = a.at(n), j = b.at(n);
    for (int e : s_.white_edges(k - 1)) {
      int black = s_.edge(e).black;
      auto e2 = s_.edge_between(j - 1, black);
      if (!e2) continue;
      return is_address_of(d_, s_.edge(e).label, a.suffix(n + 1)) &&
             is_address_of(d_, s_.edge(*e2).label, b.suffix(n + 1));
    }
    return false;
  }

  bool in_boundary(const std::vector<Address>& addrs) const {
    for (const Address& a : addrs) {
      for (int p = 0; p < s_.boundary_size(); ++p) {
        if (is_address_of(d_, p, a)) return true;
      }
    }
    return false;
  }

  // A_x for a boundary point with an infinite address set, read off the
  // product of the index diagram with the φ-subset dynamics.
  std::optional<std::vector<Address>> boundary_ax(int p) const {
    std::map<std::pair<int, BoundarySubset>, int> ids;
    std::vector<std::pair<int, BoundarySubset>> states;
    WalkGraph g;
    auto id = [&](int v, BoundarySubset q) {
      auto [it, fresh] = ids.emplace(std::pair{v, q}, static_cast<int>(states.size()));
      if (fresh) states.push_back({v, q});
      return it->second;
    };
    id(p, eng_.all());
    for (std::size_t i = 0; i < states.size(); ++i) {
      auto [v, q] = states[i];
      for (int a : d_.out(v)) {
        const Arc& arc = d_.arcs()[a];
        BoundarySubset t = eng_.image(arc.label, q);
        if (subset_size(t) < 2) continue;
        int to = id(arc.to, t);
        g.arcs.push_back({static_cast<int>(i), to, arc.label});
      }
      if (states.size() > 1u << 16) return std::nullopt;
    }
    g.n = static_cast<int>(states.size());
    g.finalize();
    if (classify_walks(g, 0).kind != Cardinality::Finite) return std::nullopt;
    return enumerate_walks(g, 0);
  }

  // P position when loc names a boundary point itself, else -1.
  int boundary_of(const Location& loc) const {
    if (loc.kind == Location::Kind::Boundary) return loc.vertex;
    if (loc.kind == Location::Kind::Black && loc.word.empty()) {
      return s_.boundary_position(loc.vertex);
    }
    return -1;
  }

  PointReport analyze(const Location& loc, std::string source) const {
    int p = boundary_of(loc);
    if (p >= 0) {
      PointReport r = analyze(s_.boundary_name(p), of(Location::boundary(p)), p,
                              std::move(source));
      if (loc.kind == Location::Kind::Black) r.location = loc.name(s_);
      return r;
    }
    return analyze(loc.name(s_), of(loc), -1, std::move(source));
  }

  PointReport analyze(std::string location, Closure c, int boundary_pos,
                      std::string source) const {
    const bool boundary_point = boundary_pos >= 0;
    PointReport r;
    r.boundary_position = boundary_pos;
    r.location = std::move(location);
    r.source = std::move(source);
    r.addresses = c.addresses;
    r.addresses_infinite = c.infinite;
    r.in_boundary = boundary_point || in_boundary(c.addresses);
    if (c.infinite) r.flags.push_back("infinite address set: " + c.why);

    std::optional<std::vector<Address>> ax;
    if (!c.infinite) {
      ax = std::vector<Address>{};
      for (const Address& a : c.addresses) {
        if (eng_.n_phi(a) > 1) ax->push_back(a);
      }
    } else if (boundary_point) {
      ax = boundary_ax(boundary_pos);
    }
    if (ax) {
      for (const Address& a : *ax) r.a_x.push_back({a, eng_.n_phi(a)});
      int sum = 0;
      for (auto& [a, n] : r.a_x) sum += n - 1;
      if (r.a_x.empty()) {
        r.ord_main_tree = 0;
        r.flags.push_back("degenerate: no address with N_phi > 1");
      } else if (r.a_x.size() > 1) {
        r.ord_main_tree = sum;
      } else {
        r.ord_main_tree = r.in_boundary ? r.a_x[0].second - 1 : r.a_x[0].second;
      }
    } else {
      r.flags.push_back("order in main tree undetermined");
    }

    if (c.infinite) {
      r.ord_in_k = {OrderInK::Kind::Infinite, 0};
    } else {
      r.ord_in_k = {boundary_point ? OrderInK::Kind::Exact : OrderInK::Kind::AtLeast,
                    static_cast<long long>(c.addresses.size())};
    }
    classify(r);
    return r;
  }

  static void classify(PointReport& r) {
    if (!r.ord_main_tree) {
      r.classification = "unknown";
    } else if (*r.ord_main_tree == 0) {
      r.classification = "degenerate";
    } else if (*r.ord_main_tree == 1) {
      r.classification = "endpoint";
    } else if (*r.ord_main_tree == 2) {
      r.classification = "cut point";
    } else {
      r.classification = "ramification point";
    }
  }

  bool same_row(const PointReport& a, const PointReport& b) const {
    if (a.boundary_position >= 0 && a.boundary_position == b.boundary_position) return true;
    for (const Address& x : a.addresses) {
      for (const Address& y : b.addresses) {
        if (same(x, y)) return true;
      }
    }
    return false;
  }

 private:
  const Sprout& s_;
  IndexDiagram d_;
  PhiEngine eng_;
  std::vector<AddressSetClass> classes_;
  std::vector<std::vector<Address>> addrs_;
};

void require_structural(const Sprout& s) {
  if (!validate(s).structural_ok) {
    throw PreconditionError("sprout is not structurally valid");
  }
}

}  // namespace

std::vector<Address> point_addresses(const Sprout& s, const Location& loc) {
  require_structural(s);
  Context ctx(s);
  Closure c = ctx.of(loc);
  if (c.infinite) {
    int p = loc.kind == Location::Kind::Boundary ? loc.vertex : -1;
    AddressSetClass cls;
    if (p >= 0) {
      cls = ctx.cls(p);
    } else {
      cls.kind = Cardinality::CountablyInfinite;
      cls.explanation = c.why;
    }
    throw InfiniteAddressSet(p, cls);
  }
  return c.addresses;
}

std::optional<int> order_in_main_tree(const Sprout& s, const Location& loc) {
  require_structural(s);
  Context ctx(s);
  return ctx.analyze(loc, "").ord_main_tree;
}

OrderInK order_in_k(const Sprout& s, int p) {
  require_structural(s);
  IndexDiagram d(s);
  auto cls = classify_address_set(d, p);
  if (cls.kind != Cardinality::Finite) return {OrderInK::Kind::Infinite, 0};
  return {OrderInK::Kind::Exact, cls.count};
}

bool same_point(const Sprout& s, const Address& a, const Address& b) {
  require_structural(s);
  return Context(s).same(a, b);
}

MainTreeReport ramification_report(const Sprout& s) {
  require_regular(s);
  IndexDiagram d(s);
  if (auto adm = check_admissibility(d); !adm.admissible) {
    throw PreconditionError("sprout is not admissible: " + s.boundary_name(adm.p) +
                            " and " + s.boundary_name(adm.q) + " share " +
                            adm.shared().str(s.white_count()));
  }
  Context ctx(s);
  MainTreeReport rep;
  rep.graph = transformation_graph(s);
  rep.walks = enumerate_gt_walks(rep.graph);

  for (int p = 0; p < s.boundary_size(); ++p) {
    rep.points.push_back(ctx.analyze(Location::boundary(p), "boundary"));
  }
  auto merge = [&](PointReport row) {
    for (PointReport& r : rep.points) {
      if (!ctx.same_row(r, row)) continue;
      if (row.location != r.location &&
          std::find(r.aliases.begin(), r.aliases.end(), row.location) == r.aliases.end()) {
        r.aliases.push_back(row.location);
      }
      return;
    }
    rep.points.push_back(std::move(row));
  };
  for (const GTWalk& w : rep.walks) {
    switch (w.kind) {
      case WalkKind::OmegaQ: {
        merge(ctx.analyze(Location::at(w.address), "omega_q"));
        break;
      }
      case WalkKind::OmegaB: {
        merge(ctx.analyze(Location::black(w.terminal, w.labels), "omega_b"));
        break;
      }
      case WalkKind::OmegaP: {
        int b = s.boundary_black(w.terminal);
        Location loc = Location::black(b, w.labels);
        PointReport row = ctx.analyze(loc, "omega_p");
        if (!row.in_boundary && (!row.ord_main_tree || *row.ord_main_tree < 3)) {
          Subtree t = steiner_subtree(s, rep.graph.vq[w.last]);
          row.ord_main_tree = t.black_degree[b] + 1;
          row.flags.push_back("bound only");
          Context::classify(row);
        }
        merge(std::move(row));
        break;
      }
    }
  }

  for (int b = 0; b < s.black_count(); ++b) {
    if (s.black_degree(b) < 2) continue;
    Location loc = Location::black(b);
    rep.critical.push_back(ctx.analyze(loc, "critical"));
  }
  return rep;
}

}  // namespace sprout
