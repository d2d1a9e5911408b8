#include "sprout/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"
#include "sprout/validate.hpp"

namespace sprout {

using nlohmann::json;

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

AffineMap AffineMap::after(const AffineMap& g) const {
  AffineMap r;
  r.a = a * g.a + b * g.c;
  r.b = a * g.b + b * g.d;
  r.c = c * g.a + d * g.c;
  r.d = c * g.b + d * g.d;
  r.e = a * g.e + b * g.f + e;
  r.f = c * g.e + d * g.f + f;
  return r;
}

AffineMap AffineMap::inverse() const {
  const double D = det();
  AffineMap r;
  r.a = d / D;
  r.b = -b / D;
  r.c = -c / D;
  r.d = a / D;
  r.e = -(r.a * e + r.b * f);
  r.f = -(r.c * e + r.d * f);
  return r;
}

double AffineMap::norm() const {
  const double t = a * a + b * b + c * c + d * d;
  const double D = det();
  const double disc = std::max(0.0, t * t - 4 * D * D);
  return std::sqrt((t + std::sqrt(disc)) / 2);
}

Point AffineMap::fixed_point() const {
  // (I - L) x = t
  const double p = 1 - a, q = -b, r = -c, s = 1 - d;
  const double D = p * s - q * r;
  return {(s * e - q * f) / D, (p * f - r * e) / D};
}

double PlanarIFS::max_ratio() const {
  double r = 0;
  for (const auto& m : maps) r = std::max(r, m.norm());
  return r;
}

AffineMap PlanarIFS::compose(std::span<const int> word) const {
  AffineMap r{1, 0, 0, 1, 0, 0};
  for (int k : word) r = r.after(maps.at(k - 1));
  return r;
}

Point PlanarIFS::evaluate(const Address& a) const {
  Point x = compose(a.period()).fixed_point();
  return compose(a.preperiod())(x);
}

void check_ifs(const PlanarIFS& ifs) {
  if (ifs.maps.empty() || ifs.maps.size() > 32) {
    throw ParseError("an IFS needs between 1 and 32 maps, got " + std::to_string(ifs.maps.size()));
  }
  for (std::size_t i = 0; i < ifs.maps.size(); ++i) {
    const auto& m = ifs.maps[i];
    for (double v : {m.a, m.b, m.c, m.d, m.e, m.f}) {
      if (!std::isfinite(v)) throw ParseError("map " + std::to_string(i + 1) + ": non-finite coefficient");
    }
    if (!(m.norm() < 1)) throw ParseError("map " + std::to_string(i + 1) + " is not a contraction");
    if (std::abs(m.det()) < 1e-300) throw ParseError("map " + std::to_string(i + 1) + " is not injective");
  }
}

PlanarIFS parse_ifs(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed IFS document: ") + e.what());
  }
  PlanarIFS ifs;
  try {
    if (!doc.is_object() || !doc.contains("maps") || !doc["maps"].is_array()) {
      throw ParseError("IFS document needs a \"maps\" array");
    }
    for (const auto& m : doc["maps"]) {
      AffineMap f;
      f.a = m.at("a").get<double>();
      f.b = m.at("b").get<double>();
      f.c = m.at("c").get<double>();
      f.d = m.at("d").get<double>();
      f.e = m.at("e").get<double>();
      f.f = m.at("f").get<double>();
      ifs.maps.push_back(f);
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad IFS map: ") + e.what());
  }
  check_ifs(ifs);
  return ifs;
}

PlanarIFS load_ifs(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_ifs(ss.str());
}

Ball invariant_ball(const PlanarIFS& ifs) {
  Point c{0, 0};
  for (const auto& m : ifs.maps) {
    Point p = m.fixed_point();
    c.x += p.x;
    c.y += p.y;
  }
  c.x /= ifs.size();
  c.y /= ifs.size();
  double r = 0;
  for (const auto& m : ifs.maps) r = std::max(r, distance(m(c), c) / (1 - m.norm()));
  return {c, r};
}

std::vector<Point> attractor_points(const PlanarIFS& ifs, int depth, std::size_t cap) {
  if (depth < 1) throw GeometryError("attractor_points: depth must be at least 1");
  double count = std::pow(static_cast<double>(ifs.size()), depth);
  if (count > static_cast<double>(cap)) {
    throw GeometryError("attractor_points: " + std::to_string(ifs.size()) + "^" +
                        std::to_string(depth) + " points exceed the cap");
  }
  std::vector<Point> pts{ifs.maps[0].fixed_point()};
  for (int k = 0; k < depth; ++k) {
    std::vector<Point> next;
    next.reserve(pts.size() * ifs.maps.size());
    for (const auto& m : ifs.maps) {
      for (Point p : pts) next.push_back(m(p));
    }
    pts = std::move(next);
  }
  return pts;
}

std::string to_string(PairContacts::Verdict v) {
  switch (v) {
    case PairContacts::Verdict::Empty: return "empty";
    case PairContacts::Verdict::Singleton: return "singleton";
    case PairContacts::Verdict::SuspectedNonSingleton: return "suspected-non-singleton";
  }
  return "?";
}

bool IntersectionTable::sip_ok() const {
  return std::none_of(pairs.begin(), pairs.end(), [](const PairContacts& p) {
    return p.verdict == PairContacts::Verdict::SuspectedNonSingleton;
  });
}

namespace {

constexpr std::size_t kPairCap = 200000;

struct Cylinder {
  std::vector<int> word;
  AffineMap map;
  double ratio = 1;
};

struct CylinderPair {
  Cylinder u, v;
  Point mid;
};

struct Refined {
  std::vector<CylinderPair> pairs;
  double linkage = 0;
  bool capped = false;
};

Cylinder child(const PlanarIFS& ifs, const Cylinder& c, int k) {
  Cylinder r;
  r.word = c.word;
  r.word.push_back(k);
  r.map = c.map.after(ifs.maps[k - 1]);
  r.ratio = r.map.norm();
  return r;
}

Refined refine_pair(const PlanarIFS& ifs, const Ball& ball, int i, int j, int depth, double tol) {
  const int m = ifs.size();
  Cylinder root;
  root.map = AffineMap{1, 0, 0, 1, 0, 0};
  auto meets = [&](const Cylinder& a, const Cylinder& b) {
    return distance(a.map(ball.center), b.map(ball.center)) <=
           (a.ratio + b.ratio) * ball.radius + tol;
  };
  std::vector<std::pair<Cylinder, Cylinder>> cur;
  Cylinder ci = child(ifs, root, i), cj = child(ifs, root, j);
  if (meets(ci, cj)) cur.push_back({ci, cj});
  Refined out;
  for (int level = 1; level < depth && !cur.empty(); ++level) {
    std::vector<std::pair<Cylinder, Cylinder>> next;
    for (const auto& [a, b] : cur) {
      for (int k = 1; k <= m; ++k) {
        Cylinder ak = child(ifs, a, k);
        for (int l = 1; l <= m; ++l) {
          Cylinder bl = child(ifs, b, l);
          if (meets(ak, bl)) next.push_back({ak, bl});
        }
      }
      if (next.size() > kPairCap) {
        out.capped = true;
        break;
      }
    }
    cur = std::move(next);
    if (out.capped) break;
  }
  double rmax = 0;
  for (const auto& [a, b] : cur) {
    Point pa = a.map(ball.center), pb = b.map(ball.center);
    out.pairs.push_back({a, b, {(pa.x + pb.x) / 2, (pa.y + pb.y) / 2}});
    rmax = std::max(rmax, (a.ratio + b.ratio) * ball.radius);
  }
  out.linkage = 2 * rmax + tol;
  return out;
}

std::vector<std::vector<int>> cluster(const std::vector<CylinderPair>& pairs, double h) {
  const int n = static_cast<int>(pairs.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  // sweep on x to keep the pair count manageable
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return pairs[a].mid.x < pairs[b].mid.x || (pairs[a].mid.x == pairs[b].mid.x && a < b);
  });
  for (int s = 0; s < n; ++s) {
    for (int t = s + 1; t < n && pairs[order[t]].mid.x - pairs[order[s]].mid.x <= h; ++t) {
      if (distance(pairs[order[s]].mid, pairs[order[t]].mid) <= h) {
        int a = find(order[s]), b = find(order[t]);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::map<int, std::vector<int>> groups;
  for (int x = 0; x < n; ++x) groups[find(x)].push_back(x);
  std::vector<std::vector<int>> out;
  for (auto& [r, g] : groups) out.push_back(std::move(g));
  return out;
}

Point centroid(const std::vector<CylinderPair>& pairs, const std::vector<int>& idx) {
  Point c{0, 0};
  for (int k : idx) {
    c.x += pairs[k].mid.x;
    c.y += pairs[k].mid.y;
  }
  c.x /= static_cast<double>(idx.size());
  c.y /= static_cast<double>(idx.size());
  return c;
}

double extent(const std::vector<CylinderPair>& pairs, const std::vector<int>& idx) {
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (int k : idx) {
    x0 = std::min(x0, pairs[k].mid.x);
    x1 = std::max(x1, pairs[k].mid.x);
    y0 = std::min(y0, pairs[k].mid.y);
    y1 = std::max(y1, pairs[k].mid.y);
  }
  return std::hypot(x1 - x0, y1 - y0);
}

struct PairDetail {
  PairContacts summary;
  Refined refined;
  std::vector<std::vector<int>> groups;
};

PairDetail analyse_pair(const PlanarIFS& ifs, const Ball& ball, int i, int j, int depth, double tol) {
  PairDetail d;
  d.summary.i = i;
  d.summary.j = j;
  d.refined = refine_pair(ifs, ball, i, j, depth, tol);
  d.summary.cylinder_pairs = d.refined.pairs.size();
  d.groups = cluster(d.refined.pairs, d.refined.linkage);
  for (const auto& g : d.groups) d.summary.clusters.push_back(centroid(d.refined.pairs, g));
  bool spread = false;
  for (const auto& g : d.groups) {
    if (extent(d.refined.pairs, g) > 8 * d.refined.linkage) spread = true;
  }
  if (d.refined.capped || spread || d.groups.size() >= 2) {
    d.summary.verdict = PairContacts::Verdict::SuspectedNonSingleton;
  } else if (d.groups.size() == 1) {
    d.summary.verdict = PairContacts::Verdict::Singleton;
  }
  return d;
}

std::vector<PairDetail> analyse_all(const PlanarIFS& ifs, int depth, double tol) {
  if (depth < 1) throw GeometryError("depth must be at least 1");
  if (!(tol > 0)) throw GeometryError("tol must be positive");
  Ball ball = invariant_ball(ifs);
  std::vector<PairDetail> out;
  for (int i = 1; i <= ifs.size(); ++i) {
    for (int j = i + 1; j <= ifs.size(); ++j) out.push_back(analyse_pair(ifs, ball, i, j, depth, tol));
  }
  return out;
}

// Eventually periodic readings w = pre·per^k·(prefix of per) with k >= 3.
std::vector<Address> periodic_readings(const std::vector<int>& w) {
  const int n = static_cast<int>(w.size());
  std::vector<Address> out;
  for (int l = 1; 3 * l <= n; ++l) {
    int s = n;
    while (s - 1 - l >= 0 && w[s - 1] == w[s - 1 - l]) --s;
    s = std::max(0, s - l);  // w[s..) is l-periodic
    if (n - s < 3 * l) continue;
    std::vector<int> pre(w.begin(), w.begin() + s);
    std::vector<int> per(w.begin() + s, w.begin() + s + l);
    Address a(pre, per);
    if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
  }
  return out;
}

struct Registry {
  struct Entry {
    Point point;
    std::vector<Address> addresses;
    bool boundary = false;
    bool critical = false;
  };
  std::vector<Entry> entries;
  double eps;

  explicit Registry(double eps) : eps(eps) {}

  int find(Point p) const {
    for (std::size_t k = 0; k < entries.size(); ++k) {
      if (distance(entries[k].point, p) <= eps) return static_cast<int>(k);
    }
    return -1;
  }
  int add(Point p, const Address& a) {
    int k = find(p);
    if (k < 0) {
      entries.push_back({p, {}, false, false});
      k = static_cast<int>(entries.size()) - 1;
    }
    auto& as = entries[k].addresses;
    if (std::find(as.begin(), as.end(), a) == as.end()) {
      as.push_back(a);
      std::sort(as.begin(), as.end());
    }
    return k;
  }
};

std::string fmt_point(Point p) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%.9g, %.9g)", p.x, p.y);
  return buf;
}

double sip_margin(const PlanarIFS& ifs, const std::vector<PairDetail>& details) {
  const int m = ifs.size();
  int dc = 1;
  while (std::pow(static_cast<double>(m), dc + 1) <= 4096 && dc < 12) ++dc;
  auto cloud = attractor_points(ifs, dc);
  const std::size_t per = cloud.size() / m;
  Ball ball = invariant_ball(ifs);
  const double exclude = 10 * std::pow(ifs.max_ratio(), dc) * 2 * ball.radius;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& d : details) {
    const Point* a = cloud.data() + (d.summary.i - 1) * per;
    const Point* b = cloud.data() + (d.summary.j - 1) * per;
    for (std::size_t s = 0; s < per; ++s) {
      for (std::size_t t = 0; t < per; ++t) {
        double dist = distance(a[s], b[t]);
        if (dist >= best) continue;
        Point mid{(a[s].x + b[t].x) / 2, (a[s].y + b[t].y) / 2};
        bool near = false;
        for (Point c : d.summary.clusters) near = near || distance(mid, c) <= exclude;
        if (!near) best = dist;
      }
    }
  }
  return best;
}

}  // namespace

IntersectionTable detect_intersections(const PlanarIFS& ifs, int depth, double tol) {
  IntersectionTable t;
  for (auto& d : analyse_all(ifs, depth, tol)) t.pairs.push_back(std::move(d.summary));
  return t;
}

ExtractionResult extract_sprout(const PlanarIFS& ifs, int depth, double tol) {
  auto details = analyse_all(ifs, depth, tol);
  IntersectionTable table;
  for (const auto& d : details) table.pairs.push_back(d.summary);
  for (const auto& p : table.pairs) {
    if (p.verdict == PairContacts::Verdict::SuspectedNonSingleton) {
      throw GeometryError("SIP violation: copies " + std::to_string(p.i) + " and " +
                          std::to_string(p.j) + " appear to meet in more than one point");
    }
  }
  const int m = ifs.size();
  const double eps = 10 * tol;
  Registry reg(eps);

  // symbolic resolution of every contact
  for (const auto& d : details) {
    for (std::size_t g = 0; g < d.groups.size(); ++g) {
      std::vector<std::pair<Address, Point>> side_i, side_j;
      auto collect = [&](const Cylinder& c, std::vector<std::pair<Address, Point>>& out) {
        for (auto& a : periodic_readings(c.word)) {
          bool dup = std::any_of(out.begin(), out.end(), [&](auto& x) { return x.first == a; });
          if (!dup) out.push_back({a, ifs.evaluate(a)});
        }
      };
      for (int k : d.groups[g]) {
        collect(d.refined.pairs[k].u, side_i);
        collect(d.refined.pairs[k].v, side_j);
      }
      std::optional<Point> hit;
      for (auto& [a, pa] : side_i) {
        for (auto& [b, pb] : side_j) {
          if (distance(pa, pb) <= eps && distance(pa, d.summary.clusters[g]) <= d.refined.linkage) {
            if (!hit) hit = pa;
          }
        }
      }
      if (!hit) {
        throw GeometryError("contact of copies " + std::to_string(d.summary.i) + " and " +
                            std::to_string(d.summary.j) + " near " +
                            fmt_point(d.summary.clusters[g]) +
                            ": no preperiodic address found at depth " + std::to_string(depth));
      }
      int k = -1;
      for (auto* side : {&side_i, &side_j}) {
        for (auto& [a, pa] : *side) {
          if (distance(pa, *hit) <= eps) k = reg.add(*hit, a);
        }
      }
      reg.entries[k].critical = true;
    }
  }

  // P = closure of the labels under φ̃, starting from the critical points
  std::vector<int> queue;
  auto label_of = [&](const Address& a) {
    Address rest = a.suffix(1);
    int k = reg.add(ifs.evaluate(rest), rest);
    if (!reg.entries[k].boundary) {
      reg.entries[k].boundary = true;
      queue.push_back(k);
    }
    return k;
  };
  const std::size_t ncrit = reg.entries.size();
  for (std::size_t k = 0; k < ncrit; ++k) {
    auto addrs = reg.entries[k].addresses;
    for (const auto& a : addrs) label_of(a);
  }
  for (std::size_t q = 0; q < queue.size(); ++q) {
    if (queue.size() > 64) throw GeometryError("boundary estimate exceeds 64 points");
    auto addrs = reg.entries[queue[q]].addresses;
    for (const auto& a : addrs) label_of(a);
  }

  // blacks: P first, then the remaining critical points, each by least address
  std::vector<int> pts, crit;
  for (std::size_t k = 0; k < reg.entries.size(); ++k) {
    if (reg.entries[k].boundary) {
      pts.push_back(static_cast<int>(k));
    } else if (reg.entries[k].critical) {
      crit.push_back(static_cast<int>(k));
    }
  }
  auto by_address = [&](int a, int b) {
    return reg.entries[a].addresses.front() < reg.entries[b].addresses.front();
  };
  std::sort(pts.begin(), pts.end(), by_address);
  std::sort(crit.begin(), crit.end(), by_address);
  std::vector<int> black_of(reg.entries.size(), -1);
  std::vector<std::string> blacks, whites;
  std::vector<PointEntry> table_out;
  std::vector<int> boundary;
  for (std::size_t n = 0; n < pts.size(); ++n) {
    black_of[pts[n]] = static_cast<int>(blacks.size());
    boundary.push_back(static_cast<int>(blacks.size()));
    blacks.push_back("p" + std::to_string(n + 1));
  }
  for (std::size_t n = 0; n < crit.size(); ++n) {
    black_of[crit[n]] = static_cast<int>(blacks.size());
    blacks.push_back("c" + std::to_string(n + 1));
  }
  std::vector<int> order = pts;
  order.insert(order.end(), crit.begin(), crit.end());
  std::vector<Edge> edges;
  for (int k : order) {
    const auto& e = reg.entries[k];
    table_out.push_back({blacks[black_of[k]], e.point, e.addresses, e.boundary, e.critical});
    std::set<int> seen;
    for (const auto& a : e.addresses) {
      int w = a.at(0);
      if (!seen.insert(w).second) continue;
      int lab = reg.find(ifs.evaluate(a.suffix(1)));
      if (lab < 0 || !reg.entries[lab].boundary) {
        throw GeometryError("label of " + fmt_point(e.point) + " in copy " + std::to_string(w) +
                            " is not a boundary point");
      }
      edges.push_back({w - 1, black_of[k], static_cast<int>(
                                               std::find(pts.begin(), pts.end(), lab) - pts.begin())});
    }
  }
  std::sort(edges.begin(), edges.end());
  for (int w = 1; w <= m; ++w) whites.push_back("w" + std::to_string(w));
  Sprout s(std::move(whites), std::move(blacks), std::move(boundary), std::move(edges));
  auto report = validate(s);
  if (!report.structural_ok || !report.is_correct) {
    std::string why = report.violations.empty() ? "" : ": " + report.violations.front().message;
    throw GeometryError("extracted sprout is not a correct P-sprout" + why);
  }
  ExtractionResult r{std::move(s), std::move(table_out), std::move(table), tol, depth, 0};
  r.sip_margin = sip_margin(ifs, details);
  return r;
}

namespace {

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                "#17becf", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22"};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s = buf;
  if (s == "-0.000000") s = "0.000000";
  return s;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const PlanarIFS& ifs, const ExtractionResult* result,
                       const RenderOptions& options) {
  const int m = ifs.size();
  int depth = std::max(1, options.depth);
  while (depth > 1 && std::pow(static_cast<double>(m), depth) > 200000) --depth;
  auto cloud = attractor_points(ifs, depth);
  const std::size_t per = cloud.size() / m;

  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  auto grow = [&](Point p) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  };
  for (Point p : cloud) grow(p);
  if (result) {
    for (const auto& e : result->points) grow(e.point);
  }
  double span = std::max({x1 - x0, y1 - y0, 1e-12});
  const double size = options.size;
  const double pad = 0.08 * size;
  const double scale = (size - 2 * pad) / span;
  const double cx = (x0 + x1) / 2, cy = (y0 + y1) / 2;
  auto sx = [&](double x) { return size / 2 + (x - cx) * scale; };
  auto sy = [&](double y) { return size / 2 - (y - cy) * scale; };

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << options.size
    << "\" height=\"" << options.size << "\" viewBox=\"0 0 " << options.size << " "
    << options.size << "\">\n";
  o << "<rect x=\"0\" y=\"0\" width=\"" << options.size << "\" height=\"" << options.size
    << "\" fill=\"white\"/>\n";
  for (int i = 0; i < m; ++i) {
    o << "<g class=\"copy\" id=\"K" << (i + 1) << "\" fill=\"" << kPalette[i % 10] << "\">\n";
    for (std::size_t k = 0; k < per; ++k) {
      Point p = cloud[i * per + k];
      o << "<circle cx=\"" << num(sx(p.x)) << "\" cy=\"" << num(sy(p.y)) << "\" r=\"1.2\"/>\n";
    }
    o << "</g>\n";
  }
  if (result) {
    o << "<g class=\"points\" font-family=\"sans-serif\" font-size=\"12\">\n";
    for (const auto& e : result->points) {
      double x = sx(e.point.x), y = sy(e.point.y);
      if (e.critical) {
        o << "<circle class=\"critical\" cx=\"" << num(x) << "\" cy=\"" << num(y)
          << "\" r=\"4\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
      }
      if (e.boundary) {
        o << "<rect class=\"boundary\" x=\"" << num(x - 3) << "\" y=\"" << num(y - 3)
          << "\" width=\"6\" height=\"6\" fill=\"black\"/>\n";
      }
      o << "<text x=\"" << num(x + 6) << "\" y=\"" << num(y - 6) << "\">" << escape(e.name)
        << "</text>\n";
    }
    o << "</g>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace sprout
