#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "sprout/addressing.hpp"
#include "sprout/dot.hpp"
#include "sprout/geometry.hpp"
#include "sprout/main_tree.hpp"
#include "sprout/phi.hpp"
#include "sprout/refinement.hpp"
#include "sprout/sprout.hpp"
#include "sprout/validate.hpp"

using nlohmann::json;
using namespace sprout;

namespace {

// exit 1: the analysis answered "no" (invalid, inadmissible, not isomorphic)
struct Verdict : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

std::string yes(bool b) { return b ? "yes" : "no"; }

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

std::string card_name(Cardinality c) {
  switch (c) {
    case Cardinality::Finite: return "finite";
    case Cardinality::CountablyInfinite: return "countably-infinite";
    case Cardinality::Uncountable: return "uncountable";
  }
  return "?";
}

void require_structural(const Sprout& s) {
  auto r = validate(s);
  if (!r.structural_ok) {
    std::string why = r.violations.empty() ? "" : ": " + r.violations.front().message;
    throw Verdict("sprout is not structurally valid" + why);
  }
}

std::vector<std::string> names_of(const Sprout& s, const std::vector<int>& blacks) {
  std::vector<std::string> out;
  for (int b : blacks) out.push_back(s.black_name(b));
  return out;
}

// ---- validate

int cmd_validate(const Sprout& s, const std::string& fmt) {
  auto r = validate(s);
  std::vector<std::string> boundary;
  for (int p : r.sprout_boundary) boundary.push_back(s.boundary_name(p));
  if (fmt == "json") {
    json v = json::array();
    for (const auto& x : r.violations) {
      v.push_back({{"rule", x.rule}, {"witness", x.witness}, {"message", x.message}});
    }
    emit({{"structural_ok", r.structural_ok},
          {"critical_set", names_of(s, r.critical_set)},
          {"sprout_boundary", boundary},
          {"is_correct", r.is_correct},
          {"is_regular", r.is_regular},
          {"violations", v}});
  } else {
    std::cout << "structural: " << (r.structural_ok ? "ok" : "invalid") << "\n";
    std::cout << "critical set: {" << join(names_of(s, r.critical_set), ",") << "}\n";
    std::cout << "sprout boundary: {" << join(boundary, ",") << "}\n";
    std::cout << "correct: " << yes(r.is_correct) << "\n";
    std::cout << "regular: " << yes(r.is_regular) << "\n";
    for (const auto& x : r.violations) {
      std::cout << "violation " << x.rule << " at " << x.witness << ": " << x.message << "\n";
    }
  }
  return r.structural_ok && r.is_correct ? 0 : 1;
}

// ---- addresses / classify

json address_json(const Address& a, int m) {
  return {{"address", a.str(m)}, {"expanded", a.expanded(m)}};
}

int cmd_addresses(const Sprout& s, const std::string& point, const std::string& fmt) {
  require_structural(s);
  IndexDiagram d(s);
  const int m = s.white_count();
  std::vector<int> blacks;
  if (point.empty()) {
    for (int p : s.boundary()) blacks.push_back(p);
  } else {
    auto b = s.find_black(point);
    if (!b) throw ParseError("no black vertex named '" + point + "'");
    blacks.push_back(*b);
  }
  json out = json::array();
  for (int b : blacks) {
    json row{{"name", s.black_name(b)}};
    std::vector<Address> addrs;
    std::optional<AddressSetClass> infinite;
    try {
      addrs = s.is_boundary(b) ? enumerate_addresses(d, s.boundary_position(b))
                               : point_addresses(s, Location::black(b));
    } catch (const InfiniteAddressSet& e) {
      infinite = e.cls;
    }
    if (infinite) {
      row["class"] = card_name(infinite->kind);
      row["explanation"] = infinite->explanation;
      row["addresses"] = json::array();
      if (fmt != "json") {
        std::cout << s.black_name(b) << ": " << to_string(*infinite) << "\n";
      }
    } else {
      row["class"] = "finite";
      json list = json::array();
      for (const auto& a : addrs) list.push_back(address_json(a, m));
      row["addresses"] = list;
      if (fmt != "json") {
        std::cout << s.black_name(b) << ":";
        if (addrs.empty()) std::cout << " (no address)";
        std::cout << "\n";
        for (const auto& a : addrs) std::cout << "  " << a.str(m) << " = " << a.expanded(m) << "\n";
      }
    }
    out.push_back(row);
  }
  if (fmt == "json") emit({{"points", out}});
  return 0;
}

int cmd_classify(const Sprout& s, const std::string& fmt) {
  require_structural(s);
  IndexDiagram d(s);
  json out = json::array();
  for (int p = 0; p < s.boundary_size(); ++p) {
    auto c = classify_address_set(d, p);
    json w = json::array();
    for (int q : c.witness) w.push_back(s.boundary_name(q));
    json row{{"name", s.boundary_name(p)},
             {"class", card_name(c.kind)},
             {"count", c.kind == Cardinality::Finite ? json(c.count) : json(nullptr)},
             {"boundary_less", c.boundary_less},
             {"witness", w},
             {"explanation", c.explanation}};
    out.push_back(row);
    if (fmt != "json") std::cout << s.boundary_name(p) << ": " << to_string(c) << "\n";
  }
  if (fmt == "json") emit({{"points", out}});
  return 0;
}

// ---- admissible

int cmd_admissible(const Sprout& s, const std::string& fmt) {
  require_structural(s);
  IndexDiagram d(s);
  auto r = check_admissibility(d);
  const int m = s.white_count();
  if (fmt == "json") {
    json j{{"admissible", r.admissible}};
    if (!r.admissible) {
      j["witness"] = {{"p", s.boundary_name(r.p)},
                      {"q", s.boundary_name(r.q)},
                      {"shared_address", r.shared().str(m)}};
    }
    emit(j);
  } else if (r.admissible) {
    std::cout << "admissible\n";
  } else {
    std::cout << "inadmissible: " << s.boundary_name(r.p) << " and " << s.boundary_name(r.q)
              << " share the address " << r.shared().str(m) << "\n";
  }
  return r.admissible ? 0 : 1;
}

// ---- phi

int cmd_phi(const Sprout& s, const std::string& fmt) {
  require_structural(s);
  const bool regular = validate(s).is_regular;
  json rows = json::array();
  for (int i = 1; i <= s.white_count(); ++i) {
    auto f = phi(s, i);
    BoundarySubset img = image_subset(f, full_set(s.boundary_size()));
    json map = json::object();
    std::vector<std::string> parts;
    for (int p = 0; p < s.boundary_size(); ++p) {
      map[s.boundary_name(p)] = s.boundary_name(f(p));
      parts.push_back(s.boundary_name(p) + "->" + s.boundary_name(f(p)));
    }
    json row{{"white", s.white_name(i - 1)},
             {"index", i},
             {"map", map},
             {"image", subset_str(s, img)},
             {"image_size", subset_size(img)},
             {"degree", s.white_degree(i - 1)}};
    std::optional<int> comp;
    if (regular) comp = complement_components(s, i);
    row["complement_components"] = comp ? json(*comp) : json(nullptr);
    rows.push_back(row);
    if (fmt != "json") {
      std::cout << "phi_" << i << " (" << s.white_name(i - 1) << "): " << join(parts, " ")
                << "  image " << subset_str(s, img) << " size " << subset_size(img)
                << " degree " << s.white_degree(i - 1);
      if (comp) std::cout << " components " << *comp;
      std::cout << "\n";
    }
  }
  if (fmt == "json") emit({{"maps", rows}});
  return 0;
}

// ---- G_T and report

std::string kind_name(WalkKind k) {
  switch (k) {
    case WalkKind::OmegaQ: return "omega_q";
    case WalkKind::OmegaB: return "omega_b";
    case WalkKind::OmegaP: return "omega_p";
  }
  return "?";
}

json graph_json(const Sprout& s, const TransformationGraph& g) {
  json vq = json::array(), eq = json::array(), eb = json::array(), ep = json::array();
  for (auto q : g.vq) vq.push_back(subset_str(s, q));
  for (const auto& a : g.eq) {
    eq.push_back({{"from", subset_str(s, g.vq[a.from])}, {"to", subset_str(s, g.vq[a.to])}, {"label", a.label}});
  }
  for (auto [q, b] : g.eb) eb.push_back({{"from", subset_str(s, g.vq[q])}, {"to", s.black_name(b)}});
  for (auto [q, p] : g.ep) ep.push_back({{"from", subset_str(s, g.vq[q])}, {"to", s.boundary_name(p)}});
  std::vector<std::string> vp;
  for (int p : g.vp) vp.push_back(s.boundary_name(p));
  return {{"vq", vq}, {"vb", names_of(s, g.vb)}, {"vp", vp}, {"eq", eq}, {"eb", eb}, {"ep", ep}};
}

void check_report_preconditions(const Sprout& s) {
  auto r = validate(s);
  if (!r.structural_ok || !r.is_correct || !r.is_regular) {
    throw Verdict("the analysis needs a correct, regular sprout");
  }
  auto a = check_admissibility(IndexDiagram(s));
  if (!a.admissible) throw Verdict("the sprout is inadmissible");
}

int cmd_gt(const Sprout& s, const std::string& fmt) {
  check_report_preconditions(s);
  auto g = transformation_graph(s);
  if (fmt == "json") {
    emit(graph_json(s, g));
  } else {
    std::cout << transformation_graph_dot(s, g);
  }
  return 0;
}

json order_json(const OrderInK& o) {
  const char* k = o.kind == OrderInK::Kind::Exact     ? "exact"
                  : o.kind == OrderInK::Kind::AtLeast ? "at_least"
                                                      : "infinite";
  return {{"kind", k}, {"value", o.kind == OrderInK::Kind::Infinite ? json(nullptr) : json(o.value)}};
}

json row_json(const PointReport& r, int m) {
  json addrs = json::array();
  for (const auto& a : r.addresses) addrs.push_back(a.str(m));
  json ax = json::array();
  for (const auto& [a, n] : r.a_x) ax.push_back({{"address", a.str(m)}, {"n_phi", n}});
  return {{"location", r.location},
          {"aliases", r.aliases},
          {"address", r.addresses.empty() ? json(nullptr) : json(r.addresses.front().str(m))},
          {"addresses", addrs},
          {"addresses_infinite", r.addresses_infinite},
          {"a_x", ax},
          {"in_boundary", r.in_boundary},
          {"ord_main_tree", r.ord_main_tree ? json(*r.ord_main_tree) : json(nullptr)},
          {"ord_in_k", order_json(r.ord_in_k)},
          {"classification", r.classification},
          {"flags", r.flags},
          {"source", r.source}};
}

std::string row_text(const PointReport& r, int m) {
  std::ostringstream o;
  o << r.location;
  if (!r.aliases.empty()) o << " (= " << join(r.aliases, ", ") << ")";
  o << " [" << r.source << "]: " << r.classification;
  o << ", Ord in main tree " << (r.ord_main_tree ? std::to_string(*r.ord_main_tree) : "?");
  std::vector<std::string> a;
  for (const auto& x : r.addresses) a.push_back(x.str(m));
  o << ", addresses {" << join(a, ", ") << (r.addresses_infinite ? ", ..." : "") << "}";
  for (const auto& f : r.flags) o << " (" << f << ")";
  return o.str();
}

int cmd_report(const Sprout& s, const std::string& fmt) {
  check_report_preconditions(s);
  auto rep = ramification_report(s);
  const int m = s.white_count();
  if (fmt == "text") {
    for (const auto& r : rep.points) std::cout << row_text(r, m) << "\n";
    for (const auto& r : rep.critical) std::cout << row_text(r, m) << "\n";
    return 0;
  }
  json walks = json::array();
  for (const auto& w : rep.walks) {
    json j{{"kind", kind_name(w.kind)}, {"labels", w.labels}};
    if (w.kind == WalkKind::OmegaQ) j["address"] = w.address.str(m);
    if (w.kind == WalkKind::OmegaB) j["terminal"] = s.black_name(w.terminal);
    if (w.kind == WalkKind::OmegaP) j["terminal"] = s.boundary_name(w.terminal);
    walks.push_back(j);
  }
  json points = json::array(), critical = json::array();
  for (const auto& r : rep.points) points.push_back(row_json(r, m));
  for (const auto& r : rep.critical) critical.push_back(row_json(r, m));
  std::vector<std::string> boundary;
  for (int p = 0; p < s.boundary_size(); ++p) boundary.push_back(s.boundary_name(p));
  emit({{"sprout", {{"whites", s.white_count()}, {"blacks", s.black_count()}, {"boundary", boundary}}},
        {"transformation_graph", graph_json(s, rep.graph)},
        {"walks", walks},
        {"points", points},
        {"critical", critical}});
  return 0;
}

// ---- refinement

int cmd_square(const Sprout& s, int n) {
  require_structural(s);
  std::cout << to_document(iterate_square(s, n));
  return 0;
}

int cmd_iso(const Sprout& a, const Sprout& b, const std::string& fmt) {
  require_structural(a);
  require_structural(b);
  auto m = isomorphic(a, b);
  if (fmt == "json") {
    json j{{"isomorphic", m.has_value()}};
    if (m) j["mapping"] = {{"whites", m->whites}, {"blacks", m->blacks}, {"boundary", m->boundary}};
    emit(j);
  } else if (m) {
    std::cout << "isomorphic\n";
    for (const auto& [k, v] : m->whites) std::cout << "  " << k << " -> " << v << "\n";
    for (const auto& [k, v] : m->blacks) std::cout << "  " << k << " -> " << v << "\n";
  } else {
    std::cout << "not isomorphic\n";
  }
  return m ? 0 : 1;
}

// ---- geometry

json point_json(Point p) { return json::array({p.x, p.y}); }

int cmd_extract(const PlanarIFS& ifs, int depth, double tol, bool sprout_only, const std::string& fmt) {
  ExtractionResult r = [&] {
    try {
      return extract_sprout(ifs, depth, tol);
    } catch (const GeometryError& e) {
      throw Verdict(e.what());
    }
  }();
  if (sprout_only) {
    std::cout << to_document(r.sprout);
    return 0;
  }
  const int m = ifs.size();
  if (fmt == "text") {
    for (const auto& p : r.contacts.pairs) {
      if (p.verdict == PairContacts::Verdict::Empty) continue;
      std::cout << "K" << p.i << " & K" << p.j << ": " << to_string(p.verdict) << "\n";
    }
    for (const auto& e : r.points) {
      std::vector<std::string> a;
      for (const auto& x : e.addresses) a.push_back(x.str(m));
      char buf[96];
      std::snprintf(buf, sizeof buf, "(%.9f, %.9f)", e.point.x, e.point.y);
      std::cout << e.name << " " << buf << " " << join(a, " ") << "\n";
    }
    return 0;
  }
  json pts = json::array(), pairs = json::array();
  for (const auto& e : r.points) {
    json a = json::array();
    for (const auto& x : e.addresses) a.push_back(x.str(m));
    pts.push_back({{"name", e.name}, {"point", point_json(e.point)}, {"addresses", a},
                   {"boundary", e.boundary}, {"critical", e.critical}});
  }
  for (const auto& p : r.contacts.pairs) {
    json c = json::array();
    for (auto x : p.clusters) c.push_back(point_json(x));
    pairs.push_back({{"i", p.i}, {"j", p.j}, {"verdict", to_string(p.verdict)}, {"contacts", c}});
  }
  emit({{"sprout", json::parse(to_document(r.sprout))},
        {"points", pts},
        {"contacts", pairs},
        {"diagnostics", {{"tol", r.tol}, {"depth", r.depth},
                         {"sip_margin", std::isfinite(r.sip_margin) ? json(r.sip_margin) : json(nullptr)}}}});
  return 0;
}

int cmd_render(const PlanarIFS& ifs, const std::string& sprout_file, int depth, int size) {
  std::optional<ExtractionResult> r;
  try {
    r = extract_sprout(ifs);
  } catch (const GeometryError& e) {
    std::cerr << "warning: no annotations: " << e.what() << "\n";
  }
  if (!sprout_file.empty()) {
    Sprout hand = load_sprout(sprout_file);
    if (!r) throw Verdict("cannot extract a sprout to match against " + sprout_file);
    auto iso = isomorphic(r->sprout, hand);
    if (!iso) throw Verdict("extracted sprout is not isomorphic to " + sprout_file);
    for (auto& e : r->points) e.name = iso->blacks.at(e.name);
  }
  RenderOptions o;
  o.depth = depth;
  o.size = size;
  std::cout << render_svg(ifs, r ? &*r : nullptr, o);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analysis of self-similar dendrites given by P-sprouts"};
  app.require_subcommand(1);
  std::string format;
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));

  std::string file, file2, point, sprout_file;
  int n = 1, depth = 10, render_depth = 6, size = 480;
  double tol = 1e-9;
  bool sprout_only = false;

  auto sprout_cmd = [&](const char* name, const char* help) {
    auto* c = app.add_subcommand(name, help);
    c->add_option("sprout", file, "Sprout document")->required();
    return c;
  };
  auto* validate_c = sprout_cmd("validate", "Check the sprout rules, correctness and regularity");
  auto* diagram_c = sprout_cmd("diagram", "Index diagram as DOT");
  auto* addresses_c = sprout_cmd("addresses", "Addresses of the boundary points");
  addresses_c->add_option("-p,--point", point, "Only this black vertex");
  auto* classify_c = sprout_cmd("classify", "Cardinality of each boundary address set");
  auto* admissible_c = sprout_cmd("admissible", "Check that distinct boundary points have distinct addresses");
  auto* phi_c = sprout_cmd("phi", "The maps phi_i with image sizes and white degrees");
  auto* gt_c = sprout_cmd("gt", "Transformation graph G_T as DOT");
  auto* report_c = sprout_cmd("report", "Ramification report");
  auto* square_c = sprout_cmd("square", "Sprout of the iterated system");
  square_c->add_option("-n", n, "Number of squarings")->check(CLI::Range(0, 8));
  auto* iso_c = app.add_subcommand("iso", "Decide isomorphism of two sprouts");
  iso_c->add_option("a", file, "First sprout")->required();
  iso_c->add_option("b", file2, "Second sprout")->required();
  auto* extract_c = app.add_subcommand("extract", "Sprout of a planar IFS");
  extract_c->add_option("ifs", file, "IFS document")->required();
  extract_c->add_option("--depth", depth, "Refinement depth")->check(CLI::Range(1, 40));
  extract_c->add_option("--tol", tol, "Contact tolerance")->check(CLI::PositiveNumber);
  extract_c->add_flag("--sprout-only", sprout_only, "Print only the sprout document");
  auto* render_c = app.add_subcommand("render", "SVG picture of the attractor");
  render_c->add_option("ifs", file, "IFS document")->required();
  render_c->add_option("--sprout", sprout_file, "Hand sprout whose names label the points");
  render_c->add_option("--depth", render_depth, "Subdivision depth")->check(CLI::Range(1, 20));
  render_c->add_option("--size", size, "Canvas size in pixels")->check(CLI::Range(64, 4096));
  for (auto* c : {validate_c, diagram_c, addresses_c, classify_c, admissible_c, phi_c, gt_c,
                  report_c, square_c, iso_c, extract_c, render_c}) {
    c->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  auto fmt_or = [&](const char* d) { return format.empty() ? std::string(d) : format; };
  try {
    if (validate_c->parsed()) return cmd_validate(load_sprout(file), fmt_or("text"));
    if (diagram_c->parsed()) {
      Sprout s = load_sprout(file);
      require_structural(s);
      std::cout << index_diagram_dot(s);
      return 0;
    }
    if (addresses_c->parsed()) return cmd_addresses(load_sprout(file), point, fmt_or("text"));
    if (classify_c->parsed()) return cmd_classify(load_sprout(file), fmt_or("text"));
    if (admissible_c->parsed()) return cmd_admissible(load_sprout(file), fmt_or("text"));
    if (phi_c->parsed()) return cmd_phi(load_sprout(file), fmt_or("text"));
    if (gt_c->parsed()) return cmd_gt(load_sprout(file), format);
    if (report_c->parsed()) return cmd_report(load_sprout(file), fmt_or("json"));
    if (square_c->parsed()) return cmd_square(load_sprout(file), n);
    if (iso_c->parsed()) return cmd_iso(load_sprout(file), load_sprout(file2), fmt_or("text"));
    if (extract_c->parsed()) return cmd_extract(load_ifs(file), depth, tol, sprout_only, fmt_or("json"));
    if (render_c->parsed()) return cmd_render(load_ifs(file), sprout_file, render_depth, size);
  } catch (const Verdict& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const SproutError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
