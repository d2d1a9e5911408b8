#include "sprout/dot.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>
#include <vector>

#include "sprout/addressing.hpp"

namespace sprout {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string index_diagram_dot(const Sprout& s) {
  IndexDiagram d(s);
  std::ostringstream o;
  o << "digraph index_diagram {\n  rankdir=LR;\n  node [shape=circle];\n";
  std::vector<std::string> nodes;
  for (int p = 0; p < d.size(); ++p) nodes.push_back(d.name(p));
  std::sort(nodes.begin(), nodes.end());
  for (const auto& n : nodes) o << "  " << quote(n) << ";\n";
  std::vector<std::tuple<std::string, std::string, int>> arcs;
  for (const Arc& a : d.arcs()) arcs.emplace_back(d.name(a.from), d.name(a.to), a.label);
  std::sort(arcs.begin(), arcs.end());
  for (const auto& [f, t, l] : arcs) {
    o << "  " << quote(f) << " -> " << quote(t) << " [label=" << quote(std::to_string(l)) << "];\n";
  }
  o << "}\n";
  return o.str();
}

std::string transformation_graph_dot(const Sprout& s, const TransformationGraph& g) {
  auto qname = [&](int v) { return "Q" + subset_str(s, g.vq[v]); };
  std::ostringstream o;
  o << "digraph G_T {\n  rankdir=LR;\n";
  std::vector<std::string> nodes;
  for (std::size_t v = 0; v < g.vq.size(); ++v) nodes.push_back(quote(qname(static_cast<int>(v))) + " [shape=box]");
  for (int b : g.vb) nodes.push_back(quote("B:" + s.black_name(b)) + " [shape=circle]");
  for (int p : g.vp) nodes.push_back(quote("P:" + s.boundary_name(p)) + " [shape=doublecircle]");
  std::sort(nodes.begin(), nodes.end());
  for (const auto& n : nodes) o << "  " << n << ";\n";
  std::vector<std::string> arcs;
  for (const auto& a : g.eq) {
    arcs.push_back(quote(qname(a.from)) + " -> " + quote(qname(a.to)) +
                   " [label=" + quote(std::to_string(a.label)) + "]");
  }
  for (auto [q, b] : g.eb) {
    arcs.push_back(quote(qname(q)) + " -> " + quote("B:" + s.black_name(b)) + " [style=dashed]");
  }
  for (auto [q, p] : g.ep) {
    arcs.push_back(quote(qname(q)) + " -> " + quote("P:" + s.boundary_name(p)) + " [style=dashed]");
  }
  std::sort(arcs.begin(), arcs.end());
  for (const auto& a : arcs) o << "  " << a << ";\n";
  o << "}\n";
  return o.str();
}

}  // namespace sprout
