#include "sprout/sprout.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace sprout {

using nlohmann::json;

Sprout::Sprout(std::vector<std::string> whites, std::vector<std::string> blacks,
               std::vector<int> boundary, std::vector<Edge> edges)
    : whites_(std::move(whites)),
      blacks_(std::move(blacks)),
      boundary_(std::move(boundary)),
      edges_(std::move(edges)) {
  std::unordered_map<std::string, int> seen;
  for (const auto& n : whites_) {
    if (!seen.emplace(n, 0).second) throw ParseError("duplicate id '" + n + "'");
  }
  for (const auto& n : blacks_) {
    if (!seen.emplace(n, 0).second) throw ParseError("duplicate id '" + n + "'");
  }
  boundary_pos_.assign(blacks_.size(), -1);
  for (std::size_t i = 0; i < boundary_.size(); ++i) {
    int b = boundary_[i];
    if (b < 0 || b >= black_count()) {
      throw ParseError("boundary entry refers to an unknown black vertex");
    }
    if (boundary_pos_[b] >= 0) {
      throw ParseError("duplicate boundary point '" + blacks_[b] + "'");
    }
    boundary_pos_[b] = static_cast<int>(i);
  }
  white_adj_.resize(whites_.size());
  black_adj_.resize(blacks_.size());
  std::map<std::pair<int, int>, int> pair_seen;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& ed = edges_[e];
    if (ed.white < 0 || ed.white >= white_count() || ed.black < 0 ||
        ed.black >= black_count()) {
      throw ParseError("edge refers to an unknown vertex");
    }
    if (ed.label < 0 || ed.label >= boundary_size()) {
      throw ParseError("edge label is not a boundary point");
    }
    if (!pair_seen.emplace(std::pair{ed.white, ed.black}, 0).second) {
      throw ParseError("multiple edges between '" + whites_[ed.white] +
                       "' and '" + blacks_[ed.black] + "'");
    }
    white_adj_[ed.white].push_back(static_cast<int>(e));
    black_adj_[ed.black].push_back(static_cast<int>(e));
  }
}

std::optional<int> Sprout::find_white(std::string_view name) const {
  auto it = std::find(whites_.begin(), whites_.end(), name);
  if (it == whites_.end()) return std::nullopt;
  return static_cast<int>(it - whites_.begin());
}

std::optional<int> Sprout::find_black(std::string_view name) const {
  auto it = std::find(blacks_.begin(), blacks_.end(), name);
  if (it == blacks_.end()) return std::nullopt;
  return static_cast<int>(it - blacks_.begin());
}

std::optional<int> Sprout::edge_between(int white, int black) const {
  for (int e : white_adj_.at(white)) {
    if (edges_[e].black == black) return e;
  }
  return std::nullopt;
}

namespace {

std::vector<std::string> string_list(const json& doc, const char* key) {
  if (!doc.contains(key)) {
    throw ParseError(std::string("missing field '") + key + "'");
  }
  const json& arr = doc.at(key);
  if (!arr.is_array()) {
    throw ParseError(std::string("field '") + key + "' must be an array");
  }
  std::vector<std::string> out;
  for (const auto& v : arr) {
    if (!v.is_string()) {
      throw ParseError(std::string("field '") + key + "' must hold strings");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

Sprout parse_sprout(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("sprout document must be an object");

  auto whites = string_list(doc, "whites");
  auto blacks = string_list(doc, "blacks");
  auto boundary_names = string_list(doc, "boundary");

  std::unordered_map<std::string, int> white_ix, black_ix;
  for (std::size_t i = 0; i < whites.size(); ++i) {
    white_ix.emplace(whites[i], static_cast<int>(i));
  }
  for (std::size_t i = 0; i < blacks.size(); ++i) {
    black_ix.emplace(blacks[i], static_cast<int>(i));
  }

  std::vector<int> boundary;
  std::unordered_map<std::string, int> boundary_ix;
  for (const auto& name : boundary_names) {
    auto it = black_ix.find(name);
    if (it == black_ix.end()) {
      throw ParseError("dangling reference: boundary point '" + name +
                       "' is not a declared black vertex");
    }
    boundary_ix.emplace(name, static_cast<int>(boundary.size()));
    boundary.push_back(it->second);
  }

  if (!doc.contains("edges") || !doc.at("edges").is_array()) {
    throw ParseError("missing or non-array field 'edges'");
  }
  std::vector<Edge> edges;
  for (const auto& e : doc.at("edges")) {
    if (!e.is_object() || !e.contains("w") || !e.contains("b") ||
        !e.contains("label") || !e.at("w").is_string() ||
        !e.at("b").is_string() || !e.at("label").is_string()) {
      throw ParseError("edge must be an object {w, b, label} of strings");
    }
    auto w = e.at("w").get<std::string>();
    auto b = e.at("b").get<std::string>();
    auto l = e.at("label").get<std::string>();
    auto wi = white_ix.find(w);
    if (wi == white_ix.end()) {
      throw ParseError("dangling reference: white '" + w + "'");
    }
    auto bi = black_ix.find(b);
    if (bi == black_ix.end()) {
      throw ParseError("dangling reference: black '" + b + "'");
    }
    auto li = boundary_ix.find(l);
    if (li == boundary_ix.end()) {
      throw ParseError("label '" + l + "' is not in the declared boundary set");
    }
    edges.push_back({wi->second, bi->second, li->second});
  }
  return Sprout(std::move(whites), std::move(blacks), std::move(boundary),
                std::move(edges));
}

Sprout load_sprout(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_sprout(buf.str());
}

std::string to_document(const Sprout& s) {
  json doc;
  doc["whites"] = s.white_names();
  doc["blacks"] = s.black_names();
  json boundary = json::array();
  for (int b : s.boundary()) boundary.push_back(s.black_name(b));
  doc["boundary"] = boundary;
  json edges = json::array();
  for (const Edge& e : s.edges()) {
    edges.push_back(json{{"w", s.white_name(e.white)},
                         {"b", s.black_name(e.black)},
                         {"label", s.boundary_name(e.label)}});
  }
  doc["edges"] = edges;
  return doc.dump(2) + "\n";
}

}  // namespace sprout
