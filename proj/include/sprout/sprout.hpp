#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sprout {

class SproutError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for malformed sprout / IFS documents and broken references.
class ParseError : public SproutError {
 public:
  using SproutError::SproutError;
};

/// Raised when an operation's precondition on the sprout does not hold
/// (e.g. a non-regular sprout handed to a regular-only analysis).
class PreconditionError : public SproutError {
 public:
  using SproutError::SproutError;
};

enum class VertexKind : std::uint8_t { White, Black };

struct VertexId {
  VertexKind kind = VertexKind::White;
  int index = 0;

  auto operator<=>(const VertexId&) const = default;
};

/// Edge (w, b) of the bipartite tree together with its label, a boundary
/// point given by its position in the canonical order of P.
struct Edge {
  int white = 0;
  int black = 0;
  int label = 0;

  auto operator<=>(const Edge&) const = default;
};

/// The labeled bipartite tree of a self-similar dendrite with finite
/// boundary. Vertices are dense integers in declaration order; the white
/// with dense index k carries the IFS index k + 1.
///
/// Construction only checks referential integrity. Structural rules (tree
/// shape, label injectivity, correctness, regularity) are reported by
/// validate().
class Sprout {
 public:
  Sprout(std::vector<std::string> whites, std::vector<std::string> blacks,
         std::vector<int> boundary, std::vector<Edge> edges);

  int white_count() const { return static_cast<int>(whites_.size()); }
  int black_count() const { return static_cast<int>(blacks_.size()); }
  int boundary_size() const { return static_cast<int>(boundary_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  const std::string& white_name(int w) const { return whites_.at(w); }
  const std::string& black_name(int b) const { return blacks_.at(b); }
  const std::string& boundary_name(int pos) const {
    return blacks_.at(boundary_.at(pos));
  }
  std::string vertex_name(VertexId v) const {
    return v.kind == VertexKind::White ? white_name(v.index)
                                       : black_name(v.index);
  }
  const std::vector<std::string>& white_names() const { return whites_; }
  const std::vector<std::string>& black_names() const { return blacks_; }

  /// Black indices of P in canonical order.
  std::span<const int> boundary() const { return boundary_; }
  int boundary_black(int pos) const { return boundary_.at(pos); }
  /// Position of a black vertex in P, or -1.
  int boundary_position(int black) const { return boundary_pos_.at(black); }
  bool is_boundary(int black) const { return boundary_pos_.at(black) >= 0; }

  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_.at(e); }
  std::span<const int> white_edges(int w) const { return white_adj_.at(w); }
  std::span<const int> black_edges(int b) const { return black_adj_.at(b); }
  int white_degree(int w) const {
    return static_cast<int>(white_adj_.at(w).size());
  }
  int black_degree(int b) const {
    return static_cast<int>(black_adj_.at(b).size());
  }
  int degree(VertexId v) const {
    return v.kind == VertexKind::White ? white_degree(v.index)
                                       : black_degree(v.index);
  }

  std::optional<int> find_white(std::string_view name) const;
  std::optional<int> find_black(std::string_view name) const;
  std::optional<int> edge_between(int white, int black) const;

  friend bool operator==(const Sprout& a, const Sprout& b) {
    return a.whites_ == b.whites_ && a.blacks_ == b.blacks_ &&
           a.boundary_ == b.boundary_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<std::string> whites_;
  std::vector<std::string> blacks_;
  std::vector<int> boundary_;
  std::vector<int> boundary_pos_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> white_adj_;
  std::vector<std::vector<int>> black_adj_;
};

/// Parses a sprout-document (UTF-8 JSON). Throws ParseError.
Sprout parse_sprout(std::string_view document);
Sprout load_sprout(const std::filesystem::path& path);

/// Serializes to a sprout-document; parse_sprout(to_document(s)) == s.
std::string to_document(const Sprout& s);

}  // namespace sprout
