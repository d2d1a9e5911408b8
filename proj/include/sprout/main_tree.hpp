#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sprout/addressing.hpp"
#include "sprout/phi.hpp"
#include "sprout/sprout.hpp"

namespace sprout {

/// The labeled digraph G_T. Vertex 0 of vq is P itself whenever #P >= 3.
struct TransformationGraph {
  struct QArc {
    int from = 0;  // vq index
    int to = 0;    // vq index
    int label = 0; // white index
  };
  std::vector<BoundarySubset> vq;
  std::vector<int> vb;                     // black indices, deg >= 3
  std::vector<int> vp;                     // P positions, deg >= 2
  std::vector<QArc> eq;                    // sorted by (from, label)
  std::vector<std::pair<int, int>> eb;     // (vq index, black index)
  std::vector<std::pair<int, int>> ep;     // (vq index, P position)

  bool empty() const { return vq.empty(); }
  std::vector<int> out_q(int v) const;  // eq arc indices leaving v
  /// Vertices of vq lying on a cycle of eq arcs.
  std::vector<char> cyclic() const;
};

/// Throws PreconditionError unless s is correct and regular.
TransformationGraph transformation_graph(const Sprout& s);

enum class WalkKind { OmegaQ, OmegaB, OmegaP };

struct GTWalk {
  WalkKind kind = WalkKind::OmegaQ;
  std::vector<int> labels;  // finite walks: the eq labels
  Address address;          // OmegaQ only
  int terminal = -1;        // black index (OmegaB) or P position (OmegaP)
  int last = 0;             // vq vertex the terminal arc leaves from
};

std::vector<GTWalk> enumerate_gt_walks(const TransformationGraph& g);

/// A point of K named symbolically.
struct Location {
  enum class Kind { Boundary, Black, Address };
  Kind kind = Kind::Boundary;
  int vertex = -1;         // P position or black index
  std::vector<int> word;   // image S_word(vertex), Black only
  Address address;         // Address only

  static Location boundary(int p) { return {Kind::Boundary, p, {}, {}}; }
  static Location black(int b, std::vector<int> word = {}) {
    return {Kind::Black, b, std::move(word), {}};
  }
  static Location at(Address a) { return {Kind::Address, -1, {}, std::move(a)}; }

  std::string name(const Sprout& s) const;
};

/// Every address of the point. Throws InfiniteAddressSet when the set is
/// infinite.
std::vector<Address> point_addresses(const Sprout& s, const Location& loc);

/// Ord(x, γ̂) by the N_φ formula; std::nullopt when it cannot be decided
/// (infinite address sets).
std::optional<int> order_in_main_tree(const Sprout& s, const Location& loc);

struct OrderInK {
  enum class Kind { Exact, AtLeast, Infinite };
  Kind kind = Kind::Exact;
  long long value = 0;
};

OrderInK order_in_k(const Sprout& s, int p);

struct PointReport {
  std::string location;
  std::vector<std::string> aliases;
  std::vector<Address> addresses;  // the full set, or a sample when infinite
  bool addresses_infinite = false;
  std::vector<std::pair<Address, int>> a_x;  // (α, N_φ(α)) with N_φ > 1
  bool in_boundary = false;
  std::optional<int> ord_main_tree;
  OrderInK ord_in_k;
  std::string classification;  // endpoint | cut point | ramification point | degenerate | unknown
  std::vector<std::string> flags;
  std::string source;  // boundary | omega_q | omega_b | omega_p | critical
  int boundary_position = -1;  // P position when the point is in P
};

struct MainTreeReport {
  TransformationGraph graph;
  std::vector<GTWalk> walks;
  std::vector<PointReport> points;    // boundary points first, then ramification data
  std::vector<PointReport> critical;  // every critical black vertex
};

/// Throws PreconditionError unless s is correct, regular and admissible.
MainTreeReport ramification_report(const Sprout& s);

/// Whether two addresses name the same point of K.
bool same_point(const Sprout& s, const Address& a, const Address& b);

}  // namespace sprout
