#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sprout/sprout.hpp"

namespace sprout {

/// Eventually periodic sequence pre·(per)^∞ over the letters 1..m, always
/// held in canonical form (primitive period, shortest preperiod), so that
/// equality of Address values is equality of the sequences.
class Address {
 public:
  Address() = default;
  Address(std::vector<int> preperiod, std::vector<int> period);

  const std::vector<int>& preperiod() const { return pre_; }
  const std::vector<int>& period() const { return per_; }
  int at(std::size_t n) const;

  /// The sequence w·α.
  Address prefixed(std::span<const int> word) const;
  /// Shift by n letters.
  Address suffix(std::size_t n) const;

  /// "j1…jk(i1…il)^∞"; letters are dot-separated when m > 9.
  std::string str(int m = 9) const;
  /// First `count` letters followed by "...".
  std::string expanded(int m = 9, std::size_t count = 9) const;

  friend bool operator==(const Address&, const Address&) = default;
  /// Lexicographic order of the infinite sequences.
  friend std::strong_ordering operator<=>(const Address& a, const Address& b);

 private:
  std::vector<int> pre_;
  std::vector<int> per_;
};

/// Inverse of Address::str; accepts "^∞" or "^inf" after the period.
Address parse_address(std::string_view text);

struct Arc {
  int from = 0;   // P position
  int to = 0;     // P position
  int label = 0;  // white index 1..m

  auto operator<=>(const Arc&) const = default;
};

/// Finite digraph with labeled arcs; out-labels must be injective so that
/// walks from a vertex correspond to label sequences.
struct WalkGraph {
  int n = 0;
  std::vector<Arc> arcs;
  std::vector<std::vector<int>> out;  // arc indices, ascending by label

  /// Sorts arcs by (from, label) and rebuilds `out`.
  void finalize();
};

/// Digraph on P: arc p_i -> p_j labeled k for every edge (w_k, p_i) with
/// label p_j, i.e. S_k(p_j) = p_i. Infinite walks from p are the addresses
/// of p.
class IndexDiagram {
 public:
  explicit IndexDiagram(const Sprout& s);

  int size() const { return n_; }
  int alphabet() const { return m_; }
  std::span<const Arc> arcs() const { return g_.arcs; }
  const WalkGraph& graph() const { return g_; }
  /// Arc indices leaving p, ascending by label.
  std::span<const int> out(int p) const { return g_.out[p]; }
  std::span<const int> in(int p) const { return in_[p]; }
  /// Target of the arc leaving p with the given label, or -1.
  int step(int p, int label) const;
  const std::string& name(int p) const { return names_[p]; }

 private:
  int n_ = 0;
  int m_ = 0;
  WalkGraph g_;
  std::vector<std::vector<int>> in_;
  std::vector<std::vector<int>> step_;  // [p][label] -> target or -1
  std::vector<std::string> names_;
};

inline IndexDiagram index_diagram(const Sprout& s) { return IndexDiagram(s); }

struct Walk {
  int start = 0;
  std::vector<int> arcs;  // arc indices
};

/// Label sequence of a finite walk. Throws std::invalid_argument when the
/// arcs are not head-to-tail.
std::vector<int> walk_to_multiindex(const IndexDiagram& d, const Walk& w);

/// True iff the label sequence of α can be read from p.
bool is_address_of(const IndexDiagram& d, int p, const Address& a);

/// Vertex reached from p after reading `word`, or -1.
int read_word(const IndexDiagram& d, int p, std::span<const int> word);

enum class Cardinality { Finite, CountablyInfinite, Uncountable };

struct AddressSetClass {
  Cardinality kind = Cardinality::Finite;
  long long count = 0;          // Finite only
  bool boundary_less = false;   // Finite(0)
  std::vector<int> witness;     // P positions; meaning depends on kind
  std::string explanation;
};

std::string to_string(const AddressSetClass& c);

AddressSetClass classify_address_set(const IndexDiagram& d, int p);
AddressSetClass classify_walks(const WalkGraph& g, int v);

class InfiniteAddressSet : public SproutError {
 public:
  InfiniteAddressSet(int point, AddressSetClass cls);
  int point;
  AddressSetClass cls;
};

/// All addresses of p, sorted. Throws InfiniteAddressSet unless the
/// class is Finite.
std::vector<Address> enumerate_addresses(const IndexDiagram& d, int p);
std::vector<Address> enumerate_walks(const WalkGraph& g, int v);

struct AdmissibilityResult {
  bool admissible = true;
  int p = -1;
  int q = -1;
  std::vector<int> prefix;  // label path from (p,q) into the cycle
  std::vector<int> cycle;   // cycle labels
  /// The common address prefix·(cycle)^∞.
  Address shared() const { return Address(prefix, cycle); }
};

AdmissibilityResult check_admissibility(const IndexDiagram& d);

struct CycleRelation {
  std::vector<std::vector<int>> cycles;  // arc indices, starting at the min vertex
  std::vector<std::vector<int>> cycle_vertices;
  std::vector<std::pair<int, int>> vertex_precedes;  // (p, cycle)
  std::vector<std::pair<int, int>> precedes;         // (cycle, cycle)
  std::vector<std::pair<int, int>> linked;           // (cycle, cycle), i < j
  std::vector<std::pair<int, int>> independent;      // (cycle, cycle), i < j
};

class CycleCapExceeded : public SproutError {
 public:
  explicit CycleCapExceeded(std::size_t cap);
};

CycleRelation cycle_relations(const IndexDiagram& d, std::size_t cap = 10000);

/// Max over p of the exact count of infinite walks when every point is
/// Finite; std::nullopt otherwise.
std::optional<long long> uniform_bound(const IndexDiagram& d);

/// Strongly connected components of the index diagram (Tarjan). comp[v]
/// numbers components in reverse topological order.
struct SccInfo {
  std::vector<int> comp;
  int count = 0;
  std::vector<int> internal_arcs;
  std::vector<int> vertices;
  bool cyclic(int c) const { return internal_arcs[c] > 0; }
  bool branching(int c) const { return internal_arcs[c] > vertices[c]; }
};

SccInfo strongly_connected(const WalkGraph& g);

}  // namespace sprout
