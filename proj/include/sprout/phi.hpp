#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "sprout/addressing.hpp"
#include "sprout/sprout.hpp"

namespace sprout {

/// Subset of P as a bitmask over the canonical order (#P <= 64).
using BoundarySubset = std::uint64_t;

inline BoundarySubset full_set(int n) {
  return n >= 64 ? ~BoundarySubset{0} : (BoundarySubset{1} << n) - 1;
}
inline int subset_size(BoundarySubset q) { return __builtin_popcountll(q); }
inline bool subset_has(BoundarySubset q, int p) { return (q >> p) & 1; }
std::vector<int> subset_members(BoundarySubset q);
std::string subset_str(const Sprout& s, BoundarySubset q);

/// A total map P -> P.
struct BoundaryMap {
  std::vector<int> table;

  int operator()(int p) const { return table[p]; }
  friend bool operator==(const BoundaryMap&, const BoundaryMap&) = default;
};

BoundaryMap identity_map(int n);
/// (g ∘ f)(p) = g(f(p)).
BoundaryMap compose(const BoundaryMap& g, const BoundaryMap& f);

/// φ_i for the white w_i, i in 1..m: p goes to the label of the edge at
/// w_i on the tree path from p to w_i.
BoundaryMap phi(const Sprout& s, int i);

/// φ_{j_k} ∘ … ∘ φ_{j_1} for word = j_1…j_k.
BoundaryMap phi_compose(const Sprout& s, std::span<const int> word);

BoundarySubset image_subset(const BoundaryMap& m, BoundarySubset q);

/// Minimal subtree Γ_Q of Γ containing the boundary points of Q.
struct Subtree {
  std::vector<int> white_degree;  // degree inside Γ_Q; 0 for vertices outside
  std::vector<int> black_degree;
  std::vector<char> white_in;
  std::vector<char> black_in;
  std::vector<int> edges;

  int degree(VertexId v) const {
    return v.kind == VertexKind::White ? white_degree[v.index] : black_degree[v.index];
  }
};

Subtree steiner_subtree(const Sprout& s, BoundarySubset q);

bool is_full(const Sprout& s, BoundarySubset q);

/// lim #φ_{α|n}(P).
int n_phi(const Sprout& s, const Address& a);

/// #φ_i(P) − #{p ∈ P adjacent to w_i}. Throws PreconditionError unless s
/// is regular.
int complement_components(const Sprout& s, int i);

/// Cached φ tables for one sprout. Safe for concurrent use.
class PhiEngine {
 public:
  explicit PhiEngine(const Sprout& s);

  const Sprout& sprout() const { return *s_; }
  int letters() const { return static_cast<int>(maps_.size()); }
  const BoundaryMap& map(int i) const { return maps_.at(i - 1); }
  BoundarySubset image(int i, BoundarySubset q) const;
  BoundarySubset image(std::span<const int> word, BoundarySubset q) const;
  BoundarySubset all() const { return full_set(s_->boundary_size()); }
  int n_phi(const Address& a) const;

 private:
  const Sprout* s_;
  std::vector<BoundaryMap> maps_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<std::vector<int>, BoundarySubset>, int> memo_;
};

}  // namespace sprout
