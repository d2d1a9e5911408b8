#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>

#include "sprout/sprout.hpp"

namespace sprout {

/// Γ²: whites W×W named "u×v", blacks the contact classes of W×B ∪ B.
Sprout square(const Sprout& s);

class SizeCapExceeded : public SproutError {
 public:
  using SproutError::SproutError;
};

/// Γ^{2^n}. Throws SizeCapExceeded when a step would exceed `cap` whites.
Sprout iterate_square(const Sprout& s, int n, std::size_t cap = 100000);

struct CanonicalForm {
  std::string digest;

  friend bool operator==(const CanonicalForm&, const CanonicalForm&) = default;
};

/// Canonical string of the sprout up to renaming of whites and blacks;
/// P may be permuted (labels follow the permutation).
CanonicalForm canonical_form(const Sprout& s);

struct SproutIsomorphism {
  std::map<std::string, std::string> whites;    // name in a -> name in b
  std::map<std::string, std::string> blacks;
  std::map<std::string, std::string> boundary;  // restriction to P
};

/// Explicit isomorphism a -> b, verified edge by edge, or nullopt.
std::optional<SproutIsomorphism> isomorphic(const Sprout& a, const Sprout& b);

/// Checks that m is a label-preserving incidence bijection a -> b.
bool verify_isomorphism(const Sprout& a, const Sprout& b, const SproutIsomorphism& m);

}  // namespace sprout
