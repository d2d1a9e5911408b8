#pragma once

#include <string>
#include <vector>

#include "sprout/sprout.hpp"

namespace sprout {

struct Violation {
  std::string rule;     // stable id, e.g. "tree.acyclic"
  std::string witness;  // vertex or edge name
  std::string message;
};

struct ValidationReport {
  bool structural_ok = false;
  std::vector<int> critical_set;     // black indices, ascending
  std::vector<int> sprout_boundary;  // P positions, ascending
  bool is_correct = false;
  bool is_regular = false;
  std::vector<Violation> violations;
  // (white, boundary black) pairs where p is directly incident to w.
  std::vector<Edge> degenerate_incidences;
};

ValidationReport validate(const Sprout& s);

/// Least fixed point of b -> {labels on edges at b} starting from C.
std::vector<int> sprout_boundary(const Sprout& s);

}  // namespace sprout
