#pragma once

#include <string>

#include "sprout/main_tree.hpp"
#include "sprout/sprout.hpp"

namespace sprout {

/// DOT of the index diagram: arc p -> q labeled k for S_k(q) = p.
std::string index_diagram_dot(const Sprout& s);

/// DOT of G_T. V_Q vertices are named by their subsets, V_B and V_P by the
/// vertex names; E_B and E_P arcs are dashed.
std::string transformation_graph_dot(const Sprout& s, const TransformationGraph& g);

}  // namespace sprout
