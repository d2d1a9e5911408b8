#include <thread>

#include "doctest.h"
#include "fixtures.hpp"
#include "sprout/phi.hpp"

using namespace sprout;

namespace {

int pos(const Sprout& s, const char* name) { return s.boundary_position(*s.find_black(name)); }

BoundarySubset subset(const Sprout& s, std::initializer_list<const char*> names) {
  BoundarySubset q = 0;
  for (auto* n : names) q |= BoundarySubset{1} << pos(s, n);
  return q;
}

}  // namespace

TEST_CASE("subset helpers") {
  CHECK(full_set(3) == 0b111);
  CHECK(subset_size(0b1011) == 3);
  CHECK(subset_has(0b100, 2));
  CHECK(subset_members(0b1010) == std::vector<int>{1, 3});
}

TEST_CASE("interval2: both maps are the identity") {
  Sprout s = fixture("interval2");
  CHECK(phi(s, 1) == identity_map(2));
  CHECK(phi(s, 2) == identity_map(2));
}

TEST_CASE("vicsek5 maps") {
  Sprout s = fixture("vicsek5");
  CHECK(phi(s, 5) == identity_map(4));
  // everything except q1 reaches w1 through c1, whose label is q3
  auto f = phi(s, 1);
  CHECK(f(pos(s, "q1")) == pos(s, "q1"));
  CHECK(f(pos(s, "q2")) == pos(s, "q3"));
  CHECK(f(pos(s, "q3")) == pos(s, "q3"));
  CHECK(f(pos(s, "q4")) == pos(s, "q3"));
  CHECK(complement_components(s, 5) == 4);
  CHECK(complement_components(s, 1) == 1);
}

TEST_CASE("fig6: phi_3 by hand") {
  Sprout s = fixture("fig6");
  auto f = phi(s, 3);
  CHECK(f(pos(s, "p1")) == pos(s, "p2"));
  CHECK(f(pos(s, "p2")) == pos(s, "p2"));
  CHECK(f(pos(s, "p3")) == pos(s, "p3"));
  CHECK(f(pos(s, "p4")) == pos(s, "p6"));
  CHECK(f(pos(s, "p5")) == pos(s, "p4"));
  CHECK(f(pos(s, "p6")) == pos(s, "p4"));
}

TEST_CASE("fig6: N_phi values") {
  Sprout s = fixture("fig6");
  CHECK(n_phi(s, Address({}, {3})) == 4);
  CHECK(n_phi(s, Address({2}, {3})) == 3);
  CHECK(n_phi(s, Address({4}, {3})) == 3);
}

TEST_CASE("composition order: the first letter acts first") {
  Sprout s = fixture("fig6");
  auto f = phi_compose(s, std::vector<int>{2, 3});
  CHECK(f == compose(phi(s, 3), phi(s, 2)));
  PhiEngine e(s);
  CHECK(e.image(std::vector<int>{2, 3}, e.all()) == image_subset(f, full_set(6)));
}

TEST_CASE("minimal subtrees and fullness") {
  Sprout s = fixture("fig4");
  // the path from p1 to p3 runs through p2
  CHECK_FALSE(is_full(s, subset(s, {"p1", "p3"})));
  CHECK(is_full(s, subset(s, {"p1", "p2"})));
  auto t = steiner_subtree(s, subset(s, {"p1", "p3"}));
  CHECK(t.black_in[*s.find_black("p2")]);
  CHECK(t.black_degree[*s.find_black("p2")] == 2);
  CHECK(t.black_degree[*s.find_black("p1")] == 1);

  Sprout v = fixture("vicsek5");
  auto whole = steiner_subtree(v, full_set(4));
  CHECK(whole.edges.size() == 12);
  CHECK(whole.white_degree[4] == 4);
}

TEST_CASE("complement_components needs a regular sprout") {
  CHECK_THROWS_AS(complement_components(fixture("fig2R"), 1), PreconditionError);
}

TEST_CASE("PhiEngine is safe to share between threads") {
  Sprout s = fixture("fig6");
  PhiEngine e(s);
  std::vector<int> results(8);
  std::vector<std::thread> ts;
  for (int t = 0; t < 8; ++t) {
    ts.emplace_back([&, t] { results[t] = e.n_phi(Address({t % 2 ? 2 : 4}, {3})); });
  }
  for (auto& t : ts) t.join();
  for (int r : results) CHECK(r == 3);
}
