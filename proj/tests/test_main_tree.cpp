#include <algorithm>

#include "doctest.h"
#include "expected_graphs.hpp"
#include "fixtures.hpp"
#include "sprout/main_tree.hpp"

using namespace sprout;

namespace {

const PointReport* row(const MainTreeReport& r, const std::string& location) {
  for (const auto* rows : {&r.points, &r.critical}) {
    for (const auto& x : *rows) {
      if (x.location == location) return &x;
    }
  }
  return nullptr;
}

const PointReport* row_with_address(const MainTreeReport& r, const Address& a) {
  for (const auto& x : r.points) {
    if (std::find(x.addresses.begin(), x.addresses.end(), a) != x.addresses.end()) return &x;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("interval2: empty G_T, endpoints of order 1, c of order 2") {
  Sprout s = fixture("interval2");
  auto r = ramification_report(s);
  CHECK(r.graph.empty());
  CHECK(r.walks.empty());
  CHECK(r.points.size() == 2);
  for (const char* p : {"p1", "p2"}) {
    auto* x = row(r, p);
    REQUIRE(x);
    CHECK(x->ord_main_tree == 1);
    CHECK(x->classification == "endpoint");
  }
  auto* c = row(r, "c");
  REQUIRE(c);
  CHECK(c->ord_main_tree == 2);
  CHECK(c->addresses == std::vector<Address>{Address({1}, {2}), Address({2}, {1})});
}

TEST_CASE("vicsek5: one ramification point at (5)^inf of order 4") {
  Sprout s = fixture("vicsek5");
  auto r = ramification_report(s);
  REQUIRE(r.graph.vq.size() == 1);
  CHECK(r.graph.vq[0] == full_set(4));
  REQUIRE(r.graph.eq.size() == 1);
  CHECK(r.graph.eq[0].label == 5);
  CHECK(r.graph.eb.empty());
  CHECK(r.graph.ep.empty());
  REQUIRE(r.walks.size() == 1);
  CHECK(r.walks[0].address == Address({}, {5}));

  auto* a = row_with_address(r, Address({}, {5}));
  REQUIRE(a);
  CHECK(a->ord_main_tree == 4);
  CHECK(a->classification == "ramification point");
  CHECK_FALSE(a->in_boundary);
  for (const char* q : {"q1", "q2", "q3", "q4"}) {
    auto* x = row(r, q);
    REQUIRE(x);
    CHECK(x->ord_main_tree == 1);
  }
  int ramification = 0;
  for (const auto& x : r.points) ramification += x.classification == "ramification point";
  CHECK(ramification == 1);
}

TEST_CASE("vicsek5: c1 has two addresses each with N_phi = 2, order 2") {
  auto r = ramification_report(fixture("vicsek5"));
  auto* c1 = row(r, "c1");
  REQUIRE(c1);
  CHECK(c1->addresses == std::vector<Address>{Address({1}, {3}), Address({5}, {1})});
  REQUIRE(c1->a_x.size() == 2);
  CHECK(c1->a_x[0].second == 2);
  CHECK(c1->a_x[1].second == 2);
  CHECK(c1->ord_main_tree == 2);
}

TEST_CASE("fig6: orders of p2, p3 and the ramification point 4(3)^inf") {
  Sprout s = fixture("fig6");
  auto r = ramification_report(s);
  for (int p = 0; p < s.boundary_size(); ++p) {
    auto* x = row(r, s.boundary_name(p));
    REQUIRE(x);
    CHECK(x->addresses.size() == 1);
    if (s.boundary_name(p) == "p2") {
      CHECK(x->ord_main_tree == 2);
    } else if (s.boundary_name(p) == "p3") {
      CHECK(x->ord_main_tree == 3);
    } else {
      CHECK(x->ord_main_tree == 1);
    }
  }
  auto* a = row_with_address(r, Address({4}, {3}));
  REQUIRE(a);
  CHECK(a->ord_main_tree == 3);
  CHECK_FALSE(a->in_boundary);
  CHECK(a->addresses.size() == 1);
}

TEST_CASE("fig7: four ramification points and the expected G_T") {
  Sprout s = fixture("fig7");
  auto r = ramification_report(s);
  for (const char* text : {"(34)^∞", "2(34)^∞", "(43)^∞", "5(43)^∞"}) {
    auto* x = row_with_address(r, parse_address(text));
    REQUIRE_MESSAGE(x, text);
    CHECK(x->ord_main_tree == 3);
    CHECK(x->addresses.size() == 1);
  }
  CHECK(testing::isomorphic(testing::eq_graph(r.graph), testing::fig7_gt_expected()));
  CHECK(r.graph.eb.empty());
  CHECK(r.graph.ep.empty());
}

TEST_CASE("cyclic G_T vertices have one outgoing arc") {
  auto g = transformation_graph(fixture("fig7"));
  auto cyc = g.cyclic();
  for (int v = 0; v < static_cast<int>(g.vq.size()); ++v) {
    if (cyc[v]) CHECK(g.out_q(v).size() == 1);
  }
}

TEST_CASE("reports need regular, admissible sprouts") {
  CHECK_THROWS_AS(ramification_report(fixture("fig2R")), PreconditionError);
  CHECK_THROWS_AS(ramification_report(fixture("fig3")), PreconditionError);
  CHECK_THROWS_AS(transformation_graph(fixture("fig2L")), PreconditionError);
}

TEST_CASE("same_point identifies the two addresses of a contact") {
  Sprout s = fixture("vicsek5");
  CHECK(same_point(s, Address({1}, {3}), Address({5}, {1})));
  CHECK_FALSE(same_point(s, Address({}, {1}), Address({}, {2})));
  CHECK(same_point(s, Address({}, {5}), Address({}, {5})));
}

TEST_CASE("orders in K of boundary points") {
  Sprout v = fixture("vicsek5");
  auto o = order_in_k(v, 0);
  CHECK(o.kind == OrderInK::Kind::Exact);
  CHECK(o.value == 1);
  Sprout f4 = fixture("fig4");
  CHECK(order_in_k(f4, f4.boundary_position(*f4.find_black("p2"))).kind == OrderInK::Kind::Infinite);
}

TEST_CASE("locations are named symbolically") {
  Sprout s = fixture("interval2");
  CHECK(Location::black(*s.find_black("c"), {1, 2}).name(s) == "S_12(c)");
  CHECK(Location::boundary(1).name(s) == "p2");
  CHECK(Location::at(Address({}, {1})).name(s) == "(1)^∞");
}

TEST_CASE("point addresses of images of vertices") {
  Sprout s = fixture("interval2");
  auto a = point_addresses(s, Location::black(*s.find_black("c"), {1}));
  CHECK(a == std::vector<Address>{Address({1, 1}, {2}), Address({1, 2}, {1})});
}
