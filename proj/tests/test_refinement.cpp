#include "doctest.h"
#include "fixtures.hpp"
#include "sprout/refinement.hpp"
#include "sprout/validate.hpp"

using namespace sprout;

namespace {

// Vicsek with every index k in names replaced by k+1 (mod 4), w5 fixed.
std::string rotate(const std::string& name) {
  if (name == "w5") return name;
  int k = name.back() - '0';
  return name.substr(0, name.size() - 1) + std::to_string(k % 4 + 1);
}

Sprout renamed(const Sprout& s, std::string (*f)(const std::string&)) {
  std::vector<std::string> w, b;
  for (const auto& n : s.white_names()) w.push_back(f(n));
  for (const auto& n : s.black_names()) b.push_back(f(n));
  std::vector<int> p(s.boundary().begin(), s.boundary().end());
  std::vector<Edge> e(s.edges().begin(), s.edges().end());
  return Sprout(w, b, p, e);
}

// The four quarters of [0,1]: contacts a = 1/4, c = 1/2, b = 3/4.
Sprout quarters() {
  return parse_sprout(R"({
    "whites": ["11", "12", "21", "22"],
    "blacks": ["p1", "p2", "a", "c", "b"],
    "boundary": ["p1", "p2"],
    "edges": [
      {"w": "11", "b": "p1", "label": "p1"}, {"w": "11", "b": "a", "label": "p2"},
      {"w": "12", "b": "a", "label": "p1"}, {"w": "12", "b": "c", "label": "p2"},
      {"w": "21", "b": "c", "label": "p1"}, {"w": "21", "b": "b", "label": "p2"},
      {"w": "22", "b": "b", "label": "p1"}, {"w": "22", "b": "p2", "label": "p2"}]})");
}

}  // namespace

TEST_CASE("square of interval2 is the subdivision into quarters") {
  Sprout sq = square(fixture("interval2"));
  CHECK(sq.white_count() == 4);
  CHECK(sq.black_count() == 5);
  CHECK(sq.white_name(1) == "w1×w2");
  auto r = validate(sq);
  CHECK(r.is_correct);
  CHECK(r.critical_set.size() == 3);
  auto iso = isomorphic(sq, quarters());
  REQUIRE(iso);
  // up to the reflection x -> 1 - x
  auto q = iso->whites.at("w1×w2");
  CHECK((q == "12" || q == "21"));
  CHECK(iso->blacks.at("c") == "c");
}

TEST_CASE("square of vicsek5") {
  Sprout sq = square(fixture("vicsek5"));
  CHECK(sq.white_count() == 25);
  CHECK(sq.edge_count() == 60);
  // a tree: #E = #W + #B - 1
  CHECK(sq.black_count() == 60 - 25 + 1);
  auto r = validate(sq);
  CHECK(r.structural_ok);
  CHECK(r.is_correct);
  CHECK(r.critical_set.size() == 24);
}

TEST_CASE("squares of the figure sprouts are correct") {
  for (const char* f : {"fig1", "fig4", "fig6", "fig7"}) {
    CHECK_MESSAGE(validate(square(fixture(f))).is_correct, f);
  }
}

TEST_CASE("iterate_square") {
  Sprout s = fixture("interval2");
  CHECK(iterate_square(s, 0) == s);
  CHECK(iterate_square(s, 2).white_count() == 16);
  CHECK(iterate_square(fixture("vicsek5"), 1).white_count() == 25);
  CHECK_THROWS_AS(iterate_square(fixture("vicsek5"), 2, 100), SizeCapExceeded);
  CHECK(validate(iterate_square(s, 3)).is_correct);
}

TEST_CASE("canonical forms") {
  Sprout i2 = fixture("interval2");
  // p1 and p2 swapped everywhere
  Sprout swapped = parse_sprout(R"({"whites":["w1","w2"],"blacks":["p2","p1","c"],
    "boundary":["p2","p1"],
    "edges":[{"w":"w1","b":"p2","label":"p2"},{"w":"w1","b":"c","label":"p1"},
             {"w":"w2","b":"p1","label":"p1"},{"w":"w2","b":"c","label":"p2"}]})");
  CHECK(canonical_form(i2) == canonical_form(swapped));
  CHECK_FALSE(canonical_form(i2) == canonical_form(fixture("vicsek5")));
  Sprout v = fixture("vicsek5");
  CHECK(canonical_form(v) == canonical_form(renamed(v, rotate)));
}

TEST_CASE("the cyclic renaming of vicsek5 is an automorphism") {
  Sprout v = fixture("vicsek5");
  SproutIsomorphism rot;
  for (const auto& n : v.white_names()) rot.whites[n] = rotate(n);
  for (const auto& n : v.black_names()) rot.blacks[n] = rotate(n);
  for (int p = 0; p < v.boundary_size(); ++p) rot.boundary[v.boundary_name(p)] = rotate(v.boundary_name(p));
  CHECK(verify_isomorphism(v, v, rot));
  rot.blacks["c1"] = "c3";
  rot.blacks["c3"] = "c2";
  CHECK_FALSE(verify_isomorphism(v, v, rot));
}

TEST_CASE("isomorphic returns a verified mapping") {
  auto m = isomorphic(fixture("interval2"), fixture("interval2-relabeled"));
  REQUIRE(m);
  // the reflection is an automorphism, so only the contact is forced
  CHECK(m->blacks.at("c") == "m");
  CHECK(m->boundary.at("p1") == m->blacks.at("p1"));
  CHECK(verify_isomorphism(fixture("interval2"), fixture("interval2-relabeled"), *m));
  CHECK_FALSE(isomorphic(fixture("interval2"), fixture("fig1")));
}

TEST_CASE("an altered label breaks the isomorphism") {
  Sprout v = fixture("vicsek5");
  std::vector<Edge> e(v.edges().begin(), v.edges().end());
  // (w1, c1) labeled q3 becomes q2
  for (auto& x : e) {
    if (x.white == 0 && v.black_name(x.black) == "c1") x.label = v.boundary_position(*v.find_black("q2"));
  }
  Sprout altered(v.white_names(), v.black_names(), {v.boundary().begin(), v.boundary().end()}, e);
  CHECK_FALSE(isomorphic(v, altered));
  CHECK_FALSE(canonical_form(v) == canonical_form(altered));
}
