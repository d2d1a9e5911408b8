#include "doctest.h"
#include "properties.hpp"

TEST_CASE("property suite over random regular sprouts") {
  auto r = sprout::testing::run_properties(250, 0x5eed);
  INFO(sprout::testing::summary(r));
  for (const auto& m : r.messages) INFO(m);
  CHECK(r.sprouts == 250);
  CHECK(r.total_failures() == 0);
}

TEST_CASE("random sprouts are regular and within the size limits") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 50; ++k) {
    auto s = sprout::testing::random_regular(rng);
    CHECK(s.white_count() <= 8);
    CHECK(s.boundary_size() <= 6);
    CHECK(sprout::validate(s).is_regular);
  }
}
