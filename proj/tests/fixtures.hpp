#pragma once

#include <string>

#include "sprout/geometry.hpp"
#include "sprout/sprout.hpp"

inline sprout::Sprout fixture(const std::string& name) {
  return sprout::load_sprout(std::string(FIXTURE_DIR) + "/" + name + ".json");
}

inline sprout::PlanarIFS ifs_fixture(const std::string& name) {
  return sprout::load_ifs(std::string(FIXTURE_DIR) + "/" + name + ".ifs.json");
}
