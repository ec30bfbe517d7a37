#pragma once

// Shared fixture loading for the test binaries. STABLENET_FIXTURE_DIR is
// injected by the build.

#include <stablenet/io.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

inline std::string fixture_path(const std::string& name) {
  return std::string(STABLENET_FIXTURE_DIR) + "/" + name;
}

inline std::string fixture_text(const std::string& name) {
  std::ifstream in(fixture_path(name));
  if (!in) throw std::runtime_error("missing fixture " + fixture_path(name));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline stablenet::lnet load_fixture(const std::string& name) {
  return stablenet::parse_newick(fixture_text(name));
}
