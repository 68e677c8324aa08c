#pragma once

#include <filesystem>
#include <string>

#include "chainlab/model_io.hpp"

namespace chainlab::testing {

inline std::filesystem::path fixture_path(const std::string& name) {
  return std::filesystem::path(CHAINLAB_FIXTURE_DIR) / name;
}

inline ChainModel load_fixture(const std::string& name) { return load_model(fixture_path(name)); }

}  // namespace chainlab::testing
