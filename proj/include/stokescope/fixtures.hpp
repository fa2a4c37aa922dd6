#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json_fwd.hpp>

namespace stokescope
{

// STOKESCOPE_FIXTURES if set, else the fixtures/ directory of the source tree.
std::filesystem::path fixture_dir();
nlohmann::json load_fixture(const std::string &name);

}  // namespace stokescope
