#include "stokescope/fixtures.hpp"

#include <cstdlib>
#include <fstream>

#include <nlohmann/json.hpp>

#include "stokescope/error.hpp"

namespace stokescope
{

std::filesystem::path fixture_dir()
{
  if (const char *env = std::getenv("STOKESCOPE_FIXTURES"); env && *env)
  {
    return env;
  }
  return STOKESCOPE_FIXTURE_DIR;
}

nlohmann::json load_fixture(const std::string &name)
{
  const auto path = fixture_dir() / name;
  std::ifstream in(path);
  if (!in)
  {
    throw ConfigError("cannot open fixture " + path.string());
  }
  try
  {
    return nlohmann::json::parse(in);
  }
  catch (const nlohmann::json::exception &e)
  {
    throw ConfigError("fixture " + path.string() + ": " + e.what());
  }
}

}  // namespace stokescope
