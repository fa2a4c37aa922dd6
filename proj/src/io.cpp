#include "stokescope/io.hpp"

#include <array>
#include <charconv>
#include <fstream>

#include "stokescope/error.hpp"

namespace stokescope
{

std::string format_double(double v)
{
  std::array<char, 64> buf;
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  return std::string(buf.data(), r.ptr);
}

void write_text(const std::string &path, const std::string &content)
{
  std::ofstream f(path, std::ios::binary);
  if (!f)
  {
    throw ConfigError("cannot write " + path);
  }
  f << content;
}

}  // namespace stokescope
