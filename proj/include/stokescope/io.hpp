#pragma once

#include <string>

namespace stokescope
{

// Shortest round-trip form is not used: every value gets 17 significant digits so output is
// byte-stable across runs.
std::string format_double(double v);

void write_text(const std::string &path, const std::string &content);

}  // namespace stokescope
