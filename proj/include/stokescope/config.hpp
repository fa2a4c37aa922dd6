#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "stokescope/potential.hpp"
#include "stokescope/types.hpp"

namespace stokescope
{

struct RunConfig
{
  Potential potential = Potential::ix2();
  std::vector<double> h{0.05};
  double delta = 0.0;
  std::optional<double> beta;
  double a_min = 10.0, a_max = 100.0, a_step = 1.0;
  int nx = 40, ny = 20;
  std::optional<Box> rect;
  int N = 256;
  std::string out = ".";
  bool svg = false;
  std::optional<cplx> E;

  // The potential with the delta/beta step applied, if any.
  Potential effective_potential() const;
};

// Reads the fields present in j on top of the defaults. Errors name the offending field,
// e.g. "config.h[1]: must be positive".
RunConfig config_from_json(const nlohmann::json &j, RunConfig base = {});
RunConfig load_config(const std::string &path);
void validate(const RunConfig &cfg);

// "40x20"
std::pair<int, int> parse_grid(const std::string &s);
// "a,b,c,d" as re_min, re_max, im_min, im_max
Box parse_rect(const std::string &s);
// "re,im" or "re"
cplx parse_complex(const std::string &s);

}  // namespace stokescope
