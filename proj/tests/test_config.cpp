#include "doctest.h"

#include <nlohmann/json.hpp>

#include "stokescope/config.hpp"
#include "stokescope/error.hpp"

using namespace stokescope;

namespace
{
std::string message_of(const nlohmann::json &j)
{
  try
  {
    validate(config_from_json(j));
  }
  catch (const ConfigError &e)
  {
    return e.what();
  }
  return {};
}
}  // namespace

TEST_CASE("defaults validate")
{
  const RunConfig cfg;
  CHECK_NOTHROW(validate(cfg));
  CHECK(cfg.potential.coeffs()(2) == cplx(0.0, 1.0));
}

TEST_CASE("fields are read")
{
  const auto cfg = config_from_json(nlohmann::json::parse(R"({
    "potential": {"coeffs": [0, 0, 1]},
    "h": [0.1, 0.05], "delta": 0.1, "beta": 0.3,
    "a_min": 5, "a_max": 20, "a_step": 0.5,
    "grid": "30x10", "rect": [0, 1, 2, 3], "N": 128, "out": "o", "svg": true, "E": [1, 2]
  })"));
  CHECK(cfg.h.size() == 2);
  CHECK(cfg.nx == 30);
  CHECK(cfg.ny == 10);
  CHECK(cfg.rect->im_max == 3.0);
  CHECK(cfg.E == cplx(1.0, 2.0));
  CHECK(cfg.svg);
  const auto p = cfg.effective_potential();
  CHECK(p.jumps().size() == 1);
  CHECK(eval(p, 0.5) - eval(p, -0.5) == cplx(0.0, 0.2));
}

TEST_CASE("validation names the field")
{
  CHECK(message_of({{"h", {0.1, -1}}}) == "config.h[1]: must be positive");
  CHECK(message_of({{"a_min", 5}, {"a_max", 5}}).rfind("config.a_min:", 0) == 0);
  CHECK(message_of({{"delta", 0.1}}) == "config.beta: required when delta is nonzero");
  CHECK(message_of({{"grid", "3x"}}).rfind("config.grid:", 0) == 0);
  CHECK(message_of({{"grid", "1x5"}}) == "config.grid: resolutions must be at least 2");
  CHECK(message_of({{"rect", {1, 2, 3}}}).rfind("config.rect:", 0) == 0);
  CHECK(message_of({{"N", 1.5}}) == "config.N: expected an integer");
  CHECK(message_of({{"potential", {{"coeffs", {{0, 0}, {0}}}}}}) ==
        "config.potential.coeffs[1]: expected [re, im]");
  CHECK(message_of({{"gird", "3x3"}}) == "config.gird: unknown field");
}

TEST_CASE("flag parsers")
{
  CHECK(parse_grid("40x20") == std::pair{40, 20});
  CHECK_THROWS_AS(parse_grid("40by20"), ConfigError);
  const Box b = parse_rect("-2,10,-0.5,2.5");
  CHECK(b.re_min == -2.0);
  CHECK(b.im_max == 2.5);
  CHECK_THROWS_AS(parse_rect("1,2"), ConfigError);
  CHECK(parse_complex("1.5,-2") == cplx(1.5, -2.0));
  CHECK(parse_complex("3") == cplx(3.0, 0.0));
  CHECK_THROWS_AS(parse_complex("x"), ConfigError);
}
