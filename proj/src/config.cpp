#include "stokescope/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "stokescope/error.hpp"

namespace stokescope
{

namespace
{

double number(const nlohmann::json &j, const std::string &path)
{
  if (!j.is_number())
  {
    throw ConfigError(path + ": expected a number");
  }
  return j.get<double>();
}

int integer(const nlohmann::json &j, const std::string &path)
{
  if (!j.is_number_integer())
  {
    throw ConfigError(path + ": expected an integer");
  }
  return j.get<int>();
}

std::vector<double> split_numbers(const std::string &s, char sep, const std::string &what)
{
  std::vector<double> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep))
  {
    try
    {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size())
      {
        throw std::invalid_argument(item);
      }
    }
    catch (const std::exception &)
    {
      throw ConfigError(what + ": cannot read '" + item + "' as a number");
    }
  }
  return out;
}

}  // namespace

Potential RunConfig::effective_potential() const
{
  if (delta == 0.0)
  {
    return potential;
  }
  return Potential::step_perturbed(potential, delta, *beta);
}

RunConfig config_from_json(const nlohmann::json &j, RunConfig cfg)
{
  if (!j.is_object())
  {
    throw ConfigError("config: expected a JSON object");
  }
  static const std::set<std::string> known{"potential", "h",    "delta", "beta", "a_min",
                                           "a_max",     "a_step", "grid", "rect", "N",
                                           "out",       "svg",  "E"};
  for (const auto &[key, value] : j.items())
  {
    if (!known.count(key))
    {
      throw ConfigError("config." + key + ": unknown field");
    }
  }
  if (j.contains("potential"))
  {
    try
    {
      cfg.potential = j.at("potential").get<Potential>();
    }
    catch (const ConfigError &e)
    {
      throw ConfigError(std::string("config.") + e.what());
    }
    catch (const nlohmann::json::exception &e)
    {
      throw ConfigError(std::string("config.potential: ") + e.what());
    }
  }
  if (j.contains("h"))
  {
    const auto &h = j.at("h");
    cfg.h.clear();
    if (h.is_array())
    {
      for (std::size_t k = 0; k < h.size(); ++k)
      {
        cfg.h.push_back(number(h[k], "config.h[" + std::to_string(k) + "]"));
      }
    }
    else
    {
      cfg.h.push_back(number(h, "config.h"));
    }
  }
  if (j.contains("delta"))
  {
    cfg.delta = number(j.at("delta"), "config.delta");
  }
  if (j.contains("beta"))
  {
    cfg.beta = number(j.at("beta"), "config.beta");
  }
  if (j.contains("a_min"))
  {
    cfg.a_min = number(j.at("a_min"), "config.a_min");
  }
  if (j.contains("a_max"))
  {
    cfg.a_max = number(j.at("a_max"), "config.a_max");
  }
  if (j.contains("a_step"))
  {
    cfg.a_step = number(j.at("a_step"), "config.a_step");
  }
  if (j.contains("grid"))
  {
    const auto &g = j.at("grid");
    if (g.is_string())
    {
      try
      {
        std::tie(cfg.nx, cfg.ny) = parse_grid(g.get<std::string>());
      }
      catch (const ConfigError &e)
      {
        throw ConfigError(std::string("config.") + e.what());
      }
    }
    else if (g.is_object() && g.contains("nx") && g.contains("ny"))
    {
      cfg.nx = integer(g.at("nx"), "config.grid.nx");
      cfg.ny = integer(g.at("ny"), "config.grid.ny");
    }
    else
    {
      throw ConfigError("config.grid: expected \"NXxNY\" or {\"nx\", \"ny\"}");
    }
  }
  if (j.contains("rect"))
  {
    const auto &r = j.at("rect");
    if (!r.is_array() || r.size() != 4)
    {
      throw ConfigError("config.rect: expected [re_min, re_max, im_min, im_max]");
    }
    cfg.rect = Box{number(r[0], "config.rect[0]"), number(r[1], "config.rect[1]"),
                   number(r[2], "config.rect[2]"), number(r[3], "config.rect[3]")};
  }
  if (j.contains("N"))
  {
    cfg.N = integer(j.at("N"), "config.N");
  }
  if (j.contains("out"))
  {
    if (!j.at("out").is_string())
    {
      throw ConfigError("config.out: expected a string");
    }
    cfg.out = j.at("out").get<std::string>();
  }
  if (j.contains("svg"))
  {
    if (!j.at("svg").is_boolean())
    {
      throw ConfigError("config.svg: expected true or false");
    }
    cfg.svg = j.at("svg").get<bool>();
  }
  if (j.contains("E"))
  {
    const auto &e = j.at("E");
    if (e.is_number())
    {
      cfg.E = cplx(e.get<double>(), 0.0);
    }
    else if (e.is_array() && e.size() == 2)
    {
      cfg.E = cplx(number(e[0], "config.E[0]"), number(e[1], "config.E[1]"));
    }
    else
    {
      throw ConfigError("config.E: expected a number or [re, im]");
    }
  }
  return cfg;
}

RunConfig load_config(const std::string &path)
{
  std::ifstream f(path);
  if (!f)
  {
    throw ConfigError("config: cannot open " + path);
  }
  nlohmann::json j;
  try
  {
    f >> j;
  }
  catch (const nlohmann::json::parse_error &e)
  {
    throw ConfigError("config: " + path + " is not valid JSON (" + e.what() + ")");
  }
  return config_from_json(j);
}

void validate(const RunConfig &cfg)
{
  if (cfg.h.empty())
  {
    throw ConfigError("config.h: at least one value needed");
  }
  for (std::size_t k = 0; k < cfg.h.size(); ++k)
  {
    if (!(cfg.h[k] > 0.0))
    {
      throw ConfigError("config.h[" + std::to_string(k) + "]: must be positive");
    }
  }
  if (!(cfg.a_min < cfg.a_max))
  {
    throw ConfigError("config.a_min: must be less than config.a_max (empty a-range)");
  }
  if (!(cfg.a_step > 0.0))
  {
    throw ConfigError("config.a_step: must be positive");
  }
  if (cfg.nx < 2 || cfg.ny < 2)
  {
    throw ConfigError("config.grid: resolutions must be at least 2");
  }
  if (cfg.rect && !(cfg.rect->re_min < cfg.rect->re_max && cfg.rect->im_min < cfg.rect->im_max))
  {
    throw ConfigError("config.rect: need re_min < re_max and im_min < im_max");
  }
  if (cfg.N < 16)
  {
    throw ConfigError("config.N: must be at least 16");
  }
  if (cfg.delta != 0.0)
  {
    if (!cfg.beta)
    {
      throw ConfigError("config.beta: required when delta is nonzero");
    }
    if (!(*cfg.beta > -1.0 && *cfg.beta < 1.0))
    {
      throw ConfigError("config.beta: must lie in (-1, 1)");
    }
    if (cfg.potential.has_jumps())
    {
      throw ConfigError("config.delta: potential already has jumps");
    }
  }
}

std::pair<int, int> parse_grid(const std::string &s)
{
  const auto x = s.find('x');
  if (x == std::string::npos)
  {
    throw ConfigError("grid: expected NXxNY, got '" + s + "'");
  }
  try
  {
    std::size_t a = 0, b = 0;
    const int nx = std::stoi(s.substr(0, x), &a);
    const int ny = std::stoi(s.substr(x + 1), &b);
    if (a != x || b != s.size() - x - 1)
    {
      throw std::invalid_argument(s);
    }
    return {nx, ny};
  }
  catch (const std::exception &)
  {
    throw ConfigError("grid: expected NXxNY, got '" + s + "'");
  }
}

Box parse_rect(const std::string &s)
{
  const auto v = split_numbers(s, ',', "rect");
  if (v.size() != 4)
  {
    throw ConfigError("rect: expected four numbers re_min,re_max,im_min,im_max");
  }
  return {v[0], v[1], v[2], v[3]};
}

cplx parse_complex(const std::string &s)
{
  const auto v = split_numbers(s, ',', "E");
  if (v.empty() || v.size() > 2)
  {
    throw ConfigError("E: expected re or re,im");
  }
  return {v[0], v.size() == 2 ? v[1] : 0.0};
}

}  // namespace stokescope
