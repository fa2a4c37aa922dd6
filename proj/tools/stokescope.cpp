#include <array>
#include <charconv>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "stokescope/config.hpp"
#include "stokescope/curves.hpp"
#include "stokescope/error.hpp"
#include "stokescope/io.hpp"
#include "stokescope/pseudospec.hpp"
#include "stokescope/solver.hpp"
#include "stokescope/stokes.hpp"
#include "stokescope/svg.hpp"
#include "stokescope/verify.hpp"

using namespace stokescope;
namespace fs = std::filesystem;

namespace
{

struct Flags
{
  std::string config;
  std::vector<double> h;
  std::optional<double> delta, beta, a_min, a_max, a_step;
  std::string grid, rect, E, out, filter;
  std::optional<int> N;
  bool svg = false;
};

RunConfig resolve(const Flags &f)
{
  RunConfig cfg = f.config.empty() ? RunConfig{} : load_config(f.config);
  if (!f.h.empty())
  {
    cfg.h = f.h;
  }
  if (f.delta)
  {
    cfg.delta = *f.delta;
  }
  if (f.beta)
  {
    cfg.beta = *f.beta;
  }
  if (f.a_min)
  {
    cfg.a_min = *f.a_min;
  }
  if (f.a_max)
  {
    cfg.a_max = *f.a_max;
  }
  if (f.a_step)
  {
    cfg.a_step = *f.a_step;
  }
  if (!f.grid.empty())
  {
    std::tie(cfg.nx, cfg.ny) = parse_grid(f.grid);
  }
  if (!f.rect.empty())
  {
    cfg.rect = parse_rect(f.rect);
  }
  if (!f.E.empty())
  {
    cfg.E = parse_complex(f.E);
  }
  if (f.N)
  {
    cfg.N = *f.N;
  }
  if (!f.out.empty())
  {
    cfg.out = f.out;
  }
  cfg.svg = cfg.svg || f.svg;
  validate(cfg);
  fs::create_directories(cfg.out);
  return cfg;
}

// Shortest round-trip form, for file names.
std::string shortest(double v)
{
  std::array<char, 32> buf;
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), r.ptr);
}

std::string out_path(const RunConfig &cfg, const std::string &name)
{
  return (fs::path(cfg.out) / name).string();
}

void emit(const RunConfig &cfg, const std::string &name, const std::string &content)
{
  const auto path = out_path(cfg, name);
  write_text(path, content);
  std::cout << "wrote " << path << "\n";
}

std::vector<SpectralCurve> limit_curves(const Potential &p, const RunConfig &cfg)
{
  std::vector<SpectralCurve> out;
  for (const auto &pc : p.pieces())
  {
    out.push_back(trace_curve(p, pc.lo, pc.hi, pc.shift_im, cfg.a_min, cfg.a_max, cfg.a_step));
  }
  return out;
}

Box bounding(const std::vector<std::vector<cplx>> &sets, double pad)
{
  Box b{1e300, -1e300, 1e300, -1e300};
  for (const auto &s : sets)
  {
    for (cplx z : s)
    {
      b.re_min = std::min(b.re_min, z.real());
      b.re_max = std::max(b.re_max, z.real());
      b.im_min = std::min(b.im_min, z.imag());
      b.im_max = std::max(b.im_max, z.imag());
    }
  }
  const double dx = pad * std::max(1e-3, b.re_max - b.re_min);
  const double dy = pad * std::max(1e-3, b.im_max - b.im_min);
  return {b.re_min - dx, b.re_max + dx, b.im_min - dy, b.im_max + dy};
}

const std::array<const char *, 4> palette{"#1f3a93", "#c0392b", "#27ae60", "#8e44ad"};

int cmd_limit_curve(const RunConfig &cfg)
{
  const Potential p = cfg.effective_potential();
  const auto curves = limit_curves(p, cfg);
  nlohmann::json meta = nlohmann::json::array();
  std::vector<std::vector<cplx>> all;
  for (std::size_t k = 0; k < curves.size(); ++k)
  {
    emit(cfg, "curve_" + std::to_string(k) + ".csv", curve_csv(curves[k]));
    meta.push_back(curves[k]);
    meta.back().erase("samples");
    all.push_back(curves[k].samples);
  }
  emit(cfg, "limit_curve.json", meta.dump(2) + "\n");
  if (cfg.svg)
  {
    Svg svg(bounding(all, 0.05));
    for (std::size_t k = 0; k < all.size(); ++k)
    {
      svg.polyline(all[k], palette[k % palette.size()], 1.5);
    }
    svg.axes();
    emit(cfg, "limit_curve.svg", svg.str());
  }
  return 0;
}

int cmd_eigs(const RunConfig &cfg)
{
  const Potential p = cfg.effective_potential();
  EigenOptions opt;
  opt.N = cfg.N;
  opt.window = cfg.rect.value_or(Box{0.0, 30.0, -5.0, 5.0});
  int failures = 0;
  std::vector<EigenvalueRecord> all;
  for (double h : cfg.h)
  {
    const auto recs = eigenvalues(p, h, opt);
    for (const auto &r : recs)
    {
      all.push_back(r);
      try
      {
        all.push_back(refine(p, h, r.E));
      }
      catch (const Error &e)
      {
        ++failures;
        std::cerr << "eigenvalue " << format_double(r.E.real()) << "+" << format_double(r.E.imag())
                  << "i (h = " << h << "): " << e.what() << "\n";
      }
    }
  }
  emit(cfg, "eigs.csv", eigen_csv(all));
  if (cfg.svg)
  {
    Svg svg(opt.window);
    for (const auto &pc : p.pieces())
    {
      try
      {
        const auto c = trace_curve(p, pc.lo, pc.hi, pc.shift_im, std::max(opt.window.re_min, 1.0),
                                   opt.window.re_max, 0.1);
        svg.polyline(c.samples, "#27ae60", 1.5);
      }
      catch (const Error &e)
      {
        std::cerr << "curve overlay skipped: " << e.what() << "\n";
      }
    }
    for (const auto &r : all)
    {
      if (r.method == Method::matrix)
      {
        svg.dot(r.E, 2.0, "#1f3a93");
      }
    }
    svg.axes();
    emit(cfg, "eigs.svg", svg.str());
  }
  return failures == 0 ? 0 : 3;
}

int cmd_stokes(const RunConfig &cfg)
{
  const Potential p = cfg.effective_potential();
  const cplx E = cfg.E.value_or(std::polar(1.0, pi / 4));
  const Box box = cfg.rect.value_or(Box{});
  const auto d = trace_diagram(p.smooth(), E, box);
  if (d.enlarged)
  {
    std::cerr << "warning: box does not contain every turning point; lines were traced in the "
                 "enlarged box ["
              << d.box.re_min << ", " << d.box.re_max << "] x [" << d.box.im_min << ", "
              << d.box.im_max << "]\n";
  }
  nlohmann::json j = d;
  const auto verdict = progressive_path(p, E, d.box);
  j["membership"] = {{"status", to_string(verdict.status)}, {"note", verdict.note}};
  emit(cfg, "stokes.json", j.dump(2) + "\n");
  std::cout << "progressive path: " << to_string(verdict.status);
  if (!verdict.note.empty())
  {
    std::cout << " (" << verdict.note << ")";
  }
  std::cout << "\n";
  if (cfg.svg)
  {
    emit(cfg, "stokes.svg", diagram_svg(d, {-1.0, 1.0}));
  }
  return 0;
}

int cmd_pseudospec(const RunConfig &cfg)
{
  const Potential p = cfg.effective_potential();
  const Box rect = cfg.rect.value_or(Box{-2.0, 10.0, -0.5, 2.5});
  for (double h : cfg.h)
  {
    const auto g = grid(p, h, rect, cfg.nx, cfg.ny, cfg.N);
    const std::string stem = "pseudospec_h" + shortest(h);
    emit(cfg, stem + ".csv", grid_csv(g));
    if (cfg.svg)
    {
      std::vector<std::vector<cplx>> curves;
      for (const auto &pc : p.pieces())
      {
        try
        {
          curves.push_back(trace_curve(p, pc.lo, pc.hi, pc.shift_im, std::max(rect.re_min, 1.0),
                                       rect.re_max, 0.1)
                               .samples);
        }
        catch (const Error &e)
        {
          std::cerr << "curve overlay skipped: " << e.what() << "\n";
        }
      }
      emit(cfg, stem + ".svg", grid_svg(p, g, curves));
    }
  }
  return 0;
}

int cmd_y_shape(const RunConfig &cfg)
{
  const auto y = y_shape(0.01, cfg.a_max);
  emit(cfg, "y_shape_ray.csv", curve_csv(y.ray));
  emit(cfg, "y_shape_arc.csv", curve_csv(y.arc));
  emit(cfg, "y_shape_unbounded.csv", curve_csv(y.unbounded));
  nlohmann::json j = y;
  for (auto &c : j["curves"])
  {
    c.erase("samples");
  }
  emit(cfg, "y_shape.json", j.dump(2) + "\n");
  if (cfg.svg)
  {
    Svg svg(Box{-0.2, std::min(cfg.a_max, 3.0), -0.2, 1.2});
    svg.polyline(y.ray.samples, palette[0], 1.5);
    svg.polyline(y.arc.samples, palette[1], 1.5);
    svg.polyline(y.unbounded.samples, palette[2], 1.5);
    svg.dot(y.junction, 3.0, "black");
    svg.axes();
    emit(cfg, "y_shape.svg", svg.str());
  }
  return 0;
}

int cmd_verify(const std::string &filter)
{
  const auto rows = run_verify(filter);
  std::cout << verify_table(rows);
  if (rows.empty())
  {
    std::cout << "no checks match '" << filter << "'\n";
    return 1;
  }
  return all_pass(rows) ? 0 : 1;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Semiclassical spectra, Stokes geometry and pseudospectra of -h^2 d^2/dx^2 + V"};
  app.set_help_flag("--help", "print this help");
  app.require_subcommand(1);
  Flags f;
  app.add_option("--config", f.config, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--h", f.h, "semiclassical parameter, repeatable");
  app.add_option("--delta", f.delta, "step size delta");
  app.add_option("--beta", f.beta, "step location beta");
  app.add_option("--amin", f.a_min, "smallest Re E");
  app.add_option("--amax", f.a_max, "largest Re E");
  app.add_option("--astep", f.a_step, "step in Re E");
  app.add_option("--grid", f.grid, "grid resolution NXxNY");
  app.add_option("--rect", f.rect, "re_min,re_max,im_min,im_max");
  app.add_option("--E", f.E, "spectral parameter re,im");
  app.add_option("--N", f.N, "discretization size");
  app.add_option("--out", f.out, "output directory");
  app.add_flag("--svg", f.svg, "also write SVG");
  app.add_option("--filter", f.filter, "verify: criterion number, c<number>, group or name");
  app.fallthrough();

  auto *limit = app.add_subcommand("limit-curve", "trace the limit-spectrum curves");
  auto *eigs = app.add_subcommand("eigs", "matrix eigenvalues refined by shooting");
  auto *stokes = app.add_subcommand("stokes", "Stokes diagram at E");
  auto *pseudo = app.add_subcommand("pseudospec", "smallest singular value grid");
  auto *yshape = app.add_subcommand("y-shape", "the three curves of the limit spectrum of ix^2");
  auto *verify = app.add_subcommand("verify", "run the acceptance checks");

  CLI11_PARSE(app, argc, argv);
  try
  {
    if (verify->parsed())
    {
      return cmd_verify(f.filter);
    }
    const RunConfig cfg = resolve(f);
    if (limit->parsed())
    {
      return cmd_limit_curve(cfg);
    }
    if (eigs->parsed())
    {
      return cmd_eigs(cfg);
    }
    if (stokes->parsed())
    {
      return cmd_stokes(cfg);
    }
    if (pseudo->parsed())
    {
      return cmd_pseudospec(cfg);
    }
    if (yshape->parsed())
    {
      return cmd_y_shape(cfg);
    }
  }
  catch (const ConfigError &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  catch (const DegenerateConfiguration &e)
  {
    std::cerr << "degenerate: " << e.what() << "\n";
    return 4;
  }
  catch (const Error &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
