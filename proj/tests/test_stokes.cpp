#include "doctest.h"

#include <array>

#include <nlohmann/json.hpp>

#include "stokescope/curves.hpp"
#include "stokescope/error.hpp"
#include "stokescope/stokes.hpp"

using namespace stokescope;

namespace
{
std::vector<std::vector<cplx>> polylines(const StokesDiagram &d, cplx rotation = 1.0)
{
  std::vector<std::vector<cplx>> out;
  for (const auto &l : d.lines)
  {
    std::vector<cplx> pts;
    for (cplx z : l.points)
    {
      pts.push_back(rotation * z);
    }
    out.push_back(pts);
  }
  return out;
}

double angle_gap(double a, double b)
{
  const double d = std::remainder(a - b, 2 * pi);
  return std::abs(d);
}
}  // namespace

TEST_CASE("stokes field")
{
  CHECK(std::abs(stokes_field(Potential(), -1.0, 0.3, 1.0) - 1i) < 1e-15);
  const cplx w = std::polar(1.0, pi / 4);
  CHECK(std::abs(stokes_field(Potential::ix2(), 0.0, 1.0, w) - w) < 1e-15);

  // Tangent to the level sets of Re z, z' = w.
  const Potential v = Potential::ix2();
  const cplx E = 2.0 + 0.5i;
  for (cplx x : {0.3 + 0.1i, -0.7 + 0.4i, 1.2 - 0.3i})
  {
    const cplx wx = std::sqrt(eval(v, x) - E);
    CHECK(std::abs((wx * stokes_field(v, E, x, wx)).real()) < 1e-14);
    CHECK(std::abs(std::abs(unit_stokes_field(v, E, x, wx)) - 1.0) < 1e-14);
  }
}

TEST_CASE("departure angles")
{
  const Potential v = Potential::ix2();
  for (cplx E : {cplx(1.0, 0.0), std::polar(1.0, pi / 4), cplx(10, 0.3), cplx(-2, 1)})
  {
    for (const auto &tp : turning_points(v, E))
    {
      const auto th = departure_angles(v, tp.location);
      CHECK(std::abs(angle_gap(th[1], th[0]) - 2 * pi / 3) < 1e-12);
      CHECK(std::abs(angle_gap(th[2], th[1]) - 2 * pi / 3) < 1e-12);
    }
  }
}

TEST_CASE("traced diagrams")
{
  const Potential v = Potential::ix2();
  const auto d = trace_diagram(v, std::polar(1.0, pi / 4));
  REQUIRE(d.turning_points.size() == 2);
  CHECK(d.lines.size() == 6);
  CHECK_FALSE(d.enlarged);
  for (const auto &line : d.lines)
  {
    CHECK(line_residual(v, d, line) <= 1e-6);
    const cplx first = line.points[1] - line.points[0];
    const auto th = departure_angles(v, d.turning_points[line.source].location);
    CHECK(angle_gap(std::arg(first), th[static_cast<std::size_t>(line.direction_index)]) < 1e-2);
  }

  // Rotated harmonic oscillator.
  const auto x2 = trace_diagram(Potential::monomial(1.0, 2), 1.0);
  CHECK(hausdorff_distance(polylines(d), polylines(x2, std::polar(1.0, -pi / 8)), 3.9) <= 1e-4);

  // Even potential: the diagram is symmetric under x -> -x.
  const auto e = trace_diagram(v, 3.0 + 0.7i);
  CHECK(hausdorff_distance(polylines(e), polylines(e, -1.0), 3.9) <= 1e-5);

  // Turning points on the interval ends.
  const auto di = trace_diagram(v, 1i);
  for (const auto &line : di.lines)
  {
    CHECK(line_residual(v, di, line) <= 1e-6);
  }

  // A small box is enlarged to contain the turning points.
  const auto big = trace_diagram(v, 20.0 + 0.3i, Box::square(2.0));
  CHECK(big.enlarged);
  for (const auto &tp : big.turning_points)
  {
    CHECK(big.box.contains(tp.location));
  }

  CHECK_THROWS_AS(trace_diagram(v, 0.0), DegenerateConfiguration);

  nlohmann::json j = d;
  CHECK(j["lines"].size() == 6);
  CHECK(diagram_svg(d).find("<svg") != std::string::npos);
}

TEST_CASE("stokes regions")
{
  const Potential v = Potential::ix2();
  const std::array<cplx, 2> ends{-1.0, 1.0};
  CHECK(same_region(trace_diagram(v, 50.0 + 1i / 3.0), ends));
  CHECK_FALSE(same_region(trace_diagram(v, 0.1 * std::polar(1.0, pi / 4)), ends));
  const std::array<cplx, 1> one{0.5};
  CHECK(same_region(trace_diagram(v, 2.0 + 0.5i), one));

  const auto d = trace_diagram(v, 50.0 + 1i / 3.0);
  const auto path = region_path(d, -1.0, 1.0);
  REQUIRE(path);
  CHECK(path->front() == cplx(-1.0));
  CHECK(path->back() == cplx(1.0));
}

TEST_CASE("progressive paths")
{
  const Potential v = Potential::ix2();

  const auto far = progressive_path(v, -1.0);
  CHECK(far.in_T());
  REQUIRE(far.witness);
  {
    const auto prof = action_profile(v, -1.0, BranchedPath{*far.witness, {}, 0.0});
    const double sign = prof.back().real() > prof.front().real() ? 1.0 : -1.0;
    for (std::size_t k = 0; k + 1 < prof.size(); ++k)
    {
      CHECK(sign * (prof[k + 1].real() - prof[k].real()) > 0.0);
    }
  }

  const double b10 = curve_point(v, -1.0, 1.0, 0.0, 10.0, 1.0 / 3.0);
  const auto on_curve = progressive_path(v, 10.0 + 1i * b10);
  CHECK(on_curve.status == Membership::not_in_T);
  CHECK(on_curve.condition_distance < 1e-8);

  const auto on_ray = progressive_path(v, 0.5 * junction_lambda0() * std::polar(1.0, pi / 4));
  CHECK(on_ray.status == Membership::not_in_T);

  // Off the curves the verdict is stable under tiny perturbations of E.
  for (cplx E : {cplx(-1.0, 0.0), cplx(10.0, 0.6), cplx(4.0, -0.1)})
  {
    const auto a = progressive_path(v, E);
    const auto b = progressive_path(v, E + 1e-8 * (1.0 + 1i));
    CHECK(a.status == b.status);
  }

  // Step-perturbed potential: decided piece by piece.
  const auto split = progressive_path(v, 10.0 + 0.6i, 0.1, 0.3);
  CHECK(split.status != Membership::unknown);
}
