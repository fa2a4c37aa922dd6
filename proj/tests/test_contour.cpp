#include "doctest.h"

#include <nlohmann/json.hpp>

#include "stokescope/contour.hpp"
#include "stokescope/error.hpp"
#include "stokescope/fixtures.hpp"

using namespace stokescope;

namespace
{
std::vector<cplx> circle(cplx centre, double r, int n)
{
  std::vector<cplx> v;
  for (int k = 0; k <= n; ++k)
  {
    v.push_back(centre + r * std::polar(1.0, 2 * pi * k / n));
  }
  v.back() = v.front();
  return v;
}
}  // namespace

TEST_CASE("turning points")
{
  const Potential v = Potential::ix2();
  auto tp = turning_points(v, 1i);
  REQUIRE(tp.size() == 2);
  CHECK(std::abs(tp[0].location + 1.0) < 1e-14);
  CHECK(std::abs(tp[1].location - 1.0) < 1e-14);
  CHECK(tp[0].order == 1);

  tp = turning_points(v, 0.0);
  REQUIRE(tp.size() == 1);
  CHECK(tp[0].order == 2);
  CHECK(std::abs(tp[0].location) < 1e-12);

  const cplx E = 3.0 - 2i;
  tp = turning_points(v, E);
  REQUIRE(tp.size() == 2);
  const cplx alpha = std::sqrt(-1i * E);
  CHECK(std::min(std::abs(tp[0].location - alpha), std::abs(tp[1].location - alpha)) < 1e-13);
  for (const auto &t : tp)
  {
    CHECK(std::abs(eval(v, t.location) - E) <= 1e-10 * (1 + std::abs(E)));
  }

  CHECK_THROWS_AS(turning_points(Potential::monomial(2.0, 0), E), DegenerateConfiguration);
}

TEST_CASE("branch continuation")
{
  auto s = continue_branch(segment(-1.0, 1.0, 1.0), Potential(), -1.0);
  for (cplx w : s.w)
  {
    CHECK(w == cplx(1.0));
  }

  const Potential v = Potential::ix2();
  const cplx E = 1i;  // turning points at +-1
  BranchedPath loop{circle(1.0, 0.5, 64), {}, 0.0};
  s = continue_branch(loop, v, E);
  CHECK(std::abs(s.w.back() + s.w.front()) < 1e-12);

  loop.vertices = circle(0.0, 2.0, 64);
  s = continue_branch(loop, v, E);
  CHECK(std::abs(s.w.back() - s.w.front()) < 1e-12);

  for (std::size_t k = 0; k + 1 < s.w.size(); ++k)
  {
    CHECK(std::abs(s.w[k + 1] - s.w[k]) < std::abs(s.w[k]));
  }
}

TEST_CASE("branch point collision")
{
  CHECK_THROWS_AS(action(Potential::ix2(), 1i, segment(0.5, 1.5)), BranchPointCollision);
  // ending on the turning point is allowed
  CHECK_NOTHROW(action(Potential::ix2(), 1i, segment(0.5, 1.0)));
}

TEST_CASE("action")
{
  CHECK(std::abs(action(Potential(), -1.0, segment(-1.0, 1.0, 1.0)) - 2.0) < 1e-13);

  const Potential v = Potential::ix2();
  const cplx E = 4.0 + 0.7i;
  for (double x : {0.5, 1.0, 1.7})
  {
    const cplx w0 = std::sqrt(-E);
    const cplx right = action(v, E, segment(0.0, x, w0));
    const cplx left = action(v, E, segment(0.0, -x, w0));
    // S_{0,x} is even in x with the seed fixed at 0
    CHECK(std::abs(right + left) < 1e-10);
  }
}

TEST_CASE("action matches the frozen quadrature oracle")
{
  const auto fx = load_fixture("action_oracle.json");
  const cplx E(fx["E"][0].get<double>(), fx["E"][1].get<double>());
  const cplx expected(std::stod(fx["value"][0].get<std::string>()),
                      std::stod(fx["value"][1].get<std::string>()));
  const cplx S = action(Potential::ix2(), E, segment(-1.0, 1.0));
  CHECK(std::abs(S - expected) < 1e-10);
}

TEST_CASE("subdivision invariance and seed antisymmetry")
{
  const Potential v = Potential::ix2();
  const cplx E = 2.0 + 0.3i;
  const cplx S = action(v, E, segment(-1.0, 1.0));
  const cplx S3 = action(v, E, BranchedPath{{-1.0, -0.2, 0.35, 1.0}, {}, 0.0});
  CHECK(std::abs(S - S3) < 1e-10);
  const cplx seed = std::sqrt(eval(v, -1.0) - E);
  const cplx Sn = action(v, E, segment(-1.0, 1.0, -seed));
  CHECK(std::abs(S + Sn) < 1e-13);
}

TEST_CASE("large-E expansion")
{
  const Potential v = Potential::ix2();
  const cplx E = 1000.0 + 0.3i;
  const cplx rootE = std::sqrt(E);
  const cplx seed = 1i * std::sqrt(E - eval(v, -1.0));
  const cplx S = action(v, E, segment(-1.0, 1.0, seed));
  const cplx dY = 2i / 3.0;
  const cplx approx = 2i * rootE - 1i * dY / (2.0 * rootE);
  CHECK(std::abs(S - approx) / std::abs(S) < 1e-6);
}

TEST_CASE("action derivative")
{
  const Potential v = Potential::ix2();
  const cplx E = 6.0 + 0.2i;
  const double d = 1e-5;
  const auto path = segment(-1.0, 1.0, 1i);
  const cplx fd = (action(v, E + d, path) - action(v, E - d, path)) / (2 * d);
  CHECK(std::abs(fd - action_dE(v, E, path)) < 1e-7);
}
