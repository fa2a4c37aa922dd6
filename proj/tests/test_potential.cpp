#include "doctest.h"

#include <nlohmann/json.hpp>

#include "stokescope/error.hpp"
#include "stokescope/potential.hpp"

using namespace stokescope;

namespace
{
Potential poly(std::initializer_list<cplx> c)
{
  Eigen::VectorXcd v(c.size());
  Eigen::Index k = 0;
  for (cplx x : c)
  {
    v(k++) = x;
  }
  return Potential(v);
}
}  // namespace

TEST_CASE("eval")
{
  CHECK(std::abs(eval(Potential::ix2(), 2.0) - 4i) == 0.0);
  const Potential jumped(Potential::ix2().coeffs(), {{0.0, 0.1}});
  CHECK(std::abs(eval(jumped, 0.5) - 0.35i) < 1e-15);
  CHECK(std::abs(eval(jumped, -0.5) - 0.25i) < 1e-15);
  // left piece at the jump itself
  CHECK(std::abs(eval(jumped, 0.0)) == 0.0);
  CHECK(eval(Potential(), 3.0 + 2i) == cplx(0.0));
}

TEST_CASE("step perturbation shifts the two sides by -i delta and +i delta")
{
  const Potential p = Potential::step_perturbed(Potential::ix2(), 0.1, 0.3);
  CHECK(std::abs(eval(p, 0.0) - (-0.1i)) < 1e-15);
  CHECK(std::abs(eval(p, 0.5) - (0.25i + 0.1i)) < 1e-15);
  CHECK(p.pieces().size() == 2);
  CHECK(p.pieces()[1].shift_im == doctest::Approx(0.2));
}

TEST_CASE("jump validation")
{
  CHECK_THROWS_AS(Potential(Potential::ix2().coeffs(), {{1.0, 0.1}}), ConfigError);
  CHECK_THROWS_AS(Potential(Potential::ix2().coeffs(), {{0.2, 0.1}, {0.1, 0.1}}), ConfigError);
}

TEST_CASE("primitive")
{
  auto y = primitive(Potential::ix2());
  CHECK(std::abs(y.coeffs(3) - 1i / 3.0) < 1e-16);
  CHECK(std::abs(eval(y, 1.0) - 1i / 3.0) < 1e-16);

  y = primitive(Potential::monomial(2.0 - 1i, 0));
  CHECK(std::abs(eval(y, 0.5) - (1.0 - 0.5i)) < 1e-16);

  y = primitive(poly({1i, 2.0}));
  CHECK(std::abs(eval(y, 2.0) - (4.0 + 2i)) < 1e-15);
}

TEST_CASE("primitive is continuous across jumps and vanishes at zero")
{
  const Potential p(Potential::ix2().coeffs(), {{-0.4, 0.3}, {0.5, -0.7}});
  const auto y = primitive(p);
  CHECK(std::abs(eval(y, 0.0)) < 1e-16);
  for (double b : {-0.4, 0.5})
  {
    CHECK(std::abs(eval(y, b - 1e-12) - eval(y, b + 1e-12)) < 1e-11);
  }
  // derivative matches V piecewise
  for (double x : {-0.8, 0.1, 0.9})
  {
    const double d = 1e-6;
    const cplx fd = (eval(y, x + d) - eval(y, x - d)) / (2 * d);
    CHECK(std::abs(fd - eval(p, x)) < 1e-8);
  }
}

TEST_CASE("derivative")
{
  CHECK(std::abs(derivative(Potential::ix2()).coeffs()(1) - 2i) == 0.0);
  CHECK(derivative(Potential::monomial(5.0, 0)).is_constant());
  CHECK(std::abs(derivative(Potential::monomial(1.0, 3)).coeffs()(2) - 3.0) == 0.0);
}

TEST_CASE("derivative of primitive reproduces the polynomial exactly")
{
  const Potential p = poly({1.0 + 2i, -3.0, 0.5i, 7.0});
  const Eigen::VectorXcd back = derivative(Potential(primitive(p).coeffs)).coeffs();
  REQUIRE(back.size() == p.coeffs().size());
  CHECK((back - p.coeffs()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("finite differences agree with derivative")
{
  const Potential p = poly({0.3, 1i, -2.0, 0.5 + 1i});
  const Potential dp = derivative(p);
  for (double x : {-0.7, 0.0, 0.4})
  {
    const double d = 1e-6;
    const cplx fd = (eval(p, x + d) - eval(p, x - d)) / (2 * d);
    CHECK(std::abs(fd - eval(dp, x)) <= 1e-6 * std::abs(eval(dp, x)));
  }
}

TEST_CASE("json round trip and field errors")
{
  const Potential p(Potential::ix2().coeffs(), {{0.3, 0.2}});
  const nlohmann::json j = p;
  const Potential q = j.get<Potential>();
  CHECK((q.coeffs() - p.coeffs()).norm() == 0.0);
  CHECK(q.jumps().size() == 1);
  CHECK(q.jumps()[0].beta == 0.3);

  const auto bad = nlohmann::json::parse(R"({"coeffs": [[0, 0], "x"]})");
  try
  {
    (void)bad.get<Potential>();
    FAIL("expected ConfigError");
  }
  catch (const ConfigError &e)
  {
    CHECK(std::string(e.what()).find("potential.coeffs[1]") != std::string::npos);
  }
}
