#include "doctest.h"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "stokescope/error.hpp"
#include "stokescope/fixtures.hpp"
#include "stokescope/solver.hpp"

using namespace stokescope;

namespace
{
std::vector<cplx> s_curve(double c)
{
  std::vector<cplx> v;
  for (int j = 0; j <= 200; ++j)
  {
    const double t = -1.0 + 0.01 * j;
    v.push_back({t, c * (t * t * t - t)});
  }
  return v;
}

std::vector<double> sorted_real(const Eigen::VectorXcd &ev)
{
  std::vector<double> re;
  for (cplx e : ev)
  {
    re.push_back(e.real());
  }
  std::sort(re.begin(), re.end());
  return re;
}
}  // namespace

TEST_CASE("free particle")
{
  const auto re = sorted_real(all_eigenvalues(discretize(Potential(), 1.0, 64)));
  for (int k = 1; k <= 5; ++k)
  {
    CHECK(std::abs(re[k - 1] - std::pow(k * pi / 2, 2)) < 1e-10);
  }
  // A constant potential shifts everything.
  const auto shifted = all_eigenvalues(discretize(Potential::monomial(2.0 + 1i, 0), 1.0, 64));
  for (cplx e : shifted)
  {
    CHECK(std::abs(e.imag() - 1.0) < 1e-9);
  }
  CHECK(std::abs(sorted_real(shifted)[0] - 2.0 - pi * pi / 4) < 1e-10);
}

TEST_CASE("real potential has a real spectrum")
{
  EigenOptions opt;
  opt.N = 128;
  opt.window = {-1, 50, -1, 1};
  const auto recs = eigenvalues(Potential::monomial(1.0, 2), 0.1, opt);
  REQUIRE(recs.size() > 10);
  for (const auto &r : recs)
  {
    CHECK(std::abs(r.E.imag()) < 1e-8);
  }
}

TEST_CASE("discretize rejects bad input")
{
  CHECK_THROWS_AS(discretize(Potential(), 0.0, 64), ConfigError);
  CHECK_THROWS_AS(discretize(Potential(), 0.1, 8), ConfigError);
}

TEST_CASE("matrix eigenvalues match the numpy oracle")
{
  const auto fx = load_fixture("eigen_oracle.json");
  EigenOptions opt;
  opt.N = 256;
  opt.window = {2, 20, -1, 2};
  const auto recs = eigenvalues(Potential::ix2(), 0.05, opt);
  REQUIRE(recs.size() == fx["eigenvalues"].size());
  for (const auto &e : fx["eigenvalues"])
  {
    const cplx E(std::stod(e[0].get<std::string>()), std::stod(e[1].get<std::string>()));
    double best = 1e300;
    for (const auto &r : recs)
    {
      best = std::min(best, std::abs(r.E - E));
    }
    CHECK(best < 1e-8);
  }
  for (std::size_t k = 0; k < recs.size(); k += 5)
  {
    const auto r = refine(Potential::ix2(), 0.05, recs[k].E);
    CHECK(std::abs(r.E - recs[k].E) < 1e-7);
  }
}

TEST_CASE("shooting determinant")
{
  CHECK(std::abs(shooting_det(Potential(), 1.0, pi * pi / 4).det) < 1e-9);
  CHECK(std::abs(shooting_det(Potential(), 1.0, 1.0).det) > 1e-2);
  const auto r = refine(Potential(), 1.0, pi * pi / 4 + 1e-3);
  CHECK(std::abs(r.E - pi * pi / 4) < 1e-8);
  CHECK(r.method == Method::shooting);
  CHECK_THROWS_AS(shooting_det(Potential(), 1.0, 1.0, 1.0), ConfigError);
}

TEST_CASE("multidomain discretization with jumps agrees with shooting")
{
  const Potential p = Potential::step_perturbed(Potential::ix2(), 0.1, 0.3);
  EigenOptions opt;
  opt.N = 256;
  opt.window = {2, 10, -1, 2};
  const auto recs = eigenvalues(p, 0.05, opt);
  REQUIRE(recs.size() > 5);
  for (const auto &rec : recs)
  {
    const auto r = refine(p, 0.05, rec.E);
    CHECK(std::abs(r.E - rec.E) < 1e-6);
  }
}

TEST_CASE("quantization rules")
{
  const Potential v = Potential::ix2();
  // (pi h k / 2)^2 + i/3 + ...
  const cplx f = wkb_formula(v, 0.02, 100);
  CHECK(std::abs(f.imag() - 1.0 / 3.0) < 1e-12);
  CHECK(std::abs(f.real() - (pi * pi - 1.0 / (36 * pi * pi))) < 1e-12);
  CHECK_THROWS_AS(wkb_formula(v, 0.01, 50), ConfigError);

  const auto exact = refine(v, 0.02, f);
  CHECK(std::abs(exact.E - f) <= 10.0 / 8.0);
  const auto q = wkb_quantization(v, 0.02, 100, f);
  CHECK(std::abs(q.E - exact.E) < 0.1 * std::abs(f - exact.E));

  // Smaller hk, larger error, still within the bound.
  const auto e2 = refine(v, 0.02, wkb_formula(v, 0.02, 100));
  const auto e1 = refine(v, 0.02, wkb_formula(v, 0.02, 80));
  CHECK(std::abs(e1.E - wkb_formula(v, 0.02, 80)) > std::abs(e2.E - wkb_formula(v, 0.02, 100)));
}

TEST_CASE("WKB series")
{
  const Potential v = Potential::ix2();
  const BranchedPath path{s_curve(0.02), {}, 0.0};
  auto w = wkb_series(v, 10.0 + 1i, 0.1, path, 0);
  CHECK(w.W_plus == cplx(1.0));
  CHECK(w.W_minus == cplx(1.0));

  w = wkb_series(Potential::monomial(3i, 0), 10.0 + 1i, 0.1, path, 6);
  CHECK(std::abs(w.W_plus - 1.0) < 1e-15);

  const auto a = wkb_series(v, 10.0 + 1i, 0.05, path, 8);
  const auto b = wkb_series(v, 10.0 + 1i, 0.025, path, 8);
  CHECK(a.converged);
  const double ratio = std::abs(b.W_plus - 1.0) / std::abs(a.W_plus - 1.0);
  CHECK(ratio > 0.4);
  CHECK(ratio < 0.6);

  // A path along which Re S is not monotone.
  const BranchedPath bad{{-1.0, 0.0 + 2i, 1.0}, {}, 0.0};
  CHECK_THROWS_AS(wkb_series(v, 10.0 + 1i, 0.05, bad, 4), ConfigError);
}

TEST_CASE("eigen csv")
{
  const std::vector<EigenvalueRecord> recs{{cplx(1.5, -0.25), 0.1, Method::wkb_formula, 3, 0.0}};
  CHECK(eigen_csv(recs) == "re,im,h,method,k,residual\n1.5,-0.25,0.10000000000000001,wkb_formula,3,0\n");
}
