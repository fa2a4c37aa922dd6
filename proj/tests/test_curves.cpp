#include "doctest.h"

#include <nlohmann/json.hpp>

#include "stokescope/curves.hpp"
#include "stokescope/error.hpp"
#include "stokescope/fixtures.hpp"

using namespace stokescope;

namespace
{
// Second-order coefficient of b(a) - 1/3 for ix^2, from expanding Re S = 0 in 1/a.
constexpr double c2 = -2.0 / 945.0;
}  // namespace

TEST_CASE("curve points")
{
  const Potential v = Potential::ix2();
  CHECK(large_a_threshold(v) == doctest::Approx(6.0));
  CHECK(curve_point(Potential::monomial(1.0, 2), -1.0, 1.0, 0.0, 10.0, 0.3) ==
        doctest::Approx(0.0).epsilon(1e-12));

  const double b50 = curve_point(v, -1.0, 1.0, 0.0, 50.0, 1.0 / 3.0);
  CHECK(std::abs(real_segment_action(v, -1.0, 1.0, 0.0, 50.0 + 1i * b50).real()) <= 1e-9);
  CHECK(std::abs(b50 - (1.0 / 3.0 + c2 / 2500.0)) < 1e-8);

  // Remainder after the second-order term falls off at least like 1/a^3.
  std::vector<double> r;
  for (double a : {25.0, 50.0, 100.0})
  {
    r.push_back(std::abs(curve_point(v, -1.0, 1.0, 0.0, a, 1.0 / 3.0) - 1.0 / 3.0 - c2 / (a * a)));
  }
  CHECK(r[1] <= r[0] / 6.0);
  CHECK(r[2] <= r[1] / 6.0);

  // Step perturbation, left piece carries V - i delta.
  const Potential p = Potential::step_perturbed(v, 0.1, 0.3);
  CHECK(std::abs(curve_point(p, -1.0, 0.3, 0.0, 50.0, 0.16) - 0.163333) < 5e-3);
  CHECK(std::abs(curve_point(p, 0.3, 1.0, 0.2, 50.0, 0.56) - 0.563333) < 5e-3);

  CHECK_THROWS_AS(curve_point(v, -1.0, 1.0, 0.0, 5.0, 0.3), NoBracket);
}

TEST_CASE("uniqueness at large a")
{
  const Potential v = Potential::ix2();
  int changes = 0;
  double prev = real_segment_action(v, -1.0, 1.0, 0.0, 50.0 + 1i * (1.0 / 3.0 - 1.0)).real();
  for (int k = 1; k <= 2000; ++k)
  {
    const double b = 1.0 / 3.0 - 1.0 + 1e-3 * k;
    const double cur = real_segment_action(v, -1.0, 1.0, 0.0, 50.0 + 1i * b).real();
    changes += (cur > 0) != (prev > 0);
    prev = cur;
  }
  CHECK(changes == 1);
}

TEST_CASE("seed sign does not move the curve")
{
  const Potential v = Potential::ix2();
  const cplx E = 30.0 + 0.3i;
  const cplx w = 1i * std::sqrt(E - eval(v, -1.0));
  const cplx plus = action(v, E, segment(-1.0, 1.0, w));
  const cplx minus = action(v, E, segment(-1.0, 1.0, -w));
  CHECK(std::abs(plus + minus) < 1e-10);
}

TEST_CASE("traced curves")
{
  const Potential v = Potential::ix2();
  const auto c = trace_curve(v, -1.0, 1.0, 0.0, 10.0, 100.0, 1.0);
  REQUIRE(c.samples.size() >= 90);
  for (std::size_t k = 0; k < c.samples.size(); ++k)
  {
    CHECK(std::abs(real_segment_action(v, -1.0, 1.0, 0.0, c.samples[k]).real()) <= 1e-9);
    CHECK(c.samples[k].imag() < 1.0 / 3.0);
    if (k > 0)
    {
      CHECK(c.samples[k].real() > c.samples[k - 1].real());
      CHECK(c.samples[k].imag() > c.samples[k - 1].imag());
    }
  }
  REQUIRE(c.asymptote);
  CHECK(*c.asymptote == doctest::Approx(1.0 / 3.0));
  CHECK(distance_to_curve(c, c.samples[5]) == 0.0);
  CHECK(distance_to_curve(c, c.samples[5] + 0.25i) == doctest::Approx(0.25).epsilon(1e-3));

  // Below the threshold the trace continues from the certified part.
  const auto low = trace_curve(v, -1.0, 1.0, 0.0, 4.5, 8.0, 0.5);
  CHECK(low.samples.front().real() == 4.5);
  const auto unbounded = trace_unbounded_branch(10.0);
  for (cplx E : low.samples)
  {
    CHECK(distance_to_curve(unbounded, E) < 1e-8);
  }

  const auto flat = trace_curve(Potential::monomial(1.0, 2), -1.0, 1.0, 0.0, 10.0, 20.0, 2.0);
  for (cplx E : flat.samples)
  {
    CHECK(std::abs(E.imag()) < 1e-12);
  }

  const Potential p = Potential::step_perturbed(v, 0.1, 0.3);
  const auto left = trace_curve(p, -1.0, 0.3, 0.0, 10.0, 30.0, 2.0);
  const auto right = trace_curve(p, 0.3, 1.0, 0.2, 10.0, 30.0, 2.0);
  for (std::size_t k = 0; k < left.samples.size(); ++k)
  {
    CHECK(right.samples[k].imag() - left.samples[k].imag() > 0.3);
  }

  CHECK_THROWS_AS(trace_curve(v, -1.0, 1.0, 0.0, 20.0, 10.0, 1.0), ConfigError);
  CHECK(curve_csv(flat).rfind("a,b\n10,0", 0) == 0);
}

TEST_CASE("asymptotes")
{
  const Potential v = Potential::ix2();
  CHECK(asymptote(v, -1.0, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(asymptote(v, 0.3, 1.0, 0.1) == doctest::Approx(0.563333333333333).epsilon(1e-12));
  const double two = asymptote(v, -0.2, 0.4, 0.05);
  CHECK(two == doctest::Approx((0.16 - 0.08 + 0.04) / 3.0 + 0.05).epsilon(1e-12));
  CHECK(std::abs(curve_point(v, -0.2, 0.4, 0.05, 1e3, two) - two) < 1e-5);
  CHECK_THROWS_AS(asymptote(v, 0.5, 0.5), ConfigError);
}

TEST_CASE("Y shape")
{
  const double l0 = junction_lambda0();
  const auto fx = load_fixture("lambda0.json");
  CHECK(std::abs(l0 - std::stod(fx["lambda0"].get<std::string>())) < 1e-8);

  const Potential v = Potential::ix2();
  const cplx E0 = l0 * std::polar(1.0, pi / 4);
  CHECK(std::abs(real_segment_action(v, -1.0, 1.0, 0.0, E0).real()) < 1e-6);

  const auto y = y_shape();
  CHECK(std::abs(y.junction - E0) < 1e-12);
  CHECK(std::abs(y.arc.samples.front() - 1i) <= 1e-6);
  for (const auto *c : {&y.ray, &y.arc, &y.unbounded})
  {
    REQUIRE(c->samples.size() > 2);
    const double end = std::min(std::abs(c->samples.front() - y.junction),
                                std::abs(c->samples.back() - y.junction));
    CHECK(end <= 1e-3);
  }
  CHECK(std::abs(y.ray.samples.front()) < 1e-12);
  CHECK(std::abs(y.unbounded.samples.back().real() - 20.0) < 1e-9);
  // On the ray Re S(alpha-, alpha+) = 2 Re S(0, alpha+) vanishes.
  for (std::size_t k = 1; k < y.ray.samples.size(); k += 7)
  {
    const cplx E = y.ray.samples[k];
    CHECK(std::abs(std::arg(E) - pi / 4) < 1e-12);
    const cplx alpha = std::sqrt(-1i * E);
    const cplx w0 = std::sqrt(-E);
    CHECK(std::abs(action(v, E, segment(0.0, alpha, w0)).real()) < 1e-9);
  }
  CHECK(y.unbounded.asymptote.value() == doctest::Approx(1.0 / 3.0));

  nlohmann::json j = y;
  CHECK(j["lambda0"].get<double>() == l0);
}
