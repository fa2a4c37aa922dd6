#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "stokescope/contour.hpp"

namespace stokescope
{

// Samples E = a + i b of a limit-spectrum curve {Re S_{x0,x1}(E) = 0}.
struct SpectralCurve
{
  std::string name;  // e.g. "Gamma(-1,1)"
  double x0 = -1.0, x1 = 1.0;
  double shift_im = 0.0;
  std::vector<cplx> samples;
  std::optional<double> asymptote;
};

struct YShape
{
  SpectralCurve ray;         // Gamma(alpha-,alpha+)
  SpectralCurve arc;         // Gamma(alpha+,1)
  SpectralCurve unbounded;   // Gamma(-1,1)
  double lambda0;
  cplx junction;
};

// Re S_{x0,x1}(E) along the real segment, on the branch continued from i sqrt(E - V(x0)).
// Only the polynomial part of p plus i shift_im enters.
cplx real_segment_action(const Potential &p, double x0, double x1, double shift_im, cplx E);

// Smallest a accepted by curve_point: 3 (1 + max |V| on [-1, 1]).
double large_a_threshold(const Potential &p, double shift_im = 0.0);

// b with |Re S_{x0,x1}(a + i b)| <= 1e-9: Newton with a central-difference derivative,
// safeguarded by bisection in [b_seed - 1, b_seed + 1]. Throws NoBracket.
double curve_point(const Potential &p, double x0, double x1, double shift_im, double a,
                   double b_seed);

// Graph-form continuation in a with the previous b as predictor; failed steps are halved
// down to step / 64. Starts at max(a_min, large_a_threshold); any part below the threshold
// is continued downward from there with a local bracket, not solved afresh.
SpectralCurve trace_curve(const Potential &p, double x0, double x1, double shift_im,
                          double a_min, double a_max, double step);

// Limit of b(a) as a -> infinity: Im(Y(x1) - Y(x0)) / (x1 - x0) + shift_im.
double asymptote(const Potential &p, double x0, double x1, double shift_im = 0.0);

// Arc-length continuation of {Re S_{-1,1} = 0} for V = ix^2 from a = a_max down to the ray
// arg E = pi/4, where the curve meets the other two pieces of the Y-shape.
SpectralCurve trace_unbounded_branch(double a_max, double step = 0.02);

// Root of g(lambda) = Re S_{alpha+,1}(lambda e^{i pi/4}) on (0, 20] for V = ix^2.
double junction_lambda0();

// The three curves whose union is the limit spectrum of -h^2 d^2/dx^2 + i x^2.
YShape y_shape(double lambda_step = 0.01, double a_max = 20.0);

std::string curve_csv(const SpectralCurve &c);
void to_json(nlohmann::json &j, const SpectralCurve &c);
void to_json(nlohmann::json &j, const YShape &y);

// Distance from E to a sampled curve (polyline).
double distance_to_curve(const SpectralCurve &c, cplx E);

}  // namespace stokescope
