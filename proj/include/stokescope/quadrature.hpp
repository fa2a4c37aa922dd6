#pragma once

#include <functional>
#include <span>

#include "stokescope/types.hpp"

namespace stokescope
{

struct QuadratureResult
{
  cplx value;
  double error;
  int subdivisions;
};

struct QuadratureOptions
{
  double abs_tol = 1e-11;
  int max_subdivisions = 1 << 14;
};

// Globally adaptive 7/15-point Gauss-Kronrod quadrature of a complex integrand over the
// real parameter interval split at `breaks` (sorted, first and last are the endpoints).
// The interval with the largest error estimate is bisected until the summed estimate
// meets abs_tol. Throws QuadratureError when the subdivision budget runs out.
QuadratureResult integrate(const std::function<cplx(double)> &f, std::span<const double> breaks,
                           const QuadratureOptions &opts = {});

QuadratureResult integrate(const std::function<cplx(double)> &f, double a, double b,
                           const QuadratureOptions &opts = {});

}  // namespace stokescope
