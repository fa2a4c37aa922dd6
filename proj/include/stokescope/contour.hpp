#pragma once

#include <optional>
#include <vector>

#include "stokescope/potential.hpp"

namespace stokescope
{

struct TurningPoint
{
  cplx location;
  int order;
};

using TurningPointSet = std::vector<TurningPoint>;

// Roots of P(x) + i*shift_im - E, P the polynomial part of p. Companion-matrix eigenvalues,
// Newton polish, then clustering within 1e-7 (1+|E|)^(1/2) to read off multiplicities.
TurningPointSet turning_points(const Potential &p, cplx E, double shift_im = 0.0);

// The square root of v nearest to hint; principal root if hint is zero.
cplx sqrt_near(cplx v, cplx hint);

// Polyline in C carrying a branch of (P(x) + i*shift_im - E)^(1/2).
// The seed is the branch value at the first vertex, or a hint for it: the root of the
// integrand nearest the seed is taken. No seed means the principal root.
// Only the polynomial part of the potential is used along a path; shift_im carries the
// jump shift of the piece the path belongs to.
struct BranchedPath
{
  std::vector<cplx> vertices;
  std::optional<cplx> seed;
  double shift_im = 0.0;

  cplx start() const { return vertices.front(); }
  cplx end() const { return vertices.back(); }
  BranchedPath reversed(std::optional<cplx> end_seed = {}) const;
};

BranchedPath segment(cplx a, cplx b, std::optional<cplx> seed = {}, double shift_im = 0.0);

// Branch values along a path at parameters t in [0, #segments]; segment k is
// vertices[k] + (t - k) (vertices[k+1] - vertices[k]).
struct BranchSamples
{
  std::vector<double> t;
  std::vector<cplx> z;
  std::vector<cplx> w;
  bool ends_at_turning_point = false;
};

// Continues the seed along the path, bisecting until consecutive samples satisfy
// |w_{k+1} - w_k| < |w_k| / 2. A path may end on a turning point but not pass within 1e-6 of
// one elsewhere (BranchPointCollision).
BranchSamples continue_branch(const BranchedPath &path, const Potential &p, cplx E);

// S = integral of the continued branch along the path; adaptive GK15 to 1e-11.
cplx action(const Potential &p, cplx E, const BranchedPath &path);

// Action from the start to each vertex; entry 0 is zero.
std::vector<cplx> action_profile(const Potential &p, cplx E, const BranchedPath &path);

// dS/dE = -1/2 integral of 1/w along the path (endpoints held fixed).
cplx action_dE(const Potential &p, cplx E, const BranchedPath &path);

// Branch value at the path's end after continuation.
cplx end_value(const Potential &p, cplx E, const BranchedPath &path);

}  // namespace stokescope
