#pragma once

#include <string>
#include <vector>

#include "stokescope/potential.hpp"
#include "stokescope/types.hpp"

namespace stokescope
{

// Closure of { xi^2 + V(x) : x in [-1, 1], xi real }.
bool in_symbol_set(const Potential &p, cplx z);

// Distance from z to that set, as the set is a union of rays V(x) + [0, inf).
// Sampled in x and polished by golden-section search.
double symbol_set_distance(const Potential &p, cplx z);

enum class SminMethod
{
  svd,
  inverse_iteration,
};

// Smallest singular value of discretize(p, h, N) - z.
double smin(const Potential &p, double h, cplx z, int N, SminMethod method = SminMethod::svd);
double smin_of(const Eigen::MatrixXcd &A, cplx z, SminMethod method = SminMethod::svd);

struct PseudoGrid
{
  Box rect;
  int nx = 0, ny = 0;
  double h = 0.0;
  int N = 0;
  std::vector<double> values;  // row-major, im index outer

  cplx node(int i, int j) const;
  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * nx + i]; }
};

PseudoGrid grid(const Potential &p, double h, const Box &rect, int nx, int ny, int N);

std::string grid_csv(const PseudoGrid &g);
// Shaded sublevel bands of log10 smin with the symbol-set boundary drawn on top.
std::string grid_svg(const Potential &p, const PseudoGrid &g,
                     const std::vector<std::vector<cplx>> &curves = {});

}  // namespace stokescope
