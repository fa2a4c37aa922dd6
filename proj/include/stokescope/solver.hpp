#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "stokescope/contour.hpp"

namespace stokescope
{

enum class Method
{
  matrix,
  shooting,
  wkb_formula,
  wkb_quantization
};

std::string to_string(Method m);

struct EigenvalueRecord
{
  cplx E;
  double h;
  Method method;
  std::optional<int> k;
  double residual;  // matrix: filter displacement; shooting: |det|; wkb: root residual
};

// Chebyshev differentiation matrix on the Gauss-Lobatto nodes cos(pi j / n), j = 0..n.
Eigen::MatrixXd cheb_diff(int n, Eigen::VectorXd *nodes = nullptr);

// Dense collocation matrix of -h^2 d^2/dx^2 + V on [-1, 1] with Dirichlet conditions.
// Without jumps: one Chebyshev domain of degree N, size (N-1) x (N-1). With M jumps: one
// domain per smooth piece, degrees summing to N, interface values eliminated through the
// derivative-matching rows; size (N-1-M) x (N-1-M).
Eigen::MatrixXcd discretize(const Potential &p, double h, int N);

// Interior collocation nodes matching the rows of discretize.
Eigen::VectorXd collocation_nodes(const Potential &p, int N);

// All eigenvalues of a dense matrix (complex Schur form). Throws ConvergenceError.
Eigen::VectorXcd all_eigenvalues(const Eigen::MatrixXcd &A);

struct EigenOptions
{
  int N = 256;
  Box window{-1e300, 1e300, -1e300, 1e300};
  bool filter = true;  // drop eigenvalues that move by >= 1e-6 (1+|E|) at resolution 3N/2
};

// Eigenvalues inside the window, sorted by real part.
std::vector<EigenvalueRecord> eigenvalues(const Potential &p, double h, const EigenOptions &opt);

struct ShootingResult
{
  cplx det;        // Wronskian of the unit-normalized (u, h u') vectors at the match point
  cplx mantissa;   // unnormalized h * Wronskian = mantissa * exp(log_scale)
  double log_scale;
};

// Integrates u'' = (V - E) u / h^2 from -1 and from +1 with (u, u') = (0, 1) to match_point,
// one smooth piece at a time, renormalizing (u, h u') whenever its size leaves [1e-8, 1e8].
// match_point defaults to the first jump location, or 0 without jumps.
ShootingResult shooting_det(const Potential &p, double h, cplx E,
                            std::optional<double> match_point = {});

// Secant iteration on the shooting Wronskian from E0 to |det| <= 1e-10 in at most 60 steps.
EigenvalueRecord refine(const Potential &p, double h, cplx E0);

// (pi h k / 2)^2 + dY / 2 + dY^2 / (2 pi h k)^2, dY = Y(1) - Y(-1). Requires hk >= 1.
cplx wkb_formula(const Potential &p, double h, int k);

// Newton on S_{-1,1}(E) - i h k pi = 0 to |F| <= 1e-10.
EigenvalueRecord wkb_quantization(const Potential &p, double h, int k, cplx E_seed);

// S_{-1,1} summed over the smooth pieces with the branch carried continuously across jumps,
// seeded by i sqrt(E - V(-1)).
cplx quantization_action(const Potential &p, cplx E, cplx *dS = nullptr);

struct WkbSeriesResult
{
  cplx W_plus;   // W_+ at the end of the path (W_+ = 1 at the start)
  cplx W_minus;  // W_- at the start of the path (W_- = 1 at the end)
  int order;
  double last_term;  // sup over the path of the last computed term
  bool converged;    // last_term < 1e-3 |W|
};

// Volterra series for the WKB amplitudes along a progressive path, N terms after W_0 = 1.
// The path is resampled to `nodes` points; throws ConfigError if Re z is not strictly
// monotone along it (the branch is flipped first if Re z decreases overall).
WkbSeriesResult wkb_series(const Potential &p, cplx E, double h, const BranchedPath &path,
                           int N, int nodes = 4000);

std::string eigen_csv(const std::vector<EigenvalueRecord> &records);

}  // namespace stokescope
