#include "stokescope/pseudospec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "stokescope/error.hpp"
#include "stokescope/io.hpp"
#include "stokescope/solver.hpp"
#include "stokescope/svg.hpp"

namespace stokescope
{

namespace
{

double peval(const Eigen::VectorXd &c, double x)
{
  double acc = 0.0;
  for (Eigen::Index k = c.size() - 1; k >= 0; --k)
  {
    acc = acc * x + c(k);
  }
  return acc;
}

// Real roots of the polynomial c (ascending) inside [lo, hi].
std::vector<double> real_roots(Eigen::VectorXd c, double lo, double hi)
{
  const double scale = c.cwiseAbs().maxCoeff();
  Eigen::Index deg = c.size() - 1;
  while (deg > 0 && std::abs(c(deg)) <= 1e-14 * scale)
  {
    --deg;
  }
  c.conservativeResize(deg + 1);
  std::vector<double> out;
  if (deg == 0)
  {
    return out;
  }
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (Eigen::Index k = 0; k < deg; ++k)
  {
    companion(0, k) = -c(deg - 1 - k) / c(deg);
    if (k + 1 < deg)
    {
      companion(k + 1, k) = 1.0;
    }
  }
  const Eigen::VectorXcd roots = Eigen::EigenSolver<Eigen::MatrixXd>(companion, false).eigenvalues();
  Eigen::VectorXd dc(deg);
  for (Eigen::Index k = 1; k <= deg; ++k)
  {
    dc(k - 1) = k * c(k);
  }
  for (const cplx r : roots)
  {
    // Double roots come back as conjugate pairs with imaginary parts near sqrt(eps).
    if (std::abs(r.imag()) > 1e-6 * (1.0 + std::abs(r)))
    {
      continue;
    }
    double x = r.real();
    for (int it = 0; it < 4; ++it)
    {
      const double d = peval(dc, x);
      if (d == 0.0)
      {
        break;
      }
      const double next = x - peval(c, x) / d;
      if (!(std::abs(next - x) < 1e-6))
      {
        break;
      }
      x = next;
    }
    if (std::abs(peval(c, x)) > 1e-12 * scale)
    {
      continue;
    }
    if (x >= lo - 1e-12 && x <= hi + 1e-12)
    {
      out.push_back(std::clamp(x, lo, hi));
    }
  }
  return out;
}

}  // namespace

bool in_symbol_set(const Potential &p, cplx z)
{
  const Potential smooth = p.smooth();
  const Eigen::VectorXd re = smooth.coeffs().real(), im = smooth.coeffs().imag();
  for (const auto &pc : p.pieces())
  {
    Eigen::VectorXd f = im;
    f(0) += pc.shift_im - z.imag();
    if (f.cwiseAbs().maxCoeff() <= 1e-14 * (1.0 + std::abs(z.imag())))
    {
      // Im V is constant and equal to Im z on the whole piece.
      const double m = std::min(peval(re, pc.lo), peval(re, pc.hi));
      double lowest = m;
      for (double x : real_roots(
               [&] {
                 Eigen::VectorXd d = Eigen::VectorXd::Zero(std::max<Eigen::Index>(1, re.size() - 1));
                 for (Eigen::Index k = 1; k < re.size(); ++k)
                 {
                   d(k - 1) = k * re(k);
                 }
                 return d;
               }(),
               pc.lo, pc.hi))
      {
        lowest = std::min(lowest, peval(re, x));
      }
      if (z.real() - lowest >= -1e-12)
      {
        return true;
      }
      continue;
    }
    for (double x : real_roots(f, pc.lo, pc.hi))
    {
      if (z.real() - peval(re, x) >= -1e-12)
      {
        return true;
      }
    }
  }
  return false;
}

double symbol_set_distance(const Potential &p, cplx z)
{
  if (in_symbol_set(p, z))
  {
    return 0.0;
  }
  const Potential smooth = p.smooth();
  double best = std::numeric_limits<double>::infinity();
  for (const auto &pc : p.pieces())
  {
    auto dist = [&](double x) {
      const cplx v = eval_poly(smooth, x) + cplx(0.0, pc.shift_im);
      return z.real() >= v.real() ? std::abs(z.imag() - v.imag()) : std::abs(z - v);
    };
    const int n = std::max(8, static_cast<int>(std::ceil(2000 * (pc.hi - pc.lo))));
    const double dx = (pc.hi - pc.lo) / n;
    int arg = 0;
    double local = dist(pc.lo);
    for (int k = 1; k <= n; ++k)
    {
      const double d = dist(pc.lo + k * dx);
      if (d < local)
      {
        local = d;
        arg = k;
      }
    }
    double a = std::max(pc.lo, pc.lo + (arg - 1) * dx), b = std::min(pc.hi, pc.lo + (arg + 1) * dx);
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 60; ++it)
    {
      const double c = b - g * (b - a), d = a + g * (b - a);
      if (dist(c) < dist(d))
      {
        b = d;
      }
      else
      {
        a = c;
      }
    }
    best = std::min({best, local, dist(0.5 * (a + b))});
  }
  return best;
}

double smin_of(const Eigen::MatrixXcd &A, cplx z, SminMethod method)
{
  Eigen::MatrixXcd B = A;
  B.diagonal().array() -= z;
  if (method == SminMethod::inverse_iteration)
  {
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(B), lu_adj(B.adjoint());
    // A start with no parity, since symmetric potentials split the singular vectors.
    std::mt19937 rng(12345);
    std::normal_distribution<double> normal;
    Eigen::VectorXcd v(B.rows());
    for (auto &c : v)
    {
      c = cplx(normal(rng), normal(rng));
    }
    v.normalize();
    double sigma = 0.0;
    for (int it = 0; it < 200; ++it)
    {
      // (B^* B)^{-1} v
      Eigen::VectorXcd w = lu.solve(lu_adj.solve(v));
      const double nw = w.norm();
      if (!std::isfinite(nw) || nw == 0.0)
      {
        break;
      }
      v = w / nw;
      const Eigen::VectorXcd u = B * v;
      sigma = u.norm();
      if (sigma == 0.0)
      {
        return 0.0;
      }
      const double residual = (B.adjoint() * (u / sigma) - sigma * v).norm();
      if (residual <= 1e-8 * (1.0 + sigma))
      {
        return sigma;
      }
    }
    // No certified convergence: fall back to the full decomposition.
  }
  const Eigen::BDCSVD<Eigen::MatrixXcd> svd(B);
  if (svd.info() != Eigen::Success)
  {
    throw ConvergenceError("smin: singular value decomposition failed");
  }
  return svd.singularValues().minCoeff();
}

double smin(const Potential &p, double h, cplx z, int N, SminMethod method)
{
  return smin_of(discretize(p, h, N), z, method);
}

cplx PseudoGrid::node(int i, int j) const
{
  const double re = nx == 1 ? 0.5 * (rect.re_min + rect.re_max)
                            : rect.re_min + (rect.re_max - rect.re_min) * i / (nx - 1);
  const double im = ny == 1 ? 0.5 * (rect.im_min + rect.im_max)
                            : rect.im_min + (rect.im_max - rect.im_min) * j / (ny - 1);
  return {re, im};
}

PseudoGrid grid(const Potential &p, double h, const Box &rect, int nx, int ny, int N)
{
  if (nx < 1 || ny < 1)
  {
    throw ConfigError("grid: resolution must be at least 1x1");
  }
  if (!(rect.re_min <= rect.re_max && rect.im_min <= rect.im_max))
  {
    throw ConfigError("grid: empty rectangle");
  }
  PseudoGrid g{rect, nx, ny, h, N, {}};
  const Eigen::MatrixXcd A = discretize(p, h, N);
  const SminMethod method = N <= 256 ? SminMethod::svd : SminMethod::inverse_iteration;
  g.values.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j)
  {
    for (int i = 0; i < nx; ++i)
    {
      g.values.push_back(smin_of(A, g.node(i, j), method));
    }
  }
  return g;
}

std::string grid_csv(const PseudoGrid &g)
{
  std::string out = "re,im,smin\n";
  for (int j = 0; j < g.ny; ++j)
  {
    for (int i = 0; i < g.nx; ++i)
    {
      const cplx z = g.node(i, j);
      out += format_double(z.real()) + "," + format_double(z.imag()) + "," +
             format_double(g.at(i, j)) + "\n";
    }
  }
  return out;
}

std::string grid_svg(const Potential &p, const PseudoGrid &g,
                     const std::vector<std::vector<cplx>> &curves)
{
  const double dx = g.nx > 1 ? (g.rect.re_max - g.rect.re_min) / (g.nx - 1) : 1.0;
  const double dy = g.ny > 1 ? (g.rect.im_max - g.rect.im_min) / (g.ny - 1) : 1.0;
  Box view = g.rect;
  view.re_min -= 0.5 * dx;
  view.re_max += 0.5 * dx;
  view.im_min -= 0.5 * dy;
  view.im_max += 0.5 * dy;
  Svg svg(view, 800);
  // Bands between the levels 1e-1, ..., 1e-8: darker is smaller.
  for (int j = 0; j < g.ny; ++j)
  {
    for (int i = 0; i < g.nx; ++i)
    {
      const double v = g.at(i, j);
      if (!(v < 1e-1))
      {
        continue;
      }
      const int band = std::clamp(static_cast<int>(std::floor(-std::log10(std::max(v, 1e-300)))), 1, 8);
      const cplx z = g.node(i, j);
      svg.rect(z - cplx(0.5 * dx, 0.5 * dy), z + cplx(0.5 * dx, 0.5 * dy), "#1f3a93",
               0.1 * band);
    }
  }
  // Symbol-set boundary: nodes whose membership differs from a neighbour.
  std::vector<char> inside(g.values.size());
  for (int j = 0; j < g.ny; ++j)
  {
    for (int i = 0; i < g.nx; ++i)
    {
      inside[static_cast<std::size_t>(j) * g.nx + i] = in_symbol_set(p, g.node(i, j));
    }
  }
  for (int j = 0; j < g.ny; ++j)
  {
    for (int i = 0; i < g.nx; ++i)
    {
      const char here = inside[static_cast<std::size_t>(j) * g.nx + i];
      const bool edge = (i + 1 < g.nx && inside[static_cast<std::size_t>(j) * g.nx + i + 1] != here) ||
                        (j + 1 < g.ny && inside[static_cast<std::size_t>(j + 1) * g.nx + i] != here);
      if (edge)
      {
        svg.dot(g.node(i, j) + cplx(0.5 * dx * (i + 1 < g.nx), 0.0), 1.5, "#c0392b");
      }
    }
  }
  for (const auto &c : curves)
  {
    svg.polyline(c, "#27ae60", 1.5);
  }
  svg.axes();
  return svg.str();
}

}  // namespace stokescope
