#include "stokescope/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <boost/numeric/odeint.hpp>

#include "stokescope/error.hpp"
#include "stokescope/io.hpp"

namespace stokescope
{

namespace
{

namespace odeint = boost::numeric::odeint;

// Polynomial degree of each smooth piece, roughly proportional to its length.
std::vector<int> piece_degrees(const std::vector<Piece> &pieces, int N)
{
  std::vector<int> n;
  for (const auto &pc : pieces)
  {
    n.push_back(std::max(16, static_cast<int>(std::lround(N * (pc.hi - pc.lo) / 2.0))));
  }
  const int excess = std::accumulate(n.begin(), n.end(), 0) - N;
  auto largest = std::max_element(n.begin(), n.end());
  *largest -= excess;
  if (*largest < 16)
  {
    throw ConfigError("discretize: N too small for the number of jumps");
  }
  return n;
}

cplx piece_value(const Potential &p, const Piece &pc, double x)
{
  return eval_poly(p, x) + cplx(0.0, pc.shift_im);
}

struct MultiDomain
{
  Eigen::MatrixXcd A;
  Eigen::VectorXd nodes;
};

MultiDomain build(const Potential &p, double h, int N)
{
  if (N < 16)
  {
    throw ConfigError("discretize: N must be at least 16");
  }
  if (!(h > 0))
  {
    throw ConfigError("discretize: h must be positive");
  }
  const auto pieces = p.pieces();
  const int M = static_cast<int>(pieces.size()) - 1;
  const auto deg = piece_degrees(pieces, N);

  std::vector<int> offset(pieces.size());
  int n_int = 0;
  for (std::size_t k = 0; k < pieces.size(); ++k)
  {
    offset[k] = n_int;
    n_int += deg[k] - 1;
  }

  Eigen::MatrixXcd AII = Eigen::MatrixXcd::Zero(n_int, n_int);
  Eigen::MatrixXcd AIF = Eigen::MatrixXcd::Zero(n_int, M);
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(M, M);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(M, n_int);
  Eigen::VectorXd nodes(n_int);

  for (std::size_t k = 0; k < pieces.size(); ++k)
  {
    const auto &pc = pieces[k];
    const int n = deg[k];
    Eigen::VectorXd xi;
    const double scale = 2.0 / (pc.hi - pc.lo);
    const Eigen::MatrixXd D = cheb_diff(n, &xi) * scale;
    const Eigen::MatrixXd D2 = D * D;
    // Local node 0 is the right end of the piece, node n the left end.
    const int right_iface = static_cast<int>(k) < M ? static_cast<int>(k) : -1;
    const int left_iface = k > 0 ? static_cast<int>(k) - 1 : -1;
    for (int i = 1; i < n; ++i)
    {
      const int row = offset[k] + i - 1;
      const double x = 0.5 * (pc.lo + pc.hi) + 0.5 * (pc.hi - pc.lo) * xi(i);
      nodes(row) = x;
      for (int j = 1; j < n; ++j)
      {
        AII(row, offset[k] + j - 1) = -h * h * D2(i, j);
      }
      AII(row, row) += piece_value(p, pc, x);
      if (right_iface >= 0)
      {
        AIF(row, right_iface) = -h * h * D2(i, 0);
      }
      if (left_iface >= 0)
      {
        AIF(row, left_iface) = -h * h * D2(i, n);
      }
    }
    // Derivative matching: u'(beta-) from the piece on the left minus u'(beta+) from the right.
    if (right_iface >= 0)
    {
      const int r = right_iface;
      C(r, r) += D(0, 0);
      if (left_iface >= 0)
      {
        C(r, left_iface) += D(0, n);
      }
      for (int j = 1; j < n; ++j)
      {
        B(r, offset[k] + j - 1) += D(0, j);
      }
    }
    if (left_iface >= 0)
    {
      const int r = left_iface;
      C(r, r) -= D(n, n);
      if (right_iface >= 0)
      {
        C(r, right_iface) -= D(n, 0);
      }
      for (int j = 1; j < n; ++j)
      {
        B(r, offset[k] + j - 1) -= D(n, j);
      }
    }
  }

  MultiDomain out;
  out.nodes = nodes;
  if (M == 0)
  {
    out.A = AII;
  }
  else
  {
    const Eigen::MatrixXd elim = C.partialPivLu().solve(B);
    out.A = AII - AIF * elim.cast<cplx>();
  }
  return out;
}

using state = std::array<double, 4>;

struct Shot
{
  cplx u, v;  // u and h u'
  double log_scale;
};

// Integrates from x_a to x_b inside one smooth piece.
void shoot_piece(const Potential &p, double shift, double h, cplx E, double xa, double xb,
                 Shot &s)
{
  const double sigma = xb > xa ? 1.0 : -1.0;
  const double length = std::abs(xb - xa);
  if (length == 0.0)
  {
    return;
  }
  auto rhs = [&](const state &y, state &dy, double tau) {
    const double x = xa + sigma * tau;
    const cplx u(y[0], y[1]), v(y[2], y[3]);
    const cplx du = sigma * v / h;
    const cplx dv = sigma * (eval_poly(p, x) + cplx(0.0, shift) - E) * u / h;
    dy = {du.real(), du.imag(), dv.real(), dv.imag()};
  };
  auto stepper =
      odeint::make_controlled(1e-12, 1e-12, odeint::runge_kutta_fehlberg78<state>());
  state y = {s.u.real(), s.u.imag(), s.v.real(), s.v.imag()};
  double tau = 0.0;
  double dt = std::min(length, 0.01 * h);
  while (tau < length)
  {
    dt = std::min(dt, length - tau);
    if (odeint::fail == stepper.try_step(rhs, y, tau, dt))
    {
      if (dt < 1e-14)
      {
        std::ostringstream msg;
        msg << "shooting: step underflow at x = " << xa + sigma * tau;
        throw ConvergenceError(msg.str());
      }
      continue;
    }
    if (length - tau < 1e-14)
    {
      tau = length;
    }
    const double size = std::hypot(std::hypot(y[0], y[1]), std::hypot(y[2], y[3]));
    if (size > 1e8 || size < 1e-8)
    {
      for (double &c : y)
      {
        c /= size;
      }
      s.log_scale += std::log(size);
    }
  }
  s.u = {y[0], y[1]};
  s.v = {y[2], y[3]};
}

Shot shoot(const Potential &p, double h, cplx E, double from, double to)
{
  Shot s{0.0, h, 0.0};
  const auto pieces = p.pieces();
  const Potential smooth = p.smooth();
  if (to > from)
  {
    for (const auto &pc : pieces)
    {
      const double a = std::max(pc.lo, from), b = std::min(pc.hi, to);
      if (b > a)
      {
        shoot_piece(smooth, pc.shift_im, h, E, a, b, s);
      }
    }
  }
  else
  {
    for (auto it = pieces.rbegin(); it != pieces.rend(); ++it)
    {
      const double a = std::min(it->hi, from), b = std::max(it->lo, to);
      if (a > b)
      {
        shoot_piece(smooth, it->shift_im, h, E, a, b, s);
      }
    }
  }
  return s;
}

cplx E0_series(cplx q)
{
  // (1 - e^{-q}) / q
  if (std::abs(q) < 1e-2)
  {
    cplx term = 1.0, sum = 0.0;
    for (int n = 0; n < 8; ++n)
    {
      sum += term;
      term *= -q / static_cast<double>(n + 2);
    }
    return sum;
  }
  return (1.0 - std::exp(-q)) / q;
}

cplx E1_series(cplx q)
{
  // integral of s e^{q (s - 1)} over [0, 1] = 1/q - (1 - e^{-q}) / q^2
  if (std::abs(q) < 1e-2)
  {
    cplx sum = 0.0, power = 1.0;
    double fact = 2.0;  // (n + 2)!
    for (int n = 0; n < 8; ++n)
    {
      sum += power * static_cast<double>(n + 1) / fact;
      power *= -q;
      fact *= static_cast<double>(n + 3);
    }
    return sum;
  }
  return 1.0 / q - (1.0 - std::exp(-q)) / (q * q);
}

// One application of I_sigma (kernel e^{sigma 2 (u - z) / h}) or of J (kernel 1), along
// arrays given in traversal order.
Eigen::VectorXcd volterra(const Eigen::VectorXcd &z, const Eigen::VectorXcd &H,
                          const Eigen::VectorXcd &v, double h, double sigma, bool kernel)
{
  const Eigen::Index n = z.size();
  Eigen::VectorXcd F(n);
  F(0) = 0.0;
  for (Eigen::Index k = 0; k + 1 < n; ++k)
  {
    const cplx d = z(k + 1) - z(k);
    const cplx ga = H(k) * v(k), gb = H(k + 1) * v(k + 1);
    if (kernel)
    {
      const cplx q = sigma * 2.0 * d / h;
      F(k + 1) = std::exp(-q) * F(k) - d * (ga * E0_series(q) + (gb - ga) * E1_series(q));
    }
    else
    {
      F(k + 1) = F(k) - d * 0.5 * (ga + gb);
    }
  }
  return F;
}

}  // namespace

std::string to_string(Method m)
{
  switch (m)
  {
  case Method::matrix:
    return "matrix";
  case Method::shooting:
    return "shooting";
  case Method::wkb_formula:
    return "wkb_formula";
  case Method::wkb_quantization:
    break;
  }
  return "wkb_quantization";
}

Eigen::MatrixXd cheb_diff(int n, Eigen::VectorXd *nodes)
{
  Eigen::VectorXd x(n + 1), c(n + 1);
  for (int j = 0; j <= n; ++j)
  {
    x(j) = std::cos(pi * j / n);
    c(j) = ((j == 0 || j == n) ? 2.0 : 1.0) * (j % 2 ? -1.0 : 1.0);
  }
  Eigen::MatrixXd D(n + 1, n + 1);
  for (int i = 0; i <= n; ++i)
  {
    for (int j = 0; j <= n; ++j)
    {
      D(i, j) = i == j ? 0.0 : (c(i) / c(j)) / (x(i) - x(j));
    }
  }
  // Diagonal from the negative row sums.
  for (int i = 0; i <= n; ++i)
  {
    D(i, i) = -D.row(i).sum();
  }
  if (nodes)
  {
    *nodes = x;
  }
  return D;
}

Eigen::MatrixXcd discretize(const Potential &p, double h, int N)
{
  return build(p, h, N).A;
}

Eigen::VectorXd collocation_nodes(const Potential &p, int N)
{
  return build(p, 1.0, N).nodes;
}

Eigen::VectorXcd all_eigenvalues(const Eigen::MatrixXcd &A)
{
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es;
  es.setMaxIterations(60 * A.rows());
  es.compute(A, false);
  if (es.info() != Eigen::Success)
  {
    throw ConvergenceError("dense eigensolver did not converge (" + std::to_string(60 * A.rows()) +
                           " QR iterations allowed)");
  }
  return es.eigenvalues();
}

std::vector<EigenvalueRecord> eigenvalues(const Potential &p, double h, const EigenOptions &opt)
{
  const Eigen::VectorXcd ev = all_eigenvalues(discretize(p, h, opt.N));
  Eigen::VectorXcd check;
  if (opt.filter)
  {
    check = all_eigenvalues(discretize(p, h, 3 * opt.N / 2));
  }
  std::vector<EigenvalueRecord> out;
  for (Eigen::Index k = 0; k < ev.size(); ++k)
  {
    const cplx E = ev(k);
    if (!opt.window.contains(E))
    {
      continue;
    }
    double moved = 0.0;
    if (opt.filter)
    {
      moved = (check.array() - E).abs().minCoeff();
      if (!(moved < 1e-6 * (1.0 + std::abs(E))))
      {
        continue;
      }
    }
    out.push_back({E, h, Method::matrix, std::nullopt, moved});
  }
  std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
    return a.E.real() != b.E.real() ? a.E.real() < b.E.real() : a.E.imag() < b.E.imag();
  });
  return out;
}

ShootingResult shooting_det(const Potential &p, double h, cplx E, std::optional<double> match_point)
{
  const double m = match_point.value_or(p.has_jumps() ? p.jumps().front().beta : 0.0);
  if (!(m > -1.0 && m < 1.0))
  {
    throw ConfigError("shooting_det: match point must lie in (-1, 1)");
  }
  const Shot l = shoot(p, h, E, -1.0, m);
  const Shot r = shoot(p, h, E, 1.0, m);
  const cplx w = l.u * r.v - l.v * r.u;
  const double nl = std::hypot(std::abs(l.u), std::abs(l.v));
  const double nr = std::hypot(std::abs(r.u), std::abs(r.v));
  return {w / (nl * nr), w, l.log_scale + r.log_scale};
}

EigenvalueRecord refine(const Potential &p, double h, cplx E0)
{
  const ShootingResult r0 = shooting_det(p, h, E0);
  const double ref = r0.log_scale;
  auto value = [&](const ShootingResult &r) { return r.mantissa * std::exp(r.log_scale - ref); };

  cplx Ea = E0, Da = value(r0);
  double best = std::abs(r0.det);
  if (best <= 1e-10)
  {
    return {E0, h, Method::shooting, std::nullopt, best};
  }
  cplx Eb = E0 + 1e-6 * (1.0 + std::abs(E0));
  ShootingResult rb = shooting_det(p, h, Eb);
  cplx Db = value(rb);
  double prev = std::abs(rb.det);
  for (int it = 0; it < 60; ++it)
  {
    if (Db == Da)
    {
      break;
    }
    const cplx Ec = Eb - Db * (Eb - Ea) / (Db - Da);
    const ShootingResult rc = shooting_det(p, h, Ec);
    const double dc = std::abs(rc.det);
    if (dc <= 1e-10)
    {
      return {Ec, h, Method::shooting, std::nullopt, dc};
    }
    if (it < 3 && !(dc < prev))
    {
      std::ostringstream msg;
      msg << "refine: seed " << E0.real() << (E0.imag() < 0 ? "" : "+") << E0.imag()
          << "i is outside the basin (|det| not decreasing: " << prev << " -> " << dc << ")";
      throw ConvergenceError(msg.str());
    }
    prev = dc;
    Ea = Eb;
    Da = Db;
    Eb = Ec;
    Db = value(rc);
  }
  throw ConvergenceError("refine: no convergence to |det| <= 1e-10 within 60 iterations");
}

cplx wkb_formula(const Potential &p, double h, int k)
{
  if (!(h * k >= 1.0))
  {
    throw ConfigError("wkb_formula: needs h k >= 1");
  }
  const auto y = primitive(p);
  const cplx dY = eval(y, 1.0) - eval(y, -1.0);
  const double hk = h * k;
  return std::pow(pi * hk / 2.0, 2) + dY / 2.0 + dY * dY / std::pow(2.0 * hk * pi, 2);
}

cplx quantization_action(const Potential &p, cplx E, cplx *dS)
{
  const Potential smooth = p.smooth();
  cplx total = 0.0, dtotal = 0.0;
  std::optional<cplx> seed;
  for (const auto &pc : p.pieces())
  {
    const cplx v = eval_poly(smooth, pc.lo) + cplx(0.0, pc.shift_im) - E;
    const cplx w = seed ? sqrt_near(v, *seed) : 1i * std::sqrt(-v);
    const auto path = segment(pc.lo, pc.hi, w, pc.shift_im);
    total += action(smooth, E, path);
    if (dS)
    {
      dtotal += action_dE(smooth, E, path);
    }
    seed = end_value(smooth, E, path);
  }
  if (dS)
  {
    *dS = dtotal;
  }
  return total;
}

EigenvalueRecord wkb_quantization(const Potential &p, double h, int k, cplx E_seed)
{
  cplx E = E_seed;
  const cplx target = 1i * h * static_cast<double>(k) * pi;
  for (int it = 0; it < 50; ++it)
  {
    cplx dS;
    const cplx F = quantization_action(p, E, &dS) - target;
    if (std::abs(F) <= 1e-10)
    {
      return {E, h, Method::wkb_quantization, k, std::abs(F)};
    }
    E -= F / dS;
    if (!std::isfinite(E.real()) || !std::isfinite(E.imag()))
    {
      break;
    }
  }
  throw ConvergenceError("wkb_quantization: Newton diverged for k = " + std::to_string(k));
}

WkbSeriesResult wkb_series(const Potential &p, cplx E, double h, const BranchedPath &path, int N,
                           int nodes)
{
  const Potential smooth = p.smooth();
  const auto &v = path.vertices;
  if (v.size() < 2)
  {
    throw ConfigError("wkb_series: path needs two vertices");
  }
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < v.size(); ++k)
  {
    total += std::abs(v[k + 1] - v[k]);
  }
  std::vector<cplx> xs{v.front()};
  for (std::size_t k = 0; k + 1 < v.size(); ++k)
  {
    const int m = std::max(1, static_cast<int>(std::ceil(nodes * std::abs(v[k + 1] - v[k]) / total)));
    for (int j = 1; j <= m; ++j)
    {
      xs.push_back(v[k] + (static_cast<double>(j) / m) * (v[k + 1] - v[k]));
    }
  }
  const BranchedPath fine{xs, path.seed, path.shift_im};
  const auto prof = action_profile(smooth, E, fine);
  const auto n = static_cast<Eigen::Index>(xs.size());
  Eigen::VectorXcd z(n), w(n), H(n);
  const Potential dV = derivative(smooth);
  cplx wk = sqrt_near(eval_poly(smooth, xs[0]) + cplx(0.0, path.shift_im) - E,
                      path.seed.value_or(cplx(0.0)));
  for (Eigen::Index k = 0; k < n; ++k)
  {
    wk = sqrt_near(eval_poly(smooth, xs[k]) + cplx(0.0, path.shift_im) - E, wk);
    w(k) = wk;
    z(k) = prof[k];
  }
  if (z(n - 1).real() < z(0).real())
  {
    // Use the other sheet so that Re z increases.
    z = -z;
    w = -w;
  }
  for (Eigen::Index k = 0; k + 1 < n; ++k)
  {
    if (!(z(k + 1).real() > z(k).real()))
    {
      std::ostringstream msg;
      msg << "wkb_series: path is not progressive near x = " << xs[k].real() << " + "
          << xs[k].imag() << "i";
      throw ConfigError(msg.str());
    }
  }
  for (Eigen::Index k = 0; k < n; ++k)
  {
    H(k) = -0.25 * eval_poly(dV, xs[k]) / (w(k) * w(k) * w(k));
  }

  auto sum_series = [&](const Eigen::VectorXcd &zz, const Eigen::VectorXcd &HH, double sigma,
                        double &last) {
    Eigen::VectorXcd term = Eigen::VectorXcd::Ones(zz.size());
    Eigen::VectorXcd sum = term;
    last = 1.0;
    for (int m = 1; m <= N; ++m)
    {
      term = volterra(zz, HH, term, h, sigma, m % 2 == 1);
      sum += term;
      last = term.cwiseAbs().maxCoeff();
    }
    return sum(zz.size() - 1);
  };

  WkbSeriesResult out;
  out.order = N;
  double last_p = 1.0, last_m = 1.0;
  out.W_plus = sum_series(z, H, 1.0, last_p);
  const Eigen::VectorXcd zr = z.reverse(), Hr = H.reverse();
  out.W_minus = sum_series(zr, Hr, -1.0, last_m);
  out.last_term = N == 0 ? 0.0 : std::max(last_p, last_m);
  out.converged = out.last_term < 1e-3 * std::min(std::abs(out.W_plus), std::abs(out.W_minus));
  return out;
}

std::string eigen_csv(const std::vector<EigenvalueRecord> &records)
{
  std::string out = "re,im,h,method,k,residual\n";
  for (const auto &r : records)
  {
    out += format_double(r.E.real()) + "," + format_double(r.E.imag()) + "," +
           format_double(r.h) + "," + to_string(r.method) + "," +
           (r.k ? std::to_string(*r.k) : std::string()) + "," + format_double(r.residual) + "\n";
  }
  return out;
}

}  // namespace stokescope
