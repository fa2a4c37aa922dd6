#include "stokescope/contour.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "stokescope/error.hpp"
#include "stokescope/quadrature.hpp"

namespace stokescope
{

namespace
{

cplx integrand(const Potential &p, double shift_im, cplx E, cplx x)
{
  return eval_poly(p, x) + cplx(0.0, shift_im) - E;
}

double segment_distance(cplx a, cplx b, cplx q)
{
  const cplx d = b - a;
  const double len2 = std::norm(d);
  double s = len2 > 0.0 ? std::real((q - a) * std::conj(d)) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return std::abs(a + s * d - q);
}

cplx point_at(const std::vector<cplx> &v, double t)
{
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(t), v.size() - 2);
  return v[k] + (t - static_cast<double>(k)) * (v[k + 1] - v[k]);
}

constexpr double collision_radius = 1e-6;
constexpr int initial_pieces = 8;

// Branch evaluation off a precomputed sample table.
struct BranchTable
{
  const Potential &p;
  const BranchedPath &path;
  cplx E;
  BranchSamples samples;

  cplx w(double t) const
  {
    const auto &ts = samples.t;
    auto it = std::upper_bound(ts.begin(), ts.end(), t);
    std::size_t k = it == ts.begin() ? 0 : static_cast<std::size_t>(it - ts.begin()) - 1;
    if (k + 1 >= ts.size())
    {
      k = ts.size() - 2;
    }
    return sqrt_near(integrand(p, path.shift_im, E, point_at(path.vertices, t)), samples.w[k]);
  }
};

// Integral of g(w) dz over each segment of the path.
template <typename G>
std::vector<cplx> integrate_segments(const Potential &p, cplx E, const BranchedPath &path, G g,
                                     double tol)
{
  std::vector<cplx> out;
  if (path.vertices.size() < 2 || path.start() == path.end())
  {
    return out;
  }
  BranchTable table{p, path, E, continue_branch(path, p, E)};
  const std::size_t nseg = path.vertices.size() - 1;
  QuadratureOptions opts;
  opts.abs_tol = std::max(tol / static_cast<double>(nseg), 1e-14);
  out.reserve(nseg);
  for (std::size_t k = 0; k < nseg; ++k)
  {
    const cplx dz = path.vertices[k + 1] - path.vertices[k];
    const double t0 = static_cast<double>(k);
    if (k + 1 == nseg && table.samples.ends_at_turning_point)
    {
      // t = k+1 - u^2 removes the square-root endpoint singularity.
      auto f = [&](double u) {
        if (u == 0.0)
        {
          return cplx(0.0);
        }
        return g(table.w(t0 + 1.0 - u * u)) * dz * (2.0 * u);
      };
      out.push_back(integrate(f, 0.0, 1.0, opts).value);
    }
    else
    {
      auto f = [&](double t) { return g(table.w(t)) * dz; };
      out.push_back(integrate(f, t0, t0 + 1.0, opts).value);
    }
  }
  return out;
}

template <typename G>
cplx integrate_branch(const Potential &p, cplx E, const BranchedPath &path, G g, double tol)
{
  cplx total = 0.0;
  for (cplx s : integrate_segments(p, E, path, g, tol))
  {
    total += s;
  }
  return total;
}

}  // namespace

cplx sqrt_near(cplx v, cplx hint)
{
  const cplx r = std::sqrt(v);
  if (hint == cplx(0.0))
  {
    return r;
  }
  return std::norm(r - hint) <= std::norm(r + hint) ? r : -r;
}

TurningPointSet turning_points(const Potential &p, cplx E, double shift_im)
{
  if (p.is_constant())
  {
    throw DegenerateConfiguration("no turning points definable: potential is constant");
  }
  Eigen::VectorXcd c = p.coeffs();
  c(0) += cplx(0.0, shift_im) - E;
  const int n = p.degree();
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 1; k < n; ++k)
  {
    companion(k, k - 1) = 1.0;
  }
  for (int k = 0; k < n; ++k)
  {
    companion(k, n - 1) = -c(k) / c(n);
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, false);
  if (es.info() != Eigen::Success)
  {
    throw ConvergenceError("companion eigensolve failed");
  }
  Eigen::VectorXcd dc(n);
  for (int k = 1; k <= n; ++k)
  {
    dc(k - 1) = static_cast<double>(k) * c(k);
  }

  std::vector<cplx> roots;
  for (int k = 0; k < n; ++k)
  {
    cplx x = es.eigenvalues()(k);
    for (int it = 0; it < 8; ++it)
    {
      const cplx f = horner(c, x), df = horner(dc, x);
      if (df == cplx(0.0))
      {
        break;
      }
      const cplx next = x - f / df;
      if (!(std::abs(horner(c, next)) < std::abs(f)))
      {
        break;
      }
      x = next;
    }
    roots.push_back(x);
  }

  const double radius = 1e-7 * std::sqrt(1.0 + std::abs(E));
  TurningPointSet out;
  std::vector<bool> used(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i)
  {
    if (used[i])
    {
      continue;
    }
    cplx sum = roots[i];
    int order = 1;
    used[i] = true;
    for (std::size_t j = i + 1; j < roots.size(); ++j)
    {
      if (!used[j] && std::abs(roots[j] - roots[i]) <= radius)
      {
        used[j] = true;
        sum += roots[j];
        ++order;
      }
    }
    out.push_back({sum / static_cast<double>(order), order});
  }
  std::sort(out.begin(), out.end(), [](const TurningPoint &a, const TurningPoint &b) {
    return a.location.real() != b.location.real() ? a.location.real() < b.location.real()
                                                  : a.location.imag() < b.location.imag();
  });
  return out;
}

BranchedPath BranchedPath::reversed(std::optional<cplx> end_seed) const
{
  BranchedPath r{{vertices.rbegin(), vertices.rend()}, end_seed, shift_im};
  return r;
}

BranchedPath segment(cplx a, cplx b, std::optional<cplx> seed, double shift_im)
{
  return BranchedPath{{a, b}, seed, shift_im};
}

BranchSamples continue_branch(const BranchedPath &path, const Potential &p, cplx E)
{
  const auto &v = path.vertices;
  if (v.empty())
  {
    throw ConfigError("path has no vertices");
  }
  for (std::size_t k = 0; k + 1 < v.size(); ++k)
  {
    if (v[k] == v[k + 1])
    {
      throw ConfigError("path has repeated consecutive vertices");
    }
  }

  BranchSamples out;
  if (!p.is_constant())
  {
    for (const auto &tp : turning_points(p, E, path.shift_im))
    {
      if (std::abs(tp.location - path.end()) < collision_radius && v.size() > 1)
      {
        out.ends_at_turning_point = true;
        continue;
      }
      for (std::size_t k = 0; k + 1 < v.size(); ++k)
      {
        if (segment_distance(v[k], v[k + 1], tp.location) < collision_radius)
        {
          std::ostringstream msg;
          msg << "branch point collision: path passes within " << collision_radius
              << " of turning point (" << tp.location.real() << ", " << tp.location.imag()
              << ")";
          throw BranchPointCollision(msg.str());
        }
      }
    }
  }

  auto value = [&](double t) { return integrand(p, path.shift_im, E, point_at(v, t)); };
  const cplx w0 = sqrt_near(value(0.0), path.seed.value_or(cplx(0.0)));
  out.t.push_back(0.0);
  out.z.push_back(v.front());
  out.w.push_back(w0);
  if (v.size() == 1)
  {
    return out;
  }

  const double t_end = static_cast<double>(v.size() - 1);
  // Work list of right endpoints still to be reached, processed left to right.
  std::vector<double> pending;
  for (double t = t_end; t > 0.0; t -= 1.0 / initial_pieces)
  {
    pending.push_back(t);
  }
  while (!pending.empty())
  {
    const double t0 = out.t.back(), t1 = pending.back();
    const cplx wa = out.w.back();
    const double tm = 0.5 * (t0 + t1);
    const cplx wm = sqrt_near(value(tm), wa);
    const cplx w1 = sqrt_near(value(t1), wm);
    const bool terminal = out.ends_at_turning_point && t1 == t_end;
    const bool ok = std::abs(wm - wa) < 0.5 * std::abs(wa) &&
                    (terminal || std::abs(w1 - wm) < 0.5 * std::abs(wm));
    if (ok || t1 - t0 < 1e-13)
    {
      if (!ok && !terminal)
      {
        throw BranchPointCollision("branch point collision: continuation stalled near t=" +
                                   std::to_string(t0));
      }
      out.t.push_back(tm);
      out.z.push_back(point_at(v, tm));
      out.w.push_back(wm);
      out.t.push_back(t1);
      out.z.push_back(point_at(v, t1));
      out.w.push_back(w1);
      pending.pop_back();
    }
    else
    {
      pending.push_back(tm);
    }
  }
  return out;
}

cplx action(const Potential &p, cplx E, const BranchedPath &path)
{
  return integrate_branch(p, E, path, [](cplx w) { return w; }, 1e-11);
}

cplx action_dE(const Potential &p, cplx E, const BranchedPath &path)
{
  return -0.5 * integrate_branch(p, E, path, [](cplx w) { return 1.0 / w; }, 1e-10);
}

std::vector<cplx> action_profile(const Potential &p, cplx E, const BranchedPath &path)
{
  const auto parts = integrate_segments(p, E, path, [](cplx w) { return w; }, 1e-11);
  std::vector<cplx> out{0.0};
  for (cplx s : parts)
  {
    out.push_back(out.back() + s);
  }
  out.resize(path.vertices.size(), out.back());
  return out;
}

cplx end_value(const Potential &p, cplx E, const BranchedPath &path)
{
  return continue_branch(path, p, E).w.back();
}

}  // namespace stokescope
