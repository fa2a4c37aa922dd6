#include "stokescope/stokes.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include <boost/numeric/odeint.hpp>
#include <nlohmann/json.hpp>

#include "stokescope/curves.hpp"
#include "stokescope/error.hpp"
#include "stokescope/svg.hpp"

namespace stokescope
{

namespace
{

namespace odeint = boost::numeric::odeint;
using state = std::array<double, 2>;

constexpr double inf = std::numeric_limits<double>::infinity();

cplx shifted_value(const Potential &p, cplx E, cplx x, double shift_im)
{
  return eval_poly(p, x) + cplx(0.0, shift_im) - E;
}

double cross(cplx a, cplx b)
{
  return a.real() * b.imag() - a.imag() * b.real();
}

bool segments_cross(cplx p1, cplx p2, cplx q1, cplx q2)
{
  const double d1 = cross(q2 - q1, p1 - q1), d2 = cross(q2 - q1, p2 - q1);
  const double d3 = cross(p2 - p1, q1 - p1), d4 = cross(p2 - p1, q2 - p1);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 &&
         d4 != 0;
}

double point_segment_distance(cplx q, cplx a, cplx b)
{
  const cplx d = b - a;
  const double len2 = std::norm(d);
  double s = len2 > 0.0 ? std::real((q - a) * std::conj(d)) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return std::abs(a + s * d - q);
}

Box enclose(Box box, const std::vector<cplx> &pts, double margin)
{
  for (cplx z : pts)
  {
    box.re_min = std::min(box.re_min, z.real() - margin);
    box.re_max = std::max(box.re_max, z.real() + margin);
    box.im_min = std::min(box.im_min, z.imag() - margin);
    box.im_max = std::max(box.im_max, z.imag() + margin);
  }
  return box;
}

// Where the segment from inside point a to outside point b leaves the box.
cplx clip_to_box(const Box &box, cplx a, cplx b)
{
  double s = 1.0;
  const cplx d = b - a;
  auto limit = [&](double from, double delta, double lo, double hi) {
    if (delta > 0 && from + delta > hi)
    {
      s = std::min(s, (hi - from) / delta);
    }
    if (delta < 0 && from + delta < lo)
    {
      s = std::min(s, (lo - from) / delta);
    }
  };
  limit(a.real(), d.real(), box.re_min, box.re_max);
  limit(a.imag(), d.imag(), box.im_min, box.im_max);
  return a + std::max(s, 0.0) * d;
}

StokesLine trace_line(const Potential &p, cplx E, double shift_im, const TurningPointSet &tps,
                      std::size_t source, int index, double theta, const Box &box, double eps)
{
  const double diam = box.diameter();
  const double max_step = 1e-3 * diam;
  const double max_length = 10.0 * diam;
  const cplx alpha = tps[source].location;

  StokesLine line;
  line.source = source;
  line.direction_index = index;
  const cplx dir = std::polar(1.0, theta);
  const cplx x0 = alpha + eps * dir;
  cplx w = std::sqrt(shifted_value(p, E, x0, shift_im));
  if (std::real(1i * std::conj(w) * std::conj(dir)) < 0.0)
  {
    w = -w;
  }
  line.points = {alpha, x0};
  line.branch = {0.0, w};
  line.arc_length = eps;

  auto field = [&](const state &x, state &dxdt, double) {
    const cplx z(x[0], x[1]);
    const cplx wz = sqrt_near(shifted_value(p, E, z, shift_im), w);
    const cplx s = 1i * std::conj(wz);
    const double n = std::abs(s);
    dxdt[0] = n > 0 ? s.real() / n : 0.0;
    dxdt[1] = n > 0 ? s.imag() / n : 0.0;
  };
  auto stepper = odeint::make_controlled(1e-12, 1e-12, odeint::runge_kutta_dopri5<state>());

  state x = {x0.real(), x0.imag()};
  double t = eps;
  double dt = 0.25 * eps;
  for (int guard = 0; guard < 10'000'000; ++guard)
  {
    const cplx here(x[0], x[1]);
    double other = inf;
    for (std::size_t k = 0; k < tps.size(); ++k)
    {
      if (k != source)
      {
        other = std::min(other, std::abs(here - tps[k].location));
      }
    }
    dt = std::min({dt, max_step, 0.5 * other});
    if (odeint::fail == stepper.try_step(field, x, t, dt))
    {
      if (dt < 1e-15)
      {
        throw ConvergenceError("Stokes line integration stalled");
      }
      continue;
    }
    cplx next(x[0], x[1]);
    w = sqrt_near(shifted_value(p, E, next, shift_im), w);
    line.arc_length = t;
    if (!box.contains(next))
    {
      next = clip_to_box(box, line.points.back(), next);
      line.points.push_back(next);
      line.branch.push_back(sqrt_near(shifted_value(p, E, next, shift_im), w));
      line.end = StokesLine::End::box;
      return line;
    }
    line.points.push_back(next);
    line.branch.push_back(w);
    for (std::size_t k = 0; k < tps.size(); ++k)
    {
      if (k != source && std::abs(next - tps[k].location) < 1e-5)
      {
        line.end = StokesLine::End::turning_point;
        return line;
      }
    }
    if (t > max_length)
    {
      line.end = StokesLine::End::arc_length;
      return line;
    }
  }
  line.end = StokesLine::End::arc_length;
  return line;
}

// Connectivity of the traced-line complement on a uniform grid of nodes, with line segments
// bucketed per cell for the crossing tests.
class RegionGrid
{
public:
  explicit RegionGrid(const StokesDiagram &d, int n = 160) : d_(d), n_(n)
  {
    const Box &b = d.box;
    hx_ = (b.re_max - b.re_min) / n;
    hy_ = (b.im_max - b.im_min) / n;
    buckets_.resize(static_cast<std::size_t>(n) * n);
    for (std::size_t l = 0; l < d.lines.size(); ++l)
    {
      const auto &pts = d.lines[l].points;
      for (std::size_t k = 0; k + 1 < pts.size(); ++k)
      {
        const int i0 = cell_x(std::min(pts[k].real(), pts[k + 1].real()));
        const int i1 = cell_x(std::max(pts[k].real(), pts[k + 1].real()));
        const int j0 = cell_y(std::min(pts[k].imag(), pts[k + 1].imag()));
        const int j1 = cell_y(std::max(pts[k].imag(), pts[k + 1].imag()));
        for (int i = i0; i <= i1; ++i)
        {
          for (int j = j0; j <= j1; ++j)
          {
            buckets_[idx(i, j)].push_back({l, k});
          }
        }
      }
    }
  }

  cplx node(int i, int j) const
  {
    return {d_.box.re_min + (i + 0.5) * hx_, d_.box.im_min + (j + 0.5) * hy_};
  }

  double distance_to_lines(cplx q) const
  {
    double best = inf;
    const int ci = cell_x(q.real()), cj = cell_y(q.imag());
    for (int i = std::max(0, ci - 1); i <= std::min(n_ - 1, ci + 1); ++i)
    {
      for (int j = std::max(0, cj - 1); j <= std::min(n_ - 1, cj + 1); ++j)
      {
        for (auto [l, k] : buckets_[idx(i, j)])
        {
          const auto &pts = d_.lines[l].points;
          best = std::min(best, point_segment_distance(q, pts[k], pts[k + 1]));
        }
      }
    }
    return best;
  }

  // Crossing test for a segment no longer than about one cell diagonal.
  bool blocked(cplx a, cplx b) const
  {
    const int i0 = cell_x(std::min(a.real(), b.real())), i1 = cell_x(std::max(a.real(), b.real()));
    const int j0 = cell_y(std::min(a.imag(), b.imag())), j1 = cell_y(std::max(a.imag(), b.imag()));
    for (int i = i0; i <= i1; ++i)
    {
      for (int j = j0; j <= j1; ++j)
      {
        for (auto [l, k] : buckets_[idx(i, j)])
        {
          const auto &pts = d_.lines[l].points;
          if (segments_cross(a, b, pts[k], pts[k + 1]))
          {
            return true;
          }
        }
      }
    }
    return false;
  }

  // Any-length segment test against every line.
  bool blocked_long(cplx a, cplx b) const
  {
    for (const auto &line : d_.lines)
    {
      for (std::size_t k = 0; k + 1 < line.points.size(); ++k)
      {
        if (segments_cross(a, b, line.points[k], line.points[k + 1]))
        {
          return true;
        }
      }
    }
    return false;
  }

  // Grid nodes near q that q sees without crossing a line.
  std::vector<int> attach(cplx q) const
  {
    std::vector<int> out;
    const int ci = cell_x(q.real()), cj = cell_y(q.imag());
    for (int i = std::max(0, ci - 1); i <= std::min(n_ - 1, ci + 1); ++i)
    {
      for (int j = std::max(0, cj - 1); j <= std::min(n_ - 1, cj + 1); ++j)
      {
        if (!blocked(q, node(i, j)))
        {
          out.push_back(idx(i, j));
        }
      }
    }
    return out;
  }

  // Breadth-first search over nodes; returns the node chain from any start to any goal.
  std::optional<std::vector<int>> search(const std::vector<int> &starts,
                                         const std::vector<int> &goals) const
  {
    std::vector<int> parent(static_cast<std::size_t>(n_) * n_, -2);
    std::vector<char> goal(parent.size(), 0);
    for (int g : goals)
    {
      goal[g] = 1;
    }
    std::deque<int> queue;
    for (int s : starts)
    {
      parent[s] = -1;
      queue.push_back(s);
    }
    while (!queue.empty())
    {
      const int c = queue.front();
      queue.pop_front();
      if (goal[c])
      {
        std::vector<int> chain;
        for (int k = c; k != -1; k = parent[k])
        {
          chain.push_back(k);
        }
        std::reverse(chain.begin(), chain.end());
        return chain;
      }
      const int i = c / n_, j = c % n_;
      const std::array<std::pair<int, int>, 4> nb = {{{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}}};
      for (auto [a, b] : nb)
      {
        if (a < 0 || b < 0 || a >= n_ || b >= n_)
        {
          continue;
        }
        const int m = idx(a, b);
        if (parent[m] != -2 || blocked(node(i, j), node(a, b)))
        {
          continue;
        }
        parent[m] = c;
        queue.push_back(m);
      }
    }
    return std::nullopt;
  }

  cplx node_of(int k) const { return node(k / n_, k % n_); }

private:
  int idx(int i, int j) const { return i * n_ + j; }
  int cell_x(double re) const
  {
    return std::clamp(static_cast<int>(std::floor((re - d_.box.re_min) / hx_)), 0, n_ - 1);
  }
  int cell_y(double im) const
  {
    return std::clamp(static_cast<int>(std::floor((im - d_.box.im_min) / hy_)), 0, n_ - 1);
  }

  const StokesDiagram &d_;
  int n_;
  double hx_, hy_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> buckets_;
};

void check_off_lines(const RegionGrid &g, std::span<const cplx> points)
{
  for (cplx q : points)
  {
    if (g.distance_to_lines(q) < 1e-6)
    {
      std::ostringstream msg;
      msg << "on boundary: point (" << q.real() << ", " << q.imag()
          << ") lies within 1e-6 of a Stokes line";
      throw DegenerateConfiguration(msg.str());
    }
  }
}

std::optional<std::vector<cplx>> connect(const RegionGrid &g, cplx a, cplx b)
{
  if (!g.blocked_long(a, b))
  {
    return std::vector<cplx>{a, b};
  }
  const auto from = g.attach(a), to = g.attach(b);
  if (from.empty() || to.empty())
  {
    return std::nullopt;
  }
  const auto chain = g.search(from, to);
  if (!chain)
  {
    return std::nullopt;
  }
  std::vector<cplx> path{a};
  for (int k : *chain)
  {
    path.push_back(g.node_of(k));
  }
  path.push_back(b);
  // Drop collinear interior vertices of the staircase.
  std::vector<cplx> slim{path.front()};
  for (std::size_t k = 1; k + 1 < path.size(); ++k)
  {
    if (std::abs(cross(path[k] - slim.back(), path[k + 1] - path[k])) > 1e-14)
    {
      slim.push_back(path[k]);
    }
  }
  slim.push_back(path.back());
  return slim;
}

// --- progressive paths -----------------------------------------------------------------

struct Leg
{
  double lo, hi, shift;
};

struct WalkResult
{
  std::vector<cplx> path;
  double min_slope;
};

// Greedy walk from lo to hi keeping Re z strictly increasing: each step heads for the target
// when that direction ascends Re z by at least margin |w|, otherwise it takes the nearest
// direction inside that cone.
std::optional<WalkResult> walk(const Potential &p, cplx E, const Leg &pc,
                               const TurningPointSet &tps, double margin, double sheet)
{
  const double step = 1e-3;
  const cplx target = pc.hi;
  cplx x = pc.lo;
  cplx w = sheet * std::sqrt(shifted_value(p, E, x, pc.shift));
  if (w == cplx(0.0))
  {
    return std::nullopt;
  }
  WalkResult out{{x}, inf};
  const double cone = std::acos(margin);
  double best = std::abs(target - x);
  int since_best = 0;
  const double span = pc.hi - pc.lo;
  const int max_steps = static_cast<int>(5.0 * span / step) + 1000;
  for (int n = 0; n < max_steps; ++n)
  {
    const cplx to = target - x;
    const double dist = std::abs(to);
    if (dist > 2.0 * span + 1.0)
    {
      return std::nullopt;
    }
    const cplx g = std::conj(w) / std::abs(w);
    const cplx d0 = to / dist;
    cplx d = d0;
    if (std::real(d0 * std::conj(g)) < margin)
    {
      const double phi = std::arg(d0 / g);
      d = g * std::polar(1.0, phi >= 0 ? cone : -cone);
    }
    const bool last = dist <= step && std::real(w * d0) > 0.0;
    const double len = last ? dist : step;
    if (last)
    {
      d = d0;
    }
    const cplx xn = last ? target : x + len * d;
    for (const auto &tp : tps)
    {
      if (std::abs(xn - tp.location) < 1e-6)
      {
        return std::nullopt;
      }
    }
    const cplx wm = sqrt_near(shifted_value(p, E, x + 0.5 * len * d, pc.shift), w);
    const cplx wn = sqrt_near(shifted_value(p, E, xn, pc.shift), wm);
    const double slope = std::min({std::real(w * d), std::real(wm * d), std::real(wn * d)});
    if (!(slope > 0.0))
    {
      return std::nullopt;
    }
    out.min_slope = std::min(out.min_slope, slope);
    x = xn;
    w = wn;
    out.path.push_back(x);
    if (last)
    {
      return out;
    }
    if (dist - len < best - 1e-12)
    {
      best = std::abs(target - x);
      since_best = 0;
    }
    else if (++since_best > 3000)
    {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

bool is_ix2(const Potential &p)
{
  const auto &c = p.coeffs();
  return c.size() == 3 && c(0) == cplx(0.0) && c(1) == cplx(0.0) && c(2) == cplx(0.0, 1.0);
}

double condition_distance_of(double re_s, cplx dS)
{
  const double g = std::abs(dS);
  return g > 0 ? std::abs(re_s) / g : inf;
}

struct PieceVerdict
{
  MembershipVerdict v;
  std::vector<cplx> witness;
};

constexpr double zero_tol = 1e-9;

// The V = ix^2 case on [-1, 1] when -1 and 1 lie in different regions: E is outside T
// exactly on the arc Gamma_{alpha+,1} from i to the junction or on the ray segment
// {lambda e^{i pi/4}, 0 <= lambda < lambda0}.
void ix2_table(const Potential &p, cplx E, MembershipVerdict &v)
{
  const cplx ap = std::sqrt(-1i * E);  // alpha_+, Re >= 0
  const double argE = std::arg(E);
  const double lam0 = junction_lambda0();

  // Re S_{alpha+,1} = -Re S_{1,alpha+}; the sign depends on the determination, only the zero
  // set is used.
  const auto to_ap = segment(1.0, ap);
  const cplx s1 = -action(p, E, to_ap);
  const cplx ds1 = -action_dE(p, E, to_ap);
  const bool sector = argE >= pi / 4 - 1e-9 && argE <= pi / 2 + 1e-9 && std::abs(E) <= 1.0 + 1e-9;
  const bool on_arc = std::abs(s1.real()) <= zero_tol;
  v.conditions.push_back({"Re S(alpha+,1)", s1.real(), on_arc});
  v.conditions.push_back({"Im S(alpha+,1)", s1.imag(), sector});

  // Re S_{alpha-,alpha+} = 2 Re S_{0,alpha+} with the seed at 0.
  const auto mid = segment(0.0, ap);
  const cplx s2 = 2.0 * action(p, E, mid);
  const cplx ds2 = 2.0 * action_dE(p, E, mid);
  const bool on_ray_side = E.real() > 0 && std::abs(E) < lam0;
  const bool on_ray = std::abs(s2.real()) <= zero_tol;
  v.conditions.push_back({"Re S(alpha-,alpha+)", s2.real(), on_ray});

  double dist = inf;
  if (sector)
  {
    dist = std::min(dist, condition_distance_of(s1.real(), ds1));
  }
  if (on_ray_side)
  {
    dist = std::min(dist, condition_distance_of(s2.real(), ds2));
  }
  v.condition_distance = std::min(v.condition_distance, dist);
  if ((on_arc && sector) || (on_ray && on_ray_side))
  {
    v.status = Membership::not_in_T;
    v.note = on_arc && sector ? "on Gamma(alpha+,1)" : "on Gamma(alpha-,alpha+)";
  }
  else
  {
    v.status = Membership::in_T;
    v.note = "no condition of the ix^2 table holds";
  }
}

PieceVerdict decide_piece(const Potential &smooth, cplx E, const Leg &pc, const Box &box,
                          bool table)
{
  PieceVerdict out;
  MembershipVerdict &v = out.v;
  v.condition_distance = inf;

  StokesDiagram d;
  try
  {
    d = trace_diagram(smooth, E, enclose(box, {pc.lo, pc.hi}, 0.5), pc.shift);
  }
  catch (const DegenerateConfiguration &e)
  {
    v.status = Membership::boundary;
    v.note = e.what();
    return out;
  }

  RegionGrid grid(d);
  const std::array<cplx, 2> ends = {pc.lo, pc.hi};
  std::optional<std::vector<cplx>> inside;
  try
  {
    check_off_lines(grid, ends);
    inside = connect(grid, pc.lo, pc.hi);
  }
  catch (const DegenerateConfiguration &e)
  {
    v.status = Membership::boundary;
    v.note = e.what();
    return out;
  }

  std::ostringstream label;
  label << "Re S(" << pc.lo << "," << pc.hi << ")";
  if (inside)
  {
    // Same region: a progressive path exists iff Re S along a path inside the region is
    // nonzero.
    const BranchedPath path{*inside, {}, pc.shift};
    cplx S, dS;
    try
    {
      S = action(smooth, E, path);
      dS = action_dE(smooth, E, path);
    }
    catch (const BranchPointCollision &e)
    {
      v.status = Membership::boundary;
      v.note = e.what();
      return out;
    }
    const bool zero = std::abs(S.real()) <= zero_tol;
    v.conditions.push_back({label.str(), S.real(), zero});
    v.condition_distance = condition_distance_of(S.real(), dS);
    v.status = zero ? Membership::not_in_T : Membership::in_T;
    v.note = "endpoints share a Stokes region";
    if (zero)
    {
      return out;
    }
  }
  else
  {
    v.note = "endpoints in different Stokes regions";
  }

  auto find_witness = [&]() -> std::optional<WalkResult> {
    for (double margin : {0.3, 0.1, 0.03, 0.01, 0.003, 0.001})
    {
      for (double sheet : {1.0, -1.0})
      {
        if (auto r = walk(smooth, E, pc, d.turning_points, margin, sheet))
        {
          return r;
        }
      }
    }
    return std::nullopt;
  };
  const auto found = find_witness();
  if (found)
  {
    out.witness = found->path;
    v.min_slope = found->min_slope;
  }
  if (inside)
  {
    return out;
  }
  if (table)
  {
    ix2_table(smooth, E, v);
    if (found && v.status == Membership::not_in_T)
    {
      v.note += " (walker found a path within tolerance of the condition)";
    }
  }
  else if (found)
  {
    v.status = Membership::in_T;
    v.note += "; witness found";
  }
  else
  {
    v.status = Membership::unknown;
    v.note += "; no witness and no condition table for this potential";
  }
  return out;
}

}  // namespace

cplx stokes_field(const Potential &p, cplx E, cplx x, cplx branch, double shift_im)
{
  const cplx v = shifted_value(p, E, x, shift_im);
  if (std::abs(v) < 1e-12)
  {
    throw DegenerateConfiguration("at turning point: Stokes field undefined");
  }
  return 1i * std::conj(sqrt_near(v, branch));
}

cplx unit_stokes_field(const Potential &p, cplx E, cplx x, cplx branch, double shift_im)
{
  const cplx s = stokes_field(p, E, x, branch, shift_im);
  return s / std::abs(s);
}

std::array<double, 3> departure_angles(const Potential &p, cplx alpha, double)
{
  const cplx dv = eval_poly(derivative(p.smooth()), alpha);
  const double base = (pi - std::arg(dv)) / 3.0;
  return {base, base + 2 * pi / 3, base + 4 * pi / 3};
}

StokesDiagram trace_diagram(const Potential &p, cplx E, Box box, double shift_im)
{
  StokesDiagram d;
  d.E = E;
  d.shift_im = shift_im;
  d.turning_points = turning_points(p, E, shift_im);
  double sep = inf;
  for (std::size_t i = 0; i < d.turning_points.size(); ++i)
  {
    if (d.turning_points[i].order > 1)
    {
      std::ostringstream msg;
      msg << "degenerate configuration: turning point of order " << d.turning_points[i].order
          << " at (" << d.turning_points[i].location.real() << ", "
          << d.turning_points[i].location.imag() << "); perturb E";
      throw DegenerateConfiguration(msg.str());
    }
    for (std::size_t j = i + 1; j < d.turning_points.size(); ++j)
    {
      sep = std::min(sep, std::abs(d.turning_points[i].location - d.turning_points[j].location));
    }
  }
  if (sep < 1e-4)
  {
    throw DegenerateConfiguration("degenerate configuration: turning points closer than 1e-4");
  }
  std::vector<cplx> locs;
  for (const auto &tp : d.turning_points)
  {
    locs.push_back(tp.location);
  }
  d.box = enclose(box, locs, 0.5);
  d.enlarged = d.box.re_min != box.re_min || d.box.re_max != box.re_max ||
               d.box.im_min != box.im_min || d.box.im_max != box.im_max;
  const double eps = std::min(1e-4, 0.01 * sep);
  for (std::size_t s = 0; s < d.turning_points.size(); ++s)
  {
    const auto angles = departure_angles(p, d.turning_points[s].location, shift_im);
    for (int k = 0; k < 3; ++k)
    {
      d.lines.push_back(trace_line(p.smooth(), E, shift_im, d.turning_points, s, k, angles[k],
                                   d.box, eps));
    }
  }
  return d;
}

bool same_region(const StokesDiagram &d, std::span<const cplx> points)
{
  if (points.size() <= 1)
  {
    return true;
  }
  RegionGrid grid(d);
  check_off_lines(grid, points);
  for (std::size_t k = 1; k < points.size(); ++k)
  {
    if (!connect(grid, points[0], points[k]))
    {
      return false;
    }
  }
  return true;
}

std::optional<std::vector<cplx>> region_path(const StokesDiagram &d, cplx a, cplx b)
{
  RegionGrid grid(d);
  const std::array<cplx, 2> pts = {a, b};
  check_off_lines(grid, pts);
  return connect(grid, a, b);
}

double line_residual(const Potential &p, const StokesDiagram &d, const StokesLine &line)
{
  if (line.points.size() < 2)
  {
    return 0.0;
  }
  // S_{alpha,x} = S_{alpha,x_1} + S_{x_1,x}; the first piece is the reversed start chord.
  std::vector<cplx> rest(line.points.begin() + 1, line.points.end());
  const cplx head = -action(p.smooth(), d.E, BranchedPath{{rest.front(), line.points.front()},
                                                        line.branch[1], d.shift_im});
  double worst = std::abs(head.real()) / (1.0 + std::abs(rest.front() - line.points.front()));
  if (rest.size() < 2)
  {
    return worst;
  }
  const auto prof = action_profile(p.smooth(), d.E, BranchedPath{rest, line.branch[1], d.shift_im});
  double arc = std::abs(rest.front() - line.points.front());
  for (std::size_t k = 0; k < prof.size(); ++k)
  {
    if (k > 0)
    {
      arc += std::abs(rest[k] - rest[k - 1]);
    }
    worst = std::max(worst, std::abs((head + prof[k]).real()) / (1.0 + arc));
  }
  return worst;
}

double hausdorff_distance(const std::vector<std::vector<cplx>> &a,
                          const std::vector<std::vector<cplx>> &b, double radius)
{
  auto one_sided = [radius](const std::vector<std::vector<cplx>> &from,
                            const std::vector<std::vector<cplx>> &to) {
    double worst = 0.0;
    for (const auto &line : from)
    {
      for (cplx q : line)
      {
        if (std::abs(q) > radius)
        {
          continue;
        }
        double best = inf;
        for (const auto &other : to)
        {
          for (std::size_t k = 0; k + 1 < other.size(); ++k)
          {
            best = std::min(best, point_segment_distance(q, other[k], other[k + 1]));
          }
        }
        worst = std::max(worst, best);
      }
    }
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

std::string to_string(Membership m)
{
  switch (m)
  {
  case Membership::in_T:
    return "in_T";
  case Membership::not_in_T:
    return "not_in_T";
  case Membership::boundary:
    return "boundary";
  case Membership::unknown:
    break;
  }
  return "unknown";
}

MembershipVerdict progressive_path(const Potential &p, cplx E, const Box &box)
{
  if (E == cplx(0.0))
  {
    throw ConfigError("progressive_path: E must be nonzero");
  }
  const Potential smooth = p.smooth();
  const auto pieces = p.pieces();
  const bool table = pieces.size() == 1 && is_ix2(p) && !p.has_jumps();

  MembershipVerdict total;
  total.status = Membership::in_T;
  total.condition_distance = inf;
  total.min_slope = inf;
  std::vector<cplx> witness;
  bool complete = true;
  for (const auto &piece : pieces)
  {
    auto pv = decide_piece(smooth, E, {piece.lo, piece.hi, piece.shift_im}, box, table);
    const auto s = pv.v.status;
    if (s == Membership::not_in_T || total.status == Membership::not_in_T)
    {
      total.status = Membership::not_in_T;
    }
    else if (s == Membership::boundary || total.status == Membership::boundary)
    {
      total.status = Membership::boundary;
    }
    else if (s == Membership::unknown)
    {
      total.status = Membership::unknown;
    }
    for (auto &c : pv.v.conditions)
    {
      total.conditions.push_back(c);
    }
    total.condition_distance = std::min(total.condition_distance, pv.v.condition_distance);
    if (pv.witness.empty())
    {
      complete = false;
    }
    else
    {
      total.min_slope = std::min(total.min_slope, pv.v.min_slope);
      witness.insert(witness.end(), pv.witness.begin() + (witness.empty() ? 0 : 1),
                     pv.witness.end());
    }
    if (!total.note.empty())
    {
      total.note += " | ";
    }
    total.note += pv.v.note;
  }
  if (total.status == Membership::in_T && complete)
  {
    total.witness = std::move(witness);
  }
  if (!total.witness)
  {
    total.min_slope = 0.0;
  }
  return total;
}

MembershipVerdict progressive_path(const Potential &p, cplx E, double delta,
                                   std::optional<double> beta, const Box &box)
{
  if (delta == 0.0)
  {
    return progressive_path(p, E, box);
  }
  if (!beta)
  {
    throw ConfigError("progressive_path: beta is required when delta > 0");
  }
  return progressive_path(Potential::step_perturbed(p, delta, *beta), E, box);
}

void to_json(nlohmann::json &j, const StokesDiagram &d)
{
  j = nlohmann::json::object();
  j["E"] = {d.E.real(), d.E.imag()};
  j["shift_im"] = d.shift_im;
  j["box"] = {d.box.re_min, d.box.re_max, d.box.im_min, d.box.im_max};
  j["turning_points"] = nlohmann::json::array();
  for (const auto &tp : d.turning_points)
  {
    j["turning_points"].push_back(
        {{"location", {tp.location.real(), tp.location.imag()}}, {"order", tp.order}});
  }
  j["lines"] = nlohmann::json::array();
  for (const auto &l : d.lines)
  {
    nlohmann::json pts = nlohmann::json::array();
    for (cplx z : l.points)
    {
      pts.push_back({z.real(), z.imag()});
    }
    j["lines"].push_back({{"source", l.source}, {"direction_index", l.direction_index},
                          {"points", pts}});
  }
}

std::string diagram_svg(const StokesDiagram &d, const std::vector<double> &markers)
{
  Svg svg(d.box);
  svg.axes();
  svg.polyline({-1.0, 1.0}, "#888888", 2.0);
  const std::array<const char *, 3> colours = {"#1f77b4", "#d62728", "#2ca02c"};
  for (const auto &l : d.lines)
  {
    svg.polyline(l.points, colours[static_cast<std::size_t>(l.direction_index) % 3], 1.2);
  }
  for (const auto &tp : d.turning_points)
  {
    svg.dot(tp.location, 3.5, "black");
  }
  svg.cross(-1.0, 4, "black");
  svg.cross(1.0, 4, "black");
  for (double b : markers)
  {
    svg.cross(b, 4, "#9467bd");
  }
  std::ostringstream label;
  label << "E = " << d.E.real() << (d.E.imag() < 0 ? " - " : " + ") << std::abs(d.E.imag())
        << "i";
  svg.text(cplx(d.box.re_min + 0.02 * (d.box.re_max - d.box.re_min),
                d.box.im_max - 0.04 * (d.box.im_max - d.box.im_min)),
           label.str());
  return svg.str();
}

}  // namespace stokescope
