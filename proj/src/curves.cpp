#include "stokescope/curves.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "stokescope/error.hpp"
#include "stokescope/io.hpp"

namespace stokescope
{

namespace
{

constexpr double tol_re_s = 1e-12;
const cplx ray_dir = std::polar(1.0, pi / 4);

// Action value, its E-derivative and the branch hint to carry to the next evaluation.
struct LevelValue
{
  cplx S, dS, hint;
};
using LevelFn = std::function<LevelValue(cplx E, cplx hint)>;

struct LevelPoint
{
  cplx E;
  cplx hint;
  cplx grad;  // gradient of Re S as a complex number, conj(dS/dE)
};

// Newton on Re S = 0 along the gradient of Re S.
std::optional<LevelPoint> correct(const LevelFn &f, cplx E, cplx hint)
{
  for (int it = 0; it < 30; ++it)
  {
    LevelValue v;
    try
    {
      v = f(E, hint);
    }
    catch (const BranchPointCollision &)
    {
      return std::nullopt;
    }
    const cplx g = std::conj(v.dS);
    if (std::abs(v.S.real()) <= tol_re_s)
    {
      return LevelPoint{E, v.hint, g};
    }
    if (std::norm(g) == 0.0)
    {
      return std::nullopt;
    }
    E -= v.S.real() * g / std::norm(g);
    hint = v.hint;
  }
  return std::nullopt;
}

// Pseudo-arclength continuation of {Re S = 0} from a corrected start point until stop(E)
// returns true.
std::vector<LevelPoint> continue_level_set(const LevelFn &f, LevelPoint start, cplx tangent,
                                           double step, const std::function<bool(cplx)> &stop,
                                           int max_points = 200000)
{
  std::vector<LevelPoint> pts{start};
  cplx t = tangent / std::abs(tangent);
  double h = step;
  while (static_cast<int>(pts.size()) < max_points)
  {
    const LevelPoint &cur = pts.back();
    std::optional<LevelPoint> next;
    while (true)
    {
      next = correct(f, cur.E + h * t, cur.hint);
      if (next)
      {
        cplx tn = 1i * next->grad / std::abs(next->grad);
        if (std::real(tn * std::conj(t)) < 0)
        {
          tn = -tn;
        }
        if (std::abs(next->E - cur.E) < 2 * h && std::real(tn * std::conj(t)) > std::cos(0.2))
        {
          t = tn;
          break;
        }
      }
      h *= 0.5;
      if (h < step / 4096)
      {
        std::ostringstream msg;
        msg << "level-set continuation stalled near E = " << cur.E.real() << " + "
            << cur.E.imag() << "i";
        throw ConvergenceError(msg.str());
      }
    }
    pts.push_back(*next);
    h = std::min(step, 2 * h);
    if (stop(next->E))
    {
      break;
    }
  }
  return pts;
}

// The point of the level set on the ray arg E = pi/4 between two samples on either side.
LevelPoint land_on_ray(const LevelFn &f, const LevelPoint &a, const LevelPoint &b)
{
  double la = std::abs(a.E), lb = std::abs(b.E);
  double ga = f(la * ray_dir, a.hint).S.real();
  double gb = f(lb * ray_dir, a.hint).S.real();
  // Widen until the bracket holds a sign change of Re S restricted to the ray.
  for (int k = 0; k < 20 && (ga > 0) == (gb > 0); ++k)
  {
    const double w = std::abs(lb - la) + 1e-6;
    la = std::max(1e-8, std::min(la, lb) - w);
    lb = std::max(la, lb) + w;
    ga = f(la * ray_dir, a.hint).S.real();
    gb = f(lb * ray_dir, a.hint).S.real();
  }
  if ((ga > 0) == (gb > 0))
  {
    throw NoBracket("level set does not cross the ray arg E = pi/4 near the junction");
  }
  for (int it = 0; it < 200 && std::abs(lb - la) > 1e-13; ++it)
  {
    const double lm = 0.5 * (la + lb);
    const double gm = f(lm * ray_dir, a.hint).S.real();
    if ((gm > 0) == (ga > 0))
    {
      la = lm;
      ga = gm;
    }
    else
    {
      lb = lm;
    }
  }
  const cplx E = 0.5 * (la + lb) * ray_dir;
  const auto v = f(E, a.hint);
  return {E, v.hint, std::conj(v.dS)};
}

double max_abs_potential(const Potential &p, double shift_im)
{
  double m = 0.0;
  for (int k = 0; k <= 2000; ++k)
  {
    const double x = -1.0 + k * 1e-3;
    m = std::max({m, std::abs(eval(p, x)), std::abs(eval_poly(p, x) + cplx(0.0, shift_im))});
  }
  return m;
}

const Potential &ix2()
{
  static const Potential v = Potential::ix2();
  return v;
}

// S_{alpha+,1} for V = ix^2 as -S_{1,alpha+}, alpha+ the turning point nearest `near`.
LevelValue alpha_plus_action(cplx E, cplx seed_hint, cplx near)
{
  const auto tps = turning_points(ix2(), E);
  cplx alpha = tps[0].location;
  for (const auto &tp : tps)
  {
    if (std::abs(tp.location - near) < std::abs(alpha - near))
    {
      alpha = tp.location;
    }
  }
  const cplx w1 = sqrt_near(eval(ix2(), 1.0) - E, seed_hint);
  const auto path = segment(1.0, alpha, w1);
  return {-action(ix2(), E, path), -action_dE(ix2(), E, path), w1};
}

LevelValue unbounded_action(cplx E, cplx seed_hint)
{
  const cplx w0 = sqrt_near(eval(ix2(), -1.0) - E, seed_hint);
  const auto path = segment(-1.0, 1.0, w0);
  return {action(ix2(), E, path), action_dE(ix2(), E, path), w0};
}

}  // namespace

cplx real_segment_action(const Potential &p, double x0, double x1, double shift_im, cplx E)
{
  const Potential smooth = p.smooth();
  const cplx seed = 1i * std::sqrt(E - eval_poly(smooth, x0) - cplx(0.0, shift_im));
  return action(smooth, E, segment(x0, x1, seed, shift_im));
}

double large_a_threshold(const Potential &p, double shift_im)
{
  return 3.0 * (1.0 + max_abs_potential(p, shift_im));
}

namespace
{

// Root in b of Re S(a + i b) inside [lo, hi], Newton safeguarded by bisection.
double solve_level(const Potential &p, double x0, double x1, double shift_im, double a,
                   double lo, double hi, double b_seed)
{
  auto f = [&](double b) { return real_segment_action(p, x0, x1, shift_im, cplx(a, b)).real(); };

  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0)
  {
    return lo;
  }
  if (fhi == 0.0)
  {
    return hi;
  }
  if ((flo > 0) == (fhi > 0))
  {
    std::ostringstream msg;
    msg << "no curve point / bracket exhausted: Re S has one sign on [" << lo << ", " << hi
        << "] at a = " << a;
    throw NoBracket(msg.str());
  }
  double b = b_seed;
  double fb = f(b);
  for (int it = 0; it < 200; ++it)
  {
    if (std::abs(fb) <= tol_re_s || hi - lo < 1e-15 * (1.0 + std::abs(b)))
    {
      return b;
    }
    if ((fb > 0) == (flo > 0))
    {
      lo = b;
      flo = fb;
    }
    else
    {
      hi = b;
    }
    const double d = 1e-6 * (1.0 + std::abs(b));
    const double slope = (f(b + d) - f(b - d)) / (2 * d);
    double next = slope != 0.0 ? b - fb / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi))
    {
      next = 0.5 * (lo + hi);
    }
    const double fn = f(next);
    if (std::abs(fn) > 0.5 * std::abs(fb))
    {
      // Newton is not contracting; take a bisection step as well.
      if ((fn > 0) == (flo > 0))
      {
        lo = next;
        flo = fn;
      }
      else
      {
        hi = next;
      }
      b = 0.5 * (lo + hi);
      fb = f(b);
    }
    else
    {
      b = next;
      fb = fn;
    }
  }
  if (std::abs(fb) <= 1e-9)
  {
    return b;
  }
  throw ConvergenceError("curve_point: no convergence at a = " + std::to_string(a));
}

}  // namespace

double curve_point(const Potential &p, double x0, double x1, double shift_im, double a,
                   double b_seed)
{
  const double threshold = large_a_threshold(p, shift_im);
  if (a < threshold)
  {
    std::ostringstream msg;
    msg << "no curve point: a = " << a << " is below the large-a threshold " << threshold;
    throw NoBracket(msg.str());
  }
  return solve_level(p, x0, x1, shift_im, a, b_seed - 1.0, b_seed + 1.0, b_seed);
}

SpectralCurve trace_curve(const Potential &p, double x0, double x1, double shift_im,
                          double a_min, double a_max, double step)
{
  if (!(a_min < a_max) || !(step > 0))
  {
    throw ConfigError("trace_curve: need a_min < a_max and step > 0");
  }
  SpectralCurve c;
  std::ostringstream name;
  name << "Gamma(" << x0 << "," << x1 << ")";
  c.name = name.str();
  c.x0 = x0;
  c.x1 = x1;
  c.shift_im = shift_im;
  c.asymptote = asymptote(p, x0, x1, shift_im);

  const double a_start = std::max(a_min, std::min(a_max, large_a_threshold(p, shift_im)));
  double b = curve_point(p, x0, x1, shift_im, a_start, *c.asymptote);
  c.samples.push_back({a_start, b});
  double a = a_start, h = step;
  while (a < a_max)
  {
    const double next = std::min(a + h, a_max);
    try
    {
      b = curve_point(p, x0, x1, shift_im, next, b);
      c.samples.push_back({next, b});
      a = next;
      h = std::min(step, 2 * h);
    }
    catch (const NoBracket &)
    {
      h *= 0.5;
      if (h < step / 64)
      {
        throw;
      }
    }
  }

  // Below the threshold: continue from the certified part with a local bracket.
  std::vector<cplx> below;
  cplx last = c.samples.front();
  cplx before = c.samples.size() > 1 ? c.samples[1] : last;
  h = step;
  while (last.real() > a_min)
  {
    const double next = std::max(last.real() - h, a_min);
    const double slope =
        before.real() != last.real() ? (before.imag() - last.imag()) / (before.real() - last.real()) : 0.0;
    const double pred = last.imag() + slope * (next - last.real());
    const double width = 0.05 + std::abs(pred - last.imag());
    try
    {
      const double bn = solve_level(p, x0, x1, shift_im, next, pred - width, pred + width, pred);
      before = last;
      last = {next, bn};
      below.push_back(last);
      h = std::min(step, 2 * h);
    }
    catch (const NoBracket &)
    {
      h *= 0.5;
      if (h < step / 64)
      {
        throw;
      }
    }
  }
  c.samples.insert(c.samples.begin(), below.rbegin(), below.rend());
  return c;
}

double asymptote(const Potential &p, double x0, double x1, double shift_im)
{
  if (x0 == x1)
  {
    throw ConfigError("asymptote: endpoints coincide");
  }
  const auto y = primitive(p.smooth());
  return std::imag(eval(y, x1) - eval(y, x0)) / (x1 - x0) + shift_im;
}

double junction_lambda0()
{
  static double cached = 0.0;
  static std::once_flag once;
  std::call_once(once, [] {
    // Continue the seed at x = 1 in lambda; g is only sign-stable on one determination.
    auto g = [](double lam, cplx &hint) {
      const cplx E = lam * ray_dir;
      const auto v = alpha_plus_action(E, hint, std::sqrt(-1i * E));
      hint = v.hint;
      return v.S.real();
    };
    cplx hint = std::sqrt(1i);
    double prev_l = 0.05;
    double prev_g = g(prev_l, hint);
    cplx prev_hint = hint;
    for (int k = 2; k <= 400; ++k)
    {
      const double l = 0.05 * k;
      const double gl = g(l, hint);
      if ((gl > 0) != (prev_g > 0))
      {
        double lo = prev_l, hi = l, glo = prev_g;
        while (hi - lo > 1e-11)
        {
          const double mid = 0.5 * (lo + hi);
          cplx h = prev_hint;
          const double gm = g(mid, h);
          if ((gm > 0) == (glo > 0))
          {
            lo = mid;
            glo = gm;
          }
          else
          {
            hi = mid;
          }
        }
        cached = 0.5 * (lo + hi);
        return;
      }
      prev_l = l;
      prev_g = gl;
      prev_hint = hint;
    }
  });
  if (cached == 0.0)
  {
    throw NoBracket("junction_lambda0: Re S(alpha+,1) has no sign change on (0, 20]");
  }
  return cached;
}

SpectralCurve trace_unbounded_branch(double a_max, double step)
{
  const Potential &v = ix2();
  const double a0 = std::max(a_max, large_a_threshold(v));
  const double b0 = curve_point(v, -1.0, 1.0, 0.0, a0, asymptote(v, -1.0, 1.0));
  LevelFn f = [](cplx E, cplx hint) { return unbounded_action(E, hint); };
  const cplx E0(a0, b0);
  auto start = correct(f, E0, 1i * std::sqrt(E0 - eval(v, -1.0)));
  if (!start)
  {
    throw ConvergenceError("trace_unbounded_branch: start point did not converge");
  }
  auto pts = continue_level_set(f, *start, -1.0, step,
                                [](cplx E) { return std::arg(E) >= pi / 4; });
  if (std::arg(pts.back().E) < pi / 4)
  {
    throw ConvergenceError("trace_unbounded_branch: did not reach the junction");
  }
  pts.back() = land_on_ray(f, pts[pts.size() - 2], pts.back());

  SpectralCurve c;
  c.name = "Gamma(-1,1)";
  c.asymptote = asymptote(v, -1.0, 1.0);
  for (auto it = pts.rbegin(); it != pts.rend(); ++it)
  {
    c.samples.push_back(it->E);
  }
  return c;
}

YShape y_shape(double lambda_step, double a_max)
{
  if (!(lambda_step > 0))
  {
    throw ConfigError("y_shape: lambda_step must be positive");
  }
  YShape y;
  y.lambda0 = junction_lambda0();
  y.junction = y.lambda0 * ray_dir;

  y.ray.name = "Gamma(alpha-,alpha+)";
  for (double l = 0.0; l < y.lambda0; l += lambda_step)
  {
    y.ray.samples.push_back(l * ray_dir);
  }
  y.ray.samples.push_back(y.junction);

  // Gamma(alpha+,1) leaves E = i, where alpha+ = 1 and S vanishes identically, in the
  // direction arg(E - i) = -pi/3.
  y.arc.name = "Gamma(alpha+,1)";
  cplx near = 1.0;
  LevelFn f = [&near](cplx E, cplx hint) {
    auto v = alpha_plus_action(E, hint, near);
    return v;
  };
  const cplx dir = std::polar(1.0, -pi / 3);
  const cplx E0 = 1i + 1e-3 * dir;
  near = std::sqrt(-1i * E0);
  auto start = correct(f, E0, std::sqrt(eval(ix2(), 1.0) - E0));
  if (!start)
  {
    throw ConvergenceError("y_shape: Gamma(alpha+,1) start did not converge");
  }
  const double step = std::min(0.01, lambda_step);
  LevelFn tracked = [&near](cplx E, cplx hint) {
    near = std::sqrt(-1i * E);
    return alpha_plus_action(E, hint, near);
  };
  auto pts = continue_level_set(tracked, *start, dir, step,
                                [](cplx E) { return std::arg(E) <= pi / 4; });
  pts.back() = land_on_ray(tracked, pts[pts.size() - 2], pts.back());
  y.arc.samples.push_back(1i);
  for (const auto &pt : pts)
  {
    y.arc.samples.push_back(pt.E);
  }

  y.unbounded = trace_unbounded_branch(a_max, 2 * step);
  return y;
}

std::string curve_csv(const SpectralCurve &c)
{
  std::string out = "a,b\n";
  for (cplx E : c.samples)
  {
    out += format_double(E.real()) + "," + format_double(E.imag()) + "\n";
  }
  return out;
}

void to_json(nlohmann::json &j, const SpectralCurve &c)
{
  nlohmann::json pts = nlohmann::json::array();
  for (cplx E : c.samples)
  {
    pts.push_back({E.real(), E.imag()});
  }
  j = {{"name", c.name}, {"x0", c.x0}, {"x1", c.x1}, {"shift_im", c.shift_im}, {"samples", pts}};
  j["asymptote"] = c.asymptote ? nlohmann::json(*c.asymptote) : nlohmann::json();
}

void to_json(nlohmann::json &j, const YShape &y)
{
  j = {{"curves", {y.ray, y.arc, y.unbounded}},
       {"lambda0", y.lambda0},
       {"junction", {y.junction.real(), y.junction.imag()}}};
}

double distance_to_curve(const SpectralCurve &c, cplx E)
{
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < c.samples.size(); ++k)
  {
    const cplx a = c.samples[k], d = c.samples[k + 1] - a;
    const double len2 = std::norm(d);
    const double s = len2 > 0 ? std::clamp(std::real((E - a) * std::conj(d)) / len2, 0.0, 1.0) : 0.0;
    best = std::min(best, std::abs(a + s * d - E));
  }
  if (c.samples.size() == 1)
  {
    best = std::abs(c.samples[0] - E);
  }
  return best;
}

}  // namespace stokescope
