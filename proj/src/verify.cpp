#include "stokescope/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <sstream>

#include "stokescope/curves.hpp"
#include "stokescope/error.hpp"
#include "stokescope/fixtures.hpp"
#include "stokescope/pseudospec.hpp"
#include "stokescope/solver.hpp"
#include "stokescope/stokes.hpp"

namespace stokescope
{

namespace
{

struct Rows
{
  int criterion;
  std::string group;
  std::vector<VerifyRow> &out;

  void add(const std::string &name, double measured, const std::string &expected,
           double tolerance, bool pass)
  {
    out.push_back({criterion, group, name, measured, expected, tolerance, pass});
  }
  // |measured - target| <= tol
  void near(const std::string &name, double measured, double target, double tol)
  {
    std::ostringstream e;
    e << std::setprecision(10) << target;
    add(name, measured, e.str(), tol, std::abs(measured - target) <= tol);
  }
  void at_most(const std::string &name, double measured, double bound)
  {
    std::ostringstream e;
    e << "<= " << std::setprecision(6) << bound;
    add(name, measured, e.str(), bound, measured <= bound);
  }
  void within(const std::string &name, double measured, double lo, double hi)
  {
    std::ostringstream e;
    e << "[" << lo << ", " << hi << "]";
    add(name, measured, e.str(), 0.0, measured >= lo && measured <= hi);
  }
  void holds(const std::string &name, bool ok)
  {
    add(name, ok ? 1.0 : 0.0, "1", 0.0, ok);
  }
  void error(const std::string &name, const std::exception &e)
  {
    out.push_back({criterion, group, name + " (" + e.what() + ")", std::nan(""), "no error", 0.0,
                   false});
  }
};

double max_distance(const std::vector<EigenvalueRecord> &recs, const SpectralCurve &c)
{
  double m = 0.0;
  for (const auto &r : recs)
  {
    m = std::max(m, distance_to_curve(c, r.E));
  }
  return m;
}

std::vector<EigenvalueRecord> spectrum(const Potential &p, double h, int N)
{
  EigenOptions opt;
  opt.N = N;
  opt.window = {5.0, 30.0, -10.0, 10.0};
  return eigenvalues(p, h, opt);
}

double sample_at(const SpectralCurve &c, double a)
{
  for (cplx E : c.samples)
  {
    if (std::abs(E.real() - a) < 1e-9)
    {
      return E.imag();
    }
  }
  throw ConfigError("curve has no sample at the requested a");
}

void criterion1(Rows &r)
{
  const Potential v = Potential::ix2();
  const auto c = trace_curve(v, -1.0, 1.0, 0.0, 10.0, 100.0, 1.0);
  r.near("b(50) against 1/3 - 3/(28 a^2)", sample_at(c, 50.0), 1.0 / 3.0 - 3.0 / (28.0 * 2500.0),
         1e-4);
  int violations = 0;
  for (std::size_t k = 1; k < c.samples.size(); ++k)
  {
    violations += !(std::abs(c.samples[k].imag() - 1.0 / 3.0) <
                    std::abs(c.samples[k - 1].imag() - 1.0 / 3.0));
  }
  r.at_most("|b - 1/3| monotone on [10, 100] (violations)", violations, 0.0);
}

void criterion2(Rows &r)
{
  const Potential v = Potential::ix2();
  double sxy = 0.0, sxx = 0.0;
  for (double a : {25.0, 50.0, 100.0})
  {
    const double y = curve_point(v, -1.0, 1.0, 0.0, a, 1.0 / 3.0) - 1.0 / 3.0;
    const double x = 1.0 / (a * a);
    sxy += x * y;
    sxx += x * x;
  }
  const double c = sxy / sxx;
  const double target = -3.0 / 28.0;
  std::ostringstream e;
  e << std::setprecision(10) << target << " (5%)";
  r.add("fitted a^2 (b - 1/3)", c, e.str(), 0.05 * std::abs(target),
        std::abs(c - target) <= 0.05 * std::abs(target));
}

void criterion3(Rows &r)
{
  const Potential v = Potential::ix2();
  const auto curve = trace_curve(v, -1.0, 1.0, 0.0, 4.5, 31.0, 0.1);
  const auto coarse = spectrum(v, 0.02, 384);
  const auto fine = spectrum(v, 0.01, 768);
  r.add("eigenvalues found at h = 0.02", static_cast<double>(coarse.size()), ">= 1", 0.0,
        !coarse.empty());
  r.add("eigenvalues found at h = 0.01", static_cast<double>(fine.size()), ">= 1", 0.0,
        !fine.empty());
  const double d1 = max_distance(coarse, curve), d2 = max_distance(fine, curve);
  r.at_most("max distance to Gamma(-1,1), h = 0.02", d1, 5 * 0.02);
  r.at_most("max distance to Gamma(-1,1), h = 0.01", d2, 5 * 0.01);
  r.within("distance ratio for halved h", d2 / d1, 0.3, 0.7);
}

void criterion4(Rows &r)
{
  const Potential v = Potential::ix2();
  const double h = 0.02;
  double prev = std::numeric_limits<double>::infinity();
  bool decreasing = true;
  for (int k : {80, 100, 120})
  {
    const cplx f = wkb_formula(v, h, k);
    const auto exact = refine(v, h, f);
    const double err = std::abs(f - exact.E);
    r.at_most("|wkb_formula - refine|, k = " + std::to_string(k), err,
              10.0 / std::pow(h * k, 3));
    decreasing = decreasing && err < prev;
    prev = err;
  }
  r.holds("error decreases with k", decreasing);
}

void criterion5(Rows &r)
{
  const Potential v = Potential::ix2();
  const double delta = 0.1, beta = 0.3, h = 0.02;
  const Potential p = Potential::step_perturbed(v, delta, beta);
  // The polynomial part of p carries -i delta, the jump adds 2 delta on the right.
  const auto left = trace_curve(p, -1.0, beta, 0.0, 4.5, 50.0, 0.1);
  const auto right = trace_curve(p, beta, 1.0, 2 * delta, 4.5, 50.0, 0.1);
  r.near("Gamma(-1,beta) b(50)", sample_at(left, 50.0), 0.163333, 5e-3);
  r.near("Gamma(beta,1) b(50)", sample_at(right, 50.0), 0.563333, 5e-3);

  const auto recs = spectrum(p, h, 384);
  int nl = 0, nr = 0;
  double dl = 0.0, dr = 0.0;
  for (const auto &e : recs)
  {
    const double a = distance_to_curve(left, e.E), b = distance_to_curve(right, e.E);
    if (a <= b)
    {
      ++nl;
      dl = std::max(dl, a);
    }
    else
    {
      ++nr;
      dr = std::max(dr, b);
    }
  }
  r.add("eigenvalues near Gamma(-1,beta)", nl, ">= 1", 0.0, nl > 0);
  r.add("eigenvalues near Gamma(beta,1)", nr, ">= 1", 0.0, nr > 0);
  r.at_most("cluster distance to Gamma(-1,beta)", dl, 5 * h);
  r.at_most("cluster distance to Gamma(beta,1)", dr, 5 * h);
}

void criterion6(Rows &r)
{
  const auto y = y_shape();
  const double oracle = std::stod(load_fixture("lambda0.json")["lambda0"].get<std::string>());
  r.near("lambda0 against the bisection oracle", y.lambda0, oracle, 1e-8);
  const cplx target = oracle * std::polar(1.0, pi / 4);
  const std::array<std::pair<std::string, const SpectralCurve *>, 3> curves{
      {{"ray", &y.ray}, {"arc", &y.arc}, {"unbounded", &y.unbounded}}};
  for (const auto &[name, c] : curves)
  {
    const double end = std::min(std::abs(c->samples.front() - target),
                                std::abs(c->samples.back() - target));
    r.at_most(name + " terminal point to lambda0 e^{i pi/4}", end, 1e-3);
  }
  r.at_most("Gamma(alpha+,1) start to i", std::abs(y.arc.samples.front() - 1i), 1e-6);
}

void criterion7(Rows &r)
{
  const Potential v = Potential::ix2();
  double worst_angle = 0.0, worst_residual = 0.0;
  int bad_count = 0;
  for (cplx E : {std::polar(1.0, pi / 4), cplx(0.0, 1.0), cplx(-1.0, 0.0), cplx(10.0, 0.3),
                 cplx(50.0, 1.0 / 3.0), cplx(2.0, 0.5)})
  {
    const auto d = trace_diagram(v, E);
    for (std::size_t s = 0; s < d.turning_points.size(); ++s)
    {
      std::vector<double> dirs;
      for (const auto &l : d.lines)
      {
        if (l.source == s && l.points.size() > 1)
        {
          dirs.push_back(std::arg(l.points[1] - l.points[0]));
        }
      }
      bad_count += dirs.size() != 3;
      for (std::size_t i = 0; i < dirs.size(); ++i)
      {
        for (std::size_t j = i + 1; j < dirs.size(); ++j)
        {
          const double gap = std::abs(std::remainder(dirs[i] - dirs[j], 2 * pi));
          worst_angle = std::max(worst_angle, std::abs(gap - 2 * pi / 3));
        }
      }
    }
    for (const auto &l : d.lines)
    {
      worst_residual = std::max(worst_residual, line_residual(v, d, l));
    }
  }
  r.at_most("turning points without exactly 3 lines", bad_count, 0.0);
  r.at_most("departure angle deviation from 2 pi/3", worst_angle, 1e-2);
  r.at_most("max |Re S| / (1 + arc length) along lines", worst_residual, 1e-6);

  auto lines = [](const StokesDiagram &d, cplx rot) {
    std::vector<std::vector<cplx>> out;
    for (const auto &l : d.lines)
    {
      std::vector<cplx> pts;
      for (cplx z : l.points)
      {
        pts.push_back(rot * z);
      }
      out.push_back(pts);
    }
    return out;
  };
  const auto a = trace_diagram(v, std::polar(1.0, pi / 4));
  const auto b = trace_diagram(Potential::monomial(1.0, 2), 1.0);
  r.at_most("Hausdorff distance to the rotated x^2 diagram",
            hausdorff_distance(lines(a, 1.0), lines(b, std::polar(1.0, -pi / 8)), 3.9), 1e-4);
}

void criterion8(Rows &r)
{
  const Potential v = Potential::ix2();
  const auto y = y_shape(0.01, 21.0);
  const int nx = 40, ny = 20;
  const double da = 19.0 / (nx - 1), db = 1.1 / (ny - 1);
  const double spacing = std::min(da, db);
  int mismatches = 0, boundary = 0, unknown = 0, near = 0;
  for (int j = 0; j < ny; ++j)
  {
    for (int i = 0; i < nx; ++i)
    {
      const cplx E(1.0 + da * i, -0.2 + db * j);
      const auto verdict = progressive_path(v, E);
      if (verdict.status == Membership::boundary)
      {
        ++boundary;
        continue;
      }
      const double dist = std::min({distance_to_curve(y.unbounded, E),
                                    distance_to_curve(y.ray, E), distance_to_curve(y.arc, E)});
      const bool close = dist <= spacing;
      near += close;
      const bool not_in_T = verdict.status == Membership::not_in_T ||
                            verdict.condition_distance <= spacing;
      unknown += verdict.status == Membership::unknown && !not_in_T;
      mismatches += close != not_in_T;
    }
  }
  r.add("grid nodes within spacing of the curves", near, ">= 1", 0.0, near > 0);
  r.add("boundary verdicts (excluded)", boundary, "reported", 0.0, true);
  r.at_most("unknown verdicts", unknown, 0.0);
  r.at_most("disagreements with distance to the limit curves", mismatches, 0.0);
}

void criterion9(Rows &r)
{
  const Potential v = Potential::ix2();
  std::vector<cplx> path;
  for (int j = 0; j <= 200; ++j)
  {
    const double t = -1.0 + 0.01 * j;
    path.push_back({t, 0.02 * (t * t * t - t)});
  }
  const BranchedPath bp{path, {}, 0.0};
  const cplx E = 10.0 + 1i;
  const auto a = wkb_series(v, E, 0.05, bp, 8);
  const auto b = wkb_series(v, E, 0.025, bp, 8);
  r.within("|W+ - 1| ratio, h = 0.05 -> 0.025", std::abs(b.W_plus - 1.0) / std::abs(a.W_plus - 1.0),
           0.4, 0.6);
  r.within("|W- - 1| ratio, h = 0.05 -> 0.025",
           std::abs(b.W_minus - 1.0) / std::abs(a.W_minus - 1.0), 0.4, 0.6);
}

void criterion10(Rows &r)
{
  const Potential v = Potential::ix2();
  const cplx inside = 5.0 + 1i / 6.0;
  r.at_most("smin(5+i/6) ratio h = 0.05 / 0.1",
            smin(v, 0.05, inside, 256) / smin(v, 0.1, inside, 256), 0.2);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (double h : {0.1, 0.05, 0.025})
  {
    const double s = smin(v, h, 5.0 + 2i, 256);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  r.add("smin(5+2i) max/min over h", hi / lo, "< 2", 2.0, hi / lo < 2.0);
  const Box rect{-2.0, 10.0, -0.5, 2.5};
  const auto g = grid(v, 0.1, rect, 49, 25, 128);
  double worst = 0.0;
  int count = 0;
  // Grid nodes miss the small sublevel discs; the eigenvalues of the same matrix lie in them.
  for (cplx E : all_eigenvalues(discretize(v, 0.1, 128)))
  {
    if (rect.contains(E))
    {
      ++count;
      worst = std::max(worst, symbol_set_distance(v, E));
    }
  }
  for (int j = 0; j < g.ny; ++j)
  {
    for (int i = 0; i < g.nx; ++i)
    {
      if (g.at(i, j) <= 1e-2)
      {
        ++count;
        worst = std::max(worst, symbol_set_distance(v, g.node(i, j)));
      }
    }
  }
  r.add("sampled points in the 1e-2 sublevel set", count, ">= 1", 0.0, count > 0);
  r.at_most("sublevel distance to the symbol set", worst, 0.2);
}

void criterion11(Rows &r)
{
  const Potential v = Potential::ix2();
  const double beta = 0.3;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const std::array<double, 3> gaps{0.2, 0.1, 0.05};
  for (double d : gaps)
  {
    const double y = asymptote(v, beta, beta + d, 0.0);
    sx += d;
    sy += y;
    sxx += d * d;
    sxy += d * y;
  }
  const double n = gaps.size();
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  r.near("extrapolated asymptote of Gamma(beta,beta')", intercept, beta * beta, 1e-3);
}

struct Criterion
{
  int id;
  const char *group;
  std::function<void(Rows &)> run;
};

}  // namespace

std::vector<VerifyRow> run_verify(const std::string &filter)
{
  const std::vector<Criterion> all{
      {1, "curves", criterion1},  {2, "curves", criterion2},      {3, "solver", criterion3},
      {4, "solver", criterion4},  {5, "solver", criterion5},      {6, "curves", criterion6},
      {7, "stokes", criterion7},  {8, "stokes", criterion8},      {9, "solver", criterion9},
      {10, "pseudospec", criterion10}, {11, "curves", criterion11},
  };
  auto selects = [&](const Criterion &c) {
    return filter == std::to_string(c.id) || filter == "c" + std::to_string(c.id) ||
           filter == c.group;
  };
  const bool by_criterion = std::any_of(all.begin(), all.end(), selects);
  std::vector<VerifyRow> rows;
  for (const auto &c : all)
  {
    const bool whole = filter.empty() || selects(c);
    if (by_criterion && !whole)
    {
      continue;
    }
    std::vector<VerifyRow> mine;
    Rows r{c.id, c.group, mine};
    try
    {
      c.run(r);
    }
    catch (const std::exception &e)
    {
      r.error("criterion " + std::to_string(c.id), e);
    }
    for (auto &row : mine)
    {
      if (whole || row.name.find(filter) != std::string::npos)
      {
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

std::string verify_table(const std::vector<VerifyRow> &rows)
{
  std::ostringstream out;
  out << std::left << std::setw(5) << "crit" << std::setw(6) << "pass" << std::setw(52)
      << "check" << std::setw(18) << "measured"
      << "expected\n";
  for (const auto &r : rows)
  {
    std::ostringstream m;
    m << std::setprecision(8) << r.measured;
    out << std::left << std::setw(5) << r.criterion << std::setw(6) << (r.pass ? "PASS" : "FAIL")
        << std::setw(52) << r.name << std::setw(18) << m.str() << r.expected << "\n";
  }
  return out.str();
}

bool all_pass(const std::vector<VerifyRow> &rows)
{
  return std::all_of(rows.begin(), rows.end(), [](const auto &r) { return r.pass; });
}

}  // namespace stokescope
