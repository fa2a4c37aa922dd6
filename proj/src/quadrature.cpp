#include "stokescope/quadrature.hpp"

#include <array>
#include <queue>
#include <sstream>
#include <vector>

#include "stokescope/error.hpp"

namespace stokescope
{

namespace
{

// Kronrod abscissae (positive half, descending) and weights; Gauss weights on the
// odd-indexed Kronrod nodes.
constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel
{
  double a, b;
  cplx value;
  double error;
  bool operator<(const Panel &o) const { return error < o.error; }
};

Panel gk15(const std::function<cplx(double)> &f, double a, double b)
{
  const double c = 0.5 * (a + b), r = 0.5 * (b - a);
  const cplx fc = f(c);
  cplx kron = fc * wgk[7];
  cplx gauss = fc * wg[3];
  for (int j = 0; j < 7; ++j)
  {
    const double dx = r * xgk[j];
    const cplx s = f(c - dx) + f(c + dx);
    kron += wgk[j] * s;
    if (j % 2 == 1)
    {
      gauss += wg[j / 2] * s;
    }
  }
  return {a, b, kron * r, std::abs((kron - gauss) * r)};
}

}  // namespace

QuadratureResult integrate(const std::function<cplx(double)> &f, std::span<const double> breaks,
                           const QuadratureOptions &opts)
{
  std::priority_queue<Panel> heap;
  std::vector<Panel> frozen;
  cplx total = 0.0;
  double err = 0.0;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k)
  {
    if (breaks[k + 1] == breaks[k])
    {
      continue;
    }
    Panel p = gk15(f, breaks[k], breaks[k + 1]);
    total += p.value;
    err += p.error;
    heap.push(p);
  }
  int subdivisions = static_cast<int>(heap.size());
  while (err > opts.abs_tol && !heap.empty())
  {
    if (subdivisions >= opts.max_subdivisions)
    {
      std::ostringstream msg;
      msg << "quadrature did not converge: achieved error " << err << " after "
          << subdivisions << " subdivisions (requested " << opts.abs_tol << ")";
      throw QuadratureError(msg.str(), err);
    }
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b))
    {
      // Panel is at floating-point resolution; its estimate cannot improve.
      frozen.push_back(worst);
      continue;
    }
    Panel left = gk15(f, worst.a, mid), right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++subdivisions;
  }
  // Recompute the sum from the panels to shed accumulated cancellation error.
  cplx sum = 0.0;
  double esum = 0.0;
  for (const Panel &p : frozen)
  {
    sum += p.value;
    esum += p.error;
  }
  while (!heap.empty())
  {
    sum += heap.top().value;
    esum += heap.top().error;
    heap.pop();
  }
  return {sum, esum, subdivisions};
}

QuadratureResult integrate(const std::function<cplx(double)> &f, double a, double b,
                           const QuadratureOptions &opts)
{
  const std::array<double, 2> br = {a, b};
  return integrate(f, br, opts);
}

}  // namespace stokescope
