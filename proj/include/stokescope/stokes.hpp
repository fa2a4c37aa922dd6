#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "stokescope/contour.hpp"

namespace stokescope
{

// s(x) = i conj(w), w the branch value of (V(x) + i shift - E)^(1/2) at x. Re z is constant
// along its integral curves, z being the action from any base point.
cplx stokes_field(const Potential &p, cplx E, cplx x, cplx branch, double shift_im = 0.0);
cplx unit_stokes_field(const Potential &p, cplx E, cplx x, cplx branch, double shift_im = 0.0);

// The three directions along which Stokes lines leave a simple turning point.
std::array<double, 3> departure_angles(const Potential &p, cplx alpha, double shift_im = 0.0);

struct StokesLine
{
  enum class End
  {
    box,
    turning_point,
    arc_length
  };

  std::size_t source;  // index into StokesDiagram::turning_points
  int direction_index;
  std::vector<cplx> points;  // points.front() is the source
  std::vector<cplx> branch;  // branch value at each point; zero at the source
  double arc_length = 0.0;
  End end = End::box;
};

struct StokesDiagram
{
  cplx E;
  double shift_im = 0.0;
  TurningPointSet turning_points;
  std::vector<StokesLine> lines;
  Box box;
  bool enlarged = false;  // the requested box did not contain every turning point
};

// Traces the three lines from every turning point with adaptive RK45 on the unit field,
// arc-length step <= 1e-3 diam(box), until the line leaves the box, comes within 1e-5 of
// another turning point, or exceeds 10 diam(box) in length.
// Throws DegenerateConfiguration if a turning point is multiple or two lie within 1e-4.
StokesDiagram trace_diagram(const Potential &p, cplx E, Box box = {}, double shift_im = 0.0);

// True iff all points lie in one connected component of box minus the traced lines.
// Throws DegenerateConfiguration ("on boundary") for points within 1e-6 of a line.
bool same_region(const StokesDiagram &d, std::span<const cplx> points);

// A polyline from a to b crossing no traced line, if a and b share a region.
std::optional<std::vector<cplx>> region_path(const StokesDiagram &d, cplx a, cplx b);

// max over the line of |Re S_{source,x}| / (1 + arc length to x).
double line_residual(const Potential &p, const StokesDiagram &d, const StokesLine &line);

// Symmetric Hausdorff distance between two families of polylines, each restricted to the
// disc |z| <= radius.
double hausdorff_distance(const std::vector<std::vector<cplx>> &a,
                          const std::vector<std::vector<cplx>> &b, double radius);

enum class Membership
{
  in_T,
  not_in_T,
  boundary,
  unknown
};

std::string to_string(Membership m);

struct Condition
{
  std::string name;  // e.g. "Re S(-1,1)"
  double value;
  bool holds;        // the equality or inequality is satisfied
};

struct MembershipVerdict
{
  Membership status = Membership::unknown;
  std::optional<std::vector<cplx>> witness;
  std::vector<Condition> conditions;
  // Estimated distance in E to the nearest zero of a deciding Re S condition,
  // |Re S| / |dS/dE|; infinite when no condition applies.
  double condition_distance;
  // inf along the witness of the rate at which Re z increases, a diagnostic only.
  double min_slope = 0.0;
  std::string note;

  bool in_T() const { return status == Membership::in_T; }
};

// Decides whether a progressive path exists for E. Each smooth piece of p (split at its
// jumps) is decided separately and the results are combined.
MembershipVerdict progressive_path(const Potential &p, cplx E, const Box &box = {});
MembershipVerdict progressive_path(const Potential &p, cplx E, double delta,
                                   std::optional<double> beta, const Box &box = {});

void to_json(nlohmann::json &j, const StokesDiagram &d);
std::string diagram_svg(const StokesDiagram &d, const std::vector<double> &markers = {});

}  // namespace stokescope
