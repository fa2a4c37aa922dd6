#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "stokescope/types.hpp"

namespace stokescope
{

// Minimal SVG writer mapping a box of the complex plane onto a fixed-size canvas.
class Svg
{
public:
  explicit Svg(Box view, int width = 640);

  void polyline(const std::vector<cplx> &pts, const std::string &colour, double stroke = 1.0);
  void dot(cplx z, double radius, const std::string &colour);
  void cross(cplx z, double size, const std::string &colour);
  void text(cplx z, const std::string &label, int size = 12);
  void rect(cplx lo, cplx hi, const std::string &fill, double opacity = 1.0);
  void axes();

  std::string str() const;
  void save(const std::string &path) const;

private:
  double px(double re) const;
  double py(double im) const;

  Box view_;
  int width_, height_;
  std::ostringstream body_;
};

}  // namespace stokescope
