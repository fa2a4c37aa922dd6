#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Core>

namespace stokescope
{

using cplx = std::complex<double>;
using namespace std::complex_literals;

inline constexpr double pi = std::numbers::pi;

// Axis-aligned rectangle in the complex plane.
struct Box
{
  double re_min = -4.0, re_max = 4.0;
  double im_min = -4.0, im_max = 4.0;

  double diameter() const { return std::hypot(re_max - re_min, im_max - im_min); }
  bool contains(cplx z) const
  {
    return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min &&
           z.imag() <= im_max;
  }
  static Box square(double half_width) { return {-half_width, half_width, -half_width, half_width}; }
};

}  // namespace stokescope
