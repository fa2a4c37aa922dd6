#include "stokescope/svg.hpp"

#include <fstream>

#include "stokescope/error.hpp"

namespace stokescope
{

Svg::Svg(Box view, int width) : view_(view), width_(width)
{
  const double aspect = (view.im_max - view.im_min) / (view.re_max - view.re_min);
  height_ = std::max(64, static_cast<int>(width * aspect));
  body_.precision(6);
}

double Svg::px(double re) const
{
  return (re - view_.re_min) / (view_.re_max - view_.re_min) * width_;
}

double Svg::py(double im) const
{
  return (view_.im_max - im) / (view_.im_max - view_.im_min) * height_;
}

void Svg::polyline(const std::vector<cplx> &pts, const std::string &colour, double stroke)
{
  if (pts.size() < 2)
  {
    return;
  }
  body_ << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"" << stroke
        << "\" points=\"";
  for (cplx z : pts)
  {
    body_ << px(z.real()) << ',' << py(z.imag()) << ' ';
  }
  body_ << "\"/>\n";
}

void Svg::dot(cplx z, double radius, const std::string &colour)
{
  body_ << "<circle cx=\"" << px(z.real()) << "\" cy=\"" << py(z.imag()) << "\" r=\"" << radius
        << "\" fill=\"" << colour << "\"/>\n";
}

void Svg::cross(cplx z, double size, const std::string &colour)
{
  const double x = px(z.real()), y = py(z.imag());
  body_ << "<path stroke=\"" << colour << "\" d=\"M" << x - size << ' ' << y - size << " L"
        << x + size << ' ' << y + size << " M" << x - size << ' ' << y + size << " L"
        << x + size << ' ' << y - size << "\"/>\n";
}

void Svg::text(cplx z, const std::string &label, int size)
{
  body_ << "<text x=\"" << px(z.real()) << "\" y=\"" << py(z.imag()) << "\" font-size=\"" << size
        << "\" font-family=\"sans-serif\">" << label << "</text>\n";
}

void Svg::rect(cplx lo, cplx hi, const std::string &fill, double opacity)
{
  body_ << "<rect x=\"" << px(lo.real()) << "\" y=\"" << py(hi.imag()) << "\" width=\""
        << px(hi.real()) - px(lo.real()) << "\" height=\"" << py(lo.imag()) - py(hi.imag())
        << "\" fill=\"" << fill << "\" fill-opacity=\"" << opacity << "\"/>\n";
}

void Svg::axes()
{
  if (view_.im_min <= 0.0 && view_.im_max >= 0.0)
  {
    polyline({cplx(view_.re_min, 0.0), cplx(view_.re_max, 0.0)}, "#bbbbbb", 0.5);
  }
  if (view_.re_min <= 0.0 && view_.re_max >= 0.0)
  {
    polyline({cplx(0.0, view_.im_min), cplx(0.0, view_.im_max)}, "#bbbbbb", 0.5);
  }
}

std::string Svg::str() const
{
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_ << "\" height=\""
      << height_ << "\" viewBox=\"0 0 " << width_ << ' ' << height_ << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << body_.str() << "</svg>\n";
  return out.str();
}

void Svg::save(const std::string &path) const
{
  std::ofstream f(path);
  if (!f)
  {
    throw ConfigError("cannot write " + path);
  }
  f << str();
}

}  // namespace stokescope
