#include "stokescope/potential.hpp"

#include <algorithm>
#include <string>

#include <nlohmann/json.hpp>

#include "stokescope/error.hpp"

namespace stokescope
{

namespace
{

Eigen::VectorXcd trim(Eigen::VectorXcd c)
{
  Eigen::Index n = c.size();
  while (n > 1 && c(n - 1) == cplx(0.0))
  {
    --n;
  }
  if (n == 0)
  {
    return Eigen::VectorXcd::Zero(1);
  }
  return c.head(n).eval();
}

}  // namespace

Potential::Potential() : coeffs_(Eigen::VectorXcd::Zero(1)) {}

Potential::Potential(Eigen::VectorXcd coeffs, std::vector<Jump> jumps)
  : coeffs_(trim(std::move(coeffs))), jumps_(std::move(jumps))
{
  for (std::size_t j = 0; j < jumps_.size(); ++j)
  {
    if (!(jumps_[j].beta > -1.0 && jumps_[j].beta < 1.0))
    {
      throw ConfigError("jump location " + std::to_string(jumps_[j].beta) +
                        " must lie strictly inside (-1, 1)");
    }
    if (j > 0 && !(jumps_[j].beta > jumps_[j - 1].beta))
    {
      throw ConfigError("jump locations must be strictly increasing");
    }
  }
}

Potential Potential::ix2()
{
  return monomial(1i, 2);
}

Potential Potential::monomial(cplx c, int degree)
{
  Eigen::VectorXcd coeffs = Eigen::VectorXcd::Zero(degree + 1);
  coeffs(degree) = c;
  return Potential(coeffs);
}

Potential Potential::step_perturbed(const Potential &v, double delta, double beta)
{
  Eigen::VectorXcd c = v.coeffs();
  c(0) -= 1i * delta;
  return Potential(c, {{beta, 2.0 * delta}});
}

Potential Potential::shifted(double s) const
{
  Eigen::VectorXcd c = coeffs_;
  c(0) += 1i * s;
  return Potential(c);
}

std::size_t Potential::piece_index(double x) const
{
  // Piece k covers (beta_{k-1}, beta_k]; at a jump the left piece wins.
  auto it = std::lower_bound(jumps_.begin(), jumps_.end(), x,
                             [](const Jump &j, double v) { return j.beta < v; });
  return static_cast<std::size_t>(it - jumps_.begin());
}

double Potential::piece_shift(std::size_t piece) const
{
  double s = 0.0;
  for (std::size_t j = 0; j < piece && j < jumps_.size(); ++j)
  {
    s += jumps_[j].shift_im;
  }
  return s;
}

std::vector<Piece> Potential::pieces(double lo, double hi) const
{
  std::vector<Piece> out;
  double left = lo;
  for (std::size_t j = 0; j <= jumps_.size(); ++j)
  {
    double right = j < jumps_.size() ? jumps_[j].beta : hi;
    if (right > left)
    {
      out.push_back({left, std::min(right, hi), piece_shift(j)});
    }
    left = std::max(left, right);
  }
  return out;
}

cplx eval_poly(const Potential &p, cplx x)
{
  return horner(p.coeffs(), x);
}

cplx eval(const Potential &p, cplx x)
{
  cplx v = eval_poly(p, x);
  if (p.has_jumps())
  {
    v += 1i * p.piece_shift(p.piece_index(x.real()));
  }
  return v;
}

Primitive primitive(const Potential &p)
{
  const Eigen::VectorXcd &c = p.coeffs();
  Primitive y;
  y.coeffs = Eigen::VectorXcd::Zero(c.size() + 1);
  for (Eigen::Index k = 0; k < c.size(); ++k)
  {
    y.coeffs(k + 1) = c(k) / static_cast<double>(k + 1);
  }
  // Y(x) = P(x) + i S_k x + C_k on piece k; continuity at beta_j fixes C_k, and Y(0) = 0
  // is restored by a global offset.
  cplx slope = 0.0, constant = 0.0;
  y.linear.push_back(slope);
  y.constant.push_back(constant);
  for (const Jump &j : p.jumps())
  {
    y.breaks.push_back(j.beta);
    slope += 1i * j.shift_im;
    constant -= 1i * j.shift_im * j.beta;
    y.linear.push_back(slope);
    y.constant.push_back(constant);
  }
  const cplx at_zero = eval(y, 0.0);
  for (cplx &k : y.constant)
  {
    k -= at_zero;
  }
  return y;
}

cplx eval(const Primitive &y, cplx x)
{
  auto it = std::lower_bound(y.breaks.begin(), y.breaks.end(), x.real());
  const auto k = static_cast<std::size_t>(it - y.breaks.begin());
  return horner(y.coeffs, x) + y.linear[k] * x + y.constant[k];
}

Potential derivative(const Potential &p)
{
  const Eigen::VectorXcd &c = p.coeffs();
  if (c.size() <= 1)
  {
    return Potential();
  }
  Eigen::VectorXcd d(c.size() - 1);
  for (Eigen::Index k = 1; k < c.size(); ++k)
  {
    d(k - 1) = static_cast<double>(k) * c(k);
  }
  return Potential(d);
}

void to_json(nlohmann::json &j, const Potential &p)
{
  nlohmann::json coeffs = nlohmann::json::array();
  for (Eigen::Index k = 0; k < p.coeffs().size(); ++k)
  {
    coeffs.push_back({p.coeffs()(k).real(), p.coeffs()(k).imag()});
  }
  nlohmann::json jumps = nlohmann::json::array();
  for (const Jump &jp : p.jumps())
  {
    jumps.push_back({{"beta", jp.beta}, {"shift_im", jp.shift_im}});
  }
  j = {{"coeffs", coeffs}, {"jumps", jumps}};
}

void from_json(const nlohmann::json &j, Potential &p)
{
  if (!j.contains("coeffs") || !j.at("coeffs").is_array() || j.at("coeffs").empty())
  {
    throw ConfigError("potential.coeffs: expected a non-empty array of [re, im] pairs");
  }
  const auto &jc = j.at("coeffs");
  Eigen::VectorXcd c(jc.size());
  for (std::size_t k = 0; k < jc.size(); ++k)
  {
    const auto &e = jc[k];
    if (e.is_number())
    {
      c(k) = e.get<double>();
    }
    else if (e.is_array() && e.size() == 2)
    {
      c(k) = cplx(e[0].get<double>(), e[1].get<double>());
    }
    else
    {
      throw ConfigError("potential.coeffs[" + std::to_string(k) + "]: expected [re, im]");
    }
  }
  std::vector<Jump> jumps;
  if (j.contains("jumps"))
  {
    for (std::size_t k = 0; k < j.at("jumps").size(); ++k)
    {
      const auto &e = j.at("jumps")[k];
      if (!e.contains("beta") || !e.contains("shift_im"))
      {
        throw ConfigError("potential.jumps[" + std::to_string(k) +
                          "]: expected {\"beta\", \"shift_im\"}");
      }
      jumps.push_back({e.at("beta").get<double>(), e.at("shift_im").get<double>()});
    }
  }
  p = Potential(c, jumps);
}

}  // namespace stokescope
