#pragma once

#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "stokescope/types.hpp"

namespace stokescope
{

// A Heaviside step i*shift_im added to the potential for x > beta.
struct Jump
{
  double beta;
  double shift_im;
};

// A smooth piece [lo, hi] of a potential, with the total imaginary shift in force on it.
struct Piece
{
  double lo, hi;
  double shift_im;
};

// Polynomial complex potential with ordered imaginary jumps,
//   V(x) = sum_k c_k x^k + i * sum_{beta_j < x} s_j.
// Coefficients are ascending in degree. Jumps are keyed on Re x and use the half-open
// convention [beta_j, beta_{j+1}), so V at a jump location is the left piece's value.
class Potential
{
public:
  Potential();  // zero polynomial
  explicit Potential(Eigen::VectorXcd coeffs, std::vector<Jump> jumps = {});

  static Potential ix2();
  static Potential monomial(cplx c, int degree);
  // V - i delta on x < beta and V + i delta on x > beta.
  static Potential step_perturbed(const Potential &v, double delta, double beta);

  const Eigen::VectorXcd &coeffs() const { return coeffs_; }
  const std::vector<Jump> &jumps() const { return jumps_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_constant() const { return degree() <= 0; }
  bool has_jumps() const { return !jumps_.empty(); }

  // Polynomial part only, jumps dropped.
  Potential smooth() const { return Potential(coeffs_); }
  // Polynomial part plus the constant i*s.
  Potential shifted(double s) const;

  std::size_t piece_index(double x) const;
  double piece_shift(std::size_t piece) const;
  std::vector<Piece> pieces(double lo = -1.0, double hi = 1.0) const;

private:
  Eigen::VectorXcd coeffs_;
  std::vector<Jump> jumps_;
};

// Antiderivative Y with Y(0) = 0, continuous across jumps. On piece k,
//   Y(x) = P(x) + linear_k * x + constant_k.
struct Primitive
{
  Eigen::VectorXcd coeffs;
  std::vector<double> breaks;
  std::vector<cplx> linear;
  std::vector<cplx> constant;
};

template <typename Derived>
cplx horner(const Eigen::MatrixBase<Derived> &c, cplx x)
{
  cplx acc = 0.0;
  for (Eigen::Index k = c.size() - 1; k >= 0; --k)
  {
    acc = acc * x + c(k);
  }
  return acc;
}

cplx eval(const Potential &p, cplx x);
cplx eval_poly(const Potential &p, cplx x);
cplx eval(const Primitive &y, cplx x);

Primitive primitive(const Potential &p);
Potential derivative(const Potential &p);

void to_json(nlohmann::json &j, const Potential &p);
void from_json(const nlohmann::json &j, Potential &p);

}  // namespace stokescope
