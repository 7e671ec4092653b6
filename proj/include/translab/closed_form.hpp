#ifndef TRANSLAB_CLOSED_FORM_HPP
#define TRANSLAB_CLOSED_FORM_HPP

#include <functional>

#include "translab/geometry.hpp"

namespace translab {

// Tilted grim reaper w(x,y) = -log(cos(cos(theta) y))/cos^2(theta) + tan(theta) x + a,
// defined on the strip |y| < pi/(2 cos(theta)).
class GrimReaper {
public:
  GrimReaper(double theta, double offset);

  double theta() const { return theta_; }
  double offset() const { return offset_; }
  // strip half-width pi/(2 cos theta)
  double max_half_width() const { return half_width_; }

  double eval(Point p) const;
  Point gradient(Point p) const;
  // (wxx, wxy, wyy)
  std::array<double, 3> hessian(Point p) const;

  // Residual of the divergence-form translating-soliton equation with exact
  // derivatives; vanishes to machine precision on the reaper itself.
  double residual(Point p) const;

private:
  void check_inside(Point p) const;

  double theta_;
  double offset_;
  double c_;  // cos(theta)
  double half_width_;
};

// PDE residual of an arbitrary C^2 function given its exact derivatives,
// in divergence form: div(Du/sqrt(1+|Du|^2)) - 1/sqrt(1+|Du|^2).
double soliton_residual(Point grad, const std::array<double, 3>& hess);

// The strip solution w(x,y) = -log(cos y) + log(cos m) + c, equal to c on y = +-m.
// Requires 0 < m < pi/2.
std::function<double(Point)> strip_exact_solution(double half_width, double boundary_constant);

}  // namespace translab

#endif
