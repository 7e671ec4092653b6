#include "translab/closed_form.hpp"

#include <cmath>

#include "translab/error.hpp"

namespace translab {

namespace {
constexpr double kEdgeGuard = 1e-9;  // fail loudly instead of returning inf at the strip edge
}

GrimReaper::GrimReaper(double theta, double offset) : theta_(theta), offset_(offset) {
  if (!(std::abs(theta) < M_PI / 2))
    throw Error(ErrorCode::BadParameter, "tilt must lie in (-pi/2, pi/2)");
  c_ = std::cos(theta);
  half_width_ = M_PI / (2 * c_);
}

void GrimReaper::check_inside(Point p) const {
  if (!(std::abs(p.y) < half_width_ - kEdgeGuard))
    throw Error(ErrorCode::OutOfDomain, "point is outside the maximal strip");
}

double GrimReaper::eval(Point p) const {
  check_inside(p);
  return -std::log(std::cos(c_ * p.y)) / (c_ * c_) + std::tan(theta_) * p.x + offset_;
}

Point GrimReaper::gradient(Point p) const {
  check_inside(p);
  return {std::tan(theta_), std::tan(c_ * p.y) / c_};
}

std::array<double, 3> GrimReaper::hessian(Point p) const {
  check_inside(p);
  const double t = std::tan(c_ * p.y);
  return {0.0, 0.0, 1.0 + t * t};
}

double GrimReaper::residual(Point p) const {
  return soliton_residual(gradient(p), hessian(p));
}

double soliton_residual(Point grad, const std::array<double, 3>& hess) {
  const double p = grad.x, q = grad.y;
  const double w2 = 1.0 + p * p + q * q;
  const double second =
      (1.0 + q * q) * hess[0] - 2.0 * p * q * hess[1] + (1.0 + p * p) * hess[2];
  return second / std::pow(w2, 1.5) - 1.0 / std::sqrt(w2);
}

std::function<double(Point)> strip_exact_solution(double half_width, double boundary_constant) {
  if (!(half_width > 0 && half_width < M_PI / 2))
    throw Error(ErrorCode::BadParameter, "strip half-width must lie in (0, pi/2)");
  const double shift = std::log(std::cos(half_width)) + boundary_constant;
  return [shift](Point p) { return -std::log(std::cos(p.y)) + shift; };
}

}  // namespace translab
