#ifndef TRANSLAB_RADIAL_HPP
#define TRANSLAB_RADIAL_HPP

#include <vector>

namespace translab {

// Sampled solution u(r) of the rotational reduction
//   u''/(1+u'^2)^{3/2} + u'/(r sqrt(1+u'^2)) = (1/sqrt(1+u'^2)) (+ mu),
// equivalently u'' = (1+u'^2)(1 + mu*sqrt(1+u'^2) - u'/r).
struct RadialProfile {
  enum class Kind { Bowl, Winglike, MuRadial };
  Kind kind = Kind::Bowl;
  double mu = 0.0;
  std::vector<double> r;
  std::vector<double> u;
  std::vector<double> du;

  std::size_t size() const { return r.size(); }
  // piecewise-linear value between samples
  double value_at(double radius) const;
};

// Fixed-point iteration of the integral operator
//   (T u)(r) = \int_0^r f^{-1}( (1/s) \int_0^s t g(u'(t)) dt ) ds,
// g(y) = 1/sqrt(1+y^2), f(y) = y/sqrt(1+y^2), on 2048 trapezoid panels over
// [0, delta]. A fixed point solves the singular bowl IVP u(0) = u'(0) = 0.
RadialProfile picard_bowl(double delta, int iterations);

// C1 distance between the profile and one further application of T.
double picard_fixed_point_residual(const RadialProfile& profile);

// Series start u = r^2/4 + r^4/128 on [0, 10*step], then classic RK4.
RadialProfile bowl_profile(double R, double step);

// Outward integration from u(r0) = u'(r0) = 0, r0 > 0.
RadialProfile winglike_profile(double r0, double R, double step);

// Radial solution of the constant-weighted-curvature equation, u(0) = u'(0) = 0.
RadialProfile mu_radial_profile(double mu, double R, double step);

// General regular-point IVP for the rotational equation.
RadialProfile radial_ivp(double mu, double r0, double u0, double v0, double R, double step);

// Least-squares fit of u ~ c2 r^2 + c4 r^4 near the origin; returns 2*c2.
double second_derivative_at_origin(const RadialProfile& profile);

}  // namespace translab

#endif
