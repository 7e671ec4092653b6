#include "translab/radial.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "translab/error.hpp"

namespace translab {

namespace {

constexpr int kPicardPanels = 2048;
constexpr double kBlowUpSlope = 1e8;

double radial_rhs(double mu, double r, double v) {
  const double w = 1.0 + v * v;
  return w * (1.0 + mu * std::sqrt(w) - v / r);
}

struct PicardState {
  std::vector<double> u, du;
};

// One application of T on the uniform grid r_i = i*h.
PicardState apply_T(const std::vector<double>& r, const std::vector<double>& du) {
  const std::size_t n = r.size();
  const double h = r[1] - r[0];
  PicardState out;
  out.u.assign(n, 0.0);
  out.du.assign(n, 0.0);
  double prefix = 0.0;  // \int_0^{r_i} t g(u'(t)) dt
  double prev_integrand = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double integrand = r[i] / std::sqrt(1.0 + du[i] * du[i]);
    prefix += 0.5 * h * (prev_integrand + integrand);
    prev_integrand = integrand;
    const double inner = prefix / r[i];
    if (!(std::abs(inner) < 1.0))
      throw Error(ErrorCode::InverseDomain, "inner integral reached 1 at r=" + std::to_string(r[i]));
    out.du[i] = inner / std::sqrt(1.0 - inner * inner);
    out.u[i] = out.u[i - 1] + 0.5 * h * (out.du[i - 1] + out.du[i]);
  }
  return out;
}

double c1_distance(const PicardState& a, const std::vector<double>& u,
                   const std::vector<double>& du) {
  double max_u = 0.0, max_du = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    max_u = std::max(max_u, std::abs(a.u[i] - u[i]));
    max_du = std::max(max_du, std::abs(a.du[i] - du[i]));
  }
  return max_u + max_du;
}

// RK4 for (u, v)' = (v, rhs(mu, r, v)) on the aligned grid nodes [first, last].
void rk4_march(RadialProfile& p, double mu, std::size_t first, std::size_t last) {
  const double h = p.r[1] - p.r[0];
  for (std::size_t i = first; i < last; ++i) {
    const double r = p.r[i];
    const double u = p.u[i], v = p.du[i];
    if (std::abs(v) > kBlowUpSlope)
      throw Error(ErrorCode::BlowUp, "slope exceeded 1e8 at r=" + std::to_string(r));
    const double k1u = v, k1v = radial_rhs(mu, r, v);
    const double k2u = v + 0.5 * h * k1v, k2v = radial_rhs(mu, r + 0.5 * h, v + 0.5 * h * k1v);
    const double k3u = v + 0.5 * h * k2v, k3v = radial_rhs(mu, r + 0.5 * h, v + 0.5 * h * k2v);
    const double k4u = v + h * k3v, k4v = radial_rhs(mu, r + h, v + h * k3v);
    p.u[i + 1] = u + h / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u);
    p.du[i + 1] = v + h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
  }
}

RadialProfile integrate_from_origin(double mu, double R, double step, RadialProfile::Kind kind) {
  if (!(R > 0)) throw Error(ErrorCode::BadParameter, "R must be positive");
  if (!(step > 0) || step > R / 100.0)
    throw Error(ErrorCode::StepTooLarge, "need step <= R/100");
  const std::size_t n = static_cast<std::size_t>(std::llround(R / step));
  const double h = R / static_cast<double>(n);

  RadialProfile p;
  p.kind = kind;
  p.mu = mu;
  p.r.resize(n + 1);
  p.u.assign(n + 1, 0.0);
  p.du.assign(n + 1, 0.0);
  for (std::size_t i = 0; i <= n; ++i) p.r[i] = i * h;

  // series start across the removable singularity at r = 0
  const double a2 = (1.0 + mu) / 4.0;
  const double a4 = a2 * a2 * (1.0 + 2.0 * mu) / 8.0;
  const std::size_t switch_idx = 10;
  for (std::size_t i = 0; i <= switch_idx; ++i) {
    const double r = p.r[i];
    p.u[i] = a2 * r * r + a4 * r * r * r * r;
    p.du[i] = 2 * a2 * r + 4 * a4 * r * r * r;
  }
  rk4_march(p, mu, switch_idx, n);
  return p;
}

}  // namespace

double RadialProfile::value_at(double radius) const {
  const auto it = std::lower_bound(r.begin(), r.end(), radius);
  if (it == r.begin()) return u.front();
  if (it == r.end()) return u.back();
  const std::size_t i = static_cast<std::size_t>(it - r.begin());
  const double t = (radius - r[i - 1]) / (r[i] - r[i - 1]);
  return (1.0 - t) * u[i - 1] + t * u[i];
}

RadialProfile picard_bowl(double delta, int iterations) {
  if (!(delta > 0)) throw Error(ErrorCode::BadParameter, "delta must be positive");
  // contraction bound L^2 d^2/4 + L^2 d/2 < 1 with L = 1
  if (!(delta * delta / 4.0 + delta / 2.0 < 1.0))
    throw Error(ErrorCode::BadParameter, "delta too large for the contraction bound");
  if (iterations < 1) throw Error(ErrorCode::BadParameter, "need at least one iteration");

  RadialProfile p;
  p.kind = RadialProfile::Kind::Bowl;
  p.r.resize(kPicardPanels + 1);
  const double h = delta / kPicardPanels;
  for (int i = 0; i <= kPicardPanels; ++i) p.r[i] = i * h;
  p.u.assign(p.r.size(), 0.0);
  p.du.assign(p.r.size(), 0.0);

  double prev_dist = -1.0;
  for (int it = 0; it < iterations; ++it) {
    PicardState next = apply_T(p.r, p.du);
    const double dist = c1_distance(next, p.u, p.du);
    if (prev_dist >= 0 && dist > prev_dist + 1e-15)
      throw Error(ErrorCode::NotContracting,
                  "iterate distance grew from " + std::to_string(prev_dist));
    prev_dist = dist;
    p.u = std::move(next.u);
    p.du = std::move(next.du);
    if (dist == 0.0) break;
  }
  return p;
}

double picard_fixed_point_residual(const RadialProfile& profile) {
  PicardState next = apply_T(profile.r, profile.du);
  return c1_distance(next, profile.u, profile.du);
}

RadialProfile bowl_profile(double R, double step) {
  return integrate_from_origin(0.0, R, step, RadialProfile::Kind::Bowl);
}

RadialProfile mu_radial_profile(double mu, double R, double step) {
  if (mu < 0) throw Error(ErrorCode::BadParameter, "mu must be nonnegative");
  if (mu > 0 && mu <= 0.5 && R >= 1.0 / mu)
    throw Error(ErrorCode::BadParameter, "need R < 1/mu for mu <= 1/2");
  return integrate_from_origin(mu, R, step, RadialProfile::Kind::MuRadial);
}

RadialProfile radial_ivp(double mu, double r0, double u0, double v0, double R, double step) {
  if (!(r0 > 0 && R > r0)) throw Error(ErrorCode::BadParameter, "need 0 < r0 < R");
  if (!(step > 0) || step > (R - r0) / 10.0)
    throw Error(ErrorCode::StepTooLarge, "need step <= (R-r0)/10");
  const std::size_t n = static_cast<std::size_t>(std::llround((R - r0) / step));
  const double h = (R - r0) / static_cast<double>(n);
  RadialProfile p;
  p.kind = RadialProfile::Kind::Winglike;
  p.mu = mu;
  p.r.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) p.r[i] = r0 + i * h;
  p.u.assign(n + 1, 0.0);
  p.du.assign(n + 1, 0.0);
  p.u[0] = u0;
  p.du[0] = v0;
  rk4_march(p, mu, 0, n);
  return p;
}

RadialProfile winglike_profile(double r0, double R, double step) {
  return radial_ivp(0.0, r0, 0.0, 0.0, R, step);
}

double second_derivative_at_origin(const RadialProfile& profile) {
  // normal equations for u ~ c2 r^2 + c4 r^4 over the samples with r <= r_fit
  const double r_fit = std::max(0.02, 20.0 * (profile.r[1] - profile.r[0]));
  double s22 = 0, s24 = 0, s44 = 0, b2 = 0, b4 = 0;
  for (std::size_t i = 1; i < profile.size() && profile.r[i] <= r_fit; ++i) {
    const double r2 = profile.r[i] * profile.r[i];
    const double r4 = r2 * r2;
    s22 += r2 * r2;
    s24 += r2 * r4;
    s44 += r4 * r4;
    b2 += profile.u[i] * r2;
    b4 += profile.u[i] * r4;
  }
  const double det = s22 * s44 - s24 * s24;
  const double c2 = (b2 * s44 - b4 * s24) / det;
  return 2.0 * c2;
}

}  // namespace translab
