#include "translab/elliptic.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "translab/closed_form.hpp"
#include "translab/error.hpp"
#include "translab/radial.hpp"

using namespace translab;

namespace {

double sup_residual(const ScalarField& r) {
  double sup = 0.0;
  for (int node : r.grid->active_nodes()) sup = std::max(sup, std::abs(r.values[node]));
  return sup;
}

ScalarField sample_reaper(GridPtr grid, double theta) {
  GrimReaper g(theta, 0.0);
  return sample_field(grid, [&g](Point p) { return g.eval(p); });
}

// smooth pseudo-random trig polynomial for stress fields
BoundaryData random_trig(std::mt19937& rng, double amp) {
  std::uniform_real_distribution<double> U(-1, 1);
  const double a0 = amp * U(rng), a1 = amp * U(rng), a2 = amp * U(rng);
  const double b1 = amp * U(rng), b2 = amp * U(rng);
  return [=](Point p) {
    return a0 + a1 * p.x + b1 * p.y + a2 * std::sin(p.x + 2 * p.y) + b2 * std::cos(2 * p.x - p.y);
  };
}

}  // namespace

TEST_CASE("residual of the zero field is -1 for the translator") {
  GridPtr g = build_grid(Domain::disk({0, 0}, 1.0), 16);
  ScalarField zero = sample_field(g, [](Point) { return 0.0; });
  ScalarField r = residual_field(zero, OperatorParams::translator(1.0));
  for (int node : g->active_nodes()) CHECK(r.values[node] == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("affine planes are discrete minimal surfaces") {
  GridPtr g = build_grid(Domain::disk({0, 0}, 1.0), 24);
  ScalarField plane = sample_field(g, [](Point p) { return 0.7 * p.x - 0.2 * p.y + 0.3; });
  ScalarField r = residual_field(plane, OperatorParams::minimal());
  CHECK(sup_residual(r) < 1e-12);
}

TEST_CASE("sampled grim reaper has O(h^2) residual on the strip grid") {
  // order is measured on the fixed region |y| <= 0.75; the full-domain sup is
  // attained at the row nearest the wall, which moves as h shrinks
  Domain strip = Domain::strip(1.0, 2.0);
  double prev = 0.0, full = 0.0;
  for (int n : {32, 64}) {
    GridPtr g = build_grid(strip, n);
    ScalarField w = sample_reaper(g, 0.0);
    ScalarField r = residual_field(w, OperatorParams::translator(1.0));
    double sup = 0.0;
    for (int node : g->active_nodes())
      if (std::abs(g->coord(node).y) <= 0.75) sup = std::max(sup, std::abs(r.values[node]));
    full = sup_residual(r);
    if (prev > 0) CHECK(sup < prev / 3.0);
    prev = sup;
  }
  CHECK(full < 2e-3);
}

TEST_CASE("divergence-form discretization also vanishes on the reaper at O(h^2)") {
  Domain strip = Domain::strip(1.0, 2.0);
  double prev = 0.0;
  for (int n : {32, 64}) {
    GridPtr g = build_grid(strip, n);
    ScalarField w = sample_reaper(g, 0.3);
    ScalarField r = residual_divergence_form(w);
    double sup = 0.0;
    for (int node : g->active_nodes())
      if (!std::isnan(r.values[node]) && std::abs(g->coord(node).y) <= 0.75)
        sup = std::max(sup, std::abs(r.values[node]));
    if (prev > 0) CHECK(sup < prev / 3.0);
    prev = sup;
  }
  CHECK(prev < 2e-3);
}

TEST_CASE("parallel and serial assembly agree bitwise") {
  GridPtr g = build_grid(Domain::disk({0, 0}, 1.0), 32);
  std::mt19937 rng(7);
  ScalarField u = sample_field(g, random_trig(rng, 0.5));
  const OperatorParams par = OperatorParams::translator(1.0);

  ScalarField rp = residual_field(u, par);
  ScalarField rs = residual_field_serial(u, par);
  for (int node : g->active_nodes()) CHECK(rp.values[node] == rs.values[node]);

  auto jp = assemble_jacobian(u, par);
  auto js = assemble_jacobian_serial(u, par);
  REQUIRE(jp.size() == js.size());
  for (std::size_t k = 0; k < jp.size(); ++k) {
    CHECK(jp[k].row == js[k].row);
    CHECK(jp[k].col == js[k].col);
    CHECK(jp[k].value == js[k].value);
  }
}

TEST_CASE("analytic Jacobian matches finite differences of the residual") {
  GridPtr g = build_grid(Domain::disk({0, 0}, 1.0), 24);
  std::mt19937 rng(11);
  for (const OperatorParams& par :
       {OperatorParams::translator(1.0), OperatorParams::weighted(0.4)}) {
    ScalarField u = sample_field(g, random_trig(rng, 0.6));
    const auto& nodes = g->active_nodes();
    std::uniform_real_distribution<double> U(-1, 1);
    std::vector<double> v(nodes.size());
    for (double& x : v) x = U(rng);

    const std::vector<double> jv = jacobian_vector_product(u, par, v);

    const double eps = 1e-6;
    ScalarField up = u, um = u;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      up.values[nodes[k]] += eps * v[k];
      um.values[nodes[k]] -= eps * v[k];
    }
    ScalarField rp = residual_field(up, par), rm = residual_field(um, par);

    // compare in the alpha^2-scaled row norm
    double scale = 0.0, err = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      double amin = 1.0;
      for (const auto& arm : g->arms(nodes[k])) amin = std::min(amin, arm.alpha);
      const double sigma = amin * amin;
      const double fd = (rp.values[nodes[k]] - rm.values[nodes[k]]) / (2 * eps);
      scale = std::max(scale, std::abs(jv[k]) * sigma);
      err = std::max(err, std::abs(jv[k] - fd) * sigma);
    }
    CHECK(err / scale < 1e-6);
  }
}

TEST_CASE("harmonic extension reproduces affine data and obeys the maximum principle") {
  GridPtr g = build_grid(Domain::disk({0, 0}, 1.0), 24);
  ScalarField aff = harmonic_extension(g, [](Point p) { return 0.4 * p.x - 0.7 * p.y + 1.0; });
  for (int node : g->active_nodes()) {
    const Point p = g->coord(node);
    CHECK(std::abs(aff.values[node] - (0.4 * p.x - 0.7 * p.y + 1.0)) < 1e-11);
  }
  ScalarField u = harmonic_extension(g, [](Point p) { return std::sin(3 * p.x) * p.y; });
  double bmin = 1e300, bmax = -1e300;
  for (double v : u.clip_values) {
    bmin = std::min(bmin, v);
    bmax = std::max(bmax, v);
  }
  for (int node : g->active_nodes()) {
    CHECK(u.values[node] >= bmin - 1e-9);
    CHECK(u.values[node] <= bmax + 1e-9);
  }
}

TEST_CASE("minimal solve with affine data is exact") {
  Domain sq = Domain::convex_polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
  GridPtr g = build_grid(sq, 32);
  auto phi = [](Point p) { return 0.5 * p.x - 0.25 * p.y + 0.1; };
  SolveReport rep = newton_solve(phi, OperatorParams::minimal(), g);
  CHECK(rep.converged);
  for (int node : g->active_nodes())
    CHECK(std::abs(rep.solution.values[node] - phi(g->coord(node))) < 1e-10);
}

TEST_CASE("disk Dirichlet solve matches the radial oracle at the center") {
  GridPtr g = build_grid(Domain::disk({0, 0}, 1.0), 64);
  SolveReport rep = newton_solve([](Point) { return 0.0; }, OperatorParams::translator(1.0), g);
  CHECK(rep.converged);
  CHECK(rep.residual < 1e-10);

  RadialProfile bowl = bowl_profile(1.0, 1e-3);
  const double expected = -bowl.u.back();
  const int center = g->id(32, 32);
  CHECK(std::abs(rep.solution.values[center] - expected) < 2e-3);

  // radial symmetry up to discretization: compare against the profile everywhere
  double worst = 0.0;
  for (int node : g->active_nodes()) {
    const Point p = g->coord(node);
    const double oracle = bowl.value_at(std::hypot(p.x, p.y)) - bowl.u.back();
    worst = std::max(worst, std::abs(rep.solution.values[node] - oracle));
  }
  CHECK(worst < 5e-3);
}

TEST_CASE("strip solve reproduces the closed form at second order") {
  Domain strip = Domain::strip(1.0, 4.0);
  auto exact = strip_exact_solution(1.0, 0.0);
  double prev = 0.0;
  for (int n : {64, 128}) {
    GridPtr g = build_grid(strip, n);
    SolveReport rep =
        newton_solve([&](Point p) { return exact(p); }, OperatorParams::translator(1.0), g);
    double err = 0.0;
    for (int node : g->active_nodes())
      err = std::max(err, std::abs(rep.solution.values[node] - exact(g->coord(node))));
    if (prev > 0) {
      const double order = std::log2(prev / err);
      CHECK(order >= 1.8);
    }
    prev = err;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("continuity trace is monotone on the disk") {
  GridPtr g = build_grid(Domain::disk({0, 0}, 1.0), 32);
  SolveReport rep = continuity_solve([](Point) { return 0.0; }, g, 10);
  CHECK(rep.converged);
  CHECK(rep.ordering_ok);
  REQUIRE(rep.trace.size() == 11);
  // phi = 0: u_t <= 0 with |u_t(center)| = sup|u_t| strictly increasing in t
  for (std::size_t k = 1; k < rep.trace.size(); ++k)
    CHECK(rep.trace[k].sup_u > rep.trace[k - 1].sup_u);
}

TEST_CASE("continuation path independence") {
  GridPtr g = build_grid(Domain::disk({0, 0}, 1.0), 24);
  auto phi = [](Point p) { return 0.2 * p.x; };
  SolveReport one = continuity_solve(phi, g, 1);
  SolveReport ten = continuity_solve(phi, g, 10);
  double diff = 0.0;
  for (int node : g->active_nodes())
    diff = std::max(diff, std::abs(one.solution.values[node] - ten.solution.values[node]));
  CHECK(diff < 1e-7);
}

TEST_CASE("gradient maximum sits on the boundary ring for phi = x on the square") {
  Domain sq = Domain::convex_polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
  GridPtr g = build_grid(sq, 40);
  SolveReport rep = continuity_solve([](Point p) { return p.x; }, g, 5);
  CHECK(rep.converged);
  ScalarField grad = gradient_magnitude(rep.solution);
  double best = -1.0;
  int best_node = -1;
  for (int node : g->active_nodes())
    if (grad.values[node] > best) {
      best = grad.values[node];
      best_node = node;
    }
  CHECK(g->mask(best_node) == NodeMask::BoundaryAdjacent);
}

TEST_CASE("mu solve cross-checks the radial oracle on the small disk") {
  GridPtr g = build_grid(Domain::disk({0, 0}, 0.9), 48);
  Domain dom = Domain::disk({0, 0}, 0.9);
  SolveReport rep = mu_solve([](Point) { return 0.0; }, 0.5, dom, g);
  CHECK(rep.converged);
  CHECK(rep.warnings.empty());  // kappa_min = 1/0.9 exceeds mu = 0.5

  RadialProfile prof = mu_radial_profile(0.5, 0.9, 1e-3);
  const int center = g->id(24, 24);
  CHECK(std::abs(rep.solution.values[center] + prof.u.back()) < 2e-3);
}

TEST_CASE("solutions decrease pointwise in mu") {
  GridPtr g = build_grid(Domain::disk({0, 0}, 0.9), 32);
  Domain dom = Domain::disk({0, 0}, 0.9);
  auto phi = [](Point) { return 0.0; };
  SolveReport u0 = mu_solve(phi, 0.0, dom, g);
  SolveReport u2 = mu_solve(phi, 0.2, dom, g);
  SolveReport u4 = mu_solve(phi, 0.4, dom, g);
  const double slack = 10 * g->spacing() * g->spacing();
  for (int node : g->active_nodes()) {
    CHECK(u2.solution.values[node] <= u0.solution.values[node] + slack);
    CHECK(u4.solution.values[node] <= u2.solution.values[node] + slack);
  }
}

TEST_CASE("vertical translation invariance") {
  GridPtr g = build_grid(Domain::disk({0, 0}, 1.0), 24);
  auto phi = [](Point p) { return 0.3 * std::sin(2 * p.x) + 0.1 * p.y; };
  SolveReport a = newton_solve(phi, OperatorParams::translator(1.0), g);
  SolveReport b = newton_solve([&](Point p) { return phi(p) + 2.5; },
                               OperatorParams::translator(1.0), g);
  for (int node : g->active_nodes())
    CHECK(std::abs(b.solution.values[node] - a.solution.values[node] - 2.5) < 1e-8);
}

TEST_CASE("discrete comparison principle on random ordered boundary pairs") {
  std::mt19937 rng(23);
  GridPtr gd = build_grid(Domain::disk({0, 0}, 1.0), 24);
  Domain sq = Domain::convex_polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
  GridPtr gs = build_grid(sq, 24);
  std::uniform_real_distribution<double> U(0.05, 0.6);
  for (int trial = 0; trial < 10; ++trial) {
    GridPtr g = trial % 2 == 0 ? gd : gs;
    BoundaryData lo = random_trig(rng, 0.4);
    const double gap = U(rng);
    BoundaryData hi = [lo, gap](Point p) { return lo(p) + gap * (1.1 + std::sin(p.x)); };
    SolveReport a = newton_solve(lo, OperatorParams::translator(1.0), g);
    SolveReport b = newton_solve(hi, OperatorParams::translator(1.0), g);
    const double slack = 10 * g->spacing() * g->spacing();
    for (int node : g->active_nodes())
      CHECK(a.solution.values[node] <= b.solution.values[node] + slack);
  }
}

TEST_CASE("solve_subset freezes the complement") {
  GridPtr g = build_grid(Domain::disk({0, 0}, 1.0), 24);
  ScalarField u = sample_field(g, [](Point) { return 0.0; });
  // solve only on the left half, right half frozen at 0
  std::vector<int> left;
  for (int node : g->active_nodes())
    if (g->coord(node).x < 0) left.push_back(node);
  ScalarField before = u;
  solve_subset(u, OperatorParams::translator(1.0), left);
  for (int node : g->active_nodes()) {
    if (g->coord(node).x < 0)
      CHECK(u.values[node] < 0.0);
    else
      CHECK(u.values[node] == before.values[node]);
  }
}
