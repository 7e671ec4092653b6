#include "translab/perron.hpp"

#include <cmath>

#include "doctest.h"
#include "translab/closed_form.hpp"
#include "translab/error.hpp"

using namespace translab;

namespace {

GridPtr strip_grid(double m, double L, int n) { return build_grid(Domain::strip(m, L), n); }

}  // namespace

TEST_CASE("lifting the zero field lowers it strictly inside the disk") {
  GridPtr g = strip_grid(1.0, 2.0, 48);
  ScalarField zero = sample_field(g, [](Point) { return 0.0; });
  ScalarField lifted = lift_disk(zero, {0.3, 0.1}, 0.5);
  int inside = 0;
  for (int node : g->active_nodes()) {
    const Point p = g->coord(node);
    if (dist(p, {0.3, 0.1}) < 0.4) {
      CHECK(lifted.values[node] < 0.0);
      ++inside;
    }
    if (dist(p, {0.3, 0.1}) > 0.55) CHECK(lifted.values[node] == 0.0);
  }
  CHECK(inside > 50);
}

TEST_CASE("the exact strip solution is a fixed point of the disk lift") {
  GridPtr g = strip_grid(1.0, 2.0, 64);
  auto exact = strip_exact_solution(1.0, 0.0);
  ScalarField w = sample_field(g, exact);
  ScalarField lifted = lift_disk(w, {0.0, 0.0}, 0.5);
  double diff = 0.0;
  for (int node : g->active_nodes())
    diff = std::max(diff, std::abs(lifted.values[node] - w.values[node]));
  // the discrete disk solve recenters w onto the grid equations, O(h^2) away
  CHECK(diff < 5e-4);
}

TEST_CASE("lifting the minimal solution can only lower it") {
  GridPtr g = strip_grid(1.0, 2.0, 48);
  SolveReport v0 = newton_solve([](Point p) { return 0.1 * p.x * p.x; },
                                OperatorParams::minimal(), g);
  ScalarField lifted = lift_disk(v0.solution, {-0.5, 0.0}, 0.45);
  for (int node : g->active_nodes())
    CHECK(lifted.values[node] <= v0.solution.values[node] + 1e-9);
}

TEST_CASE("disk closure must stay inside the domain") {
  GridPtr g = strip_grid(1.0, 2.0, 48);
  ScalarField zero = sample_field(g, [](Point) { return 0.0; });
  CHECK_THROWS_WITH_AS(lift_disk(zero, {0.0, 0.8}, 0.5), doctest::Contains("BadParameter"),
                       Error);
}

TEST_CASE("perron on the strip with f = 0 recovers the closed form") {
  GridPtr g = strip_grid(1.0, 3.0, 48);
  PerronState st = perron_strip([](double) { return 0.0; }, 1.0, 3.0, g, 1e-7);
  CHECK(st.monotone);
  CHECK(st.sandwiched);
  CHECK(st.last_sup_change < 1e-7);

  auto exact = strip_exact_solution(1.0, 0.0);
  double err = 0.0;
  for (int node : g->active_nodes()) {
    const Point p = g->coord(node);
    if (std::abs(p.x) <= 1.5) err = std::max(err, std::abs(st.iterate.values[node] - exact(p)));
  }
  CHECK(err < 5e-3);

  // monotone decreasing sup-change after the first sweep
  for (std::size_t k = 1; k < st.trace.size(); ++k)
    CHECK(st.trace[k].sup_change <= st.trace[k - 1].sup_change * 1.5 + 1e-12);
}

TEST_CASE("perron with affine data recovers the tilted reaper") {
  const double slope = 0.25;
  GridPtr g = strip_grid(1.0, 3.0, 48);
  PerronState st = perron_strip([slope](double x) { return slope * x; }, 1.0, 3.0, g, 1e-7);
  const double theta = std::atan(slope);
  GrimReaper reaper(theta, std::log(std::cos(std::cos(theta))) / (std::cos(theta) * std::cos(theta)));
  double err = 0.0;
  for (int node : g->active_nodes()) {
    const Point p = g->coord(node);
    if (std::abs(p.x) <= 1.5)
      err = std::max(err, std::abs(st.iterate.values[node] - reaper.eval(p)));
  }
  CHECK(err < 5e-3);
}

TEST_CASE("perron with strictly convex data stays inside the sandwich") {
  GridPtr g = strip_grid(1.0, 3.0, 48);
  PerronState st = perron_strip([](double x) { return x * x / 8.0; }, 1.0, 3.0, g, 1e-7);
  CHECK(st.sandwiched);
  CHECK(st.monotone);
  const double slack = 10 * g->spacing() * g->spacing();
  for (int node : g->active_nodes()) {
    CHECK(st.iterate.values[node] >= st.lower.values[node] - slack);
    CHECK(st.iterate.values[node] <= st.upper.values[node] + slack);
  }
}

TEST_CASE("perron agrees with the direct solve on the same data") {
  GridPtr g = strip_grid(1.0, 3.0, 48);
  PerronState st = perron_strip([](double x) { return x * x / 8.0; }, 1.0, 3.0, g, 1e-8);
  // same boundary data, including the artificial-end trace, solved directly
  ScalarField direct = st.iterate;
  for (int node : g->active_nodes()) direct.values[node] = 0.0;
  solve_subset(direct, OperatorParams::translator(1.0), {});
  double diff = 0.0;
  for (int node : g->active_nodes())
    diff = std::max(diff, std::abs(direct.values[node] - st.iterate.values[node]));
  CHECK(diff < 5 * std::max(1e-8, g->spacing() * g->spacing()));
}

TEST_CASE("one extra sweep after convergence changes almost nothing") {
  GridPtr g = strip_grid(1.0, 2.0, 32);
  PerronState st = perron_strip([](double) { return 0.0; }, 1.0, 2.0, g, 1e-8);
  const double change = perron_resweep(st);
  CHECK(change < 2e-8);
}

TEST_CASE("order preservation of the disk lift") {
  GridPtr g = strip_grid(1.0, 2.0, 48);
  ScalarField lo = sample_field(g, [](Point p) { return -0.2 + 0.05 * p.x; });
  ScalarField hi = sample_field(g, [](Point p) { return 0.1 + 0.05 * p.x; });
  ScalarField llo = lift_disk(lo, {0.0, 0.0}, 0.5);
  ScalarField lhi = lift_disk(hi, {0.0, 0.0}, 0.5);
  const double slack = 10 * g->spacing() * g->spacing();
  for (int node : g->active_nodes()) CHECK(llo.values[node] <= lhi.values[node] + slack);
}

TEST_CASE("perron rejects non-convex data") {
  GridPtr g = strip_grid(1.0, 2.0, 32);
  CHECK_THROWS_WITH_AS(
      perron_strip([](double x) { return -x * x; }, 1.0, 2.0, g, 1e-6),
      doctest::Contains("NotConvex"), Error);
}

TEST_CASE("perron unbounded on the degenerate full strip recovers the formula") {
  Domain dom = Domain::strip(1.0, 3.0);
  GridPtr g = build_grid(dom, 48);
  PerronState st = perron_unbounded(dom, g, 1e-7);
  auto exact = strip_exact_solution(1.0, 0.0);
  double err = 0.0;
  for (int node : g->active_nodes()) {
    const Point p = g->coord(node);
    if (std::abs(p.x) <= 1.5) err = std::max(err, std::abs(st.iterate.values[node] - exact(p)));
  }
  CHECK(err < 5e-3);
}

TEST_CASE("perron unbounded on the half strip obeys the sandwich") {
  Domain dom = Domain::half_strip(1.0, 0.0, 3.0);
  GridPtr g = build_grid(dom, 48);
  PerronState st = perron_unbounded(dom, g, 1e-7);
  CHECK(st.monotone);
  CHECK(st.sandwiched);
  const double floor = std::log(std::cos(1.0));
  for (int node : g->active_nodes()) {
    CHECK(st.iterate.values[node] >= floor - 1e-6);
    CHECK(st.iterate.values[node] <= 1e-9);
  }
  // strictly negative away from the boundary
  const double h = g->spacing();
  for (int node : g->active_nodes()) {
    if (dom.signed_distance(g->coord(node)) > 3 * h)
      CHECK(st.iterate.values[node] <= -0.25 * h * h);
  }
}

TEST_CASE("perron unbounded rejects wide strips") {
  Domain dom = Domain::strip(1.7, 3.0);
  GridPtr g = build_grid(dom, 32);
  CHECK_THROWS_WITH_AS(perron_unbounded(dom, g, 1e-6), doctest::Contains("NotInStrip"), Error);
}
