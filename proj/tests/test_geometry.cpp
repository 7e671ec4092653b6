#include "translab/geometry.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "translab/error.hpp"

using namespace translab;

TEST_CASE("disk distance and curvature") {
  Domain d = Domain::disk({0, 0}, 1.0);
  CHECK(d.signed_distance({0, 0}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(d.curvature({1, 0}) == doctest::Approx(1.0));
  CHECK(Domain::disk({0, 0}, 2.0).signed_distance({1, 0}) == doctest::Approx(1.0));
  CHECK(Domain::disk({0, 0}, 1.0).signed_distance({2, 0}) == doctest::Approx(-1.0));

  // exact distance everywhere
  std::mt19937 rng(0);
  std::uniform_real_distribution<double> U(-1.5, 1.5);
  for (int k = 0; k < 1000; ++k) {
    Point p{U(rng), U(rng)};
    CHECK(std::abs(d.signed_distance(p) - (1.0 - std::hypot(p.x, p.y))) < 1e-14);
  }
}

TEST_CASE("strip distance is x-independent") {
  Domain s = Domain::strip(1.0, 4.0);
  for (double x : {-7.0, 0.0, 3.0, 100.0}) CHECK(s.signed_distance({x, 0}) == doctest::Approx(1.0));
  CHECK(s.curvature({0, 1}) == 0.0);
  Domain s2 = Domain::strip(M_PI / 2, 4.0);
  CHECK(s2.signed_distance({5, 0.5}) == doctest::Approx(M_PI / 2 - 0.5));
}

TEST_CASE("square polygon distance") {
  Domain sq = Domain::convex_polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
  CHECK(sq.signed_distance({0, 0}) == doctest::Approx(1.0));
  CHECK(sq.curvature({1, 0}) == 0.0);
  CHECK(sq.is_corner({1, 1}, 1e-9));
  CHECK_FALSE(sq.is_corner({1, 0}, 1e-9));
  CHECK(sq.signed_distance({2, 0}) == doctest::Approx(-1.0));
  CHECK(sq.signed_distance({2, 2}) == doctest::Approx(-std::sqrt(2.0)));
  CHECK(sq.signed_distance({0.5, 0.25}) == doctest::Approx(0.5));
}

TEST_CASE("half-strip distance") {
  Domain hs = Domain::half_strip(1.0, 0.0, 3.0);
  CHECK(hs.signed_distance({0.5, 0}) == doctest::Approx(0.5));
  CHECK(hs.signed_distance({2, 0}) == doctest::Approx(1.0));
  CHECK(hs.signed_distance({-1, 0}) == doctest::Approx(-1.0));
  CHECK(hs.signed_distance({-0.3, -1.4}) == doctest::Approx(-0.5));
  CHECK(hs.is_corner({0, 1}, 1e-9));
}

TEST_CASE("make_domain parses and validates") {
  CHECK(make_domain("disk:1.0").kind() == DomainKind::Disk);
  CHECK(make_domain("kind=disk radius=2.5").disk_radius() == doctest::Approx(2.5));
  CHECK(make_domain("kind=strip m=1 L=3").strip_half_width() == doctest::Approx(1.0));
  CHECK(make_domain("square:2").signed_distance({0, 0}) == doctest::Approx(1.0));
  CHECK(make_domain("polygon:-1,-1;1,-1;1,1;-1,1").kind() == DomainKind::ConvexPolygon);
  CHECK(make_domain("halfstrip:1:3").kind() == DomainKind::TruncatedConvex);

  CHECK_THROWS_WITH_AS(make_domain("disk:-1"), doctest::Contains("BadParameter"), Error);
  CHECK_THROWS_WITH_AS(make_domain("kind=strip m=0 L=3"), doctest::Contains("BadParameter"),
                       Error);
  // non-convex quadrilateral
  CHECK_THROWS_WITH_AS(make_domain("polygon:0,0;2,0;0.2,0.2;0,2"),
                       doctest::Contains("NonConvex"), Error);
}

TEST_CASE("eikonal property of signed distances") {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> U(-4, 4);
  const Domain doms[] = {Domain::disk({0.2, -0.1}, 1.3), Domain::strip(1.0, 4.0),
                         Domain::convex_polygon({{-1, -1}, {1.5, -0.5}, {1, 1}, {-0.5, 1.2}}),
                         Domain::half_strip(1.0, 0.0, 3.0)};
  for (const Domain& d : doms) {
    for (int k = 0; k < 10000; ++k) {
      Point p{U(rng), U(rng)}, q{U(rng), U(rng)};
      CHECK(std::abs(d.signed_distance(p) - d.signed_distance(q)) <= dist(p, q) + 1e-12);
    }
  }
}

TEST_CASE("convexity: boundary midpoints stay inside") {
  const Domain doms[] = {Domain::disk({0, 0}, 1.0),
                         Domain::convex_polygon({{-1, -1}, {1.5, -0.5}, {1, 1}, {-0.5, 1.2}})};
  for (const Domain& d : doms) {
    const auto bd = d.sample_boundary(64);
    for (size_t a = 0; a < bd.size(); a += 7) {
      for (size_t b = a + 1; b < bd.size(); b += 13) {
        Point mid{0.5 * (bd[a].p.x + bd[b].p.x), 0.5 * (bd[a].p.y + bd[b].p.y)};
        CHECK(d.signed_distance(mid) >= -1e-12);
      }
    }
  }
}

TEST_CASE("grid over disk: node count matches brute force") {
  Domain d = Domain::disk({0, 0}, 1.0);
  GridPtr g = build_grid(d, 64);
  CHECK(g->spacing() == doctest::Approx(2.0 / 64));
  CHECK(g->nx() == 65);
  CHECK(g->ny() == 65);

  // brute-force point-in-disk count over the same lattice
  int brute = 0;
  for (int j = 0; j < g->ny(); ++j)
    for (int i = 0; i < g->nx(); ++i) {
      const Point p = g->coord(i, j);
      if (p.x * p.x + p.y * p.y < 1.0) ++brute;
    }
  CHECK(static_cast<int>(g->active_nodes().size()) == brute);

  const double expected = M_PI * 32.0 * 32.0;
  CHECK(std::abs(brute - expected) <= 0.02 * expected);
}

TEST_CASE("grid fractions lie in (0,1]") {
  GridPtr g = build_grid(Domain::strip(1.0, 2.0), 32);
  for (int node : g->active_nodes()) {
    for (const auto& arm : g->arms(node)) {
      CHECK(arm.alpha > 0.0);
      CHECK(arm.alpha <= 1.0);
    }
  }
  CHECK(g->clips().size() > 0);
}

TEST_CASE("grid-aligned square boundary gives fractions exactly 1") {
  Domain sq = Domain::convex_polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
  GridPtr g = build_grid(sq, 16);
  for (const auto& clip : g->clips()) CHECK(clip.alpha == 1.0);
  CHECK(static_cast<int>(g->active_nodes().size()) == 15 * 15);
}

TEST_CASE("clip points sit on the boundary") {
  GridPtr g = build_grid(Domain::disk({0, 0}, 1.0), 48);
  for (const auto& clip : g->clips()) {
    CHECK(std::abs(std::hypot(clip.p.x, clip.p.y) - 1.0) < 1e-11);
  }
}

TEST_CASE("interior nodes have four active neighbors") {
  GridPtr g = build_grid(Domain::disk({0, 0}, 1.0), 32);
  int interior = 0;
  for (int node : g->active_nodes()) {
    if (g->mask(node) == NodeMask::Interior) {
      ++interior;
      for (const auto& arm : g->arms(node)) CHECK(arm.neighbor >= 0);
    }
  }
  CHECK(interior == g->num_interior());
  CHECK(interior > 0);
}

TEST_CASE("mask stability under refinement") {
  Domain d = Domain::disk({0, 0}, 1.0);
  GridPtr coarse = build_grid(d, 16);
  GridPtr fine = build_grid(d, 32);
  for (int j = 0; j < coarse->ny(); ++j)
    for (int i = 0; i < coarse->nx(); ++i) {
      if (coarse->mask(coarse->id(i, j)) == NodeMask::Exterior) continue;
      CHECK(fine->mask(fine->id(2 * i, 2 * j)) != NodeMask::Exterior);
    }
}

TEST_CASE("resolution guard") {
  CHECK_THROWS_WITH_AS(build_grid(Domain::disk({0, 0}, 1.0), 4),
                       doctest::Contains("BadParameter"), Error);
}

TEST_CASE("artificial truncation columns carry Dirichlet clips") {
  GridPtr g = build_grid(Domain::strip(1.0, 3.0), 96);
  int artificial = 0;
  for (const auto& clip : g->clips()) {
    if (clip.artificial) {
      ++artificial;
      CHECK(std::abs(std::abs(clip.p.x) - 3.0) < 1e-12);
      CHECK(clip.alpha == 1.0);
    }
  }
  CHECK(artificial > 0);
}

TEST_CASE("sample_field fills nodes and clips") {
  GridPtr g = build_grid(Domain::disk({0, 0}, 1.0), 16);
  ScalarField u = sample_field(g, [](Point p) { return p.x + 2 * p.y; });
  for (int node : g->active_nodes()) {
    const Point p = g->coord(node);
    CHECK(u.values[node] == doctest::Approx(p.x + 2 * p.y));
  }
  CHECK(u.clip_values.size() == g->clips().size());
}
