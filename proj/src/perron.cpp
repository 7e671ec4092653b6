#include "translab/perron.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "translab/closed_form.hpp"
#include "translab/error.hpp"

namespace translab {

namespace {

// Active nodes strictly inside the disk, minus the discrete boundary ring
// (nodes with an active 4-neighbor outside the disk). Boundary-adjacent nodes
// keep their clipped Dirichlet arms, so patches may overlap the domain boundary.
std::vector<int> patch_unknowns(const Grid& g, Point center, double radius) {
  std::vector<char> inside(g.num_nodes(), 0);
  std::vector<int> members;
  const int i0 = std::max(0, static_cast<int>((center.x - radius - g.origin().x) / g.spacing()));
  const int i1 = std::min(g.nx() - 1,
                          static_cast<int>((center.x + radius - g.origin().x) / g.spacing()) + 1);
  const int j0 = std::max(0, static_cast<int>((center.y - radius - g.origin().y) / g.spacing()));
  const int j1 = std::min(g.ny() - 1,
                          static_cast<int>((center.y + radius - g.origin().y) / g.spacing()) + 1);
  for (int j = j0; j <= j1; ++j)
    for (int i = i0; i <= i1; ++i) {
      const int node = g.id(i, j);
      if (g.active(node) && dist(g.coord(i, j), center) < radius) {
        inside[node] = 1;
        members.push_back(node);
      }
    }
  std::vector<int> unknowns;
  unknowns.reserve(members.size());
  for (int node : members) {
    bool ring = false;
    for (const auto& arm : g.arms(node))
      if (arm.neighbor >= 0 && !inside[arm.neighbor]) {
        ring = true;
        break;
      }
    if (!ring) unknowns.push_back(node);
  }
  return unknowns;
}

struct SweepOutcome {
  double sup_change = 0.0;
  double max_increase = 0.0;
};

SweepOutcome run_sweep(ScalarField& u, const std::vector<std::vector<int>>& patches,
                       const NewtonOptions& opts) {
  const std::vector<double> before = u.values;
  for (const auto& unknowns : patches) {
    try {
      solve_subset(u, OperatorParams::translator(1.0), unknowns, opts);
    } catch (const Error& err) {
      throw Error(ErrorCode::SubSolveFailed,
                  std::string("disk lift failed: ") + err.what());
    }
  }
  SweepOutcome out;
  for (int node : u.grid->active_nodes()) {
    const double change = u.values[node] - before[node];
    out.sup_change = std::max(out.sup_change, std::abs(change));
    out.max_increase = std::max(out.max_increase, change);
  }
  return out;
}

// Sublattice disk cover, spacing 0.4*m. The radius is resolution-independent
// (0.45*m, clipped to the active set) so the sweep contraction rate does not
// degrade under grid refinement; per-node fixup patches catch any active node
// still unenforced.
std::vector<PerronState::DiskSpec> build_schedule(const Grid& g, const Domain& dom,
                                                  double m_char,
                                                  std::vector<std::vector<int>>& patches) {
  std::vector<PerronState::DiskSpec> schedule;
  patches.clear();
  const double h = g.spacing();
  const double spacing = 0.4 * m_char;
  const double radius = std::max(0.45 * m_char, 3.5 * h);
  std::vector<char> covered(g.num_nodes(), 0);

  const Point lo = g.origin();
  const int nsx = static_cast<int>((g.nx() - 1) * h / spacing) + 1;
  const int nsy = static_cast<int>((g.ny() - 1) * h / spacing) + 1;
  for (int b = 0; b <= nsy; ++b)
    for (int a = 0; a <= nsx; ++a) {
      const Point c{lo.x + a * spacing, lo.y + b * spacing};
      const double d = dom.signed_distance(c);
      if (d <= 0 && std::abs(d) > radius) continue;
      auto unknowns = patch_unknowns(g, c, radius);
      if (unknowns.empty()) continue;
      for (int node : unknowns) covered[node] = 1;
      schedule.push_back({c, radius});
      patches.push_back(std::move(unknowns));
    }
  for (int node : g.active_nodes()) {
    if (covered[node]) continue;
    const Point c = g.coord(node);
    auto unknowns = patch_unknowns(g, c, radius);
    if (unknowns.empty()) continue;
    bool hits = false;
    for (int nd : unknowns) {
      if (!covered[nd]) hits = true;
      covered[nd] = 1;
    }
    if (!hits) continue;
    schedule.push_back({c, radius});
    patches.push_back(std::move(unknowns));
  }
  return schedule;
}

PerronState run_perron(ScalarField iterate, ScalarField lower, ScalarField upper,
                       const Domain& dom, double m_char, double tol, int max_sweeps) {
  const Grid& g = *iterate.grid;
  PerronState st;
  std::vector<std::vector<int>> patches;
  st.schedule = build_schedule(g, dom, m_char, patches);
  st.lower = std::move(lower);
  st.upper = std::move(upper);

  NewtonOptions opts;
  const double sandwich_slack = 10.0 * g.spacing() * g.spacing();
  bool converged = false;
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    const SweepOutcome out = run_sweep(iterate, patches, opts);
    st.sweeps = sweep;
    st.last_sup_change = out.sup_change;
    st.trace.push_back({sweep, out.sup_change});
    if (out.max_increase > 1e-9) st.monotone = false;
    for (int node : g.active_nodes()) {
      if (iterate.values[node] < st.lower.values[node] - sandwich_slack ||
          iterate.values[node] > st.upper.values[node] + sandwich_slack) {
        st.sandwiched = false;
        break;
      }
    }
    if (out.sup_change < tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw Error(ErrorCode::NoConvergence,
                "sweep budget exhausted, last sup-change " + std::to_string(st.last_sup_change));
  st.iterate = std::move(iterate);
  return st;
}

// Tilted reaper touching the boundary graph of f at x = x0 from below.
struct TangentReaper {
  double slope, c, offset;
  double eval(Point p) const {
    return -std::log(std::cos(c * p.y)) / (c * c) + slope * p.x + offset;
  }
};

TangentReaper tangent_reaper(const std::function<double(double)>& f, double x0, double m) {
  const double delta = 1e-6;
  const double slope = (f(x0 + delta) - f(x0 - delta)) / (2 * delta);
  const double theta = std::atan(slope);
  const double c = std::cos(theta);
  const double offset = f(x0) - slope * x0 + std::log(std::cos(c * m)) / (c * c);
  return {slope, c, offset};
}

}  // namespace

ScalarField lift_disk(const ScalarField& u, Point center, double radius) {
  const Grid& g = *u.grid;
  if (!(radius > 0)) throw Error(ErrorCode::BadParameter, "disk radius must be positive");
  // closure inside the domain: a full grid neighborhood of the disk is active
  const double margin = radius + 1.5 * g.spacing();
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      if (dist(g.coord(i, j), center) <= margin && !g.active(g.id(i, j)))
        throw Error(ErrorCode::BadParameter, "disk closure is not inside the domain");

  auto unknowns = patch_unknowns(g, center, radius);
  ScalarField lifted = u;
  if (unknowns.empty()) return lifted;
  try {
    solve_subset(lifted, OperatorParams::translator(1.0), unknowns);
  } catch (const Error& err) {
    throw Error(ErrorCode::SubSolveFailed,
                "disk at (" + std::to_string(center.x) + "," + std::to_string(center.y) +
                    ") r=" + std::to_string(radius) + ": " + err.what());
  }
  return lifted;
}

PerronState perron_strip(const std::function<double(double)>& f, double half_width,
                         double truncation, GridPtr grid, double tol, int max_sweeps) {
  if (!(half_width > 0 && half_width < M_PI / 2))
    throw Error(ErrorCode::BadParameter, "strip half-width must lie in (0, pi/2)");
  if (!(truncation > 0)) throw Error(ErrorCode::BadParameter, "truncation must be positive");
  if (!(tol > 0)) throw Error(ErrorCode::BadParameter, "tolerance must be positive");

  // convexity of f by second differences
  {
    const double step = truncation / 64.0;
    double scale = 1.0;
    for (int k = -64; k <= 64; ++k) scale = std::max(scale, std::abs(f(k * step)));
    for (int k = -63; k <= 63; ++k) {
      const double dd = f((k - 1) * step) - 2.0 * f(k * step) + f((k + 1) * step);
      if (dd < -1e-9 * scale)
        throw Error(ErrorCode::NotConvexData, "boundary function is not convex");
    }
  }

  const Grid& g = *grid;
  Domain dom = Domain::strip(half_width, truncation);

  // lower barrier: upper envelope of tangent grim reapers, 64 samples per side
  std::vector<TangentReaper> reapers;
  for (int side = 0; side < 2; ++side)
    for (int k = 0; k < 64; ++k) {
      const double x0 = -truncation + (k + 0.5) * truncation / 32.0;
      reapers.push_back(tangent_reaper(f, x0, half_width));
    }
  auto envelope = [&reapers](Point p) {
    double best = -1e300;
    for (const auto& w : reapers) best = std::max(best, w.eval(p));
    return best;
  };

  // v^0: minimal solution with the same lateral data, f(+-L) on the ends
  auto phi_min = [&](Point p) {
    if (std::abs(std::abs(p.x) - truncation) < 1e-9 * truncation && std::abs(p.y) < half_width)
      return f(p.x < 0 ? -truncation : truncation);
    return f(p.x);
  };
  SolveReport minimal = newton_solve(phi_min, OperatorParams::minimal(), grid);

  ScalarField lower = sample_field(grid, envelope);
  ScalarField iterate = minimal.solution;
  // artificial ends carry the lower-barrier trace; lateral clips keep f
  for (std::size_t c = 0; c < g.clips().size(); ++c) {
    const auto& clip = g.clips()[c];
    iterate.clip_values[c] = clip.artificial ? envelope(clip.p) : f(clip.p.x);
  }

  return run_perron(std::move(iterate), std::move(lower), minimal.solution, dom, half_width,
                    tol, max_sweeps);
}

double perron_resweep(PerronState& state) {
  const Grid& g = *state.iterate.grid;
  std::vector<std::vector<int>> patches;
  patches.reserve(state.schedule.size());
  for (const auto& d : state.schedule) patches.push_back(patch_unknowns(g, d.center, d.radius));
  const SweepOutcome out = run_sweep(state.iterate, patches, NewtonOptions{});
  ++state.sweeps;
  state.last_sup_change = out.sup_change;
  state.trace.push_back({state.sweeps, out.sup_change});
  return out.sup_change;
}

PerronState perron_unbounded(const Domain& dom, GridPtr grid, double tol, int max_sweeps) {
  if (dom.kind() != DomainKind::Strip && dom.kind() != DomainKind::TruncatedConvex)
    throw Error(ErrorCode::BadParameter, "domain must be a strip or truncated convex region");
  const double m = dom.strip_half_width();
  if (!(2.0 * m < M_PI)) throw Error(ErrorCode::NotInStrip, "strip width must be below pi");
  if (!(tol > 0)) throw Error(ErrorCode::BadParameter, "tolerance must be positive");

  const Grid& g = *grid;
  const double shift = std::log(std::cos(m));
  auto omega = [shift](Point p) { return -std::log(std::cos(p.y)) + shift; };

  ScalarField iterate = sample_field(grid, [](Point) { return 0.0; });
  for (std::size_t c = 0; c < g.clips().size(); ++c) {
    const auto& clip = g.clips()[c];
    iterate.clip_values[c] = clip.artificial ? omega(clip.p) : 0.0;
  }
  ScalarField lower = sample_field(grid, omega);
  ScalarField upper = sample_field(grid, [](Point) { return 0.0; });

  return run_perron(std::move(iterate), std::move(lower), std::move(upper), dom, m, tol,
                    max_sweeps);
}

}  // namespace translab
