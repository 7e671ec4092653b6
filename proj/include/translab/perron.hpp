#ifndef TRANSLAB_PERRON_HPP
#define TRANSLAB_PERRON_HPP

#include <functional>
#include <vector>

#include "translab/elliptic.hpp"
#include "translab/geometry.hpp"

namespace translab {

struct SweepRecord {
  int sweep = 0;
  double sup_change = 0.0;
};

// Working state and result of the Perron sweep process.
struct PerronState {
  ScalarField iterate;
  ScalarField lower;  // pointwise max of the active grim reapers (or omega)
  ScalarField upper;  // minimal solution v^0 (or 0)
  struct DiskSpec {
    Point center;
    double radius = 0.0;
  };
  std::vector<DiskSpec> schedule;
  int sweeps = 0;
  double last_sup_change = 0.0;
  std::vector<SweepRecord> trace;
  bool monotone = true;    // every sweep lowered the iterate (1e-9 slack)
  bool sandwiched = true;  // lower <= iterate <= upper after every sweep (10h^2 slack)
};

// Replace u inside the disk by the translator Dirichlet solution with boundary
// trace u restricted to the discrete disk boundary; values outside unchanged.
// The disk closure must lie inside the active region.
ScalarField lift_disk(const ScalarField& u, Point center, double radius);

// Perron process on the strip |y| < m truncated at |x| <= L, boundary data two
// copies of the convex function f. Sweeps disk lifts until the sup-change of a
// full sweep drops below tol.
PerronState perron_strip(const std::function<double(double)>& f, double half_width,
                         double truncation, GridPtr grid, double tol, int max_sweeps = 400);

// Zero-boundary-data problem on a truncated unbounded convex domain inside a
// strip of width < pi (or the degenerate full strip).
PerronState perron_unbounded(const Domain& dom, GridPtr grid, double tol, int max_sweeps = 400);

// One additional full sweep over the state's schedule; returns the sup-change.
double perron_resweep(PerronState& state);

}  // namespace translab

#endif
