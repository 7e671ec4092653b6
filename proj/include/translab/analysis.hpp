#ifndef TRANSLAB_ANALYSIS_HPP
#define TRANSLAB_ANALYSIS_HPP

#include <string>

#include "translab/elliptic.hpp"
#include "translab/geometry.hpp"

namespace translab {

struct CheckReport {
  std::string name;
  bool pass = false;
  double margin = 0.0;  // distance to the bound; negative means violated
  std::string details;
};

// Discrete comparison: u1 <= u2 + 10h^2 at active nodes (u1 <= u2 required on
// the clipped boundary values). Throws GridMismatch for fields on different grids.
CheckReport check_comparison(const ScalarField& u1, const ScalarField& u2);

// Height bounds C1 <= u <= max phi with C1 = min phi - b(R_enc) built from the
// bowl profile normalized to vanish on the enclosing disk boundary.
CheckReport check_height_estimate(const SolveReport& report, const Domain& dom);

// The maximum of |Du| must sit on the boundary-adjacent ring (O(h) slack).
CheckReport check_gradient_location(const SolveReport& report);

// Log-distance lower barrier w = -a log(1 + b d) + phi(pi(x)) on the tubular
// band d < eps, with a = c/log(1+b).
struct BarrierSpec {
  double a = 0.0, b = 0.0, c = 0.0, eps = 0.0;
  bool q_positive = false;      // discrete Q[w] > 0 on the band
  bool below_solution = false;  // w <= u on the inner edge of the band
  bool half_condition = false;  // log(1+b eps)/log(1+b) >= 1/2
  double C2 = 0.0;              // implied boundary gradient bound
  ScalarField w;                // barrier field
  ScalarField phi_ext;          // phi extended by the nearest-point projection

  bool certified() const { return q_positive && below_solution && half_condition; }
};

// Doubling ladder b in {2,4,...,2^30}; returns the first certified barrier or
// throws NoBarrierFound naming the last failing condition.
BarrierSpec build_barrier(const SolveReport& report, const Domain& dom, const BoundaryData& phi,
                          double eps, const OperatorParams& params = OperatorParams::translator());

// Both sides of the graph flux identity
//   \oint (nu . Du)/sqrt(1+|Du|^2) ds = \int dx dy / sqrt(1+|Du|^2)
// by midpoint quadrature; passes when the relative mismatch is below 5h.
struct FluxReport {
  double boundary_flux = 0.0;
  double weighted_area = 0.0;
  double rel_mismatch = 0.0;
  bool pass = false;
};
FluxReport check_flux_identity(const ScalarField& u, const Domain& dom);

}  // namespace translab

#endif
