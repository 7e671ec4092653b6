#ifndef TRANSLAB_ELLIPTIC_HPP
#define TRANSLAB_ELLIPTIC_HPP

#include <functional>
#include <string>
#include <vector>

#include "translab/geometry.hpp"

namespace translab {

// Selects the operator family:
//   Translator  Q_t[u] = (1+|Du|^2) Lap u - u_i u_j u_ij - t (1+|Du|^2)
//   Weighted    Q[u]   = (1+|Du|^2) Lap u - u_i u_j u_ij - (1+|Du|^2) - mu (1+|Du|^2)^{3/2}
//   Serrin      Q[u]   = (1+|Du|^2) Lap u - u_i u_j u_ij - 2H (1+|Du|^2)^{n/2}
struct OperatorParams {
  enum class Mode { Translator, Weighted, Serrin };
  Mode mode = Mode::Translator;
  double t = 1.0;
  double mu = 0.0;
  double H = 0.5;
  double n_exp = 2.0;

  static OperatorParams translator(double t = 1.0);
  static OperatorParams minimal() { return translator(0.0); }
  static OperatorParams weighted(double mu);
  static OperatorParams serrin(double H, double n);
};

struct ContinuationRecord {
  double t = 0.0;       // continuation parameter (t or mu)
  double sup_u = 0.0;   // ||u||_inf over active nodes
  double sup_du = 0.0;  // max |Du|
  int newton_iters = 0;
};

struct SolveReport {
  ScalarField solution;
  double residual = 0.0;  // scaled sup-norm at the accepted iterate
  bool converged = false;
  bool ordering_ok = true;  // monotone ordering along the continuation path
  std::vector<int> newton_iters;
  std::vector<ContinuationRecord> trace;
  std::vector<std::string> warnings;
};

struct NewtonOptions {
  double tol = 1e-10;
  int max_iters = 60;
  int max_halvings = 30;
};

using BoundaryData = std::function<double(Point)>;

// Discrete operator value at every active node (advective form, centered
// differences with Shortley-Weller clipped arms). Exterior nodes hold NaN.
ScalarField residual_field(const ScalarField& u, const OperatorParams& params);
ScalarField residual_field_serial(const ScalarField& u, const OperatorParams& params);

// Divergence-form discretization of the translating-soliton equation, used as
// an independent cross-check. Values only at nodes whose 3x3 neighborhood is
// active; NaN elsewhere.
ScalarField residual_divergence_form(const ScalarField& u);

// |Du| from the same one-sided/clipped stencils as the solver.
ScalarField gradient_magnitude(const ScalarField& u);

// Gradient components on the same stencils; first = d/dx, second = d/dy.
std::pair<ScalarField, ScalarField> gradient_components(const ScalarField& u);

// Exact-Jacobian action on a vector indexed by active nodes.
std::vector<double> jacobian_vector_product(const ScalarField& u, const OperatorParams& params,
                                            const std::vector<double>& v);

// Assembled sparse Jacobian rows (row/col indices into active_nodes()).
struct MatrixEntry {
  int row = 0;
  int col = 0;
  double value = 0.0;
};
std::vector<MatrixEntry> assemble_jacobian(const ScalarField& u, const OperatorParams& params);
std::vector<MatrixEntry> assemble_jacobian_serial(const ScalarField& u,
                                                  const OperatorParams& params);

// Solution of Lap u = 0 with the given boundary data (one sparse solve).
ScalarField harmonic_extension(GridPtr grid, const BoundaryData& phi);

// Damped Newton with sparse direct linear solves, started from the harmonic
// extension of phi.
SolveReport newton_solve(const BoundaryData& phi, const OperatorParams& params, GridPtr grid,
                         const NewtonOptions& opts = {});

// Newton warm-started from u0 (clip values of u0 are the boundary data).
SolveReport newton_solve_from(ScalarField u0, const OperatorParams& params,
                              const NewtonOptions& opts = {});

// Method of continuity in t: minimal surface first, then march t to 1 in
// `steps` increments (adaptive halving down to 1/160 on stalls).
SolveReport continuity_solve(const BoundaryData& phi, GridPtr grid, int steps,
                             const NewtonOptions& opts = {}, double target_t = 1.0);

// Continuation in t, then in mu from 0 to the target in 10 steps.
SolveReport mu_solve(const BoundaryData& phi, double mu, const Domain& dom, GridPtr grid,
                     const NewtonOptions& opts = {});

// Serrin-mode continuation (experiment mode; reports stalls as errors).
SolveReport serrin_solve(const BoundaryData& phi, double H, double n, GridPtr grid, int steps,
                         const NewtonOptions& opts = {});

// Solve the discrete equations only at `nodes`, all other node values frozen.
// Updates u in place and returns the Newton iteration count.
int solve_subset(ScalarField& u, const OperatorParams& params, const std::vector<int>& nodes,
                 const NewtonOptions& opts = {});

// Scaled residual sup-norm used as the Newton convergence measure.
double convergence_norm(const ScalarField& u, const OperatorParams& params);

}  // namespace translab

#endif
