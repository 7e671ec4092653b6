#include "translab/elliptic.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>

#include "translab/error.hpp"

namespace translab {

OperatorParams OperatorParams::translator(double t) {
  OperatorParams p;
  p.mode = Mode::Translator;
  p.t = t;
  return p;
}

OperatorParams OperatorParams::weighted(double mu) {
  if (mu < 0) throw Error(ErrorCode::BadParameter, "mu must be nonnegative");
  OperatorParams p;
  p.mode = Mode::Weighted;
  p.mu = mu;
  return p;
}

OperatorParams OperatorParams::serrin(double H, double n) {
  OperatorParams p;
  p.mode = Mode::Serrin;
  p.H = H;
  p.n_exp = n;
  return p;
}

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// right-hand side g(W) with W = |Du|^2, and dg/dW
inline double rhs_value(const OperatorParams& par, double W) {
  switch (par.mode) {
    case OperatorParams::Mode::Translator: return par.t * (1.0 + W);
    case OperatorParams::Mode::Weighted:
      return (1.0 + W) + par.mu * std::pow(1.0 + W, 1.5);
    case OperatorParams::Mode::Serrin: return 2.0 * par.H * std::pow(1.0 + W, 0.5 * par.n_exp);
  }
  return 0.0;
}

inline double rhs_dW(const OperatorParams& par, double W) {
  switch (par.mode) {
    case OperatorParams::Mode::Translator: return par.t;
    case OperatorParams::Mode::Weighted: return 1.0 + 1.5 * par.mu * std::sqrt(1.0 + W);
    case OperatorParams::Mode::Serrin:
      return par.H * par.n_exp * std::pow(1.0 + W, 0.5 * par.n_exp - 1.0);
  }
  return 0.0;
}

struct OpStencil {
  int n = 0;
  int node[4];
  double w[4];
  void add(int nd, double wt) {
    if (nd < 0) return;  // clipped arm: Dirichlet value, no column
    node[n] = nd;
    w[n] = wt;
    ++n;
  }
};

struct Derivs {
  double ux = 0, uy = 0, uxx = 0, uyy = 0, uxy = 0;
  OpStencil sx, sy, sxx, syy, sxy;
};

template <bool WithStencil>
Derivs compute_derivs(const Grid& g, const ScalarField& u, int node) {
  Derivs d;
  const auto& arms = g.arms(node);
  const double h = g.spacing();
  const double uC = u.values[node];
  auto val = [&](const Grid::Arm& a) {
    return a.neighbor >= 0 ? u.values[a.neighbor] : u.clip_values[a.clip];
  };

  {
    const double hE = arms[0].alpha * h, hW = arms[1].alpha * h;
    const double uE = val(arms[0]), uW = val(arms[1]);
    const double cxE = hW / (hE * (hE + hW)), cxW = -hE / (hW * (hE + hW));
    const double cxC = (hE - hW) / (hE * hW);
    d.ux = cxE * uE + cxW * uW + cxC * uC;
    const double sE = 2.0 / (hE * (hE + hW)), sW = 2.0 / (hW * (hE + hW));
    const double sC = -2.0 / (hE * hW);
    d.uxx = sE * uE + sW * uW + sC * uC;
    if constexpr (WithStencil) {
      d.sx.add(arms[0].neighbor, cxE);
      d.sx.add(arms[1].neighbor, cxW);
      d.sx.add(node, cxC);
      d.sxx.add(arms[0].neighbor, sE);
      d.sxx.add(arms[1].neighbor, sW);
      d.sxx.add(node, sC);
    }
  }
  {
    const double hN = arms[2].alpha * h, hS = arms[3].alpha * h;
    const double uN = val(arms[2]), uS = val(arms[3]);
    const double cyN = hS / (hN * (hN + hS)), cyS = -hN / (hS * (hN + hS));
    const double cyC = (hN - hS) / (hN * hS);
    d.uy = cyN * uN + cyS * uS + cyC * uC;
    const double sN = 2.0 / (hN * (hN + hS)), sS = 2.0 / (hS * (hN + hS));
    const double sC = -2.0 / (hN * hS);
    d.uyy = sN * uN + sS * uS + sC * uC;
    if constexpr (WithStencil) {
      d.sy.add(arms[2].neighbor, cyN);
      d.sy.add(arms[3].neighbor, cyS);
      d.sy.add(node, cyC);
      d.syy.add(arms[2].neighbor, sN);
      d.syy.add(arms[3].neighbor, sS);
      d.syy.add(node, sC);
    }
  }

  // cross derivative: centered 4-point where the full diagonal set is active,
  // otherwise the first available one-sided quadrant
  const int i = g.ix(node), j = g.iy(node);
  auto diag = [&](int sx, int sy) -> int {
    const int ii = i + sx, jj = j + sy;
    if (ii < 0 || ii >= g.nx() || jj < 0 || jj >= g.ny()) return -1;
    const int nd = g.id(ii, jj);
    return g.active(nd) ? nd : -1;
  };
  const bool xr[2] = {arms[0].neighbor >= 0, arms[1].neighbor >= 0};
  const bool yr[2] = {arms[2].neighbor >= 0, arms[3].neighbor >= 0};
  const int dpp = diag(1, 1), dpm = diag(1, -1), dmp = diag(-1, 1), dmm = diag(-1, -1);
  if (xr[0] && xr[1] && yr[0] && yr[1] && dpp >= 0 && dpm >= 0 && dmp >= 0 && dmm >= 0) {
    const double c = 1.0 / (4.0 * h * h);
    d.uxy = c * (u.values[dpp] - u.values[dpm] - u.values[dmp] + u.values[dmm]);
    if constexpr (WithStencil) {
      d.sxy.add(dpp, c);
      d.sxy.add(dpm, -c);
      d.sxy.add(dmp, -c);
      d.sxy.add(dmm, c);
    }
  } else {
    const int quads[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
    for (const auto& q : quads) {
      const int sx = q[0], sy = q[1];
      if (!xr[sx == 1 ? 0 : 1] || !yr[sy == 1 ? 0 : 1]) continue;
      const int dg = diag(sx, sy);
      if (dg < 0) continue;
      const int ax = g.id(i + sx, j), ay = g.id(i, j + sy);
      const double c = sx * sy / (h * h);
      d.uxy = c * (u.values[dg] - u.values[ax] - u.values[ay] + uC);
      if constexpr (WithStencil) {
        d.sxy.add(dg, c);
        d.sxy.add(ax, -c);
        d.sxy.add(ay, -c);
        d.sxy.add(node, c);
      }
      break;
    }
  }
  return d;
}

inline double residual_from_derivs(const OperatorParams& par, const Derivs& d) {
  const double W = d.ux * d.ux + d.uy * d.uy;
  return (1.0 + d.uy * d.uy) * d.uxx + (1.0 + d.ux * d.ux) * d.uyy -
         2.0 * d.ux * d.uy * d.uxy - rhs_value(par, W);
}

// Unknown subset of a grid with frozen complement.
struct Subsystem {
  const Grid* grid = nullptr;
  OperatorParams par;
  std::vector<int> nodes;    // unknown node ids
  std::vector<int> index;    // node id -> row, or -1
  std::vector<double> sigma; // row scaling for the convergence norm
};

Subsystem make_subsystem(const Grid& g, const OperatorParams& par, std::vector<int> nodes) {
  Subsystem s;
  s.grid = &g;
  s.par = par;
  s.nodes = nodes.empty() ? g.active_nodes() : std::move(nodes);
  s.index.assign(g.num_nodes(), -1);
  for (std::size_t k = 0; k < s.nodes.size(); ++k) s.index[s.nodes[k]] = static_cast<int>(k);
  s.sigma.resize(s.nodes.size());
  for (std::size_t k = 0; k < s.nodes.size(); ++k) {
    double amin = 1.0;
    for (const auto& arm : g.arms(s.nodes[k])) amin = std::min(amin, arm.alpha);
    s.sigma[k] = amin * amin;
  }
  return s;
}

void subsystem_residual(const Subsystem& s, const ScalarField& u, std::vector<double>& out) {
  const int nu = static_cast<int>(s.nodes.size());
  out.resize(nu);
#pragma omp parallel for schedule(static)
  for (int k = 0; k < nu; ++k) {
    const Derivs d = compute_derivs<false>(*s.grid, u, s.nodes[k]);
    out[k] = residual_from_derivs(s.par, d);
  }
}

double subsystem_norm(const Subsystem& s, const std::vector<double>& residual) {
  double norm = 0.0;
  for (std::size_t k = 0; k < residual.size(); ++k)
    norm = std::max(norm, std::abs(residual[k]) * s.sigma[k]);
  return norm;
}

constexpr int kRowStride = 16;

void subsystem_jacobian(const Subsystem& s, const ScalarField& u,
                        std::vector<Eigen::Triplet<double>>& trip) {
  const int nu = static_cast<int>(s.nodes.size());
  trip.assign(static_cast<std::size_t>(nu) * kRowStride, Eigen::Triplet<double>(0, 0, 0.0));
#pragma omp parallel for schedule(static)
  for (int k = 0; k < nu; ++k) {
    const Derivs d = compute_derivs<true>(*s.grid, u, s.nodes[k]);
    const double W = d.ux * d.ux + d.uy * d.uy;
    const double dW = rhs_dW(s.par, W);
    const double Fux = 2.0 * d.ux * d.uyy - 2.0 * d.uy * d.uxy - 2.0 * d.ux * dW;
    const double Fuy = 2.0 * d.uy * d.uxx - 2.0 * d.ux * d.uxy - 2.0 * d.uy * dW;
    const double Fxx = 1.0 + d.uy * d.uy;
    const double Fyy = 1.0 + d.ux * d.ux;
    const double Fxy = -2.0 * d.ux * d.uy;
    int slot = k * kRowStride;
    auto emit = [&](const OpStencil& st, double partial) {
      for (int e = 0; e < st.n; ++e) {
        const int col = s.index[st.node[e]];
        if (col >= 0) trip[slot++] = Eigen::Triplet<double>(k, col, partial * st.w[e]);
      }
    };
    emit(d.sx, Fux);
    emit(d.sy, Fuy);
    emit(d.sxx, Fxx);
    emit(d.syy, Fyy);
    emit(d.sxy, Fxy);
  }
}

// Damped Newton on the subsystem; u is updated in place.
int newton_loop(const Subsystem& s, ScalarField& u, const NewtonOptions& opts,
                double* final_norm) {
  const int nu = static_cast<int>(s.nodes.size());
  std::vector<double> residual;
  subsystem_residual(s, u, residual);
  double norm = subsystem_norm(s, residual);

  std::vector<Eigen::Triplet<double>> trip;
  Eigen::SparseMatrix<double> J(nu, nu);
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  std::vector<double> saved(nu);

  int iter = 0;
  for (; iter < opts.max_iters; ++iter) {
    if (norm < opts.tol) {
      if (final_norm) *final_norm = norm;
      return iter;
    }
    subsystem_jacobian(s, u, trip);
    J.setFromTriplets(trip.begin(), trip.end());
    lu.compute(J);
    if (lu.info() != Eigen::Success)
      throw Error(ErrorCode::LinearSolveSingular, "sparse LU factorization failed");
    Eigen::VectorXd rhs(nu);
    for (int k = 0; k < nu; ++k) rhs[k] = -residual[k];
    const Eigen::VectorXd delta = lu.solve(rhs);

    for (int k = 0; k < nu; ++k) saved[k] = u.values[s.nodes[k]];
    double lambda = 1.0;
    bool accepted = false;
    for (int halv = 0; halv <= opts.max_halvings; ++halv) {
      for (int k = 0; k < nu; ++k) u.values[s.nodes[k]] = saved[k] + lambda * delta[k];
      subsystem_residual(s, u, residual);
      const double trial = subsystem_norm(s, residual);
      if (trial < norm) {
        norm = trial;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) {
      for (int k = 0; k < nu; ++k) u.values[s.nodes[k]] = saved[k];
      throw Error(ErrorCode::NewtonStalled, "no residual decrease after " +
                                                std::to_string(opts.max_halvings) + " halvings");
    }
  }
  if (norm < opts.tol) {
    if (final_norm) *final_norm = norm;
    return iter;
  }
  throw Error(ErrorCode::NewtonStalled,
              "iteration limit at residual " + std::to_string(norm));
}

double field_sup(const ScalarField& u) {
  double sup = 0.0;
  for (int node : u.grid->active_nodes()) sup = std::max(sup, std::abs(u.values[node]));
  return sup;
}

double gradient_sup(const ScalarField& u) {
  double sup = 0.0;
  for (int node : u.grid->active_nodes()) {
    const Derivs d = compute_derivs<false>(*u.grid, u, node);
    sup = std::max(sup, std::hypot(d.ux, d.uy));
  }
  return sup;
}

template <bool Parallel>
ScalarField residual_field_impl(const ScalarField& u, const OperatorParams& params) {
  if (!u.grid) throw Error(ErrorCode::MaskMismatch, "field has no grid");
  if (u.values.size() != static_cast<std::size_t>(u.grid->num_nodes()) ||
      u.clip_values.size() != u.grid->clips().size())
    throw Error(ErrorCode::MaskMismatch, "field layout does not match its grid");
  const Grid& g = *u.grid;
  ScalarField out(u.grid);
  const int na = static_cast<int>(g.active_nodes().size());
#pragma omp parallel for schedule(static) if (Parallel)
  for (int k = 0; k < na; ++k) {
    const int node = g.active_nodes()[k];
    const Derivs d = compute_derivs<false>(g, u, node);
    out.values[node] = residual_from_derivs(params, d);
  }
  return out;
}

}  // namespace

ScalarField residual_field(const ScalarField& u, const OperatorParams& params) {
  return residual_field_impl<true>(u, params);
}

ScalarField residual_field_serial(const ScalarField& u, const OperatorParams& params) {
  return residual_field_impl<false>(u, params);
}

ScalarField residual_divergence_form(const ScalarField& u) {
  const Grid& g = *u.grid;
  const double h = g.spacing();
  ScalarField out(u.grid);
  auto at = [&](int i, int j) { return u.values[g.id(i, j)]; };
  for (int node : g.active_nodes()) {
    const int i = g.ix(node), j = g.iy(node);
    bool full = i >= 1 && i + 1 < g.nx() && j >= 1 && j + 1 < g.ny();
    for (int a = -1; full && a <= 1; ++a)
      for (int b = -1; b <= 1; ++b)
        if (!g.active(g.id(i + a, j + b))) {
          full = false;
          break;
        }
    if (!full) continue;
    auto face_flux = [&](int ia, int ja, int ib, int jb, bool xface) {
      // gradient at the face midpoint between nodes a and b
      const double dn = (at(ib, jb) - at(ia, ja)) / h;
      double dt;
      if (xface)
        dt = (at(ia, ja + 1) - at(ia, ja - 1) + at(ib, jb + 1) - at(ib, jb - 1)) / (4 * h);
      else
        dt = (at(ia + 1, ja) - at(ia - 1, ja) + at(ib + 1, jb) - at(ib - 1, jb)) / (4 * h);
      return dn / std::sqrt(1.0 + dn * dn + dt * dt);
    };
    const double div = (face_flux(i, j, i + 1, j, true) - face_flux(i - 1, j, i, j, true) +
                        face_flux(i, j, i, j + 1, false) - face_flux(i, j - 1, i, j, false)) /
                       h;
    const double px = (at(i + 1, j) - at(i - 1, j)) / (2 * h);
    const double py = (at(i, j + 1) - at(i, j - 1)) / (2 * h);
    out.values[node] = div - 1.0 / std::sqrt(1.0 + px * px + py * py);
  }
  return out;
}

ScalarField gradient_magnitude(const ScalarField& u) {
  const Grid& g = *u.grid;
  ScalarField out(u.grid);
  const int na = static_cast<int>(g.active_nodes().size());
#pragma omp parallel for schedule(static)
  for (int k = 0; k < na; ++k) {
    const int node = g.active_nodes()[k];
    const Derivs d = compute_derivs<false>(g, u, node);
    out.values[node] = std::hypot(d.ux, d.uy);
  }
  return out;
}

std::pair<ScalarField, ScalarField> gradient_components(const ScalarField& u) {
  const Grid& g = *u.grid;
  std::pair<ScalarField, ScalarField> out{ScalarField(u.grid), ScalarField(u.grid)};
  const int na = static_cast<int>(g.active_nodes().size());
#pragma omp parallel for schedule(static)
  for (int k = 0; k < na; ++k) {
    const int node = g.active_nodes()[k];
    const Derivs d = compute_derivs<false>(g, u, node);
    out.first.values[node] = d.ux;
    out.second.values[node] = d.uy;
  }
  return out;
}

std::vector<double> jacobian_vector_product(const ScalarField& u, const OperatorParams& params,
                                            const std::vector<double>& v) {
  const Grid& g = *u.grid;
  Subsystem s = make_subsystem(g, params, {});
  std::vector<Eigen::Triplet<double>> trip;
  subsystem_jacobian(s, u, trip);
  std::vector<double> out(s.nodes.size(), 0.0);
  for (const auto& e : trip) out[e.row()] += e.value() * v[e.col()];
  return out;
}

namespace {

std::vector<MatrixEntry> jacobian_entries(const ScalarField& u, const OperatorParams& params,
                                          bool parallel) {
  const Grid& g = *u.grid;
  Subsystem s = make_subsystem(g, params, {});
  std::vector<Eigen::Triplet<double>> trip;
  if (parallel) {
    subsystem_jacobian(s, u, trip);
  } else {
    // serial reference path, same slot layout
    const int nu = static_cast<int>(s.nodes.size());
    trip.assign(static_cast<std::size_t>(nu) * kRowStride, Eigen::Triplet<double>(0, 0, 0.0));
    for (int k = 0; k < nu; ++k) {
      const Derivs d = compute_derivs<true>(g, u, s.nodes[k]);
      const double W = d.ux * d.ux + d.uy * d.uy;
      const double dW = rhs_dW(params, W);
      const double Fux = 2.0 * d.ux * d.uyy - 2.0 * d.uy * d.uxy - 2.0 * d.ux * dW;
      const double Fuy = 2.0 * d.uy * d.uxx - 2.0 * d.ux * d.uxy - 2.0 * d.uy * dW;
      int slot = k * kRowStride;
      auto emit = [&](const OpStencil& st, double partial) {
        for (int e = 0; e < st.n; ++e) {
          const int col = s.index[st.node[e]];
          if (col >= 0) trip[slot++] = Eigen::Triplet<double>(k, col, partial * st.w[e]);
        }
      };
      emit(d.sx, Fux);
      emit(d.sy, Fuy);
      emit(d.sxx, 1.0 + d.uy * d.uy);
      emit(d.syy, 1.0 + d.ux * d.ux);
      emit(d.sxy, -2.0 * d.ux * d.uy);
    }
  }
  std::vector<MatrixEntry> out;
  out.reserve(trip.size());
  for (const auto& e : trip) {
    if (e.row() == 0 && e.col() == 0 && e.value() == 0.0) continue;  // unused slot
    out.push_back({e.row(), e.col(), e.value()});
  }
  return out;
}

}  // namespace

std::vector<MatrixEntry> assemble_jacobian(const ScalarField& u, const OperatorParams& params) {
  return jacobian_entries(u, params, true);
}

std::vector<MatrixEntry> assemble_jacobian_serial(const ScalarField& u,
                                                  const OperatorParams& params) {
  return jacobian_entries(u, params, false);
}

ScalarField harmonic_extension(GridPtr grid, const BoundaryData& phi) {
  const Grid& g = *grid;
  ScalarField u(grid);
  for (int node : g.active_nodes()) u.values[node] = 0.0;
  for (std::size_t c = 0; c < g.clips().size(); ++c) u.clip_values[c] = phi(g.clips()[c].p);

  Subsystem s = make_subsystem(g, OperatorParams::minimal(), {});
  const int nu = static_cast<int>(s.nodes.size());
  std::vector<Eigen::Triplet<double>> trip(static_cast<std::size_t>(nu) * 8,
                                           Eigen::Triplet<double>(0, 0, 0.0));
  std::vector<double> rhs_vec(nu, 0.0);
#pragma omp parallel for schedule(static)
  for (int k = 0; k < nu; ++k) {
    const Derivs d = compute_derivs<true>(g, u, s.nodes[k]);
    rhs_vec[k] = -(d.uxx + d.uyy);  // boundary-data contribution (interior values are 0)
    int slot = k * 8;
    for (int e = 0; e < d.sxx.n; ++e)
      trip[slot++] = Eigen::Triplet<double>(k, s.index[d.sxx.node[e]], d.sxx.w[e]);
    for (int e = 0; e < d.syy.n; ++e)
      trip[slot++] = Eigen::Triplet<double>(k, s.index[d.syy.node[e]], d.syy.w[e]);
  }
  Eigen::SparseMatrix<double> A(nu, nu);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success)
    throw Error(ErrorCode::LinearSolveSingular, "harmonic extension factorization failed");
  Eigen::VectorXd b(nu);
  for (int k = 0; k < nu; ++k) b[k] = rhs_vec[k];
  const Eigen::VectorXd x = lu.solve(b);
  for (int k = 0; k < nu; ++k) u.values[s.nodes[k]] = x[k];
  return u;
}

double convergence_norm(const ScalarField& u, const OperatorParams& params) {
  Subsystem s = make_subsystem(*u.grid, params, {});
  std::vector<double> r;
  subsystem_residual(s, u, r);
  return subsystem_norm(s, r);
}

SolveReport newton_solve_from(ScalarField u0, const OperatorParams& params,
                              const NewtonOptions& opts) {
  Subsystem s = make_subsystem(*u0.grid, params, {});
  SolveReport rep;
  double norm = 0.0;
  const int iters = newton_loop(s, u0, opts, &norm);
  rep.solution = std::move(u0);
  rep.residual = norm;
  rep.converged = true;
  rep.newton_iters.push_back(iters);
  rep.trace.push_back({params.mode == OperatorParams::Mode::Weighted ? params.mu : params.t,
                       field_sup(rep.solution), gradient_sup(rep.solution), iters});
  return rep;
}

SolveReport newton_solve(const BoundaryData& phi, const OperatorParams& params, GridPtr grid,
                         const NewtonOptions& opts) {
  return newton_solve_from(harmonic_extension(std::move(grid), phi), params, opts);
}

int solve_subset(ScalarField& u, const OperatorParams& params, const std::vector<int>& nodes,
                 const NewtonOptions& opts) {
  Subsystem s = make_subsystem(*u.grid, params, nodes);
  return newton_loop(s, u, opts, nullptr);
}

namespace {

// Marches `set_param` from 0 to `target`, warm-starting each Newton solve.
// Steps halve adaptively on stalls, down to (target/steps)/16.
void march_parameter(ScalarField& u, SolveReport& rep, double target, int steps,
                     const std::function<OperatorParams(double)>& make_params,
                     const NewtonOptions& opts, double ordering_slack, int ordering_sign) {
  const Grid& g = *u.grid;
  double cur = 0.0;
  double dt = target / steps;
  const double dt_min = dt / 16.0;
  ScalarField prev = u;
  while (cur < target) {
    double next = std::min(cur + dt, target);
    if (target - next < 0.5 * dt_min) next = target;
    ScalarField trial = u;
    Subsystem s = make_subsystem(g, make_params(next), {});
    try {
      double norm = 0.0;
      const int iters = newton_loop(s, trial, opts, &norm);
      u = std::move(trial);
      cur = next;
      rep.newton_iters.push_back(iters);
      rep.residual = norm;
      rep.trace.push_back({cur, field_sup(u), gradient_sup(u), iters});
      for (int node : g.active_nodes()) {
        if (ordering_sign * (u.values[node] - prev.values[node]) > ordering_slack) {
          rep.ordering_ok = false;
          break;
        }
      }
      prev = u;
    } catch (const Error& err) {
      if (err.code() != ErrorCode::NewtonStalled) throw;
      dt *= 0.5;
      if (dt < dt_min)
        throw Error(ErrorCode::NewtonStalled,
                    "continuation stalled at parameter " + std::to_string(next));
    }
  }
}

}  // namespace

SolveReport continuity_solve(const BoundaryData& phi, GridPtr grid, int steps,
                             const NewtonOptions& opts, double target_t) {
  if (steps < 1) throw Error(ErrorCode::BadParameter, "steps must be at least 1");
  if (!(target_t >= 0 && target_t <= 1))
    throw Error(ErrorCode::BadParameter, "continuation target must lie in [0,1]");
  SolveReport rep;
  ScalarField u = harmonic_extension(grid, phi);
  Subsystem s0 = make_subsystem(*grid, OperatorParams::minimal(), {});
  double norm = 0.0;
  const int it0 = newton_loop(s0, u, opts, &norm);
  rep.newton_iters.push_back(it0);
  rep.residual = norm;
  rep.trace.push_back({0.0, field_sup(u), gradient_sup(u), it0});

  const double h = grid->spacing();
  if (target_t > 0)
    march_parameter(u, rep, target_t, steps,
                    [](double t) { return OperatorParams::translator(t); }, opts,
                    10.0 * h * h, +1);
  rep.solution = std::move(u);
  rep.converged = true;
  return rep;
}

SolveReport mu_solve(const BoundaryData& phi, double mu, const Domain& dom, GridPtr grid,
                     const NewtonOptions& opts) {
  if (mu < 0) throw Error(ErrorCode::BadParameter, "mu must be nonnegative");
  SolveReport rep = continuity_solve(phi, grid, 10, opts);
  if (mu == 0.0) return rep;
  if (dom.kappa_min() < mu)
    rep.warnings.push_back("domain curvature bound kappa_min < mu; solvability not guaranteed");
  ScalarField u = std::move(rep.solution);
  const double h = grid->spacing();
  march_parameter(u, rep, mu, 10, [](double m) { return OperatorParams::weighted(m); }, opts,
                  10.0 * h * h, +1);
  rep.solution = std::move(u);
  return rep;
}

SolveReport serrin_solve(const BoundaryData& phi, double H, double n, GridPtr grid, int steps,
                         const NewtonOptions& opts) {
  if (steps < 1) throw Error(ErrorCode::BadParameter, "steps must be at least 1");
  SolveReport rep;
  ScalarField u = harmonic_extension(grid, phi);
  Subsystem s0 = make_subsystem(*grid, OperatorParams::minimal(), {});
  double norm = 0.0;
  const int it0 = newton_loop(s0, u, opts, &norm);
  rep.newton_iters.push_back(it0);
  rep.trace.push_back({0.0, field_sup(u), gradient_sup(u), it0});
  rep.residual = norm;
  march_parameter(u, rep, 1.0, steps,
                  [H, n](double sc) { return OperatorParams::serrin(sc * H, n); }, opts,
                  std::numeric_limits<double>::infinity(), +1);
  rep.solution = std::move(u);
  rep.converged = true;
  return rep;
}

}  // namespace translab
