// Times the node-parallel residual/Jacobian kernels against their serial
// reference implementations on a large disk grid.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>

#include "translab/elliptic.hpp"
#include "translab/geometry.hpp"

using namespace translab;
using Clock = std::chrono::steady_clock;

namespace {

template <typename F>
double time_best_of(int reps, F&& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = Clock::now();
    fn();
    const auto t1 = Clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* env = std::getenv("TRANSLATOR_LAB_THREADS")) {
    const int threads = std::atoi(env);
    if (threads > 0) omp_set_num_threads(threads);
  }
  const int n = argc > 1 ? std::atoi(argv[1]) : 512;
  const int reps = argc > 2 ? std::atoi(argv[2]) : 5;

  GridPtr grid = build_grid(Domain::disk({0, 0}, 1.0), n);
  std::mt19937 rng(0);
  std::uniform_real_distribution<double> U(-0.5, 0.5);
  ScalarField u = sample_field(grid, [&](Point p) {
    return 0.3 * std::sin(2 * p.x) * std::cos(p.y) + 0.05 * U(rng);
  });
  const OperatorParams par = OperatorParams::translator(1.0);
  const double nodes = static_cast<double>(grid->active_nodes().size());

  std::printf("grid n=%d, %d active nodes, %d threads\n", n,
              static_cast<int>(nodes), omp_get_max_threads());

  ScalarField r_serial, r_parallel;
  const double ts = time_best_of(reps, [&] { r_serial = residual_field_serial(u, par); });
  const double tp = time_best_of(reps, [&] { r_parallel = residual_field(u, par); });
  bool identical = true;
  for (int node : grid->active_nodes())
    identical = identical && r_serial.values[node] == r_parallel.values[node];
  std::printf("residual : serial %8.3f ms  parallel %8.3f ms  speedup %5.2fx  (%s, %.1f ns/node)\n",
              ts * 1e3, tp * 1e3, ts / tp, identical ? "bit-identical" : "MISMATCH",
              tp / nodes * 1e9);

  std::vector<MatrixEntry> js, jp;
  const double tjs = time_best_of(reps, [&] { js = assemble_jacobian_serial(u, par); });
  const double tjp = time_best_of(reps, [&] { jp = assemble_jacobian(u, par); });
  bool jid = js.size() == jp.size();
  for (std::size_t k = 0; jid && k < js.size(); ++k)
    jid = js[k].row == jp[k].row && js[k].col == jp[k].col && js[k].value == jp[k].value;
  std::printf("jacobian : serial %8.3f ms  parallel %8.3f ms  speedup %5.2fx  (%s, %.1f ns/node)\n",
              tjs * 1e3, tjp * 1e3, tjs / tjp, jid ? "bit-identical" : "MISMATCH",
              tjp / nodes * 1e9);

  return identical && jid ? 0 : 1;
}
