#include "translab/cli.hpp"

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "translab/analysis.hpp"
#include "translab/closed_form.hpp"
#include "translab/error.hpp"
#include "translab/expr.hpp"
#include "translab/io.hpp"

namespace translab {

namespace {

Domain load_domain(const std::string& spec) {
  if (spec.empty()) throw Error(ErrorCode::UsageError, "--domain is required");
  if (spec.find('=') != std::string::npos || spec.find(':') != std::string::npos)
    return make_domain(spec);
  std::ifstream in(spec);
  if (!in) throw Error(ErrorCode::IoError, "cannot open domain file '" + spec + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return make_domain(ss.str());
}

BoundaryData make_boundary_data(const RunConfig& cfg) {
  if (!cfg.phi_file.empty()) {
    auto rows = read_xyv_csv(cfg.phi_file);
    if (rows.empty()) throw Error(ErrorCode::IoError, "empty boundary file");
    return [rows](Point p) {
      double best = rows[0][2], bd = 1e300;
      for (const auto& r : rows) {
        const double d = std::hypot(r[0] - p.x, r[1] - p.y);
        if (d < bd) {
          bd = d;
          best = r[2];
        }
      }
      return best;
    };
  }
  Expr e = parse_expression(cfg.phi_text);
  return [e](Point p) { return e(p.x, p.y); };
}

void require(bool ok, const std::string& flag, const std::string& what) {
  if (!ok) throw Error(ErrorCode::UsageError, flag + ": " + what);
}

void validate(RunConfig& cfg) {
  using Command = RunConfig::Command;
  switch (cfg.command) {
    case Command::Solve:
      require(cfg.n >= 8, "--n", "resolution must be at least 8");
      require(cfg.steps >= 1, "--steps", "need at least one continuation step");
      require(cfg.tol > 0, "--tol", "tolerance must be positive");
      require(cfg.t >= 0 && cfg.t <= 1, "--t", "continuation parameter lies in [0,1]");
      require(cfg.mu >= 0, "--mu", "mu must be nonnegative");
      break;
    case Command::Bowl:
      require(cfg.R > 0, "--R", "radius must be positive");
      require(cfg.step > 0 && cfg.step <= cfg.R / 100.0, "--step", "need 0 < step <= R/100");
      break;
    case Command::Wing:
      require(cfg.r0 > 0, "--r0", "inner radius must be positive");
      require(cfg.R > cfg.r0, "--R", "outer radius must exceed r0");
      require(cfg.step > 0 && cfg.step <= (cfg.R - cfg.r0) / 10.0, "--step",
              "need 0 < step <= (R-r0)/10");
      break;
    case Command::MuRadial:
      require(cfg.mu >= 0, "--mu", "mu must be nonnegative");
      require(cfg.R > 0, "--R", "radius must be positive");
      if (cfg.mu > 0 && cfg.mu <= 0.5)
        require(cfg.R < 1.0 / cfg.mu, "--R", "need R < 1/mu for mu <= 1/2");
      require(cfg.step > 0 && cfg.step <= cfg.R / 100.0, "--step", "need 0 < step <= R/100");
      break;
    case Command::Grim:
      require(std::abs(cfg.theta) < M_PI / 2, "--theta", "tilt lies in (-pi/2, pi/2)");
      require(cfg.sample >= 2, "--sample", "need at least 2 samples per side");
      break;
    case Command::Perron:
      require(cfg.mode == "strip" || cfg.mode == "unbounded", "--mode",
              "mode is strip or unbounded");
      if (cfg.mode == "strip") {
        require(cfg.m > 0 && cfg.m < M_PI / 2, "--m", "half-width lies in (0, pi/2)");
        require(cfg.L > 0, "--L", "truncation must be positive");
      }
      require(cfg.n >= 8, "--n", "resolution must be at least 8");
      require(cfg.tol > 0, "--tol", "tolerance must be positive");
      break;
    case Command::Verify:
    case Command::Flux:
      require(cfg.n >= 8, "--n", "resolution must be at least 8");
      require(cfg.eps > 0, "--eps", "eps must be positive");
      require(cfg.tol > 0, "--tol", "tolerance must be positive");
      break;
  }
}

int run_solve(const RunConfig& cfg) {
  Domain dom = load_domain(cfg.domain_spec);
  GridPtr grid = build_grid(dom, cfg.n);
  BoundaryData phi = make_boundary_data(cfg);
  NewtonOptions opts;
  opts.tol = cfg.tol;
  SolveReport rep;
  if (cfg.serrin)
    rep = serrin_solve(phi, cfg.H, cfg.n_exp, grid, cfg.steps, opts);
  else if (cfg.mu > 0)
    rep = mu_solve(phi, cfg.mu, dom, grid, opts);
  else
    rep = continuity_solve(phi, grid, cfg.steps, opts, cfg.t);
  const std::string out = cfg.out.empty() ? "field.csv" : cfg.out;
  write_field(rep.solution, out, solve_report_json(rep));
  if (!cfg.grid_out.empty()) write_grid_csv(*grid, cfg.grid_out);
  for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "solve: " << grid->active_nodes().size() << " nodes, residual " << rep.residual
            << ", wrote " << out << "\n";
  return 0;
}

int run_profile(const RunConfig& cfg) {
  RadialProfile p;
  std::string name;
  switch (cfg.command) {
    case RunConfig::Command::Bowl:
      p = bowl_profile(cfg.R, cfg.step);
      name = "bowl";
      break;
    case RunConfig::Command::Wing:
      p = winglike_profile(cfg.r0, cfg.R, cfg.step);
      name = "wing";
      break;
    default:
      p = mu_radial_profile(cfg.mu, cfg.R, cfg.step);
      name = "mu-radial";
      break;
  }
  const std::string out = cfg.out.empty() ? "profile.csv" : cfg.out;
  write_profile(p, out);
  std::cout << name << ": " << p.size() << " samples, u(R) = " << p.u.back() << ", wrote "
            << out << "\n";
  return 0;
}

int run_grim(const RunConfig& cfg) {
  GrimReaper g(cfg.theta, cfg.offset);
  const double guard = 1e-6;
  double ylo = cfg.ymin, yhi = cfg.ymax;
  if (ylo == 0.0 && yhi == 0.0) {
    yhi = g.max_half_width() - guard;
    ylo = -yhi;
  }
  require(yhi > ylo, "--ymax", "need ymax > ymin");
  require(std::max(std::abs(ylo), std::abs(yhi)) < g.max_half_width(), "--ymax",
          "sampling box leaves the maximal strip");
  const std::string out = cfg.out.empty() ? "grim.csv" : cfg.out;
  std::ofstream os(out, std::ios::binary);
  if (!os) throw Error(ErrorCode::IoError, "cannot open '" + out + "'");
  os << "x,y,w,residual\n";
  char buf[160];
  for (int j = 0; j < cfg.sample; ++j)
    for (int i = 0; i < cfg.sample; ++i) {
      const double x = cfg.xmin + (cfg.xmax - cfg.xmin) * i / (cfg.sample - 1);
      const double y = ylo + (yhi - ylo) * j / (cfg.sample - 1);
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", x, y, g.eval({x, y}),
                    g.residual({x, y}));
      os << buf;
    }
  std::cout << "grim: wrote " << cfg.sample * cfg.sample << " samples to " << out << "\n";
  return 0;
}

int run_perron(const RunConfig& cfg) {
  PerronState st;
  GridPtr grid;
  if (cfg.mode == "strip") {
    Expr f = parse_expression(cfg.f_text);
    grid = build_grid(Domain::strip(cfg.m, cfg.L), cfg.n);
    st = perron_strip([f](double x) { return f(x, 0.0); }, cfg.m, cfg.L, grid, cfg.tol);
  } else {
    Domain dom = load_domain(cfg.domain_spec);
    grid = build_grid(dom, cfg.n);
    st = perron_unbounded(dom, grid, cfg.tol);
  }
  const std::string out = cfg.out.empty() ? "v.csv" : cfg.out;
  write_field(st.iterate, out, sweep_trace_json(st));
  std::cout << "perron: " << st.sweeps << " sweeps, last sup-change " << st.last_sup_change
            << ", wrote " << out << "\n";
  return 0;
}

int run_verify(const RunConfig& cfg) {
  Domain dom = load_domain(cfg.domain_spec);
  GridPtr grid = build_grid(dom, cfg.n);
  BoundaryData phi = make_boundary_data(cfg);
  NewtonOptions opts;
  opts.tol = cfg.tol;
  SolveReport rep = continuity_solve(phi, grid, cfg.steps, opts);

  std::vector<CheckReport> checks;
  {
    // comparison against a seeded, pointwise-larger boundary perturbation
    std::mt19937 rng(cfg.seed);
    std::uniform_real_distribution<double> U(0.1, 0.5);
    const double amp = U(rng), freq = 1.0 + U(rng);
    BoundaryData phi2 = [phi, amp, freq](Point p) {
      return phi(p) + amp * (1.2 + std::sin(freq * p.x + 0.6 * p.y));
    };
    SolveReport rep2 = continuity_solve(phi2, grid, cfg.steps, opts);
    checks.push_back(check_comparison(rep.solution, rep2.solution));
  }
  checks.push_back(check_height_estimate(rep, dom));
  checks.push_back(check_gradient_location(rep));
  {
    CheckReport barrier;
    barrier.name = "boundary-barrier";
    try {
      BarrierSpec spec = build_barrier(rep, dom, phi, cfg.eps);
      ScalarField grad = gradient_magnitude(rep.solution);
      double observed = 0.0;
      for (int node : grid->active_nodes())
        if (grid->mask(node) == NodeMask::BoundaryAdjacent)
          observed = std::max(observed, grad.values[node]);
      barrier.pass = spec.certified() && spec.C2 >= observed;
      barrier.margin = spec.C2 - observed;
      std::ostringstream os;
      os << "b " << spec.b << ", C2 " << spec.C2 << ", observed boundary |Du| " << observed;
      barrier.details = os.str();
    } catch (const Error& err) {
      barrier.pass = false;
      barrier.details = err.what();
    }
    checks.push_back(barrier);
  }
  {
    FluxReport flux = check_flux_identity(rep.solution, dom);
    CheckReport c;
    c.name = "flux-identity";
    c.pass = flux.pass;
    c.margin = 5.0 * grid->spacing() - flux.rel_mismatch;
    std::ostringstream os;
    os << "flux " << flux.boundary_flux << ", area " << flux.weighted_area << ", mismatch "
       << flux.rel_mismatch;
    c.details = os.str();
    checks.push_back(c);
  }

  nlohmann::json out;
  out["domain"] = cfg.domain_spec;
  out["n"] = cfg.n;
  bool all_pass = true;
  nlohmann::json items = nlohmann::json::array();
  for (const auto& c : checks) {
    items.push_back(
        {{"name", c.name}, {"pass", c.pass}, {"margin", c.margin}, {"details", c.details}});
    all_pass = all_pass && c.pass;
  }
  out["checks"] = items;
  out["all_pass"] = all_pass;
  const std::string text = out.dump(2) + "\n";
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream os(cfg.out, std::ios::binary);
    os << text;
  }
  return all_pass ? 0 : 4;
}

int run_flux(const RunConfig& cfg) {
  Domain dom = load_domain(cfg.domain_spec);
  GridPtr grid = build_grid(dom, cfg.n);
  BoundaryData phi = make_boundary_data(cfg);
  NewtonOptions opts;
  opts.tol = cfg.tol;
  SolveReport rep = continuity_solve(phi, grid, cfg.steps, opts);
  FluxReport flux = check_flux_identity(rep.solution, dom);
  nlohmann::json out;
  out["boundary_flux"] = flux.boundary_flux;
  out["weighted_area"] = flux.weighted_area;
  out["rel_mismatch"] = flux.rel_mismatch;
  out["pass"] = flux.pass;
  std::cout << out.dump(2) << "\n";
  return flux.pass ? 0 : 4;
}

}  // namespace

ParsedArgs parse_args(const std::vector<std::string>& argv) {
  RunConfig cfg;
  CLI::App app{"numerical laboratory for the translating-soliton equation"};
  app.require_subcommand(1);

  auto add_domain = [&](CLI::App* sub) {
    sub->add_option("--domain", cfg.domain_spec,
                    "domain: inline (disk:1.0, strip:1:3, square:2, halfstrip:1:3, "
                    "polygon:x1,y1;...) or a key=value file");
  };
  auto add_phi = [&](CLI::App* sub) {
    sub->add_option("--phi", cfg.phi_text, "boundary data expression over x,y");
    sub->add_option("--phi-file", cfg.phi_file, "boundary data CSV (x,y,u)");
  };

  CLI::App* solve = app.add_subcommand("solve", "Dirichlet solve by damped Newton/continuity");
  add_domain(solve);
  add_phi(solve);
  solve->add_option("--t", cfg.t, "continuation target in [0,1] (0 = minimal surface)");
  solve->add_option("--mu", cfg.mu, "weighted-curvature offset");
  auto* nexp =
      solve->add_option("--nexp", cfg.n_exp, "Serrin-mode exponent (experiment mode)");
  solve->add_option("--H", cfg.H, "Serrin-mode coefficient")->needs(nexp);
  solve->add_option("--n", cfg.n, "grid resolution");
  solve->add_option("--steps", cfg.steps, "continuation steps");
  solve->add_option("--tol", cfg.tol, "residual tolerance");
  solve->add_option("--out", cfg.out, "output CSV path");
  solve->add_option("--grid-out", cfg.grid_out, "grid mask CSV path");

  CLI::App* bowl = app.add_subcommand("bowl", "bowl-soliton radial profile");
  bowl->add_option("--R", cfg.R, "outer radius");
  bowl->add_option("--step", cfg.step, "integration step");
  bowl->add_option("--out", cfg.out, "output CSV path");

  CLI::App* wing = app.add_subcommand("wing", "winglike radial profile");
  wing->add_option("--r0", cfg.r0, "inner radius");
  wing->add_option("--R", cfg.R, "outer radius");
  wing->add_option("--step", cfg.step, "integration step");
  wing->add_option("--out", cfg.out, "output CSV path");

  CLI::App* mur = app.add_subcommand("mu-radial", "weighted-curvature radial profile");
  mur->add_option("--mu", cfg.mu, "curvature offset");
  mur->add_option("--R", cfg.R, "outer radius");
  mur->add_option("--step", cfg.step, "integration step");
  mur->add_option("--out", cfg.out, "output CSV path");

  CLI::App* grim = app.add_subcommand("grim", "sample a grim reaper and its residual");
  grim->add_option("--theta", cfg.theta, "tilt in (-pi/2, pi/2)");
  grim->add_option("--a", cfg.offset, "vertical offset");
  grim->add_option("--xmin", cfg.xmin, "sample box");
  grim->add_option("--xmax", cfg.xmax, "sample box");
  grim->add_option("--ymin", cfg.ymin, "sample box (default: maximal strip)");
  grim->add_option("--ymax", cfg.ymax, "sample box (default: maximal strip)");
  grim->add_option("--sample", cfg.sample, "samples per side");
  grim->add_option("--out", cfg.out, "output CSV path");

  CLI::App* perron = app.add_subcommand("perron", "Perron disk-lift sweeps");
  perron->add_option("--mode", cfg.mode, "strip | unbounded");
  perron->add_option("--m", cfg.m, "strip half-width");
  perron->add_option("--f", cfg.f_text, "convex boundary function of x (strip mode)");
  perron->add_option("--L", cfg.L, "truncation length");
  add_domain(perron);
  perron->add_option("--n", cfg.n, "grid resolution");
  auto* perron_tol = perron->add_option("--tol", cfg.tol, "sweep sup-change tolerance");
  perron->add_option("--out", cfg.out, "output CSV path");

  CLI::App* verify = app.add_subcommand("verify", "certification suite on one solve");
  add_domain(verify);
  add_phi(verify);
  verify->add_option("--suite", cfg.suite, "which checks (all)");
  verify->add_option("--n", cfg.n, "grid resolution");
  verify->add_option("--steps", cfg.steps, "continuation steps");
  verify->add_option("--tol", cfg.tol, "residual tolerance");
  verify->add_option("--eps", cfg.eps, "barrier band width");
  verify->add_option("--seed", cfg.seed, "sampling seed");
  verify->add_option("--out", cfg.out, "JSON report path (default stdout)");

  CLI::App* flux = app.add_subcommand("flux", "flux identity check on one solve");
  add_domain(flux);
  add_phi(flux);
  flux->add_option("--n", cfg.n, "grid resolution");
  flux->add_option("--steps", cfg.steps, "continuation steps");
  flux->add_option("--tol", cfg.tol, "residual tolerance");

  std::vector<const char*> cargv;
  cargv.push_back("translab");
  for (const auto& a : argv) cargv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::CallForHelp&) {
    ParsedArgs out;
    for (CLI::App* sub : {solve, bowl, wing, mur, grim, perron, verify, flux})
      if (sub->parsed()) {
        out.help_text = sub->help();
        return out;
      }
    out.help_text = app.help("", CLI::AppFormatMode::All);
    return out;
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorCode::UsageError, e.get_name() + std::string(": ") + e.what());
  }

  if (solve->parsed()) {
    cfg.command = RunConfig::Command::Solve;
    cfg.serrin = nexp->count() > 0;
  } else if (bowl->parsed()) {
    cfg.command = RunConfig::Command::Bowl;
  } else if (wing->parsed()) {
    cfg.command = RunConfig::Command::Wing;
  } else if (mur->parsed()) {
    cfg.command = RunConfig::Command::MuRadial;
  } else if (grim->parsed()) {
    cfg.command = RunConfig::Command::Grim;
  } else if (perron->parsed()) {
    cfg.command = RunConfig::Command::Perron;
    if (perron_tol->count() == 0) cfg.tol = 1e-8;
  } else if (verify->parsed()) {
    cfg.command = RunConfig::Command::Verify;
  } else if (flux->parsed()) {
    cfg.command = RunConfig::Command::Flux;
  }

  validate(cfg);
  ParsedArgs out;
  out.config = cfg;
  return out;
}

int run_config(const RunConfig& config) {
  switch (config.command) {
    case RunConfig::Command::Solve: return run_solve(config);
    case RunConfig::Command::Bowl:
    case RunConfig::Command::Wing:
    case RunConfig::Command::MuRadial: return run_profile(config);
    case RunConfig::Command::Grim: return run_grim(config);
    case RunConfig::Command::Perron: return run_perron(config);
    case RunConfig::Command::Verify: return run_verify(config);
    case RunConfig::Command::Flux: return run_flux(config);
  }
  return 0;
}

int cli_main(int argc, char** argv) {
  if (const char* env = std::getenv("TRANSLATOR_LAB_THREADS")) {
    const int threads = std::atoi(env);
    if (threads > 0) omp_set_num_threads(threads);
  }
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    ParsedArgs parsed = parse_args(args);
    if (!parsed.config) {
      std::cout << parsed.help_text;
      return 0;
    }
    return run_config(*parsed.config);
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return err.code() == ErrorCode::UsageError || err.code() == ErrorCode::ParseError ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace translab
