#include "translab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "translab/error.hpp"

namespace translab {

namespace {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

void write_field(const ScalarField& field, const std::string& path,
                 const nlohmann::json& report) {
  const Grid& g = *field.grid;
  std::ofstream out = open_out(path);
  out << "x,y,u\n";
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const int node = g.id(i, j);
      if (g.mask(node) == NodeMask::Exterior) continue;
      const double v = field.values[node];
      if (!std::isfinite(v)) throw Error(ErrorCode::IoError, "non-finite field value");
      const Point p = g.coord(i, j);
      out << fmt17(p.x) << ',' << fmt17(p.y) << ',' << fmt17(v) << '\n';
    }
  if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path + "'");
  out.close();

  nlohmann::json side;
  side["grid"] = {{"origin_x", g.origin().x},
                  {"origin_y", g.origin().y},
                  {"spacing", g.spacing()},
                  {"nx", g.nx()},
                  {"ny", g.ny()},
                  {"active_nodes", g.active_nodes().size()}};
  side["report"] = report;
  std::ofstream js = open_out(path + ".json");
  js << side.dump(2) << '\n';
  if (!js) throw Error(ErrorCode::IoError, "write failed for '" + path + ".json'");
}

void write_profile(const RadialProfile& profile, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "r,u,du\n";
  for (std::size_t i = 0; i < profile.size(); ++i) {
    out << fmt17(profile.r[i]) << ',' << fmt17(profile.u[i]) << ',' << fmt17(profile.du[i])
        << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path + "'");
}

void write_grid_csv(const Grid& grid, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "x,y,mask\n";
  for (int j = 0; j < grid.ny(); ++j)
    for (int i = 0; i < grid.nx(); ++i) {
      const Point p = grid.coord(i, j);
      out << fmt17(p.x) << ',' << fmt17(p.y) << ','
          << static_cast<int>(grid.mask(grid.id(i, j))) << '\n';
    }
  if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path + "'");
}

std::vector<std::array<double, 3>> read_xyv_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  std::string line;
  std::getline(in, line);  // header
  std::vector<std::array<double, 3>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::array<double, 3> row{};
    const char* p = line.c_str();
    char* end = nullptr;
    for (int k = 0; k < 3; ++k) {
      row[k] = std::strtod(p, &end);
      if (end == p) throw Error(ErrorCode::IoError, "bad CSV row: " + line);
      p = end;
      if (*p == ',') ++p;
    }
    rows.push_back(row);
  }
  return rows;
}

nlohmann::json solve_report_json(const SolveReport& report) {
  nlohmann::json j;
  j["residual"] = report.residual;
  j["converged"] = report.converged;
  j["ordering_ok"] = report.ordering_ok;
  j["iters"] = report.newton_iters;
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& r : report.trace)
    trace.push_back({{"t", r.t},
                     {"sup_u", r.sup_u},
                     {"sup_du", r.sup_du},
                     {"newton_iters", r.newton_iters}});
  j["trace"] = trace;
  if (!report.warnings.empty()) j["warnings"] = report.warnings;
  return j;
}

nlohmann::json sweep_trace_json(const PerronState& state) {
  nlohmann::json j;
  j["sweeps"] = state.sweeps;
  j["last_sup_change"] = state.last_sup_change;
  j["monotone"] = state.monotone;
  j["sandwiched"] = state.sandwiched;
  j["disks"] = state.schedule.size();
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& r : state.trace)
    trace.push_back({{"sweep", r.sweep}, {"sup_change", r.sup_change}});
  j["trace"] = trace;
  return j;
}

}  // namespace translab
