#ifndef TRANSLAB_IO_HPP
#define TRANSLAB_IO_HPP

#include <array>
#include <string>
#include <vector>

#include "json.hpp"
#include "translab/elliptic.hpp"
#include "translab/geometry.hpp"
#include "translab/perron.hpp"
#include "translab/radial.hpp"

namespace translab {

// CSV "x,y,u" over non-exterior nodes, y-outer row-major, 17 significant
// digits, LF endings. A JSON sidecar at <path>.json carries the grid metadata
// and the given report. Byte-stable for identical inputs.
void write_field(const ScalarField& field, const std::string& path,
                 const nlohmann::json& report = nlohmann::json::object());

// CSV "r,u,du".
void write_profile(const RadialProfile& profile, const std::string& path);

// CSV "x,y,mask" with mask 0 = exterior, 1 = interior, 2 = boundary-adjacent.
void write_grid_csv(const Grid& grid, const std::string& path);

// Rows of a numeric CSV with header, as written by write_field/write_profile.
std::vector<std::array<double, 3>> read_xyv_csv(const std::string& path);

nlohmann::json solve_report_json(const SolveReport& report);
nlohmann::json sweep_trace_json(const PerronState& state);

}  // namespace translab

#endif
