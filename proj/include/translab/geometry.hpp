#ifndef TRANSLAB_GEOMETRY_HPP
#define TRANSLAB_GEOMETRY_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace translab {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double dist(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

enum class DomainKind { Disk, Strip, ConvexPolygon, TruncatedConvex };

// Planar domain with a signed distance function to its boundary
// (positive inside) and an inward boundary curvature evaluator.
// Unbounded kinds (Strip, TruncatedConvex) carry a truncation length that
// bounds the grid box; the truncation lines are not part of the boundary.
class Domain {
public:
  static Domain disk(Point center, double radius);
  static Domain strip(double half_width, double truncation);
  static Domain convex_polygon(std::vector<Point> vertices);
  // {x > cap_x} ∩ {|y| < half_width}, truncated for grids at x = cap_x + truncation.
  static Domain half_strip(double half_width, double cap_x, double truncation);

  DomainKind kind() const { return kind_; }

  // Distance to the true boundary, positive inside, 1-Lipschitz.
  double signed_distance(Point p) const;
  // Nearest boundary point (ties broken deterministically).
  Point project_to_boundary(Point p) const;
  // Inward curvature at a boundary point; 0 on straight edges.
  double curvature(Point boundary_point) const;
  bool is_corner(Point boundary_point, double tol) const;
  double kappa_min() const;

  // Grid bounding box (closed). Includes truncation for unbounded kinds.
  Point bbox_min() const { return bb_min_; }
  Point bbox_max() const { return bb_max_; }
  // True when the bbox edge is a truncation line rather than domain boundary.
  bool artificial_min_x() const { return artificial_min_x_; }
  bool artificial_max_x() const { return artificial_max_x_; }

  // Radius (and center) of a disk enclosing the grid box.
  double enclosing_radius(Point* center = nullptr) const;

  // Sampled boundary points for quadrature/inspection, counterclockwise.
  // For truncated kinds only the true boundary inside the box is emitted.
  struct BoundarySample {
    Point p;
    Point outward_normal;
    double ds;  // arc-length weight
  };
  std::vector<BoundarySample> sample_boundary(int per_side) const;

  double disk_radius() const { return radius_; }
  Point disk_center() const { return center_; }
  double strip_half_width() const { return m_; }
  double truncation() const { return L_; }
  double cap_x() const { return cap_x_; }
  const std::vector<Point>& vertices() const { return verts_; }

private:
  Domain() = default;

  DomainKind kind_ = DomainKind::Disk;
  Point center_{};
  double radius_ = 0.0;
  double m_ = 0.0;      // strip half width
  double L_ = 0.0;      // truncation length
  double cap_x_ = 0.0;  // half-strip cap position
  std::vector<Point> verts_;          // convex polygon, counterclockwise
  std::vector<Point> edge_normals_;   // inward unit normals per edge
  Point bb_min_{}, bb_max_{};
  bool artificial_min_x_ = false;
  bool artificial_max_x_ = false;
};

// Parse a key=value text block ("kind=disk radius=1.0") or the inline
// shorthand ("disk:1.0", "strip:1:3", "square:2", "halfstrip:1:3").
Domain make_domain(const std::string& spec);

enum class NodeMask : std::uint8_t { Exterior = 0, Interior = 1, BoundaryAdjacent = 2 };

// Uniform structured grid over a domain's bounding box. Active nodes
// (Interior or BoundaryAdjacent) carry four arms; an arm either points at
// an active neighbor or is clipped at the boundary with a Shortley-Weller
// fraction alpha in (0,1].
class Grid {
public:
  struct Arm {
    double alpha = 1.0;
    int neighbor = -1;  // node id when >= 0
    int clip = -1;      // index into clips() when neighbor < 0
  };
  struct ClipPoint {
    Point p;
    int node = -1;  // owning node id
    int dir = -1;   // 0:+x 1:-x 2:+y 3:-y
    double alpha = 1.0;
    bool artificial = false;  // lies on a truncation line
  };

  Point origin() const { return origin_; }
  double spacing() const { return h_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int num_nodes() const { return nx_ * ny_; }

  int id(int i, int j) const { return j * nx_ + i; }
  int ix(int node) const { return node % nx_; }
  int iy(int node) const { return node / nx_; }
  Point coord(int i, int j) const { return {origin_.x + i * h_, origin_.y + j * h_}; }
  Point coord(int node) const { return coord(ix(node), iy(node)); }

  NodeMask mask(int node) const { return mask_[node]; }
  bool active(int node) const { return mask_[node] != NodeMask::Exterior; }
  const std::array<Arm, 4>& arms(int node) const { return arms_[node]; }

  const std::vector<ClipPoint>& clips() const { return clips_; }
  const std::vector<int>& active_nodes() const { return active_nodes_; }
  // Dense map node id -> index into active_nodes(), or -1.
  int active_index(int node) const { return active_index_[node]; }

  int num_interior() const { return num_interior_; }

  friend Grid build_grid_impl(const Domain& dom, int n);

private:
  Point origin_{};
  double h_ = 0.0;
  int nx_ = 0, ny_ = 0;
  std::vector<NodeMask> mask_;
  std::vector<std::array<Arm, 4>> arms_;
  std::vector<ClipPoint> clips_;
  std::vector<int> active_nodes_;
  std::vector<int> active_index_;
  int num_interior_ = 0;
};

using GridPtr = std::shared_ptr<const Grid>;

// n is the number of cells along the longest bbox side; spacing is uniform
// in x and y. Throws BadParameter (n < 8) or ResolutionTooCoarse.
GridPtr build_grid(const Domain& dom, int n);

// Node values on a grid plus boundary values at the grid's clip points.
struct ScalarField {
  GridPtr grid;
  std::vector<double> values;       // nx*ny, NaN at exterior nodes
  std::vector<double> clip_values;  // aligned with grid->clips()

  ScalarField() = default;
  explicit ScalarField(GridPtr g);

  double& at(int node) { return values[node]; }
  double at(int node) const { return values[node]; }
};

// Convenience: fill a field (and its clip values) from a function of (x,y).
ScalarField sample_field(GridPtr grid, const std::function<double(Point)>& f);

}  // namespace translab

#endif
