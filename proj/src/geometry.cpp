#include "translab/geometry.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <functional>
#include <limits>
#include <sstream>

#include "translab/error.hpp"

namespace translab {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::BadParameter: return "BadParameter";
    case ErrorCode::NonConvex: return "NonConvex";
    case ErrorCode::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::NotContracting: return "NotContracting";
    case ErrorCode::InverseDomain: return "InverseDomain";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::BlowUp: return "BlowUp";
    case ErrorCode::MaskMismatch: return "MaskMismatch";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::NewtonStalled: return "NewtonStalled";
    case ErrorCode::LinearSolveSingular: return "LinearSolveSingular";
    case ErrorCode::NotConvexData: return "NotConvex";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotInStrip: return "NotInStrip";
    case ErrorCode::SubSolveFailed: return "SubSolveFailed";
    case ErrorCode::NoBarrierFound: return "NoBarrierFound";
    case ErrorCode::UsageError: return "UsageError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Error";
}

namespace {

double cross(Point o, Point a, Point b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double point_segment_distance(Point p, Point a, Point b, Point* nearest = nullptr) {
  const double vx = b.x - a.x, vy = b.y - a.y;
  const double len2 = vx * vx + vy * vy;
  double t = len2 > 0 ? ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  Point q{a.x + t * vx, a.y + t * vy};
  if (nearest) *nearest = q;
  return dist(p, q);
}

}  // namespace

Domain Domain::disk(Point center, double radius) {
  if (!(radius > 0)) throw Error(ErrorCode::BadParameter, "disk radius must be positive");
  Domain d;
  d.kind_ = DomainKind::Disk;
  d.center_ = center;
  d.radius_ = radius;
  d.bb_min_ = {center.x - radius, center.y - radius};
  d.bb_max_ = {center.x + radius, center.y + radius};
  return d;
}

Domain Domain::strip(double half_width, double truncation) {
  if (!(half_width > 0)) throw Error(ErrorCode::BadParameter, "strip half-width must be positive");
  if (!(truncation > 0)) throw Error(ErrorCode::BadParameter, "strip truncation must be positive");
  Domain d;
  d.kind_ = DomainKind::Strip;
  d.m_ = half_width;
  d.L_ = truncation;
  d.bb_min_ = {-truncation, -half_width};
  d.bb_max_ = {truncation, half_width};
  d.artificial_min_x_ = true;
  d.artificial_max_x_ = true;
  return d;
}

Domain Domain::convex_polygon(std::vector<Point> vertices) {
  if (vertices.size() < 3) throw Error(ErrorCode::NonConvex, "need at least 3 vertices");
  // Orient counterclockwise.
  double area2 = 0.0;
  const size_t n = vertices.size();
  for (size_t i = 0; i < n; ++i) {
    const Point& a = vertices[i];
    const Point& b = vertices[(i + 1) % n];
    area2 += a.x * b.y - b.x * a.y;
  }
  if (std::abs(area2) < 1e-30) throw Error(ErrorCode::NonConvex, "degenerate polygon");
  if (area2 < 0) std::reverse(vertices.begin(), vertices.end());

  double scale = 0.0;
  for (const Point& v : vertices) scale = std::max({scale, std::abs(v.x), std::abs(v.y)});
  for (size_t i = 0; i < n; ++i) {
    const Point& a = vertices[i];
    const Point& b = vertices[(i + 1) % n];
    const Point& c = vertices[(i + 2) % n];
    if (cross(a, b, c) < -1e-12 * scale * scale)
      throw Error(ErrorCode::NonConvex, "vertices are not in convex position");
    if (dist(a, b) < 1e-14 * scale) throw Error(ErrorCode::NonConvex, "repeated vertex");
  }

  Domain d;
  d.kind_ = DomainKind::ConvexPolygon;
  d.verts_ = std::move(vertices);
  d.bb_min_ = {std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
  d.bb_max_ = {std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
  for (const Point& v : d.verts_) {
    d.bb_min_.x = std::min(d.bb_min_.x, v.x);
    d.bb_min_.y = std::min(d.bb_min_.y, v.y);
    d.bb_max_.x = std::max(d.bb_max_.x, v.x);
    d.bb_max_.y = std::max(d.bb_max_.y, v.y);
  }
  d.edge_normals_.resize(n);
  for (size_t i = 0; i < n; ++i) {
    const Point& a = d.verts_[i];
    const Point& b = d.verts_[(i + 1) % n];
    const double len = dist(a, b);
    // inward normal of a counterclockwise edge
    d.edge_normals_[i] = {-(b.y - a.y) / len, (b.x - a.x) / len};
  }
  return d;
}

Domain Domain::half_strip(double half_width, double cap_x, double truncation) {
  if (!(half_width > 0)) throw Error(ErrorCode::BadParameter, "half-strip width must be positive");
  if (!(truncation > 0)) throw Error(ErrorCode::BadParameter, "truncation must be positive");
  Domain d;
  d.kind_ = DomainKind::TruncatedConvex;
  d.m_ = half_width;
  d.cap_x_ = cap_x;
  d.L_ = truncation;
  d.bb_min_ = {cap_x, -half_width};
  d.bb_max_ = {cap_x + truncation, half_width};
  d.artificial_max_x_ = true;
  return d;
}

double Domain::signed_distance(Point p) const {
  switch (kind_) {
    case DomainKind::Disk:
      return radius_ - dist(p, center_);
    case DomainKind::Strip:
      return m_ - std::abs(p.y);
    case DomainKind::ConvexPolygon: {
      const size_t n = verts_.size();
      double inside = std::numeric_limits<double>::max();
      bool is_inside = true;
      for (size_t i = 0; i < n; ++i) {
        const double s = edge_normals_[i].x * (p.x - verts_[i].x) +
                         edge_normals_[i].y * (p.y - verts_[i].y);
        inside = std::min(inside, s);
        if (s < 0) is_inside = false;
      }
      if (is_inside) return inside;
      double best = std::numeric_limits<double>::max();
      for (size_t i = 0; i < n; ++i)
        best = std::min(best, point_segment_distance(p, verts_[i], verts_[(i + 1) % n]));
      return -best;
    }
    case DomainKind::TruncatedConvex: {
      const double dx = p.x - cap_x_;
      const double dy = m_ - std::abs(p.y);
      if (dx >= 0 && dy >= 0) return std::min(dx, dy);
      if (dx >= 0) return dy;  // beside the strip, outside laterally
      if (dy >= 0) return dx;  // behind the cap
      return -std::hypot(dx, std::abs(p.y) - m_);  // behind a cap corner
    }
  }
  return 0.0;
}

Point Domain::project_to_boundary(Point p) const {
  switch (kind_) {
    case DomainKind::Disk: {
      const double r = dist(p, center_);
      if (r < 1e-300) return {center_.x + radius_, center_.y};
      return {center_.x + (p.x - center_.x) * radius_ / r,
              center_.y + (p.y - center_.y) * radius_ / r};
    }
    case DomainKind::Strip:
      return {p.x, p.y >= 0 ? m_ : -m_};
    case DomainKind::ConvexPolygon: {
      Point best{};
      double bestd = std::numeric_limits<double>::max();
      const size_t n = verts_.size();
      for (size_t i = 0; i < n; ++i) {
        Point q;
        const double dd = point_segment_distance(p, verts_[i], verts_[(i + 1) % n], &q);
        if (dd < bestd) {
          bestd = dd;
          best = q;
        }
      }
      return best;
    }
    case DomainKind::TruncatedConvex: {
      const double dx = p.x - cap_x_;
      const double dy = m_ - std::abs(p.y);
      if (dx >= 0 && dy >= 0) {
        if (dx < dy) return {cap_x_, std::clamp(p.y, -m_, m_)};
        return {p.x, p.y >= 0 ? m_ : -m_};
      }
      if (dx < 0 && dy >= 0) return {cap_x_, std::clamp(p.y, -m_, m_)};
      if (dx >= 0) return {p.x, p.y >= 0 ? m_ : -m_};
      return {cap_x_, p.y >= 0 ? m_ : -m_};  // nearest cap corner
    }
  }
  return p;
}

double Domain::curvature(Point) const {
  switch (kind_) {
    case DomainKind::Disk: return 1.0 / radius_;
    default: return 0.0;
  }
}

bool Domain::is_corner(Point boundary_point, double tol) const {
  switch (kind_) {
    case DomainKind::ConvexPolygon:
      for (const Point& v : verts_)
        if (dist(boundary_point, v) <= tol) return true;
      return false;
    case DomainKind::TruncatedConvex:
      return dist(boundary_point, {cap_x_, m_}) <= tol ||
             dist(boundary_point, {cap_x_, -m_}) <= tol;
    default:
      return false;
  }
}

double Domain::kappa_min() const {
  return kind_ == DomainKind::Disk ? 1.0 / radius_ : 0.0;
}

double Domain::enclosing_radius(Point* center) const {
  if (kind_ == DomainKind::Disk) {
    if (center) *center = center_;
    return radius_;
  }
  Point c{0.5 * (bb_min_.x + bb_max_.x), 0.5 * (bb_min_.y + bb_max_.y)};
  if (center) *center = c;
  if (kind_ == DomainKind::ConvexPolygon) {
    double r = 0.0;
    for (const Point& v : verts_) r = std::max(r, dist(c, v));
    return r;
  }
  return dist(c, bb_max_);
}

std::vector<Domain::BoundarySample> Domain::sample_boundary(int per_side) const {
  std::vector<BoundarySample> out;
  auto emit_segment = [&out, per_side](Point a, Point b, Point outward) {
    const double len = dist(a, b);
    const double ds = len / per_side;
    for (int k = 0; k < per_side; ++k) {
      const double t = (k + 0.5) / per_side;
      out.push_back({{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)}, outward, ds});
    }
  };
  switch (kind_) {
    case DomainKind::Disk: {
      const int nsamp = 4 * per_side;
      const double ds = 2.0 * M_PI * radius_ / nsamp;
      for (int k = 0; k < nsamp; ++k) {
        const double th = 2.0 * M_PI * (k + 0.5) / nsamp;
        const Point nrm{std::cos(th), std::sin(th)};
        out.push_back({{center_.x + radius_ * nrm.x, center_.y + radius_ * nrm.y}, nrm, ds});
      }
      break;
    }
    case DomainKind::Strip:
      emit_segment({-L_, m_}, {L_, m_}, {0, 1});
      emit_segment({-L_, -m_}, {L_, -m_}, {0, -1});
      // truncation ends, used by boundary-flux quadrature over the grid box
      emit_segment({L_, -m_}, {L_, m_}, {1, 0});
      emit_segment({-L_, -m_}, {-L_, m_}, {-1, 0});
      break;
    case DomainKind::ConvexPolygon: {
      const size_t n = verts_.size();
      for (size_t i = 0; i < n; ++i) {
        const Point inw = edge_normals_[i];
        emit_segment(verts_[i], verts_[(i + 1) % n], {-inw.x, -inw.y});
      }
      break;
    }
    case DomainKind::TruncatedConvex:
      emit_segment({cap_x_, -m_}, {cap_x_, m_}, {-1, 0});
      emit_segment({cap_x_, m_}, {cap_x_ + L_, m_}, {0, 1});
      emit_segment({cap_x_, -m_}, {cap_x_ + L_, -m_}, {0, -1});
      emit_segment({cap_x_ + L_, -m_}, {cap_x_ + L_, m_}, {1, 0});
      break;
  }
  return out;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);
  return parts;
}

double parse_num(const std::string& s, const char* what) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::BadParameter, std::string(what) + ": bad number '" + s + "'");
  }
}

std::vector<Point> parse_vertices(const std::string& s) {
  std::vector<Point> verts;
  for (const std::string& pair : split(s, ';')) {
    if (pair.empty()) continue;
    const auto xy = split(pair, ',');
    if (xy.size() != 2) throw Error(ErrorCode::BadParameter, "vertex needs x,y: '" + pair + "'");
    verts.push_back({parse_num(xy[0], "vertex x"), parse_num(xy[1], "vertex y")});
  }
  return verts;
}

}  // namespace

Domain make_domain(const std::string& spec) {
  // Inline shorthand: kind:arg1:arg2...
  const auto colon = spec.find(':');
  if (colon != std::string::npos && spec.find('=') == std::string::npos) {
    const std::string kind = spec.substr(0, colon);
    const auto args = split(spec.substr(colon + 1), ':');
    if (kind == "disk") {
      const double r = parse_num(args[0], "disk radius");
      Point c{};
      if (args.size() >= 3) c = {parse_num(args[1], "cx"), parse_num(args[2], "cy")};
      return Domain::disk(c, r);
    }
    if (kind == "strip") {
      if (args.size() < 2) throw Error(ErrorCode::BadParameter, "strip:m:L");
      return Domain::strip(parse_num(args[0], "m"), parse_num(args[1], "L"));
    }
    if (kind == "square") {
      const double s = parse_num(args[0], "side");
      if (!(s > 0)) throw Error(ErrorCode::BadParameter, "square side must be positive");
      const double a = s / 2;
      return Domain::convex_polygon({{-a, -a}, {a, -a}, {a, a}, {-a, a}});
    }
    if (kind == "halfstrip") {
      if (args.size() < 2) throw Error(ErrorCode::BadParameter, "halfstrip:m:L[:x0]");
      const double x0 = args.size() >= 3 ? parse_num(args[2], "x0") : 0.0;
      return Domain::half_strip(parse_num(args[0], "m"), x0, parse_num(args[1], "L"));
    }
    if (kind == "polygon") return Domain::convex_polygon(parse_vertices(args[0]));
    throw Error(ErrorCode::BadParameter, "unknown domain kind '" + kind + "'");
  }

  // key=value block
  std::istringstream iss(spec);
  std::string tok, kind;
  std::vector<std::pair<std::string, std::string>> kv;
  while (iss >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::BadParameter, "expected key=value, got '" + tok + "'");
    kv.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
    if (kv.back().first == "kind") kind = kv.back().second;
  }
  auto get = [&kv](const std::string& key, const char* dflt = nullptr) -> std::string {
    for (const auto& [k, v] : kv)
      if (k == key) return v;
    if (dflt) return dflt;
    throw Error(ErrorCode::BadParameter, "missing parameter '" + key + "'");
  };
  if (kind == "disk")
    return Domain::disk({parse_num(get("cx", "0"), "cx"), parse_num(get("cy", "0"), "cy")},
                        parse_num(get("radius"), "radius"));
  if (kind == "strip")
    return Domain::strip(parse_num(get("m"), "m"), parse_num(get("L"), "L"));
  if (kind == "polygon") return Domain::convex_polygon(parse_vertices(get("vertices")));
  if (kind == "square") {
    const double a = parse_num(get("side"), "side") / 2;
    if (!(a > 0)) throw Error(ErrorCode::BadParameter, "square side must be positive");
    return Domain::convex_polygon({{-a, -a}, {a, -a}, {a, a}, {-a, a}});
  }
  if (kind == "halfstrip")
    return Domain::half_strip(parse_num(get("m"), "m"), parse_num(get("x0", "0"), "x0"),
                              parse_num(get("L"), "L"));
  throw Error(ErrorCode::BadParameter, "unknown domain kind '" + kind + "'");
}

Grid build_grid_impl(const Domain& dom, int n) {
  if (n < 8) throw Error(ErrorCode::BadParameter, "grid resolution must be at least 8");

  const Point lo = dom.bbox_min(), hi = dom.bbox_max();
  const double w = hi.x - lo.x, hgt = hi.y - lo.y;
  double h = std::max(w, hgt) / n;
  const bool artificial_x = dom.artificial_min_x() || dom.artificial_max_x();
  if (artificial_x) {
    // truncation lines must land on grid columns
    h = w / std::ceil(w / h - 1e-12);
  }
  const int ncx = static_cast<int>(std::ceil(w / h - 1e-9));
  const int ncy = static_cast<int>(std::ceil(hgt / h - 1e-9));

  Grid g;
  g.h_ = h;
  g.nx_ = ncx + 1;
  g.ny_ = ncy + 1;
  g.origin_ = {lo.x - 0.5 * (ncx * h - w), lo.y - 0.5 * (ncy * h - hgt)};

  const int nn = g.nx_ * g.ny_;
  g.mask_.assign(nn, NodeMask::Exterior);
  g.arms_.assign(nn, {});
  g.active_index_.assign(nn, -1);

  std::vector<double> d(nn);
  std::vector<char> is_active(nn, 0);
  for (int j = 0; j < g.ny_; ++j) {
    for (int i = 0; i < g.nx_; ++i) {
      const int node = g.id(i, j);
      d[node] = dom.signed_distance(g.coord(i, j));
      bool active = d[node] > 0;
      if (dom.artificial_min_x() && i == 0) active = false;
      if (dom.artificial_max_x() && i == g.nx_ - 1) active = false;
      is_active[node] = active;
    }
  }

  const int di[4] = {1, -1, 0, 0};
  const int dj[4] = {0, 0, 1, -1};
  for (int j = 0; j < g.ny_; ++j) {
    for (int i = 0; i < g.nx_; ++i) {
      const int node = g.id(i, j);
      if (!is_active[node]) continue;
      const Point p = g.coord(i, j);
      bool clipped = false;
      for (int dir = 0; dir < 4; ++dir) {
        const int ii = i + di[dir], jj = j + dj[dir];
        const bool in_range = ii >= 0 && ii < g.nx_ && jj >= 0 && jj < g.ny_;
        if (in_range && is_active[g.id(ii, jj)]) {
          g.arms_[node][dir] = {1.0, g.id(ii, jj), -1};
          continue;
        }
        clipped = true;
        const Point b{p.x + di[dir] * h, p.y + dj[dir] * h};
        Grid::ClipPoint cp;
        cp.node = node;
        cp.dir = dir;
        const double db = dom.signed_distance(b);
        if (db == 0.0) {
          cp.alpha = 1.0;
          cp.p = b;
          cp.artificial = false;
        } else if (db < 0) {
          double t_lo = 0.0, t_hi = 1.0;
          for (int it = 0; it < 48; ++it) {
            const double t = 0.5 * (t_lo + t_hi);
            const Point q{p.x + t * di[dir] * h, p.y + t * dj[dir] * h};
            (dom.signed_distance(q) > 0 ? t_lo : t_hi) = t;
          }
          cp.alpha = std::max(0.5 * (t_lo + t_hi), 1e-12);
          cp.p = {p.x + cp.alpha * di[dir] * h, p.y + cp.alpha * dj[dir] * h};
          cp.artificial = false;
        } else {
          if (!in_range)
            throw Error(ErrorCode::ResolutionTooCoarse, "domain reaches the grid box edge");
          cp.alpha = 1.0;
          cp.p = b;
          cp.artificial = true;
        }
        g.arms_[node][dir] = {cp.alpha, -1, static_cast<int>(g.clips_.size())};
        g.clips_.push_back(cp);
      }
      g.mask_[node] = clipped ? NodeMask::BoundaryAdjacent : NodeMask::Interior;
      g.active_index_[node] = static_cast<int>(g.active_nodes_.size());
      g.active_nodes_.push_back(node);
      if (!clipped) ++g.num_interior_;
    }
  }

  if (g.active_nodes_.empty())
    throw Error(ErrorCode::ResolutionTooCoarse, "no interior nodes");

  // all active nodes must be mutually reachable through regular arms
  std::vector<char> seen(nn, 0);
  std::deque<int> queue{g.active_nodes_.front()};
  seen[queue.front()] = 1;
  size_t reached = 0;
  while (!queue.empty()) {
    const int node = queue.front();
    queue.pop_front();
    ++reached;
    for (const Grid::Arm& arm : g.arms_[node]) {
      if (arm.neighbor >= 0 && !seen[arm.neighbor]) {
        seen[arm.neighbor] = 1;
        queue.push_back(arm.neighbor);
      }
    }
  }
  if (reached != g.active_nodes_.size())
    throw Error(ErrorCode::ResolutionTooCoarse, "interior nodes are disconnected");

  return g;
}

GridPtr build_grid(const Domain& dom, int n) {
  return std::make_shared<const Grid>(build_grid_impl(dom, n));
}

ScalarField::ScalarField(GridPtr g)
    : grid(std::move(g)),
      values(grid->num_nodes(), std::numeric_limits<double>::quiet_NaN()),
      clip_values(grid->clips().size(), 0.0) {}

ScalarField sample_field(GridPtr grid, const std::function<double(Point)>& f) {
  ScalarField u(grid);
  for (int node : grid->active_nodes()) u.values[node] = f(grid->coord(node));
  for (size_t c = 0; c < grid->clips().size(); ++c) u.clip_values[c] = f(grid->clips()[c].p);
  return u;
}

}  // namespace translab
