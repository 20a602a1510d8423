#include "suctiongrip/constraints.hpp"

#include <cmath>

#include "suctiongrip/errors.hpp"

namespace suctiongrip {

bool spacing_ok(std::span<const GrippingPoint> points, double min_spacing) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if ((points[i].position - points[j].position).norm() < min_spacing - kGeomEps) return false;
    }
  }
  return true;
}

std::vector<SeedPoint> exclusion_region(std::span<const SeedPoint> seeds, const GrippingPoint& placed,
                                        double min_spacing) {
  std::vector<SeedPoint> out;
  for (const auto& s : seeds) {
    if ((s.position - placed.position).norm() > min_spacing + kGeomEps) out.push_back(s);
  }
  return out;
}

std::vector<std::size_t> exclusion_region(std::span<const GrippingPoint> candidates,
                                          std::span<const std::size_t> pool, const Vec3& placed,
                                          double min_spacing) {
  std::vector<std::size_t> out;
  out.reserve(pool.size());
  for (std::size_t idx : pool) {
    if ((candidates[idx].position - placed).norm() > min_spacing + kGeomEps) out.push_back(idx);
  }
  return out;
}

double line_offset(std::span<const GrippingPoint> points) {
  std::size_t ia = 0;
  std::size_t ib = 1;
  double best = -1.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double d = (points[i].position - points[j].position).norm();
      if (d > best) {
        best = d;
        ia = i;
        ib = j;
      }
    }
  }
  if (best <= 0.0) return 0.0;
  double offset = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i == ia || i == ib) continue;
    offset = std::max(offset, point_line_distance(points[i].position, points[ia].position,
                                                  points[ib].position));
  }
  return offset;
}

bool collinearity_ok(std::span<const GrippingPoint> points, double min_line_offset) {
  return line_offset(points) >= min_line_offset - kGeomEps;
}

double collinearity_singular_value(std::span<const GrippingPoint> points) {
  Vec3 c = Vec3::Zero();
  for (const auto& p : points) c += p.position;
  c /= static_cast<double>(points.size());
  Eigen::MatrixXd m(points.size(), 3);
  for (std::size_t i = 0; i < points.size(); ++i) m.row(i) = (points[i].position - c).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  return s.size() >= 2 ? s(1) : 0.0;
}

double stability_clearance(std::span<const GrippingPoint> points, const Vec3& com, const Vec3& gravity) {
  Vec3 u, v;
  complete_basis(gravity.normalized(), u, v);
  std::vector<Vec2> projected;
  projected.reserve(points.size());
  for (const auto& p : points) projected.emplace_back(u.dot(p.position - com), v.dot(p.position - com));
  const auto hull = convex_hull_2d(projected);

  double area = 0.0;
  double extent = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Vec2& a = hull[i];
    const Vec2& b = hull[(i + 1) % hull.size()];
    area += a.x() * b.y() - a.y() * b.x();
    extent = std::max(extent, (b - a).norm());
  }
  if (hull.size() < 3 || 0.5 * std::abs(area) <= 1e-9 * std::max(1.0, extent * extent)) {
    throw DegenerateProjection("gripping points collapse onto a line along gravity");
  }
  return convex_clearance(hull, Vec2::Zero());
}

bool stability_ok(std::span<const GrippingPoint> points, const Vec3& com,
                  const ConstellationConstraints& constraints) {
  return stability_clearance(points, com, constraints.gravity) >=
         constraints.stability_margin - kGeomEps;
}

bool constellation_ok(std::span<const GrippingPoint> points, const Vec3& com,
                      const ConstellationConstraints& constraints, double* clearance) {
  if (!spacing_ok(points, constraints.min_spacing)) return false;
  if (!collinearity_ok(points, constraints.min_line_offset)) return false;
  double c = 0.0;
  try {
    c = stability_clearance(points, com, constraints.gravity);
  } catch (const DegenerateProjection&) {
    return false;
  }
  if (clearance) *clearance = c;
  return c >= constraints.stability_margin - kGeomEps;
}

}  // namespace suctiongrip
