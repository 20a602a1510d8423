#include "suctiongrip/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace suctiongrip {

double angle_deg(const Vec3& a, const Vec3& b) {
  return rad_to_deg(std::atan2(a.cross(b).norm(), a.dot(b)));
}

void complete_basis(const Vec3& n, Vec3& u, Vec3& v) {
  // Pick the world axis least aligned with n.
  Vec3 helper = Vec3::UnitX();
  const Vec3 a = n.cwiseAbs();
  if (a.y() <= a.x() && a.y() <= a.z()) {
    helper = Vec3::UnitY();
  } else if (a.z() <= a.x() && a.z() <= a.y()) {
    helper = Vec3::UnitZ();
  }
  u = (helper - helper.dot(n) * n).normalized();
  v = n.cross(u);
}

RigidTransform RigidTransform::inverse() const {
  RigidTransform inv;
  inv.rotation = rotation.transpose();
  inv.translation = -(inv.rotation * translation);
  return inv;
}

RigidTransform RigidTransform::compose(const RigidTransform& inner) const {
  RigidTransform out;
  out.rotation = rotation * inner.rotation;
  out.translation = rotation * inner.translation + translation;
  return out;
}

RigidTransform RigidTransform::from_axis_angle(const Vec3& axis, double angle_rad,
                                               const Vec3& translation) {
  RigidTransform t;
  t.rotation = Eigen::AngleAxisd(angle_rad, axis.normalized()).toRotationMatrix();
  t.translation = translation;
  return t;
}

RigidTransform fit_rigid(std::span<const Vec3> from, std::span<const Vec3> to) {
  return fit_rigid(from, to, {}, {}, 0.0);
}

RigidTransform fit_rigid(std::span<const Vec3> from, std::span<const Vec3> to, std::span<const Vec3> from_normals,
                         std::span<const Vec3> to_normals, double normal_weight) {
  if (from_normals.size() != to_normals.size()) {
    throw std::invalid_argument("fit_rigid: normal sets must be equal in size");
  }
  if (from.size() != to.size() || from.empty()) {
    throw std::invalid_argument("fit_rigid: point sets must be non-empty and equal in size");
  }
  const double n = static_cast<double>(from.size());
  Vec3 cf = Vec3::Zero();
  Vec3 ct = Vec3::Zero();
  for (std::size_t i = 0; i < from.size(); ++i) {
    cf += from[i];
    ct += to[i];
  }
  cf /= n;
  ct /= n;

  Mat3 h = Mat3::Zero();
  for (std::size_t i = 0; i < from.size(); ++i) {
    h += (from[i] - cf) * (to[i] - ct).transpose();
  }
  for (std::size_t i = 0; i < from_normals.size(); ++i) {
    h += normal_weight * from_normals[i] * to_normals[i].transpose();
  }
  Eigen::JacobiSVD<Mat3> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 d = Mat3::Identity();
  if ((svd.matrixV() * svd.matrixU().transpose()).determinant() < 0.0) {
    d(2, 2) = -1.0;
  }
  RigidTransform t;
  t.rotation = svd.matrixV() * d * svd.matrixU().transpose();
  t.translation = ct - t.rotation * cf;
  return t;
}

Mat3 pair_frame(const Vec3& a, const Vec3& b, const Vec3& normal) {
  const Vec3 x = (b - a).normalized();
  Vec3 z = normal - normal.dot(x) * x;
  if (z.norm() <= 1e-9) {
    Vec3 unused;
    complete_basis(x, z, unused);
  }
  z.normalize();
  const Vec3 y = z.cross(x);
  Mat3 m;
  m.row(0) = x.transpose();
  m.row(1) = y.transpose();
  m.row(2) = z.transpose();
  return m;
}

double point_line_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 dir = b - a;
  return (p - a).cross(dir).norm() / dir.norm();
}

double convex_clearance(std::span<const Vec2> hull, const Vec2& q) {
  double clearance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Vec2& a = hull[i];
    const Vec2& b = hull[(i + 1) % hull.size()];
    const Vec2 e = b - a;
    const double len = e.norm();
    // Positive on the interior (left) side of a counter-clockwise edge.
    const double signed_dist = (e.x() * (q.y() - a.y()) - e.y() * (q.x() - a.x())) / len;
    clearance = std::min(clearance, signed_dist);
  }
  return clearance;
}

namespace {
double cross2(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}
}  // namespace

std::vector<Vec2> convex_hull_2d(std::vector<Vec2> points) {
  std::sort(points.begin(), points.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 3) return points;

  std::vector<Vec2> hull(2 * points.size());
  std::size_t k = 0;
  for (const auto& p : points) {
    while (k >= 2 && cross2(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = points.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross2(hull[k - 2], hull[k - 1], points[i]) <= 0.0) --k;
    hull[k++] = points[i];
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace suctiongrip
