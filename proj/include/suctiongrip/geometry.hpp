#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace suctiongrip {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;
using Mat3 = Eigen::Matrix3d;

/// Absolute slack (mm, or degrees for angles) applied to every boundary-inclusive
/// comparison so that exact ties survive floating-point noise from rigid motions.
constexpr double kGeomEps = 1e-9;

constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Angle between two (not necessarily unit) vectors in degrees, in [0, 180].
/// Uses atan2 so that nearly parallel vectors keep full precision.
double angle_deg(const Vec3& a, const Vec3& b);

/// Right-handed orthonormal basis (u, v) completing the unit vector n.
/// Deterministic: depends only on n.
void complete_basis(const Vec3& n, Vec3& u, Vec3& v);

/// Proper rigid motion x -> rotation * x + translation.
struct RigidTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
  Vec3 apply_direction(const Vec3& d) const { return rotation * d; }
  RigidTransform inverse() const;
  RigidTransform compose(const RigidTransform& inner) const;  // this(inner(x))

  static RigidTransform from_axis_angle(const Vec3& axis, double angle_rad,
                                        const Vec3& translation = Vec3::Zero());
};

/// Least-squares rigid motion mapping `from[i]` onto `to[i]` (Kabsch). Both spans
/// must have the same size >= 1. Reflections are excluded.
RigidTransform fit_rigid(std::span<const Vec3> from, std::span<const Vec3> to);

/// Same fit with paired unit normals added to the cross-covariance with weight
/// `normal_weight` (mm^2). A large weight keeps normals aligned first.
RigidTransform fit_rigid(std::span<const Vec3> from, std::span<const Vec3> to, std::span<const Vec3> from_normals,
                         std::span<const Vec3> to_normals, double normal_weight);

/// Orthonormal frame (rows x, y, z) with x along a->b and z the reference
/// normal made orthogonal to x.
Mat3 pair_frame(const Vec3& a, const Vec3& b, const Vec3& normal);

/// Distance from p to the infinite line through a and b (a != b).
double point_line_distance(const Vec3& p, const Vec3& a, const Vec3& b);

/// Signed clearance of q inside the convex polygon `hull` (counter-clockwise,
/// >= 3 vertices): min distance to the edges, negative when q is outside.
double convex_clearance(std::span<const Vec2> hull, const Vec2& q);

/// Andrew's monotone chain. Returns the hull counter-clockwise without
/// repeating the first vertex; collinear boundary points are dropped.
std::vector<Vec2> convex_hull_2d(std::vector<Vec2> points);

}  // namespace suctiongrip
