#include <doctest.h>

#include <random>

#include "suctiongrip/geometry.hpp"

using namespace suctiongrip;

TEST_CASE("angle between vectors") {
  CHECK(angle_deg(Vec3::UnitX(), Vec3::UnitY()) == doctest::Approx(90.0));
  CHECK(angle_deg(Vec3::UnitX(), -Vec3::UnitX()) == doctest::Approx(180.0));
  CHECK(angle_deg(Vec3(1, 1, 0), Vec3(1, 1, 0)) == doctest::Approx(0.0));
}

TEST_CASE("complete_basis is right-handed and orthonormal") {
  for (const Vec3& n : std::vector<Vec3>{Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ(), Vec3(1, 2, -3).normalized()}) {
    Vec3 u, v;
    complete_basis(n, u, v);
    CHECK(u.norm() == doctest::Approx(1.0));
    CHECK(v.norm() == doctest::Approx(1.0));
    CHECK(std::abs(u.dot(n)) < 1e-12);
    CHECK(std::abs(v.dot(n)) < 1e-12);
    CHECK((u.cross(v) - n).norm() < 1e-12);
  }
}

TEST_CASE("fit_rigid recovers a known motion") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> d(-50, 50);
  const RigidTransform t = RigidTransform::from_axis_angle(Vec3(0.3, -1, 2), 1.1, Vec3(5, -7, 11));
  std::vector<Vec3> from, to;
  for (int i = 0; i < 6; ++i) {
    from.emplace_back(d(rng), d(rng), d(rng));
    to.push_back(t.apply(from.back()));
  }
  const RigidTransform fit = fit_rigid(from, to);
  CHECK((fit.rotation - t.rotation).norm() < 1e-9);
  CHECK((fit.translation - t.translation).norm() < 1e-9);
  CHECK(fit.rotation.determinant() == doctest::Approx(1.0));
}

TEST_CASE("normal-weighted fit keeps normals aligned") {
  // Three coplanar points, one raised by 2: positions alone would tilt.
  const std::vector<Vec3> from = {{0, 0, 0}, {40, 0, 0}, {20, 30, 2}};
  const std::vector<Vec3> to = {{0, 0, 0}, {40, 0, 0}, {20, 30, 0}};
  const std::vector<Vec3> n(3, Vec3::UnitZ());
  const RigidTransform loose = fit_rigid(from, to);
  const RigidTransform tight = fit_rigid(from, to, n, n, 1e6);
  CHECK(angle_deg(loose.apply_direction(Vec3::UnitZ()), Vec3::UnitZ()) > 1.0);
  CHECK(angle_deg(tight.apply_direction(Vec3::UnitZ()), Vec3::UnitZ()) < 1e-3);
  CHECK(tight.translation.z() == doctest::Approx(-2.0 / 3.0).epsilon(1e-4));
}

TEST_CASE("transform composition and inverse") {
  const RigidTransform a = RigidTransform::from_axis_angle(Vec3(1, 0, 0), 0.4, Vec3(1, 2, 3));
  const RigidTransform b = RigidTransform::from_axis_angle(Vec3(0, 1, 1), -0.9, Vec3(-3, 0, 8));
  const Vec3 p(4, -5, 6);
  CHECK((a.compose(b).apply(p) - a.apply(b.apply(p))).norm() < 1e-12);
  CHECK((a.inverse().apply(a.apply(p)) - p).norm() < 1e-12);
}

TEST_CASE("pair_frame") {
  const Mat3 f = pair_frame(Vec3(1, 1, 0), Vec3(4, 5, 0), Vec3(0, 0, 2));
  CHECK((f * f.transpose() - Mat3::Identity()).norm() < 1e-12);
  CHECK((f.row(0).transpose() - Vec3(0.6, 0.8, 0)).norm() < 1e-12);
  CHECK((f.row(2).transpose() - Vec3::UnitZ()).norm() < 1e-12);
}

TEST_CASE("point_line_distance") {
  CHECK(point_line_distance(Vec3(5, 0.1, 0), Vec3(0, 0, 0), Vec3(10, 0, 0)) == doctest::Approx(0.1));
  CHECK(point_line_distance(Vec3(0, 0, 7), Vec3(-1, 0, 0), Vec3(1, 0, 0)) == doctest::Approx(7.0));
}

TEST_CASE("convex hull and clearance") {
  std::vector<Vec2> pts = {{0, 0}, {10, 0}, {10, 10}, {0, 10}, {5, 5}, {5, 0}};
  const auto hull = convex_hull_2d(pts);
  REQUIRE(hull.size() == 4);
  CHECK(convex_clearance(hull, Vec2(5, 5)) == doctest::Approx(5.0));
  CHECK(convex_clearance(hull, Vec2(2, 5)) == doctest::Approx(2.0));
  CHECK(convex_clearance(hull, Vec2(-1, 5)) == doctest::Approx(-1.0));
  CHECK(convex_clearance(hull, Vec2(10, 5)) == doctest::Approx(0.0));
}
