#include "suctiongrip/workspace.hpp"

#include <algorithm>
#include <cmath>

#include "suctiongrip/errors.hpp"

namespace suctiongrip {

bool ArmRange::reaches(double angle_deg, double radius_mm) const {
  if (radius_mm < radius_min - kGeomEps || radius_mm > radius_max + kGeomEps) return false;
  double a = angle_min + std::fmod(angle_deg - angle_min, 360.0);
  if (a < angle_min - kGeomEps) a += 360.0;
  if (a >= angle_min + 360.0 - kGeomEps) a -= 360.0;
  return a <= angle_max + kGeomEps;
}

namespace {

double alignment_cost(const RigidTransform& t, const Constellation& from, const Constellation& to) {
  double cost = 0.0;
  for (std::size_t i = 0; i < from.points.size(); ++i) {
    cost += (t.apply(from.points[i].position) - to.points[i].position).norm();
  }
  return cost;
}

// Rigid placement of `c` onto `ref` that minimises the summed point distance,
// chosen among the frame-to-frame placement and every arm-pair anchoring.
// Anchoring on unchanged arms isolates the arms that really move.
RigidTransform align_to_reference(const Constellation& c, const Constellation& ref) {
  std::vector<RigidTransform> options;
  {
    RigidTransform t;
    t.rotation = ref.frame.axes.transpose() * c.frame.axes;
    t.translation = ref.frame.origin - t.rotation * c.frame.origin;
    options.push_back(t);
  }
  const std::size_t k = c.points.size();
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      const Vec3& ca = c.points[a].position;
      const Vec3& cb = c.points[b].position;
      const Vec3& ra = ref.points[a].position;
      const Vec3& rb = ref.points[b].position;
      if ((cb - ca).norm() <= 1e-12 || (rb - ra).norm() <= 1e-12) continue;
      // The common anchor is the midpoint so a length mismatch splits evenly.
      RigidTransform t;
      t.rotation = pair_frame(ra, rb, ref.frame.z()).transpose() * pair_frame(ca, cb, c.frame.z());
      t.translation = 0.5 * (ra + rb) - t.rotation * (0.5 * (ca + cb));
      options.push_back(t);
    }
  }
  std::size_t best = 0;
  double best_cost = alignment_cost(options[0], c, ref);
  for (std::size_t i = 1; i < options.size(); ++i) {
    const double cost = alignment_cost(options[i], c, ref);
    if (cost < best_cost - 1e-9) {
      best_cost = cost;
      best = i;
    }
  }
  return options[best];
}

}  // namespace

std::vector<std::vector<std::pair<double, double>>> arm_coordinates(
    const std::vector<Constellation>& constellations) {
  if (constellations.empty()) throw InvalidParams("workspace planning needs at least one constellation");
  const std::size_t k = constellations.front().points.size();
  for (const auto& c : constellations) {
    if (c.points.size() != k) {
      throw MixedArity("constellations with " + std::to_string(k) + " and " +
                       std::to_string(c.points.size()) + " cups cannot share one gripper");
    }
  }
  const Constellation& ref = constellations.front();
  std::vector<std::vector<std::pair<double, double>>> coords;
  for (const auto& c : constellations) {
    const RigidTransform t = &c == &ref ? RigidTransform{} : align_to_reference(c, ref);
    std::vector<std::pair<double, double>> arms;
    for (const auto& p : c.points) arms.push_back(polar_in_frame(ref.frame, t.apply(p.position)));
    coords.push_back(std::move(arms));
  }
  return coords;
}

WorkspaceSpec plan_workspace(const std::vector<Constellation>& constellations, SnapTolerance snap) {
  const auto coords = arm_coordinates(constellations);
  const std::size_t k = coords.front().size();

  WorkspaceSpec ws;
  ws.arm_count = static_cast<int>(k);
  for (std::size_t arm = 0; arm < k; ++arm) {
    std::vector<double> angles;
    ArmRange range;
    range.radius_min = range.radius_max = coords.front()[arm].second;
    for (const auto& c : coords) {
      angles.push_back(c[arm].first);
      range.radius_min = std::min(range.radius_min, c[arm].second);
      range.radius_max = std::max(range.radius_max, c[arm].second);
    }
    // Smallest arc covering every angle: drop the widest gap between neighbours.
    std::sort(angles.begin(), angles.end());
    std::size_t gap_after = angles.size() - 1;
    double widest = angles.front() + 360.0 - angles.back();
    for (std::size_t i = 0; i + 1 < angles.size(); ++i) {
      const double gap = angles[i + 1] - angles[i];
      if (gap > widest) {
        widest = gap;
        gap_after = i;
      }
    }
    double lo = angles[(gap_after + 1) % angles.size()];
    const double extent = 360.0 - widest;
    if (lo >= 180.0) lo -= 360.0;
    range.angle_min = lo;
    range.angle_max = lo + extent;

    range.angle_fixed = range.angle_extent() <= snap.deg + kGeomEps;
    range.radius_fixed = range.radius_extent() <= snap.mm + kGeomEps;
    ws.dof_required += (range.angle_fixed ? 0 : 1) + (range.radius_fixed ? 0 : 1);
    ws.per_arm.push_back(range);
  }
  ws.fixed = ws.dof_required == 0;
  return ws;
}

}  // namespace suctiongrip
