#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <unordered_map>

#include "suctiongrip/constellation.hpp"

namespace suctiongrip {

namespace {

constexpr double kMatchEps = 1e-7;  // mm and degrees
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNormalWeight = 100.0;  // relative to the positional scatter

class PointGrid {
 public:
  PointGrid(const std::vector<GrippingPoint>& pts, double cell) : pts_(pts), cell_(cell) {
    for (std::size_t i = 0; i < pts.size(); ++i) cells_[key(coord(pts[i].position))].push_back(i);
  }

  // Indices within `radius` of `q`, nearest first (index order on equal distance).
  std::vector<std::pair<double, std::size_t>> query(const Vec3& q, double radius) const {
    std::vector<std::pair<double, std::size_t>> out;
    const auto c = coord(q);
    const long reach = static_cast<long>(std::ceil(radius / cell_));
    for (long dx = -reach; dx <= reach; ++dx) {
      for (long dy = -reach; dy <= reach; ++dy) {
        for (long dz = -reach; dz <= reach; ++dz) {
          auto it = cells_.find(key({c[0] + dx, c[1] + dy, c[2] + dz}));
          if (it == cells_.end()) continue;
          for (std::size_t i : it->second) {
            const double d = (pts_[i].position - q).norm();
            if (d <= radius) out.push_back({d, i});
          }
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::array<long, 3> coord(const Vec3& p) const {
    return {static_cast<long>(std::floor(p.x() / cell_)), static_cast<long>(std::floor(p.y() / cell_)),
            static_cast<long>(std::floor(p.z() / cell_))};
  }
  static std::int64_t key(const std::array<long, 3>& c) {
    return (static_cast<std::int64_t>(c[0]) * 73856093) ^ (static_cast<std::int64_t>(c[1]) * 19349663) ^
           (static_cast<std::int64_t>(c[2]) * 83492791);
  }

  const std::vector<GrippingPoint>& pts_;
  double cell_;
  std::unordered_map<std::int64_t, std::vector<std::size_t>> cells_;
};

struct Scored {
  double score = kInf;
  double displacement = kInf;
  std::vector<std::size_t> assignment;
  std::vector<PointResidual> residuals;
  RigidTransform transform;
  bool valid = false;

  bool better_than(const Scored& o) const {
    if (!o.valid) return true;
    if (std::abs(score - o.score) > 1e-9) return score < o.score;
    if (std::abs(displacement - o.displacement) > 1e-9) return displacement < o.displacement;
    return assignment < o.assignment;
  }
};

}  // namespace

MatchResult match_constellation(const Constellation& c, const std::vector<GrippingPoint>& targets,
                                const ToleranceSpec& tol, const AssignmentFilter& filter) {
  const std::size_t k = c.points.size();
  MatchResult result;
  result.per_point_residuals.assign(k, {kInf, kInf, kInf, kInf});
  result.worst_case = {kInf, kInf, kInf, kInf};
  if (k < 2 || targets.size() < k) return result;

  const double pos_tol = std::hypot(tol.pos_transverse_tol, tol.pos_height_tol);
  const double pair_slack = 2.0 * pos_tol + 1e-6;
  const Vec3& p0 = c.points[0].position;
  const Vec3& p1 = c.points[1].position;
  const double d01 = (p1 - p0).norm();
  const Mat3 source_frame = pair_frame(p0, p1, c.points[0].normal + c.points[1].normal);

  double extent = 0.0;
  for (const auto& p : c.points) extent = std::max(extent, (p.position - p0).norm());
  PointGrid grid(targets, std::max(1.0, pair_slack));

  // Normals dominate the rotation so an offset zone shows up as height, not tilt.
  Vec3 centroid = Vec3::Zero();
  for (const auto& p : c.points) centroid += p.position;
  centroid /= static_cast<double>(k);
  double scatter = 0.0;
  for (const auto& p : c.points) scatter += (p.position - centroid).squaredNorm();
  const double normal_weight = kNormalWeight * std::max(scatter, 1.0);

  // Normalisers keep the ranking defined when a tolerance is zero.
  const auto ratio = [](double r, double t) { return r / std::max(t, 1e-6); };

  std::set<std::vector<std::size_t>> seen;
  Scored best_within;
  Scored best_any;

  const auto evaluate = [&](const std::vector<std::size_t>& assignment) {
    std::vector<Vec3> from, to, from_n, to_n;
    for (std::size_t i = 0; i < k; ++i) {
      from.push_back(targets[assignment[i]].position);
      to.push_back(c.points[i].position);
      from_n.push_back(targets[assignment[i]].normal);
      to_n.push_back(c.points[i].normal);
    }
    const RigidTransform t = fit_rigid(from, to, from_n, to_n, normal_weight);
    Scored s;
    s.assignment = assignment;
    s.transform = t;
    s.score = 0.0;
    bool within = true;
    for (std::size_t i = 0; i < k; ++i) {
      const GrippingPoint& tp = targets[assignment[i]];
      const Vec3 r = c.frame.direction_to_local(t.apply(tp.position) - c.points[i].position);
      PointResidual res;
      res.transverse = std::hypot(r.x(), r.y());
      res.height = std::abs(r.z());
      res.tilt = angle_deg(t.apply_direction(tp.normal), c.points[i].normal);
      res.curvature = std::abs(tp.normal_spread - c.points[i].normal_spread);
      within = within && res.transverse <= tol.pos_transverse_tol + kMatchEps &&
               res.height <= tol.pos_height_tol + kMatchEps && res.tilt <= tol.normal_tilt_tol + kMatchEps &&
               res.curvature <= tol.curvature_tol + kMatchEps;
      s.score = std::max({s.score, ratio(res.transverse, tol.pos_transverse_tol),
                          ratio(res.height, tol.pos_height_tol), ratio(res.tilt, tol.normal_tilt_tol),
                          ratio(res.curvature, tol.curvature_tol)});
      s.residuals.push_back(res);
    }
    const double angle = std::acos(std::clamp((t.rotation.trace() - 1.0) / 2.0, -1.0, 1.0));
    s.displacement = t.translation.norm() + angle * std::max(1.0, extent);
    s.valid = true;
    if (filter && !filter(assignment)) return;
    if (within && s.better_than(best_within)) best_within = s;
    if (s.better_than(best_any)) best_any = s;
  };

  for (std::size_t a = 0; a < targets.size(); ++a) {
    for (std::size_t b = 0; b < targets.size(); ++b) {
      if (a == b) continue;
      const double dab = (targets[b].position - targets[a].position).norm();
      if (std::abs(dab - d01) > pair_slack) continue;

      // Pose hypothesis from the pair, completed by nearest candidates per point.
      const Mat3 target_frame =
          pair_frame(targets[a].position, targets[b].position, targets[a].normal + targets[b].normal);
      const Mat3 rot = target_frame.transpose() * source_frame;
      const Vec3 shift = targets[a].position - rot * p0;

      std::vector<std::vector<std::size_t>> options(k);
      options[0] = {a};
      options[1] = {b};
      bool feasible = true;
      for (std::size_t i = 2; i < k && feasible; ++i) {
        const Vec3 q = rot * c.points[i].position + shift;
        const double lever = (c.points[i].position - p0).norm() / std::max(d01, 1e-9);
        const double radius = pos_tol * (2.0 + 2.0 * lever) + 1e-6;
        for (const auto& [d, idx] : grid.query(q, radius)) {
          if (idx == a || idx == b) continue;
          options[i].push_back(idx);
          if (options[i].size() == kMatchNeighbourCap) break;
        }
        feasible = !options[i].empty();
      }
      if (!feasible) continue;

      std::vector<std::size_t> assignment(k);
      assignment[0] = a;
      assignment[1] = b;
      const auto recurse = [&](auto&& self, std::size_t i) -> void {
        if (i == k) {
          if (seen.insert(assignment).second) evaluate(assignment);
          return;
        }
        for (std::size_t idx : options[i]) {
          if (std::find(assignment.begin(), assignment.begin() + static_cast<long>(i), idx) !=
              assignment.begin() + static_cast<long>(i)) {
            continue;
          }
          assignment[i] = idx;
          self(self, i + 1);
        }
      };
      recurse(recurse, 2);
    }
  }

  const Scored& chosen = best_within.valid ? best_within : best_any;
  if (!chosen.valid) return result;
  result.matched = best_within.valid;
  result.assignment = chosen.assignment;
  result.per_point_residuals = chosen.residuals;
  result.target_to_source = chosen.transform;
  result.worst_case = {0.0, 0.0, 0.0, 0.0};
  for (const auto& r : chosen.residuals) {
    result.worst_case.transverse = std::max(result.worst_case.transverse, r.transverse);
    result.worst_case.height = std::max(result.worst_case.height, r.height);
    result.worst_case.tilt = std::max(result.worst_case.tilt, r.tilt);
    result.worst_case.curvature = std::max(result.worst_case.curvature, r.curvature);
  }
  return result;
}

}  // namespace suctiongrip
