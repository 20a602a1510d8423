#include "suctiongrip/patch.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "suctiongrip/errors.hpp"

namespace suctiongrip {

std::optional<RejectionReason> parse_rejection_reason(std::string_view name) {
  for (auto r : {RejectionReason::BoundaryOverhang, RejectionReason::ConeViolation,
                 RejectionReason::NormalSpread, RejectionReason::PrefilterTilt}) {
    if (to_string(r) == name) return r;
  }
  return std::nullopt;
}

namespace {

struct Footprint {
  Vec3 center;
  Vec3 axis;
  Vec3 u, v;
  double radius;

  Vec2 project(const Vec3& p) const {
    const Vec3 d = p - center;
    return {u.dot(d), v.dot(d)};
  }
};

double segment_distance(const Vec2& a, const Vec2& b) {
  const Vec2 e = b - a;
  const double len2 = e.squaredNorm();
  const double t = len2 > 0.0 ? std::clamp(-a.dot(e) / len2, 0.0, 1.0) : 0.0;
  return (a + t * e).norm();
}

// Barycentric containment of q in the 2D triangle (a, b, c), inclusive.
bool contains(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& q) {
  const double area = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
  if (std::abs(area) <= 1e-14) return false;
  const double w0 = ((b - q).x() * (c - q).y() - (b - q).y() * (c - q).x()) / area;
  const double w1 = ((c - q).x() * (a - q).y() - (c - q).y() * (a - q).x()) / area;
  const double w2 = 1.0 - w0 - w1;
  constexpr double slack = -1e-12;
  return w0 >= slack && w1 >= slack && w2 >= slack;
}

bool touches_disc(const Vec2& a, const Vec2& b, const Vec2& c, double radius) {
  if (contains(a, b, c, Vec2::Zero())) return true;
  const double d = std::min({segment_distance(a, b), segment_distance(b, c), segment_distance(c, a)});
  return d <= radius + kGeomEps * std::max(1.0, radius);
}

}  // namespace

SurfacePatch extract_patch(const TriangleMesh& mesh, const SeedPoint& seed, double cup_diameter) {
  if (!(cup_diameter > 0.0)) throw InvalidParams("cup_diameter must be positive");

  Footprint fp{seed.position, seed.normal, {}, {}, 0.5 * cup_diameter};
  complete_basis(fp.axis, fp.u, fp.v);
  const double step = cup_diameter / 8.0;
  const double radial_slack = 1e-6;

  SurfacePatch patch;
  patch.center = seed.position;
  patch.center_normal = seed.normal;
  patch.cup_radius = fp.radius;
  patch.samples.push_back({seed.position, seed.normal});

  // Faces reachable from the seed face without leaving the footprint cylinder.
  std::vector<std::uint32_t> faces;
  std::vector<char> seen(mesh.triangle_count(), 0);
  std::deque<std::uint32_t> queue{seed.triangle_id};
  seen[seed.triangle_id] = 1;
  while (!queue.empty()) {
    const std::uint32_t f = queue.front();
    queue.pop_front();
    const Vec2 a = fp.project(mesh.corner(f, 0));
    const Vec2 b = fp.project(mesh.corner(f, 1));
    const Vec2 c = fp.project(mesh.corner(f, 2));
    if (f != seed.triangle_id && !touches_disc(a, b, c, fp.radius)) continue;
    faces.push_back(f);
    for (std::uint32_t g : mesh.neighbors(f)) {
      if (!seen[g]) {
        seen[g] = 1;
        queue.push_back(g);
      }
    }
  }
  std::sort(faces.begin(), faces.end());

  // Interior samples: barycentric lattice fine enough that neighbours are at
  // most cup_diameter / 8 apart, clipped to the footprint.
  for (std::uint32_t f : faces) {
    const Vec3 a = mesh.corner(f, 0);
    const Vec3 b = mesh.corner(f, 1);
    const Vec3 c = mesh.corner(f, 2);
    const double longest = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
    const int m = std::max(1, static_cast<int>(std::ceil(longest / step)));
    for (int i = 0; i <= m; ++i) {
      for (int j = 0; j <= m - i; ++j) {
        const Vec3 p = a + (static_cast<double>(i) / m) * (b - a) + (static_cast<double>(j) / m) * (c - a);
        if (fp.project(p).norm() <= fp.radius + radial_slack) {
          patch.samples.push_back({p, mesh.face_normals()[f]});
        }
      }
    }
  }

  // Coverage probes on concentric rings; the outermost ring sits on the rim.
  // Each probe is lifted onto every cup-facing face above it.
  std::vector<std::uint32_t> facing;
  std::vector<std::array<Vec2, 3>> facing_2d;
  for (std::uint32_t f : faces) {
    if (mesh.face_normals()[f].dot(fp.axis) > 1e-9) {
      facing.push_back(f);
      facing_2d.push_back({fp.project(mesh.corner(f, 0)), fp.project(mesh.corner(f, 1)),
                           fp.project(mesh.corner(f, 2))});
    }
  }
  const int rings = std::max(1, static_cast<int>(std::ceil(fp.radius / step)));
  for (int ring = 1; ring <= rings && !patch.boundary_clipped; ++ring) {
    const double rho = ring == rings ? fp.radius * (1.0 - 1e-9) : fp.radius * ring / rings;
    const int count = std::max(8, static_cast<int>(std::ceil(2.0 * kPi * rho / step)));
    for (int k = 0; k < count; ++k) {
      const double theta = 2.0 * kPi * k / count;
      const Vec2 q{rho * std::cos(theta), rho * std::sin(theta)};
      bool covered = false;
      for (std::size_t i = 0; i < facing.size(); ++i) {
        const auto& t = facing_2d[i];
        if (!contains(t[0], t[1], t[2], q)) continue;
        covered = true;
        const std::uint32_t f = facing[i];
        const Vec3& nf = mesh.face_normals()[f];
        const Vec3 base = fp.center + q.x() * fp.u + q.y() * fp.v;
        const double lift = nf.dot(mesh.corner(f, 0) - base) / nf.dot(fp.axis);
        patch.samples.push_back({base + lift * fp.axis, nf});
      }
      if (!covered) {
        patch.boundary_clipped = true;
        break;
      }
    }
  }

  if (patch.samples.size() < kMinPatchSamples) {
    throw PatchTooSparse("footprint at seed on face " + std::to_string(seed.triangle_id) +
                         " collected only " + std::to_string(patch.samples.size()) + " samples");
  }
  return patch;
}

FlatnessReport flatness_check(const SurfacePatch& patch, double flatness_tol, double cone_slope) {
  FlatnessReport report;
  double num = 0.0;
  double den = 0.0;
  for (const auto& s : patch.samples) {
    const Vec3 d = s.point - patch.center;
    const double axial = d.dot(patch.center_normal);
    const double radial = (d - axial * patch.center_normal).norm();
    report.max_abs_deviation = std::max(report.max_abs_deviation, std::abs(axial));
    report.max_normal_spread = std::max(report.max_normal_spread, angle_deg(s.normal, patch.center_normal));
    if (std::abs(axial) > flatness_tol + cone_slope * radial + kGeomEps) report.cone_violated = true;
    num += axial * radial * radial;
    den += radial * radial * radial * radial;
  }
  report.mean_curvature = den > 0.0 ? -2.0 * num / den : 0.0;
  return report;
}

CandidateOutcome evaluate_candidate(const TriangleMesh& mesh, const SeedPoint& seed,
                                    const AnalysisParams& params) {
  SurfacePatch patch;
  try {
    patch = extract_patch(mesh, seed, params.cup_diameter);
  } catch (const PatchTooSparse&) {
    return Rejection{RejectionReason::BoundaryOverhang, std::nullopt};
  }
  if (patch.boundary_clipped && !params.allow_boundary) {
    return Rejection{RejectionReason::BoundaryOverhang, std::nullopt};
  }
  const FlatnessReport report = flatness_check(patch, params.flatness_tol, params.cone_slope);
  if (report.cone_violated) return Rejection{RejectionReason::ConeViolation, report};
  if (report.max_normal_spread > params.max_curvature_angle + kGeomEps) {
    return Rejection{RejectionReason::NormalSpread, report};
  }

  GrippingPoint gp;
  gp.position = seed.position;
  gp.normal = seed.normal;
  gp.normal_spread = report.max_normal_spread;
  gp.max_abs_deviation = report.max_abs_deviation;
  if (params.flatness_tol > 0.0) {
    gp.quality = std::clamp(1.0 - report.max_abs_deviation / params.flatness_tol, 0.0, 1.0);
  } else {
    gp.quality = report.max_abs_deviation <= kGeomEps ? 1.0 : 0.0;
  }
  return gp;
}

}  // namespace suctiongrip
