#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "suctiongrip/errors.hpp"
#include "suctiongrip/mesh.hpp"

namespace suctiongrip {

namespace {

struct AxisGrid {
  double offset = 0.0;  // coordinate of grid line 0
  int count = 0;        // planes inside the bounding box
};

// Planes are centred on the box: the margin left over on both sides is equal.
AxisGrid make_axis_grid(double lo, double hi, double spacing) {
  AxisGrid g;
  const double extent = hi - lo;
  g.count = static_cast<int>(std::floor(extent / spacing + 1e-9));
  g.offset = lo + 0.5 * (extent - (g.count - 1) * spacing);
  return g;
}

struct RasterKey {
  std::uint32_t triangle;
  int axis;
  long plane;
  long line;
  auto tie() const { return std::tie(triangle, axis, plane, line); }
};

}  // namespace

std::vector<SeedPoint> raster_sample(const TriangleMesh& mesh, double spacing,
                                     const RasterFrame& frame) {
  if (!(spacing > 0.0)) throw InvalidParams("raster spacing must be positive");

  std::vector<Vec3> local(mesh.vertices().size());
  for (std::size_t i = 0; i < local.size(); ++i) local[i] = frame * mesh.vertices()[i];
  Vec3 lo = local.front();
  Vec3 hi = local.front();
  for (const auto& p : local) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  AxisGrid grid[3];
  for (int a = 0; a < 3; ++a) grid[a] = make_axis_grid(lo[a], hi[a], spacing);

  const double eps = kGeomEps * std::max(1.0, (hi - lo).maxCoeff());

  std::vector<std::pair<RasterKey, Vec3>> found;
  for (std::uint32_t f = 0; f < mesh.triangle_count(); ++f) {
    const auto& tri = mesh.triangles()[f];
    const Vec3 p[3] = {local[tri[0]], local[tri[1]], local[tri[2]]};
    for (int a = 0; a < 3; ++a) {
      if (grid[a].count == 0) continue;
      const double tmin = std::min({p[0][a], p[1][a], p[2][a]});
      const double tmax = std::max({p[0][a], p[1][a], p[2][a]});
      const long k_lo = std::max<long>(0, static_cast<long>(std::ceil((tmin - eps - grid[a].offset) / spacing)));
      const long k_hi = std::min<long>(grid[a].count - 1,
                                       static_cast<long>(std::floor((tmax + eps - grid[a].offset) / spacing)));
      for (long k = k_lo; k <= k_hi; ++k) {
        const double value = grid[a].offset + k * spacing;
        double d[3];
        for (int i = 0; i < 3; ++i) d[i] = p[i][a] - value;
        if (std::abs(d[0]) <= eps && std::abs(d[1]) <= eps && std::abs(d[2]) <= eps) {
          continue;  // face lies in the plane; the other sweeps cover it
        }
        std::vector<Vec3> cut;
        for (int i = 0; i < 3; ++i) {
          if (std::abs(d[i]) <= eps) cut.push_back(p[i]);
        }
        for (int i = 0; i < 3; ++i) {
          const int j = (i + 1) % 3;
          if (std::abs(d[i]) <= eps || std::abs(d[j]) <= eps) continue;
          if ((d[i] < 0.0) != (d[j] < 0.0)) {
            const double t = d[i] / (d[i] - d[j]);
            cut.push_back(p[i] + t * (p[j] - p[i]));
          }
        }
        if (cut.empty()) continue;
        const Vec3 s0 = cut.front();
        const Vec3 s1 = cut.size() > 1 ? cut[1] : cut.front();

        // Resample along whichever remaining axis the segment advances most in.
        const int b1 = (a + 1) % 3;
        const int b2 = (a + 2) % 3;
        int b = std::min(b1, b2);
        const int other = std::max(b1, b2);
        if (std::abs(s1[other] - s0[other]) > std::abs(s1[b] - s0[b]) + eps) b = other;

        const double lo_b = std::min(s0[b], s1[b]);
        const double hi_b = std::max(s0[b], s1[b]);
        const long j_lo = static_cast<long>(std::ceil((lo_b - eps - grid[b].offset) / spacing));
        const long j_hi = static_cast<long>(std::floor((hi_b + eps - grid[b].offset) / spacing));
        for (long j = j_lo; j <= j_hi; ++j) {
          const double line = grid[b].offset + j * spacing;
          const double span = s1[b] - s0[b];
          double t = std::abs(span) > eps ? (line - s0[b]) / span : 0.0;
          t = std::clamp(t, 0.0, 1.0);
          Vec3 q = s0 + t * (s1 - s0);
          q[a] = value;
          found.push_back({RasterKey{f, a, k, j}, q});
        }
      }
    }
  }

  std::sort(found.begin(), found.end(),
            [](const auto& x, const auto& y) { return x.first.tie() < y.first.tie(); });

  // A grid crossing on a shared edge is reported by every incident face; the
  // lowest face id keeps it.
  std::map<std::tuple<int, long, long>, std::vector<Vec3>> taken;
  const Mat3 to_world = frame.transpose();
  std::vector<SeedPoint> seeds;
  for (const auto& [key, q] : found) {
    auto& same_line = taken[{key.axis, key.plane, key.line}];
    const bool duplicate = std::any_of(same_line.begin(), same_line.end(),
                                       [&](const Vec3& o) { return (o - q).norm() <= 1e3 * eps; });
    if (duplicate) continue;
    same_line.push_back(q);
    seeds.push_back({to_world * q, mesh.face_normals()[key.triangle], key.triangle});
  }
  if (seeds.empty()) {
    throw EmptyRaster("raster spacing " + std::to_string(spacing) + " mm yields no seed points on '" +
                      mesh.name() + "'");
  }
  return seeds;
}

}  // namespace suctiongrip
