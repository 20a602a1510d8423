#include "suctiongrip/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "suctiongrip/errors.hpp"

namespace suctiongrip {

namespace {

struct CellKey {
  std::int64_t x, y, z;
  bool operator==(const CellKey&) const = default;
};

struct CellHash {
  std::size_t operator()(const CellKey& k) const {
    std::uint64_t h = 1469598103934665603ull;
    for (std::int64_t v : {k.x, k.y, k.z}) {
      h ^= static_cast<std::uint64_t>(v);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

// Merges vertices closer than `tol`. Returns the old->new index map; the first
// occurrence of a cluster keeps its position.
std::vector<std::uint32_t> weld(const std::vector<Vec3>& in, double tol, std::vector<Vec3>& out) {
  std::unordered_map<CellKey, std::vector<std::uint32_t>, CellHash> grid;
  std::vector<std::uint32_t> remap(in.size());
  const auto cell_of = [tol](const Vec3& p) {
    return CellKey{static_cast<std::int64_t>(std::floor(p.x() / tol)),
                   static_cast<std::int64_t>(std::floor(p.y() / tol)),
                   static_cast<std::int64_t>(std::floor(p.z() / tol))};
  };
  for (std::size_t i = 0; i < in.size(); ++i) {
    const Vec3& p = in[i];
    const CellKey c = cell_of(p);
    std::int64_t found = -1;
    for (int dx = -1; dx <= 1 && found < 0; ++dx) {
      for (int dy = -1; dy <= 1 && found < 0; ++dy) {
        for (int dz = -1; dz <= 1 && found < 0; ++dz) {
          auto it = grid.find({c.x + dx, c.y + dy, c.z + dz});
          if (it == grid.end()) continue;
          for (std::uint32_t idx : it->second) {
            if ((out[idx] - p).norm() < tol) {
              found = idx;
              break;
            }
          }
        }
      }
    }
    if (found < 0) {
      found = static_cast<std::int64_t>(out.size());
      out.push_back(p);
      grid[c].push_back(static_cast<std::uint32_t>(found));
    }
    remap[i] = static_cast<std::uint32_t>(found);
  }
  return remap;
}

}  // namespace

TriangleMesh TriangleMesh::build(std::string name, const std::vector<Vec3>& vertices,
                                 const std::vector<Triangle>& triangles) {
  for (const auto& t : triangles) {
    for (std::uint32_t idx : t) {
      if (idx >= vertices.size()) {
        throw ParseError("mesh '" + name + "': triangle references vertex " + std::to_string(idx) +
                         " of " + std::to_string(vertices.size()));
      }
    }
  }

  TriangleMesh mesh;
  mesh.name_ = std::move(name);
  const auto remap = weld(vertices, kWeldTolerance, mesh.vertices_);

  // Drop degenerate faces, then compact the vertex array to referenced vertices only.
  std::vector<Triangle> kept;
  kept.reserve(triangles.size());
  for (const auto& t : triangles) {
    const Triangle w{remap[t[0]], remap[t[1]], remap[t[2]]};
    if (w[0] == w[1] || w[1] == w[2] || w[0] == w[2]) {
      ++mesh.dropped_;
      continue;
    }
    const Vec3& a = mesh.vertices_[w[0]];
    const double area = 0.5 * (mesh.vertices_[w[1]] - a).cross(mesh.vertices_[w[2]] - a).norm();
    if (!(area > kMinTriangleArea)) {
      ++mesh.dropped_;
      continue;
    }
    kept.push_back(w);
  }
  if (kept.empty()) {
    throw DegenerateMesh("mesh '" + mesh.name_ + "' has no non-degenerate triangles");
  }

  std::vector<std::int64_t> compact(mesh.vertices_.size(), -1);
  std::vector<Vec3> used;
  for (auto& t : kept) {
    for (auto& idx : t) {
      if (compact[idx] < 0) {
        compact[idx] = static_cast<std::int64_t>(used.size());
        used.push_back(mesh.vertices_[idx]);
      }
      idx = static_cast<std::uint32_t>(compact[idx]);
    }
  }
  mesh.vertices_ = std::move(used);
  mesh.triangles_ = std::move(kept);
  mesh.finalize();
  return mesh;
}

void TriangleMesh::finalize() {
  normals_.clear();
  normals_.reserve(triangles_.size());
  for (const auto& t : triangles_) {
    const Vec3& a = vertices_[t[0]];
    normals_.push_back((vertices_[t[1]] - a).cross(vertices_[t[2]] - a).normalized());
  }

  bbox_min_ = bbox_max_ = vertices_.front();
  for (const auto& v : vertices_) {
    bbox_min_ = bbox_min_.cwiseMin(v);
    bbox_max_ = bbox_max_.cwiseMax(v);
  }

  // Directed edge counts decide watertightness; undirected incidence drives adjacency.
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::uint32_t>> undirected;
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> directed;
  for (std::uint32_t f = 0; f < triangles_.size(); ++f) {
    const auto& t = triangles_[f];
    for (int e = 0; e < 3; ++e) {
      const std::uint32_t a = t[e];
      const std::uint32_t b = t[(e + 1) % 3];
      undirected[{std::min(a, b), std::max(a, b)}].push_back(f);
      ++directed[{a, b}];
    }
  }
  watertight_ = true;
  for (const auto& [edge, faces] : undirected) {
    if (faces.size() != 2 || directed[{edge.first, edge.second}] != 1 ||
        directed[{edge.second, edge.first}] != 1) {
      watertight_ = false;
      break;
    }
  }

  adjacency_.assign(triangles_.size(), {});
  for (const auto& [edge, faces] : undirected) {
    for (std::uint32_t f : faces) {
      for (std::uint32_t g : faces) {
        if (f != g) adjacency_[f].push_back(g);
      }
    }
  }
  for (auto& adj : adjacency_) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
  }
}

double TriangleMesh::triangle_area(std::size_t tri) const {
  const Vec3 a = corner(tri, 0);
  return 0.5 * (corner(tri, 1) - a).cross(corner(tri, 2) - a).norm();
}

TriangleMesh TriangleMesh::transformed(const RigidTransform& t) const {
  TriangleMesh out = *this;
  for (auto& v : out.vertices_) v = t.apply(v);
  out.finalize();
  return out;
}

MassProperties mass_properties(const TriangleMesh& mesh) {
  MassProperties props;
  Vec3 area_moment = Vec3::Zero();
  Vec3 volume_moment = Vec3::Zero();
  double volume = 0.0;
  // Tetrahedra against the bounding-box centre keep the sum well conditioned
  // for meshes far from the origin.
  const Vec3 ref = 0.5 * (mesh.bbox_min() + mesh.bbox_max());
  for (std::size_t f = 0; f < mesh.triangle_count(); ++f) {
    const Vec3 a = mesh.corner(f, 0) - ref;
    const Vec3 b = mesh.corner(f, 1) - ref;
    const Vec3 c = mesh.corner(f, 2) - ref;
    const double area = 0.5 * (b - a).cross(c - a).norm();
    props.area += area;
    area_moment += area * (a + b + c) / 3.0;
    const double v = a.dot(b.cross(c)) / 6.0;
    volume += v;
    volume_moment += v * (a + b + c) / 4.0;
  }
  props.volume = std::abs(volume);
  const double scale = (mesh.bbox_max() - mesh.bbox_min()).norm();
  if (mesh.watertight() && std::abs(volume) > 1e-12 * std::max(1.0, scale * scale * scale)) {
    props.center = ref + volume_moment / volume;
    props.solid = true;
  } else {
    props.center = ref + area_moment / props.area;
    props.solid = false;
  }
  return props;
}

Vec3 center_of_mass(const TriangleMesh& mesh) { return mass_properties(mesh).center; }

std::vector<SeedPoint> normal_prefilter(const std::vector<SeedPoint>& seeds,
                                        const Vec3& approach_axis, double max_tilt_deg) {
  const double min_dot = std::cos(deg_to_rad(max_tilt_deg));
  std::vector<SeedPoint> kept;
  for (const auto& s : seeds) {
    if (max_tilt_deg >= 180.0 || s.normal.dot(approach_axis) >= min_dot) kept.push_back(s);
  }
  return kept;
}

}  // namespace suctiongrip
