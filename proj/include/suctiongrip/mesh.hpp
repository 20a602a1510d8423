#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "suctiongrip/geometry.hpp"

namespace suctiongrip {

constexpr double kWeldTolerance = 1e-5;       // mm
constexpr double kMinTriangleArea = 1e-9;     // mm^2

using Triangle = std::array<std::uint32_t, 3>;

enum class MeshFormat { StlBinary, StlAscii, Obj };

/// Indexed triangle surface. Immutable after construction; every instance has
/// passed validation (indices in range, no degenerate faces, unit normals).
class TriangleMesh {
 public:
  /// Welds vertices closer than kWeldTolerance, drops degenerate triangles and
  /// computes face normals from the winding order.
  /// Throws ParseError on out-of-range indices, DegenerateMesh when nothing is left.
  static TriangleMesh build(std::string name, const std::vector<Vec3>& vertices,
                            const std::vector<Triangle>& triangles);

  const std::string& name() const { return name_; }
  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<Vec3>& face_normals() const { return normals_; }
  std::size_t triangle_count() const { return triangles_.size(); }

  Vec3 corner(std::size_t tri, int k) const { return vertices_[triangles_[tri][k]]; }
  double triangle_area(std::size_t tri) const;

  /// Every undirected edge is shared by exactly two faces with opposite orientation.
  bool watertight() const { return watertight_; }
  std::size_t dropped_triangles() const { return dropped_; }

  Vec3 bbox_min() const { return bbox_min_; }
  Vec3 bbox_max() const { return bbox_max_; }

  /// Edge-adjacent faces of `tri` (shared undirected edge).
  const std::vector<std::uint32_t>& neighbors(std::size_t tri) const { return adjacency_[tri]; }

  TriangleMesh transformed(const RigidTransform& t) const;

  /// Optional surface roughness attribute supplied through configuration.
  double roughness() const { return roughness_; }
  bool has_roughness() const { return has_roughness_; }
  void set_roughness(double r) {
    roughness_ = r;
    has_roughness_ = true;
  }

 private:
  TriangleMesh() = default;
  void finalize();

  std::string name_;
  std::vector<Vec3> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Vec3> normals_;
  std::vector<std::vector<std::uint32_t>> adjacency_;
  Vec3 bbox_min_ = Vec3::Zero();
  Vec3 bbox_max_ = Vec3::Zero();
  bool watertight_ = false;
  std::size_t dropped_ = 0;
  double roughness_ = 0.0;
  bool has_roughness_ = false;
};

MeshFormat detect_format(const std::filesystem::path& path);

TriangleMesh load_mesh(const std::filesystem::path& path, MeshFormat format,
                       double unit_scale = 1.0);
TriangleMesh load_mesh(const std::filesystem::path& path, double unit_scale = 1.0);

void save_stl_binary(const TriangleMesh& mesh, const std::filesystem::path& path);
void save_obj(const TriangleMesh& mesh, const std::filesystem::path& path);

struct MassProperties {
  Vec3 center = Vec3::Zero();
  double volume = 0.0;
  double area = 0.0;
  bool solid = false;  // false: surface-centroid fallback was used
};

MassProperties mass_properties(const TriangleMesh& mesh);

/// Solid centroid for watertight meshes, area-weighted surface centroid otherwise
/// (check mass_properties().solid for which one was used).
Vec3 center_of_mass(const TriangleMesh& mesh);

struct SeedPoint {
  Vec3 position;
  Vec3 normal;
  std::uint32_t triangle_id = 0;
};

/// Orientation of the raster grid. Rows are the grid axes in world coordinates.
using RasterFrame = Mat3;

/// Intersects the mesh with an axis-aligned grid of pitch `spacing` (grid
/// planes centred on the bounding box) and resamples each plane/triangle
/// segment where it crosses the grid lines. Ordered by (triangle, grid index).
/// Throws EmptyRaster when no seed is produced.
std::vector<SeedPoint> raster_sample(const TriangleMesh& mesh, double spacing,
                                     const RasterFrame& frame = RasterFrame::Identity());

/// Seeds whose normal lies within `max_tilt_deg` of the approach axis, in input order.
std::vector<SeedPoint> normal_prefilter(const std::vector<SeedPoint>& seeds,
                                        const Vec3& approach_axis, double max_tilt_deg);

}  // namespace suctiongrip
