#include "suctiongrip/export.hpp"

#include <array>
#include <cstdio>
#include <map>
#include <sstream>

#include "suctiongrip/errors.hpp"

namespace suctiongrip {

ExportFormat parse_export_format(const std::string& name) {
  if (name == "marker-ply") return ExportFormat::MarkerPly;
  if (name == "csv") return ExportFormat::Csv;
  throw UnknownFormat("unknown export format '" + name + "' (expected marker-ply or csv)");
}

std::vector<ExportPoint> report_points(const Json& report, std::optional<std::size_t> which) {
  std::vector<ExportPoint> out;
  const auto add = [&](const Json& c) {
    const std::size_t wp = c.value("workpiece", std::size_t{0});
    std::size_t i = 0;
    for (const auto& p : c.at("points")) out.push_back({wp, i++, gripping_point_from_json(p)});
  };
  try {
    if (!which && report.contains("common") && report["common"].is_object()) {
      const Json& assignments = report["common"].value("assignments", Json::array());
      if (!assignments.empty()) {
        for (const auto& a : assignments) add(a);
        return out;
      }
    }
    const Json& cs = report.value("constellations", Json::array());
    const std::size_t idx = which.value_or(0);
    if (idx < cs.size()) {
      add(cs[idx]);
    } else if (which) {
      throw ParseError("report has no constellation " + std::to_string(idx));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed report: ") + e.what());
  }
  return out;
}

std::string export_csv(const std::vector<ExportPoint>& points) {
  std::string out = std::string(kCsvHeader) + "\n";
  char buf[512];
  for (const auto& e : points) {
    const auto& p = e.point;
    std::snprintf(buf, sizeof(buf), "%zu,%zu,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n", e.workpiece, e.index,
                  round9(p.position.x()), round9(p.position.y()), round9(p.position.z()), round9(p.normal.x()),
                  round9(p.normal.y()), round9(p.normal.z()), round9(p.quality));
    out += buf;
  }
  return out;
}

std::vector<ExportPoint> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw ParseError("csv header mismatch");
  std::vector<ExportPoint> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 9) throw ParseError("csv row with " + std::to_string(cells.size()) + " fields");
    try {
      ExportPoint e;
      e.workpiece = std::stoul(cells[0]);
      e.index = std::stoul(cells[1]);
      e.point.position = Vec3(std::stod(cells[2]), std::stod(cells[3]), std::stod(cells[4]));
      e.point.normal = Vec3(std::stod(cells[5]), std::stod(cells[6]), std::stod(cells[7]));
      e.point.quality = std::stod(cells[8]);
      out.push_back(e);
    } catch (const std::logic_error&) {
      throw ParseError("csv row is not numeric: " + line);
    }
  }
  return out;
}

namespace {

struct Icosphere {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;
};

// Icosahedron with one midpoint subdivision, unit radius.
Icosphere make_icosphere() {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  Icosphere s;
  s.vertices = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& v : s.vertices) v.normalize();
  const std::vector<std::array<int, 3>> base = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
      {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
      {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  std::map<std::pair<int, int>, int> mid;
  const auto midpoint = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = mid.find(key);
    if (it != mid.end()) return it->second;
    s.vertices.push_back((s.vertices[a] + s.vertices[b]).normalized());
    const int id = static_cast<int>(s.vertices.size()) - 1;
    mid.emplace(key, id);
    return id;
  };
  for (const auto& f : base) {
    const int ab = midpoint(f[0], f[1]);
    const int bc = midpoint(f[1], f[2]);
    const int ca = midpoint(f[2], f[0]);
    s.faces.push_back({f[0], ab, ca});
    s.faces.push_back({f[1], bc, ab});
    s.faces.push_back({f[2], ca, bc});
    s.faces.push_back({ab, bc, ca});
  }
  return s;
}

}  // namespace

void write_marker_ply(std::ostream& out, const std::vector<const TriangleMesh*>& meshes,
                      const std::vector<ExportPoint>& points, double marker_radius, double arrow_length) {
  const Icosphere sphere = make_icosphere();
  std::vector<Vec3> verts;
  std::vector<std::array<std::size_t, 3>> faces;
  std::vector<std::array<std::size_t, 2>> edges;

  for (const TriangleMesh* m : meshes) {
    const std::size_t base = verts.size();
    verts.insert(verts.end(), m->vertices().begin(), m->vertices().end());
    for (const auto& t : m->triangles()) faces.push_back({base + t[0], base + t[1], base + t[2]});
  }
  for (const auto& e : points) {
    const std::size_t base = verts.size();
    for (const auto& v : sphere.vertices) verts.push_back(e.point.position + marker_radius * v);
    for (const auto& f : sphere.faces) {
      faces.push_back({base + static_cast<std::size_t>(f[0]), base + static_cast<std::size_t>(f[1]),
                       base + static_cast<std::size_t>(f[2])});
    }
    verts.push_back(e.point.position);
    verts.push_back(e.point.position + arrow_length * e.point.normal);
    edges.push_back({verts.size() - 2, verts.size() - 1});
  }

  out << "ply\nformat ascii 1.0\n";
  out << "element vertex " << verts.size() << "\nproperty float x\nproperty float y\nproperty float z\n";
  out << "element face " << faces.size() << "\nproperty list uchar int vertex_indices\n";
  out << "element edge " << edges.size() << "\nproperty int vertex1\nproperty int vertex2\n";
  out << "end_header\n";
  char buf[128];
  for (const auto& v : verts) {
    std::snprintf(buf, sizeof(buf), "%.9g %.9g %.9g\n", round9(v.x()), round9(v.y()), round9(v.z()));
    out << buf;
  }
  for (const auto& f : faces) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
  for (const auto& e : edges) out << e[0] << ' ' << e[1] << '\n';
}

void export_report(const Json& report, ExportFormat format, std::ostream& out, std::optional<std::size_t> which) {
  const auto points = report_points(report, which);
  if (format == ExportFormat::Csv) {
    out << export_csv(points);
    return;
  }
  double unit_scale = 1.0;
  double cup_diameter = 20.0;
  if (report.contains("params")) {
    unit_scale = report["params"].value("unit_scale", 1.0);
    cup_diameter = report["params"].value("cup_diameter", 20.0);
  }
  std::vector<TriangleMesh> meshes;
  for (const auto& wp : report.value("workpieces", Json::array())) {
    meshes.push_back(load_mesh(wp.at("path").get<std::string>(), unit_scale));
  }
  std::vector<const TriangleMesh*> ptrs;
  for (const auto& m : meshes) ptrs.push_back(&m);
  write_marker_ply(out, ptrs, points, 0.1 * cup_diameter, cup_diameter);
}

}  // namespace suctiongrip
