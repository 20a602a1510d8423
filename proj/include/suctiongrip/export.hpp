#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "suctiongrip/report.hpp"

namespace suctiongrip {

enum class ExportFormat { MarkerPly, Csv };

/// Accepts "marker-ply" and "csv"; throws UnknownFormat otherwise.
ExportFormat parse_export_format(const std::string& name);

struct ExportPoint {
  std::size_t workpiece = 0;
  std::size_t index = 0;  // position within the constellation
  GrippingPoint point;
};

/// Points of the result: the per-workpiece assignments of a common
/// constellation when present, otherwise constellation `which` (default 0).
/// An empty result yields no points.
std::vector<ExportPoint> report_points(const Json& report, std::optional<std::size_t> which = {});

inline constexpr const char* kCsvHeader = "workpiece,index,x,y,z,nx,ny,nz,quality";

std::string export_csv(const std::vector<ExportPoint>& points);
/// Inverse of export_csv. Throws ParseError on a malformed table.
std::vector<ExportPoint> parse_csv(const std::string& text);

/// ASCII PLY with the meshes, an icosphere marker per point and one edge per
/// normal arrow. Arrow length and marker radius are in mm.
void write_marker_ply(std::ostream& out, const std::vector<const TriangleMesh*>& meshes,
                      const std::vector<ExportPoint>& points, double marker_radius, double arrow_length);

/// Writes the export of `report` to `out`. Marker PLY reloads the workpiece
/// meshes from the paths recorded in the report.
void export_report(const Json& report, ExportFormat format, std::ostream& out,
                   std::optional<std::size_t> which = {});

}  // namespace suctiongrip
