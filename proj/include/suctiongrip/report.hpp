#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "suctiongrip/constellation.hpp"
#include "suctiongrip/params.hpp"
#include "suctiongrip/workspace.hpp"

namespace suctiongrip {

using Json = nlohmann::ordered_json;

constexpr int kReportSchemaVersion = 1;

/// Everything a run is configured with. Mirrors the config file one-to-one.
struct RunConfig {
  AnalysisParams params;
  ToleranceSpec tolerances;
  SnapTolerance snap;
  double unit_scale = 1.0;
  std::size_t budget = 10'000;
  std::size_t limit = 10;
  std::map<std::string, double> roughness;  // per workpiece name
};

/// Rounds to 9 significant digits; -0 becomes 0.
double round9(double v);

Json to_json(const Vec3& v);
Vec3 vec3_from_json(const Json& j);

Json config_to_json(const RunConfig& cfg);
/// Overlays the keys present in `j` onto `base`. Throws ParseError on unknown
/// keys or wrongly typed values.
RunConfig config_from_json(const Json& j, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

/// FNV-1a 64-bit of the file bytes, as "fnv1a64:<16 hex digits>".
std::string content_hash(const std::filesystem::path& path);

struct WorkpieceRecord {
  std::string path;
  std::string hash;
  const TriangleMesh* mesh = nullptr;
  const WorkpieceAnalysis* analysis = nullptr;
};

Json gripping_point_json(const GrippingPoint& p);
GrippingPoint gripping_point_from_json(const Json& j);
Json constellation_json(const Constellation& c, std::size_t workpiece);
Constellation constellation_from_json(const Json& j);
Json workspace_json(const WorkspaceSpec& ws);
Json match_json(const MatchResult& m);

enum class RunStatus { Ok, NoConstellation, NoCommonConstellation };

Json analyze_report(const RunConfig& cfg, const WorkpieceRecord& wp,
                    const std::vector<Constellation>& constellations, RunStatus status,
                    const std::string& message);

Json solve_report(const RunConfig& cfg, const std::vector<WorkpieceRecord>& wps, const CommonResult& result,
                  const WorkspaceSpec* workspace);

/// Serialised exactly as written to disk (2-space indent, trailing newline).
std::string dump_report(const Json& report);
Json load_report(const std::filesystem::path& path);

}  // namespace suctiongrip
