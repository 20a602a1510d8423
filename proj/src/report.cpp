#include "suctiongrip/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "suctiongrip/errors.hpp"

namespace suctiongrip {

double round9(double v) {
  if (!std::isfinite(v)) return v;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;
}

namespace {

Json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round9(v);
}

double get_number(const Json& j, const char* key) {
  if (!j.is_number()) throw ParseError(std::string("config key '") + key + "' must be a number");
  return j.get<double>();
}

std::size_t get_count(const Json& j, const char* key) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw ParseError(std::string("config key '") + key + "' must be a non-negative integer");
  }
  return j.get<std::size_t>();
}

const char* status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Ok:
      return "ok";
    case RunStatus::NoConstellation:
      return "no_constellation";
    case RunStatus::NoCommonConstellation:
      return "no_common_constellation";
  }
  return "unknown";
}

Json rejections_json(const std::map<RejectionReason, std::size_t>& r) {
  Json out = Json::object();
  for (auto reason : {RejectionReason::BoundaryOverhang, RejectionReason::ConeViolation,
                      RejectionReason::NormalSpread, RejectionReason::PrefilterTilt}) {
    auto it = r.find(reason);
    out[std::string(to_string(reason))] = it == r.end() ? 0 : it->second;
  }
  return out;
}

Json workpiece_json(const WorkpieceRecord& wp) {
  Json j;
  j["name"] = wp.mesh->name();
  j["path"] = wp.path;
  j["hash"] = wp.hash;
  j["vertices"] = wp.mesh->vertices().size();
  j["triangles"] = wp.mesh->triangle_count();
  j["dropped_triangles"] = wp.mesh->dropped_triangles();
  j["watertight"] = wp.mesh->watertight();
  j["center_of_mass"] = to_json(wp.analysis->mass.center);
  j["center_of_mass_solid"] = wp.analysis->mass.solid;
  j["volume"] = num(wp.analysis->mass.volume);
  j["area"] = num(wp.analysis->mass.area);
  j["roughness"] = wp.mesh->has_roughness() ? num(wp.mesh->roughness()) : Json(nullptr);
  return j;
}

Json workpiece_diagnostics(const WorkpieceAnalysis& a, bool watertight) {
  Json j;
  j["name"] = a.name;
  j["seed_count"] = a.seed_count;
  j["prefiltered_count"] = a.prefiltered_count;
  j["evaluated_count"] = a.evaluated_count;
  j["candidate_count"] = a.candidates.size();
  j["rejections"] = rejections_json(a.rejections);
  j["empty_raster"] = a.empty_raster;
  j["roughness_exceeded"] = a.roughness_exceeded;
  j["watertight"] = watertight;
  return j;
}

Json candidates_json(const WorkpieceAnalysis& a, std::size_t workpiece) {
  Json arr = Json::array();
  for (std::size_t i = 0; i < a.candidates.size(); ++i) {
    Json c = gripping_point_json(a.candidates[i]);
    Json j;
    j["workpiece"] = workpiece;
    j["index"] = i;
    for (auto& [k, v] : c.items()) j[k] = v;
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace

Json to_json(const Vec3& v) { return Json::array({num(v.x()), num(v.y()), num(v.z())}); }

Vec3 vec3_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 3) throw ParseError("expected a 3-vector");
  Vec3 v;
  for (int i = 0; i < 3; ++i) {
    if (!j[i].is_number()) throw ParseError("expected a numeric 3-vector");
    v[i] = j[i].get<double>();
  }
  return v;
}

Json config_to_json(const RunConfig& cfg) {
  const auto& p = cfg.params;
  Json j;
  j["cup_diameter"] = num(p.cup_diameter);
  j["cup_count"] = p.cup_count;
  j["min_spacing"] = num(p.min_spacing);
  j["flatness_tol"] = num(p.flatness_tol);
  j["cone_slope"] = num(p.cone_slope);
  j["max_curvature_angle"] = num(p.max_curvature_angle);
  j["max_tilt"] = num(p.max_tilt);
  j["approach"] = to_json(p.approach_axis);
  j["min_line_offset"] = num(p.min_line_offset);
  j["stability_margin"] = num(p.stability_margin);
  j["raster_spacing"] = num(p.raster_spacing);
  j["roughness_limit"] = num(p.roughness_limit);
  j["gravity"] = to_json(p.gravity);
  Json frame = Json::array();
  for (int r = 0; r < 3; ++r) frame.push_back(to_json(p.raster_frame.row(r).transpose()));
  j["raster_frame"] = frame;
  j["allow_boundary"] = p.allow_boundary;
  j["unit_scale"] = num(cfg.unit_scale);
  j["budget"] = cfg.budget;
  j["limit"] = cfg.limit;
  j["tolerances"] = {{"pos_transverse_tol", num(cfg.tolerances.pos_transverse_tol)},
                     {"pos_height_tol", num(cfg.tolerances.pos_height_tol)},
                     {"normal_tilt_tol", num(cfg.tolerances.normal_tilt_tol)},
                     {"curvature_tol", num(cfg.tolerances.curvature_tol)}};
  j["snap"] = {{"mm", num(cfg.snap.mm)}, {"deg", num(cfg.snap.deg)}};
  Json rough = Json::object();
  for (const auto& [name, value] : cfg.roughness) rough[name] = num(value);
  j["roughness"] = rough;
  return j;
}

RunConfig config_from_json(const Json& j, RunConfig cfg) {
  if (!j.is_object()) throw ParseError("config must be an object");
  auto& p = cfg.params;
  for (const auto& [key, v] : j.items()) {
    if (key == "cup_diameter") p.cup_diameter = get_number(v, "cup_diameter");
    else if (key == "cup_count") p.cup_count = static_cast<int>(get_count(v, "cup_count"));
    else if (key == "min_spacing") p.min_spacing = get_number(v, "min_spacing");
    else if (key == "flatness_tol") p.flatness_tol = get_number(v, "flatness_tol");
    else if (key == "cone_slope") p.cone_slope = get_number(v, "cone_slope");
    else if (key == "max_curvature_angle") p.max_curvature_angle = get_number(v, "max_curvature_angle");
    else if (key == "max_tilt") p.max_tilt = get_number(v, "max_tilt");
    else if (key == "approach") p.approach_axis = vec3_from_json(v).normalized();
    else if (key == "min_line_offset") p.min_line_offset = get_number(v, "min_line_offset");
    else if (key == "stability_margin") p.stability_margin = get_number(v, "stability_margin");
    else if (key == "raster_spacing") p.raster_spacing = get_number(v, "raster_spacing");
    else if (key == "roughness_limit") {
      p.roughness_limit = v.is_null() ? std::numeric_limits<double>::infinity() : get_number(v, "roughness_limit");
    } else if (key == "gravity") p.gravity = vec3_from_json(v).normalized();
    else if (key == "raster_frame") {
      if (!v.is_array() || v.size() != 3) throw ParseError("raster_frame must be a 3x3 array");
      for (int r = 0; r < 3; ++r) p.raster_frame.row(r) = vec3_from_json(v[r]).transpose();
    } else if (key == "allow_boundary") {
      if (!v.is_boolean()) throw ParseError("config key 'allow_boundary' must be a boolean");
      p.allow_boundary = v.get<bool>();
    } else if (key == "unit_scale") cfg.unit_scale = get_number(v, "unit_scale");
    else if (key == "budget") cfg.budget = get_count(v, "budget");
    else if (key == "limit") cfg.limit = get_count(v, "limit");
    else if (key == "tolerances") {
      if (!v.is_object()) throw ParseError("tolerances must be an object");
      for (const auto& [tk, tv] : v.items()) {
        if (tk == "pos_transverse_tol") cfg.tolerances.pos_transverse_tol = get_number(tv, "pos_transverse_tol");
        else if (tk == "pos_height_tol") cfg.tolerances.pos_height_tol = get_number(tv, "pos_height_tol");
        else if (tk == "normal_tilt_tol") cfg.tolerances.normal_tilt_tol = get_number(tv, "normal_tilt_tol");
        else if (tk == "curvature_tol") cfg.tolerances.curvature_tol = get_number(tv, "curvature_tol");
        else throw ParseError("unknown tolerance key '" + tk + "'");
      }
    } else if (key == "snap") {
      if (!v.is_object()) throw ParseError("snap must be an object");
      for (const auto& [sk, sv] : v.items()) {
        if (sk == "mm") cfg.snap.mm = get_number(sv, "snap.mm");
        else if (sk == "deg") cfg.snap.deg = get_number(sv, "snap.deg");
        else throw ParseError("unknown snap key '" + sk + "'");
      }
    } else if (key == "roughness") {
      if (!v.is_object()) throw ParseError("roughness must map workpiece names to values");
      for (const auto& [name, rv] : v.items()) cfg.roughness[name] = get_number(rv, "roughness");
    } else {
      throw ParseError("unknown config key '" + key + "'");
    }
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("config " + path.string() + ": " + e.what());
  }
  return config_from_json(j, std::move(base));
}

std::string content_hash(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ull;
  char buf[1 << 14];
  while (in) {
    in.read(buf, sizeof(buf));
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ull;
    }
  }
  char out[32];
  std::snprintf(out, sizeof(out), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return out;
}

Json gripping_point_json(const GrippingPoint& p) {
  Json j;
  j["position"] = to_json(p.position);
  j["normal"] = to_json(p.normal);
  j["quality"] = num(p.quality);
  j["normal_spread"] = num(p.normal_spread);
  j["max_abs_deviation"] = num(p.max_abs_deviation);
  j["seed_index"] = p.seed_index;
  return j;
}

GrippingPoint gripping_point_from_json(const Json& j) {
  try {
    GrippingPoint p;
    p.position = vec3_from_json(j.at("position"));
    p.normal = vec3_from_json(j.at("normal"));
    p.quality = j.at("quality").get<double>();
    p.normal_spread = j.value("normal_spread", 0.0);
    p.max_abs_deviation = j.value("max_abs_deviation", 0.0);
    p.seed_index = j.value("seed_index", std::size_t{0});
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed gripping point: ") + e.what());
  }
}

Json constellation_json(const Constellation& c, std::size_t workpiece) {
  Json j;
  j["workpiece"] = workpiece;
  Json pts = Json::array();
  for (const auto& p : c.points) pts.push_back(gripping_point_json(p));
  j["points"] = pts;
  j["frame"] = {{"origin", to_json(c.frame.origin)},
                {"x", to_json(c.frame.axes.row(0).transpose())},
                {"y", to_json(c.frame.axes.row(1).transpose())},
                {"z", to_json(c.frame.axes.row(2).transpose())}};
  j["stability_score"] = num(c.stability_score);
  return j;
}

Constellation constellation_from_json(const Json& j) {
  Constellation c;
  try {
    for (const auto& p : j.at("points")) c.points.push_back(gripping_point_from_json(p));
    c.stability_score = j.value("stability_score", 0.0);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed constellation: ") + e.what());
  }
  if (c.points.empty()) throw ParseError("constellation without points");
  // Order is kept as stored; the frame is rebuilt from the rounded coordinates.
  c.frame = frame_for(c.points);
  return c;
}

Json workspace_json(const WorkspaceSpec& ws) {
  Json j;
  j["arm_count"] = ws.arm_count;
  Json arms = Json::array();
  for (const auto& a : ws.per_arm) {
    arms.push_back({{"angle_range", Json::array({num(a.angle_min), num(a.angle_max)})},
                    {"radius_range", Json::array({num(a.radius_min), num(a.radius_max)})},
                    {"angle_fixed", a.angle_fixed},
                    {"radius_fixed", a.radius_fixed}});
  }
  j["per_arm"] = arms;
  j["dof_required"] = ws.dof_required;
  j["fixed"] = ws.fixed;
  return j;
}

Json match_json(const MatchResult& m) {
  Json j;
  j["matched"] = m.matched;
  Json res = Json::array();
  for (const auto& r : m.per_point_residuals) {
    res.push_back({{"transverse", num(r.transverse)},
                   {"height", num(r.height)},
                   {"tilt", num(r.tilt)},
                   {"curvature", num(r.curvature)}});
  }
  j["per_point_residuals"] = res;
  j["worst_case"] = {{"transverse", num(m.worst_case.transverse)},
                     {"height", num(m.worst_case.height)},
                     {"tilt", num(m.worst_case.tilt)},
                     {"curvature", num(m.worst_case.curvature)}};
  j["assignment"] = m.assignment;
  return j;
}

Json analyze_report(const RunConfig& cfg, const WorkpieceRecord& wp,
                    const std::vector<Constellation>& constellations, RunStatus status,
                    const std::string& message) {
  Json r;
  r["schema_version"] = kReportSchemaVersion;
  r["command"] = "analyze";
  r["params"] = config_to_json(cfg);
  r["workpieces"] = Json::array({workpiece_json(wp)});
  r["candidates"] = candidates_json(*wp.analysis, 0);
  Json cs = Json::array();
  for (const auto& c : constellations) cs.push_back(constellation_json(c, 0));
  r["constellations"] = cs;
  r["common"] = nullptr;
  r["workspace"] = nullptr;
  r["diagnostics"] = {{"status", status_name(status)},
                      {"message", message},
                      {"workpieces", Json::array({workpiece_diagnostics(*wp.analysis, wp.mesh->watertight())})}};
  return r;
}

Json solve_report(const RunConfig& cfg, const std::vector<WorkpieceRecord>& wps, const CommonResult& result,
                  const WorkspaceSpec* workspace) {
  Json r;
  r["schema_version"] = kReportSchemaVersion;
  r["command"] = "solve";
  r["params"] = config_to_json(cfg);
  Json w = Json::array();
  Json cand = Json::array();
  Json diag = Json::array();
  for (std::size_t i = 0; i < wps.size(); ++i) {
    w.push_back(workpiece_json(wps[i]));
    for (auto& c : candidates_json(*wps[i].analysis, i)) cand.push_back(std::move(c));
    diag.push_back(workpiece_diagnostics(*wps[i].analysis, wps[i].mesh->watertight()));
  }
  r["workpieces"] = w;
  r["candidates"] = cand;

  Json cs = Json::array();
  if (result.has_best) cs.push_back(constellation_json(result.common, 0));
  r["constellations"] = cs;

  Json common;
  common["found"] = result.found;
  common["tried"] = result.tried;
  common["best_prefix"] = result.best_prefix;
  common["constellation"] = result.has_best ? constellation_json(result.common, 0) : Json(nullptr);
  Json assignments = Json::array();
  if (result.found) {
    for (std::size_t j = 0; j < result.per_workpiece.size(); ++j) {
      Json a = constellation_json(result.per_workpiece[j], j);
      a["match"] = j == 0 ? Json(nullptr) : match_json(result.matches[j - 1]);
      assignments.push_back(std::move(a));
    }
  }
  common["assignments"] = assignments;
  r["common"] = common;
  r["workspace"] = workspace ? workspace_json(*workspace) : Json(nullptr);

  r["diagnostics"] = {
      {"status", status_name(result.found ? RunStatus::Ok : RunStatus::NoCommonConstellation)},
      {"message", result.failure},
      {"workpieces", diag}};
  return r;
}

std::string dump_report(const Json& report) { return report.dump(2) + "\n"; }

Json load_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open report " + path.string());
  try {
    Json j = Json::parse(in);
    if (!j.contains("schema_version")) throw ParseError("report " + path.string() + " has no schema_version");
    if (j["schema_version"] != kReportSchemaVersion) {
      throw ParseError("report " + path.string() + " has unsupported schema_version");
    }
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("report " + path.string() + ": " + e.what());
  }
}

}  // namespace suctiongrip
