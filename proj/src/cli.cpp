#include "suctiongrip/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <optional>
#include <sstream>

#include "suctiongrip/errors.hpp"
#include "suctiongrip/export.hpp"
#include "suctiongrip/report.hpp"
#include "suctiongrip/workspace.hpp"

namespace suctiongrip {

namespace {

// Flag storage for one subcommand. Flags are applied on top of the config file
// only when given on the command line.
struct ParamFlags {
  std::string config;
  std::string out;

  double cup_diameter = 0, min_spacing = 0, flatness_tol = 0, cone_slope = 0, max_curvature_angle = 0,
         max_tilt = 0, min_line_offset = 0, stability_margin = 0, raster_spacing = 0, unit_scale = 0,
         roughness_limit = 0;
  int cup_count = 0;
  std::string approach;
  std::size_t budget = 0, limit = 0;
  double pos_transverse_tol = 0, pos_height_tol = 0, normal_tilt_tol = 0, curvature_tol = 0;
  double snap_mm = 0, snap_deg = 0;

  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> setters;
  CLI::Option* allow_boundary = nullptr;

  template <class T, class Apply>
  void add(CLI::App* app, const std::string& name, T& slot, const std::string& help, Apply apply) {
    CLI::Option* opt = app->add_option(name, slot, help);
    setters.emplace_back(opt, [&slot, apply](RunConfig& cfg) { apply(cfg, slot); });
  }

  void add_common(CLI::App* app) {
    app->add_option("--config", config, "JSON config file; flags override its values");
    app->add_option("--out", out, "Write the report here instead of stdout");
  }

  void add_analysis(CLI::App* app) {
    add(app, "--cup-diameter", cup_diameter, "Suction cup diameter (mm)",
        [](RunConfig& c, double v) { c.params.cup_diameter = v; });
    add(app, "--cup-count", cup_count, "Cups per constellation",
        [](RunConfig& c, int v) { c.params.cup_count = v; });
    add(app, "--min-spacing", min_spacing, "Minimum distance between cup centres (mm)",
        [](RunConfig& c, double v) { c.params.min_spacing = v; });
    add(app, "--flatness-tol", flatness_tol, "Maximum surface deviation under a cup (mm)",
        [](RunConfig& c, double v) { c.params.flatness_tol = v; });
    add(app, "--cone-slope", cone_slope, "Radial growth of the deviation envelope",
        [](RunConfig& c, double v) { c.params.cone_slope = v; });
    add(app, "--max-curvature-angle", max_curvature_angle, "Maximum normal spread in a patch (deg)",
        [](RunConfig& c, double v) { c.params.max_curvature_angle = v; });
    add(app, "--max-tilt", max_tilt, "Maximum seed tilt from the approach axis (deg)",
        [](RunConfig& c, double v) { c.params.max_tilt = v; });
    add(app, "--approach", approach, "Approach axis as x,y,z", [](RunConfig& c, const std::string& v) {
      std::vector<double> xs;
      std::stringstream ss(v);
      std::string cell;
      while (std::getline(ss, cell, ',')) {
        try {
          xs.push_back(std::stod(cell));
        } catch (const std::logic_error&) {
          throw InvalidParams("--approach expects x,y,z");
        }
      }
      if (xs.size() != 3) throw InvalidParams("--approach expects x,y,z");
      const Vec3 a(xs[0], xs[1], xs[2]);
      if (a.norm() <= 1e-12) throw InvalidParams("--approach must be non-zero");
      c.params.approach_axis = a.normalized();
    });
    add(app, "--min-line-offset", min_line_offset, "Minimum offset of a cup from the farthest-pair line (mm)",
        [](RunConfig& c, double v) { c.params.min_line_offset = v; });
    add(app, "--stability-margin", stability_margin, "Minimum clearance of the centre of mass (mm)",
        [](RunConfig& c, double v) { c.params.stability_margin = v; });
    add(app, "--raster-spacing", raster_spacing, "Seed grid spacing (mm, 0 = cup diameter / 4)",
        [](RunConfig& c, double v) { c.params.raster_spacing = v; });
    add(app, "--roughness-limit", roughness_limit, "Maximum admissible surface roughness",
        [](RunConfig& c, double v) { c.params.roughness_limit = v; });
    add(app, "--unit-scale", unit_scale, "Factor converting file units to mm",
        [](RunConfig& c, double v) { c.unit_scale = v; });
    add(app, "--budget", budget, "Constellations of the first workpiece to try",
        [](RunConfig& c, std::size_t v) { c.budget = v; });
    add(app, "--limit", limit, "Constellations to report", [](RunConfig& c, std::size_t v) { c.limit = v; });
    allow_boundary = app->add_flag("--allow-boundary", "Accept patches clipped by a mesh boundary");
  }

  void add_tolerances(CLI::App* app) {
    add(app, "--pos-transverse-tol", pos_transverse_tol, "In-plane position tolerance (mm)",
        [](RunConfig& c, double v) { c.tolerances.pos_transverse_tol = v; });
    add(app, "--pos-height-tol", pos_height_tol, "Height tolerance along the gripper axis (mm)",
        [](RunConfig& c, double v) { c.tolerances.pos_height_tol = v; });
    add(app, "--normal-tilt-tol", normal_tilt_tol, "Normal tilt tolerance (deg)",
        [](RunConfig& c, double v) { c.tolerances.normal_tilt_tol = v; });
    add(app, "--curvature-tol", curvature_tol, "Normal spread tolerance (deg)",
        [](RunConfig& c, double v) { c.tolerances.curvature_tol = v; });
  }

  void add_snap(CLI::App* app) {
    add(app, "--snap-mm", snap_mm, "Radial ranges up to this extent count as fixed (mm)",
        [](RunConfig& c, double v) { c.snap.mm = v; });
    add(app, "--snap-deg", snap_deg, "Angular ranges up to this extent count as fixed (deg)",
        [](RunConfig& c, double v) { c.snap.deg = v; });
  }

  RunConfig resolve() const {
    RunConfig cfg;
    if (!config.empty()) cfg = load_config(config, cfg);
    for (const auto& [opt, apply] : setters) {
      if (opt->count() > 0) apply(cfg);
    }
    if (allow_boundary && allow_boundary->count() > 0) cfg.params.allow_boundary = true;
    cfg.params.validate();
    cfg.tolerances.validate();
    if (!(cfg.unit_scale > 0.0)) throw InvalidParams("unit_scale must be positive");
    if (!(cfg.snap.mm >= 0.0) || !(cfg.snap.deg >= 0.0)) throw InvalidParams("snap tolerances must be >= 0");
    return cfg;
  }
};

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot write " + path);
  f << text;
  if (!f) throw ParseError("failed writing " + path);
}

struct LoadedWorkpiece {
  std::string path;
  std::string hash;
  TriangleMesh mesh;
};

LoadedWorkpiece load_workpiece(const std::string& path, const RunConfig& cfg) {
  if (!std::filesystem::is_regular_file(path)) throw ParseError("no such mesh file: " + path);
  LoadedWorkpiece wp{path, content_hash(path), load_mesh(path, cfg.unit_scale)};
  auto it = cfg.roughness.find(wp.mesh.name());
  if (it != cfg.roughness.end()) wp.mesh.set_roughness(it->second);
  return wp;
}

int run_analyze(const ParamFlags& flags, const std::string& mesh_path, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = flags.resolve();
  const LoadedWorkpiece wp = load_workpiece(mesh_path, cfg);
  const WorkpieceAnalysis analysis = analyze_workpiece(wp.mesh, cfg.params);

  std::vector<Constellation> constellations;
  RunStatus status = RunStatus::Ok;
  std::string message;
  if (cfg.limit > 0) {
    try {
      constellations = enumerate_constellations(wp.mesh, analysis.candidates, cfg.params, cfg.limit);
    } catch (const NoConstellation& e) {
      status = RunStatus::NoConstellation;
      message = e.what();
    }
  }
  const Json report = analyze_report(cfg, {wp.path, wp.hash, &wp.mesh, &analysis}, constellations, status, message);
  emit(dump_report(report), flags.out, out);
  if (status != RunStatus::Ok) {
    err << "analyze: " << message << "\n";
    return kExitNoConstellation;
  }
  return kExitOk;
}

int run_solve(const ParamFlags& flags, const std::vector<std::string>& mesh_paths, std::ostream& out,
              std::ostream& err) {
  if (mesh_paths.size() < 2) throw InvalidParams("solve needs at least two meshes");
  const RunConfig cfg = flags.resolve();
  std::vector<LoadedWorkpiece> wps;
  for (const auto& p : mesh_paths) wps.push_back(load_workpiece(p, cfg));

  std::vector<WorkpieceAnalysis> analyses;
  std::vector<bool> watertight;
  for (const auto& wp : wps) {
    analyses.push_back(analyze_workpiece(wp.mesh, cfg.params));
    watertight.push_back(wp.mesh.watertight());
  }
  const CommonResult result = solve_common(analyses, watertight, cfg.params, cfg.tolerances, cfg.budget);

  std::optional<WorkspaceSpec> workspace;
  if (result.found) workspace = plan_workspace(result.per_workpiece, cfg.snap);

  std::vector<WorkpieceRecord> records;
  for (std::size_t i = 0; i < wps.size(); ++i) {
    records.push_back({wps[i].path, wps[i].hash, &wps[i].mesh, &analyses[i]});
  }
  const Json report = solve_report(cfg, records, result, workspace ? &*workspace : nullptr);
  emit(dump_report(report), flags.out, out);
  if (!result.found) {
    err << "solve: " << result.failure << "\n";
    return kExitNoCommonConstellation;
  }
  return kExitOk;
}

int run_workspace(const ParamFlags& flags, const std::vector<std::string>& report_paths, std::ostream& out) {
  const RunConfig cfg = flags.resolve();
  std::vector<Constellation> constellations;
  Json inputs = Json::array();
  for (const auto& path : report_paths) {
    const Json r = load_report(path);
    std::size_t used = 0;
    const Json& common = r.contains("common") && r["common"].is_object() ? r["common"] : Json::object();
    const Json assignments = common.value("assignments", Json::array());
    if (!assignments.empty()) {
      for (const auto& a : assignments) constellations.push_back(constellation_from_json(a));
      used = assignments.size();
    } else {
      const Json cs = r.value("constellations", Json::array());
      if (cs.empty()) throw InvalidParams("report " + path + " holds no constellation");
      constellations.push_back(constellation_from_json(cs[0]));
      used = 1;
    }
    inputs.push_back({{"path", path}, {"hash", content_hash(path)}, {"constellations", used}});
  }
  const WorkspaceSpec ws = plan_workspace(constellations, cfg.snap);

  Json report;
  report["schema_version"] = kReportSchemaVersion;
  report["command"] = "workspace";
  report["params"] = config_to_json(cfg);
  report["inputs"] = inputs;
  Json cs = Json::array();
  for (const auto& c : constellations) cs.push_back(constellation_json(c, 0));
  report["constellations"] = cs;
  report["workspace"] = workspace_json(ws);
  report["diagnostics"] = {{"status", "ok"}, {"message", ""}};
  emit(dump_report(report), flags.out, out);
  return kExitOk;
}

int run_export(const std::string& report_path, const std::string& format_name, std::optional<std::size_t> which,
               const std::string& out_path, std::ostream& out) {
  const ExportFormat format = parse_export_format(format_name);
  const Json report = load_report(report_path);
  std::ostringstream buf;
  export_report(report, format, buf, which);
  emit(buf.str(), out_path, out);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Suction-cup gripping point analysis for triangle meshes"};
  app.require_subcommand(1);

  ParamFlags analyze_flags;
  std::string analyze_mesh;
  CLI::App* analyze = app.add_subcommand("analyze", "Find gripping points and constellations on one mesh");
  analyze->add_option("mesh", analyze_mesh, "Mesh file (stl or obj)")->required();
  analyze_flags.add_common(analyze);
  analyze_flags.add_analysis(analyze);

  ParamFlags solve_flags;
  std::vector<std::string> solve_meshes;
  CLI::App* solve = app.add_subcommand("solve", "Find one constellation shared by several meshes");
  solve->add_option("meshes", solve_meshes, "Mesh files (at least two)")->required();
  solve_flags.add_common(solve);
  solve_flags.add_analysis(solve);
  solve_flags.add_tolerances(solve);
  solve_flags.add_snap(solve);

  ParamFlags workspace_flags;
  std::vector<std::string> workspace_reports;
  CLI::App* workspace = app.add_subcommand("workspace", "Plan the adjustable gripper workspace from reports");
  workspace->add_option("reports", workspace_reports, "Report files")->required();
  workspace_flags.add_common(workspace);
  workspace_flags.add_snap(workspace);

  std::string export_report_path;
  std::string export_format = "csv";
  std::string export_out;
  std::size_t export_index = 0;
  CLI::App* exporter = app.add_subcommand("export", "Export gripping points of a report");
  exporter->add_option("report", export_report_path, "Report file")->required();
  exporter->add_option("--format", export_format, "marker-ply or csv")->capture_default_str();
  CLI::Option* index_opt =
      exporter->add_option("--constellation", export_index, "Constellation index (default: the result)");
  exporter->add_option("--out", export_out, "Output file instead of stdout");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*analyze) return run_analyze(analyze_flags, analyze_mesh, out, err);
    if (*solve) return run_solve(solve_flags, solve_meshes, out, err);
    if (*workspace) return run_workspace(workspace_flags, workspace_reports, out);
    if (*exporter) {
      const std::optional<std::size_t> which =
          index_opt->count() > 0 ? std::optional<std::size_t>(export_index) : std::nullopt;
      return run_export(export_report_path, export_format, which, export_out, out);
    }
  } catch (const NoConstellation& e) {
    err << "error: " << e.what() << "\n";
    return kExitNoConstellation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace suctiongrip
