// Acceptance suite. `acceptance` runs every criterion; `acceptance N` runs one.
// Each criterion prints a single PASS/FAIL line.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "shapes.hpp"
#include "suctiongrip/cli.hpp"
#include "suctiongrip/constellation.hpp"
#include "suctiongrip/errors.hpp"
#include "suctiongrip/report.hpp"
#include "suctiongrip/workspace.hpp"

using namespace suctiongrip;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
  std::string report;  // compared bytewise across runs
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), f, a);
  return buf;
}

std::string num17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  return run_cli(args, out, err);
}

// ---- test-side oracles -----------------------------------------------------

double sphere_sag(double radius, double cup_radius) {
  return radius - std::sqrt(radius * radius - cup_radius * cup_radius);
}

double oracle_point_line(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const Vec3 ap = p - a;
  const double cx = ap.y() * ab.z() - ap.z() * ab.y();
  const double cy = ap.z() * ab.x() - ap.x() * ab.z();
  const double cz = ap.x() * ab.y() - ap.y() * ab.x();
  return std::sqrt(cx * cx + cy * cy + cz * cz) / std::sqrt(ab.dot(ab));
}

bool oracle_spacing(const std::vector<Vec3>& pts, double min_spacing) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if ((pts[i] - pts[j]).norm() < min_spacing - 1e-9) return false;
    }
  }
  return true;
}

// Farthest pair, first in index order; every point's distance to its line is
// compared with the minimum offset.
double oracle_line_offset(const std::vector<Vec3>& pts) {
  std::size_t a = 0, b = 1;
  double best = -1.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double d = (pts[i] - pts[j]).squaredNorm();
      if (d > best) {
        best = d;
        a = i;
        b = j;
      }
    }
  }
  double off = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i != a && i != b) off = std::max(off, oracle_point_line(pts[i], pts[a], pts[b]));
  }
  return off;
}

// Projection along -z gravity: hull edges are pairs with every other point on
// the left; clearance is the smallest distance to such an edge.
double oracle_clearance_xy(const std::vector<Vec3>& pts, const Vec3& com) {
  double clearance = 1e300;
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double ex = pts[j].x() - pts[i].x(), ey = pts[j].y() - pts[i].y();
      bool hull_edge = true;
      for (std::size_t k = 0; k < n && hull_edge; ++k) {
        if (k == i || k == j) continue;
        const double c = ex * (pts[k].y() - pts[i].y()) - ey * (pts[k].x() - pts[i].x());
        if (c < 0) hull_edge = false;
      }
      if (!hull_edge) continue;
      const double c = ex * (com.y() - pts[i].y()) - ey * (com.x() - pts[i].x());
      clearance = std::min(clearance, c / std::hypot(ex, ey));
    }
  }
  return clearance;
}

double rect_distance(const Vec3& p, const double lo[2], const double hi[2]) {
  const double dx = std::max({lo[0] - p.x(), 0.0, p.x() - hi[0]});
  const double dy = std::max({lo[1] - p.y(), 0.0, p.y() - hi[1]});
  return std::hypot(dx, dy);
}

std::vector<Vec3> positions(const Json& constellation) {
  std::vector<Vec3> out;
  for (const auto& p : constellation.at("points")) out.push_back(vec3_from_json(p.at("position")));
  return out;
}

// ---- criteria ----------------------------------------------------------------

Outcome sphere_sag_oracle() {
  const auto t0 = Clock::now();
  const double radius = 200.0;
  const TriangleMesh mesh = shapes::sag_sphere(radius, 4.0);
  std::size_t cap = mesh.triangle_count();
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    if (mesh.face_normals()[t].z() > 1.0 - 1e-12) {
      cap = t;
      break;
    }
  }
  if (cap == mesh.triangle_count()) return {false, "no flat cap face", ""};
  SeedPoint seed{mesh.corner(cap, 0), mesh.face_normals()[cap], static_cast<std::uint32_t>(cap)};
  // The cap fan shares the axis vertex; use it as the cup centre.
  for (int k = 0; k < 3; ++k) {
    if (std::hypot(mesh.corner(cap, k).x(), mesh.corner(cap, k).y()) < 1e-12) seed.position = mesh.corner(cap, k);
  }

  AnalysisParams p;
  p.cup_diameter = 20.0;
  p.cone_slope = 0.0;
  p.flatness_tol = 0.3;
  const auto loose = evaluate_candidate(mesh, seed, p);
  p.flatness_tol = 0.2;
  const auto tight = evaluate_candidate(mesh, seed, p);
  const double elapsed = seconds_since(t0);

  const double analytic = sphere_sag(radius, 10.0);
  const auto* gp = std::get_if<GrippingPoint>(&loose);
  const auto* rej = std::get_if<Rejection>(&tight);
  const double measured = gp ? gp->max_abs_deviation : NAN;
  const double rel = std::abs(measured - analytic) / analytic;
  const bool pass = gp && rej && rej->reason == RejectionReason::ConeViolation && rel <= 0.02 && elapsed < 5.0;
  std::string detail = "analytic sag " + fmt("%.4f", analytic) + " mm, measured " + fmt("%.4f", measured) +
                       " mm (" + fmt("%.2f", 100 * rel) + "%), accept@0.3=" + (gp ? "yes" : "no") +
                       ", reject@0.2=" + (rej ? std::string(to_string(rej->reason)) : "no") + ", " +
                       fmt("%.2f", elapsed) + " s";
  return {pass, detail, num17(measured) + (rej ? "rejected" : "accepted")};
}

Outcome plate_end_to_end() {
  const auto dir = shapes::temp_dir("acc2");
  save_stl_binary(shapes::plate(), dir / "plate.stl");
  const auto t0 = Clock::now();
  const int code = cli({"analyze", (dir / "plate.stl").string(), "--cup-diameter", "20", "--min-spacing", "30",
                        "--cup-count", "3", "--out", (dir / "report.json").string()});
  const double elapsed = seconds_since(t0);
  if (code != 0) return {false, "analyze exited " + std::to_string(code), ""};
  const std::string text = read_file(dir / "report.json");
  const Json report = Json::parse(text);
  const Vec3 com(50, 50, 2.5);
  std::size_t checked = 0, bad = 0;
  for (const auto& c : report.at("constellations")) {
    const auto pts = positions(c);
    ++checked;
    const bool ok = pts.size() == 3 && oracle_spacing(pts, 30.0) && oracle_line_offset(pts) >= 10.0 - 1e-9 &&
                    oracle_clearance_xy(pts, com) >= 5.0 - 1e-9;
    if (!ok) ++bad;
  }
  const bool pass = checked >= 1 && bad == 0 && elapsed < 10.0;
  return {pass,
          std::to_string(checked) + " constellations re-checked, " + std::to_string(bad) + " violations, exit " +
              std::to_string(code) + ", " + fmt("%.2f", elapsed) + " s",
          text};
}

CommonResult solve_single(const TriangleMesh& mesh, const AnalysisParams& p) {
  return solve_common(std::vector<TriangleMesh>{mesh}, p, ToleranceSpec{}, 10'000);
}

Outcome rigid_equivariance() {
  const TriangleMesh plate = shapes::plate();
  AnalysisParams base;
  const CommonResult ref = solve_single(plate, base);
  if (!ref.found) return {false, "reference solve failed: " + ref.failure, ""};

  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
  double worst = 0.0;
  std::string log;
  int failures = 0;
  for (int trial = 0; trial < 20; ++trial) {
    Vec3 axis(unit(rng), unit(rng), unit(rng));
    if (axis.norm() < 1e-3) axis = Vec3::UnitZ();
    const RigidTransform t =
        RigidTransform::from_axis_angle(axis, ang(rng), Vec3(200 * unit(rng), 200 * unit(rng), 200 * unit(rng)));
    AnalysisParams p = base;
    p.approach_axis = t.apply_direction(base.approach_axis);
    p.gravity = t.apply_direction(base.gravity);
    p.raster_frame = base.raster_frame * t.rotation.transpose();
    const CommonResult r = solve_single(plate.transformed(t), p);
    if (!r.found || r.common.points.size() != ref.common.points.size()) {
      ++failures;
      continue;
    }
    for (std::size_t i = 0; i < r.common.points.size(); ++i) {
      const Vec3 expected = t.apply(ref.common.points[i].position);
      worst = std::max(worst, (r.common.points[i].position - expected).norm());
      log += num17(r.common.points[i].position.x()) + "," + num17(r.common.points[i].position.y()) + "," +
             num17(r.common.points[i].position.z()) + ";";
    }
  }
  const bool pass = failures == 0 && worst <= 1e-6;
  return {pass,
          "20 transforms, " + std::to_string(failures) + " failed solves, worst point error " + fmt("%.3g", worst) +
              " mm",
          log};
}

Outcome collinearity_equivalence() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coord(-50.0, 50.0);
  std::uniform_int_distribution<int> grid(-4, 4);
  std::uniform_int_distribution<int> kind(0, 3);
  std::uniform_real_distribution<double> offset(0.0, 30.0);
  int disagreements = 0, boundary_cases = 0;
  std::string log;
  for (int trial = 0; trial < 10'000; ++trial) {
    std::vector<Vec3> pts(3);
    const int k = kind(rng);
    for (auto& v : pts) {
      // Integer lattices produce exact ties between pair lengths.
      v = k == 0 ? Vec3(grid(rng), grid(rng), grid(rng)) * 5.0 : Vec3(coord(rng), coord(rng), coord(rng));
    }
    if (k == 1) pts[2] = pts[0] + (pts[1] - pts[0]) * 0.37 + Vec3(1e-3, 0, 0);  // nearly collinear
    if ((pts[0] - pts[1]).norm() == 0 || (pts[1] - pts[2]).norm() == 0 || (pts[0] - pts[2]).norm() == 0) {
      pts[2] += Vec3(1, 2, 3);
    }
    double min_offset = offset(rng);
    const double direct = oracle_line_offset(pts);
    if (k == 3) {
      min_offset = direct;  // exactly on the boundary
      ++boundary_cases;
    }
    const bool expected = direct >= min_offset;
    std::vector<GrippingPoint> gps(3);
    for (int i = 0; i < 3; ++i) gps[i].position = pts[i];
    const bool got = collinearity_ok(gps, min_offset);
    if (got != expected) ++disagreements;
    log += got ? '1' : '0';
  }
  return {disagreements == 0,
          "10000 triples (" + std::to_string(boundary_cases) + " on the boundary), " +
              std::to_string(disagreements) + " disagreements",
          log};
}

Outcome stability_oracle() {
  const double s = 60.0;
  const double expected = s * std::sqrt(3.0) / 6.0;
  const Vec3 com(13.0, -7.0, 2.5);
  const double circum = s / std::sqrt(3.0);
  std::vector<GrippingPoint> pts(3);
  for (int i = 0; i < 3; ++i) {
    const double a = 0.3 + 2.0 * kPi * i / 3.0;
    pts[i].position = Vec3(com.x() + circum * std::cos(a), com.y() + circum * std::sin(a), 5.0);
    pts[i].normal = Vec3::UnitZ();
  }
  const double clearance = stability_clearance(pts, com, -Vec3::UnitZ());
  ConstellationConstraints c;
  c.gravity = -Vec3::UnitZ();
  std::string log = num17(clearance) + ";";
  bool sweep_ok = true;
  for (double m : {expected - 1.0, expected - 1e-6, expected, expected + 1e-6, expected + 1.0}) {
    c.stability_margin = m;
    const bool got = stability_ok(pts, com, c);
    sweep_ok = sweep_ok && got == (m <= expected);
    log += got ? '1' : '0';
  }
  const bool pass = std::abs(clearance - expected) <= 1e-6 && sweep_ok;
  return {pass,
          "clearance " + fmt("%.6f", clearance) + " mm vs " + fmt("%.6f", expected) + " mm, margin sweep " +
              (sweep_ok ? "flips at the clearance" : "wrong"),
          log};
}

Outcome multi_workpiece() {
  const auto dir = shapes::temp_dir("acc6");
  save_stl_binary(shapes::plate("plate_a"), dir / "plate_a.stl");
  save_stl_binary(shapes::boss_plate("plate_b"), dir / "plate_b.stl");
  save_stl_binary(shapes::uv_sphere("sphere5", 5.0), dir / "sphere5.stl");

  const int code_ab = cli({"solve", (dir / "plate_a.stl").string(), (dir / "plate_b.stl").string(), "--out",
                           (dir / "ab.json").string()});
  const std::string ab_text = read_file(dir / "ab.json");
  double nearest = 1e300;
  std::size_t points = 0;
  if (code_ab == 0) {
    const Json ab = Json::parse(ab_text);
    for (const auto& a : ab.at("common").at("assignments")) {
      for (const auto& p : positions(a)) {
        nearest = std::min(nearest, rect_distance(p, shapes::kBossMin, shapes::kBossMax));
        ++points;
      }
    }
  }
  const int code_sphere = cli({"solve", (dir / "plate_a.stl").string(), (dir / "sphere5.stl").string(), "--out",
                               (dir / "sphere.json").string()});
  const std::string sphere_text = read_file(dir / "sphere.json");
  bool sphere_zero = false;
  bool named = false;
  if (!sphere_text.empty()) {
    const Json r = Json::parse(sphere_text);
    for (const auto& d : r.at("diagnostics").at("workpieces")) {
      if (d.at("name") == "sphere5") sphere_zero = d.at("candidate_count") == 0;
    }
    named = r.at("diagnostics").at("message").get<std::string>().find("sphere5") != std::string::npos;
  }
  const bool pass = code_ab == 0 && points == 6 && nearest >= 10.0 - 1e-9 && code_sphere == 3 && sphere_zero && named;
  return {pass,
          "plate A+B exit " + std::to_string(code_ab) + ", nearest point to boss " + fmt("%.3f", nearest) +
              " mm; plate+sphere exit " + std::to_string(code_sphere) + ", sphere candidates " +
              (sphere_zero ? "0" : "non-zero") + (named ? ", named in message" : ", not named"),
          ab_text + sphere_text};
}

Outcome zero_tolerance() {
  const auto dir = shapes::temp_dir("acc7");
  const TriangleMesh wavy = shapes::wavy_plate("wavy");
  save_stl_binary(wavy, dir / "a.stl");
  std::filesystem::copy_file(dir / "a.stl", dir / "b.stl");
  const std::vector<std::string> zero = {"--pos-transverse-tol", "0", "--pos-height-tol", "0",
                                         "--normal-tilt-tol", "0", "--curvature-tol", "0"};
  auto args = std::vector<std::string>{"solve", (dir / "a.stl").string(), (dir / "b.stl").string(), "--out",
                                       (dir / "same.json").string()};
  args.insert(args.end(), zero.begin(), zero.end());
  const int code_same = cli(args);
  const std::string same_text = read_file(dir / "same.json");
  if (code_same != 0) return {false, "identical meshes: exit " + std::to_string(code_same), same_text};

  // Raise the top vertex nearest to the first chosen point on the second mesh.
  const Json same = Json::parse(same_text);
  const Vec3 chosen = positions(same.at("common").at("assignments").at(1)).at(0);
  std::size_t best = 0;
  double best_d = 1e300;
  for (std::size_t v = 0; v < wavy.vertices().size(); ++v) {
    const Vec3& q = wavy.vertices()[v];
    if (q.z() < 4.0) continue;
    const double d = std::hypot(q.x() - chosen.x(), q.y() - chosen.y());
    if (d < best_d) {
      best_d = d;
      best = v;
    }
  }
  const double flatness_tol = AnalysisParams{}.flatness_tol;
  const TriangleMesh bumped = shapes::displace_vertex(wavy, best, Vec3(0, 0, 10.0 * flatness_tol));
  save_stl_binary(bumped, dir / "c.stl");

  args = {"solve", (dir / "a.stl").string(), (dir / "c.stl").string(), "--budget", "1", "--out",
          (dir / "bumped.json").string()};
  args.insert(args.end(), zero.begin(), zero.end());
  const int code_bumped = cli(args);
  const std::string bumped_text = read_file(dir / "bumped.json");

  // The chosen constellation itself no longer fits the perturbed part.
  const Constellation c = constellation_from_json(same.at("common").at("constellation"));
  const WorkpieceAnalysis ab = analyze_workpiece(load_mesh(dir / "c.stl"), AnalysisParams{});
  const MatchResult m = match_constellation(c, ab.candidates, ToleranceSpec::zero());

  const bool pass = best_d <= 10.0 && code_bumped == 3 && !m.matched;
  return {pass,
          "identical meshes exit 0; vertex " + fmt("%.2f", best_d) + " mm from the chosen centre raised by " +
              fmt("%.1f", 10.0 * flatness_tol) + " mm -> solve exit " + std::to_string(code_bumped) +
              ", chosen constellation " + (m.matched ? "still matches" : "no longer matches"),
          same_text + bumped_text};
}

Constellation make_constellation(const std::vector<Vec3>& local, const RigidTransform& pose) {
  std::vector<GrippingPoint> pts;
  for (const auto& l : local) {
    GrippingPoint g;
    g.position = pose.apply(l);
    g.normal = pose.apply_direction(Vec3::UnitZ());
    g.quality = 1.0;
    pts.push_back(g);
  }
  return canonicalize(pts);
}

Outcome workspace_planner() {
  // Arm 2 moves 15 mm outwards along its ray from the gripper axis.
  const Vec3 p0(60, 0, 0), p1(-30, 35, 0), p2(-30, -35, 0);
  const Vec3 p2_moved = p2 + 15.0 * p2.normalized();
  const RigidTransform pose_a = RigidTransform::from_axis_angle(Vec3(1, 2, 3), 0.7, Vec3(10, -20, 30));
  const RigidTransform pose_b = RigidTransform::from_axis_angle(Vec3(-2, 1, 0.5), 2.1, Vec3(-40, 5, 12));
  const Constellation a = make_constellation({p0, p1, p2}, pose_a);
  const Constellation b = make_constellation({p0, p1, p2_moved}, pose_b);

  const WorkspaceSpec family = plan_workspace({a, b}, SnapTolerance{1.0, 1.0});
  const WorkspaceSpec single = plan_workspace({a}, SnapTolerance{1.0, 1.0});
  double moving_extent = 0.0;
  int moving = 0;
  for (const auto& arm : family.per_arm) {
    if (!arm.radius_fixed) {
      moving_extent = arm.radius_extent();
      ++moving;
    }
  }
  const bool pass =
      family.dof_required == 1 && moving == 1 && std::abs(moving_extent - 15.0) <= 1e-6 && single.fixed;
  return {pass,
          "family dof_required " + std::to_string(family.dof_required) + ", radius extent " +
              fmt("%.9f", moving_extent) + " mm; single constellation fixed=" + (single.fixed ? "true" : "false"),
          dump_report(workspace_json(family)) + dump_report(workspace_json(single))};
}

// Monotonicity helpers.
std::vector<std::vector<std::size_t>> all_constellation_sets(const WorkpieceAnalysis& a, const AnalysisParams& p) {
  std::vector<std::vector<std::size_t>> sets;
  for_each_constellation(a.candidates, a.mass.center, p, [&](const Constellation&, const std::vector<std::size_t>& idx) {
    sets.push_back(idx);
    return true;
  });
  std::sort(sets.begin(), sets.end());
  return sets;
}

bool is_subset(const std::vector<std::vector<std::size_t>>& small, const std::vector<std::vector<std::size_t>>& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

Outcome monotonicity() {
  std::string log;
  std::vector<std::string> broken;

  // flatness_tol: accepted seed sets grow.
  {
    const std::vector<TriangleMesh> corpus = {shapes::plate(), shapes::boss_plate(), shapes::wavy_plate()};
    for (const auto& mesh : corpus) {
      std::vector<std::size_t> prev;
      bool first = true;
      for (double tol : {0.02, 0.05, 0.1, 0.5, 2.0}) {
        AnalysisParams p;
        p.flatness_tol = tol;
        const auto a = analyze_workpiece(mesh, p);
        std::vector<std::size_t> seeds;
        for (const auto& g : a.candidates) seeds.push_back(g.seed_index);
        std::sort(seeds.begin(), seeds.end());
        if (!first && !std::includes(seeds.begin(), seeds.end(), prev.begin(), prev.end())) {
          broken.push_back("flatness_tol on " + mesh.name());
        }
        log += std::to_string(seeds.size()) + ",";
        prev = seeds;
        first = false;
      }
    }
  }

  // min_spacing and min_line_offset: admissible constellation sets shrink.
  {
    const TriangleMesh mesh = shapes::plate();
    AnalysisParams p;
    p.raster_spacing = 10.0;
    const auto a = analyze_workpiece(mesh, p);
    std::vector<std::vector<std::size_t>> prev;
    bool first = true;
    for (double s : {20.0, 30.0, 40.0, 50.0, 60.0}) {
      AnalysisParams q = p;
      q.min_spacing = s;
      const auto sets = all_constellation_sets(a, q);
      if (!first && !is_subset(sets, prev)) broken.push_back("min_spacing");
      log += std::to_string(sets.size()) + ",";
      prev = sets;
      first = false;
    }
    first = true;
    for (double off : {0.0, 10.0, 20.0, 30.0, 40.0}) {
      AnalysisParams q = p;
      q.min_line_offset = off;
      const auto sets = all_constellation_sets(a, q);
      if (!first && !is_subset(sets, prev)) broken.push_back("min_line_offset");
      log += std::to_string(sets.size()) + ",";
      prev = sets;
      first = false;
    }
  }

  // Tolerance components: a success never turns into a failure, and the
  // winning constellation never comes later.
  {
    AnalysisParams p;
    const std::vector<TriangleMesh> pair = {
        shapes::plate(), shapes::height_field("shallow_wavy", 100, 100, 5, 41,
                                              [](double x, double y) { return 0.3 * shapes::wavy_height(x, y); })};
    std::vector<WorkpieceAnalysis> analyses;
    for (const auto& m : pair) analyses.push_back(analyze_workpiece(m, p));
    const std::vector<bool> watertight = {pair[0].watertight(), pair[1].watertight()};
    const std::vector<double> pos = {0.0, 0.25, 0.5, 1.0, 2.0};
    const std::vector<double> deg = {0.0, 0.25, 0.5, 1.0, 2.0};
    for (int component = 0; component < 4; ++component) {
      bool prev_found = false;
      std::size_t prev_tried = 0;
      bool first = true;
      for (int i = 0; i < 5; ++i) {
        ToleranceSpec tol;
        if (component == 0) tol.pos_transverse_tol = pos[i];
        if (component == 1) tol.pos_height_tol = pos[i];
        if (component == 2) tol.normal_tilt_tol = deg[i];
        if (component == 3) tol.curvature_tol = deg[i];
        const CommonResult r = solve_common(analyses, watertight, p, tol, 40);
        if (!first && prev_found && (!r.found || r.tried > prev_tried)) {
          broken.push_back("tolerance component " + std::to_string(component));
        }
        log += std::string(r.found ? "F" : "-") + std::to_string(r.tried) + ",";
        prev_found = r.found;
        prev_tried = r.tried;
        first = false;
      }
    }
  }

  // snap tolerance: required degrees of freedom never grow.
  {
    AnalysisParams p;
    const TriangleMesh mesh = shapes::plate();
    const auto a = analyze_workpiece(mesh, p);
    const auto family = enumerate_constellations(mesh, a.candidates, p, 6);
    int prev = 1 << 30;
    for (double snap : {0.0, 1.0, 5.0, 20.0, 90.0}) {
      const WorkspaceSpec ws = plan_workspace(family, SnapTolerance{snap, snap});
      if (ws.dof_required > prev) broken.push_back("snap_tol");
      log += std::to_string(ws.dof_required) + ",";
      prev = ws.dof_required;
    }
  }

  std::string detail = "flatness_tol, min_spacing, min_line_offset, 4 tolerance components, snap_tol swept [" +
                       log + "]";
  if (!broken.empty()) {
    detail += "; violated:";
    for (const auto& b : broken) detail += " " + b;
  }
  return {broken.empty(), detail, log};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list = {
      {1, "sphere sag oracle", sphere_sag_oracle},
      {2, "plate end-to-end", plate_end_to_end},
      {3, "rigid-motion equivariance", rigid_equivariance},
      {4, "collinearity oracle equivalence", collinearity_equivalence},
      {5, "stability oracle", stability_oracle},
      {6, "multi-workpiece", multi_workpiece},
      {7, "zero-tolerance degeneracy", zero_tolerance},
      {8, "workspace planner", workspace_planner},
      {10, "monotonicity suite", monotonicity},
  };
  return list;
}

Outcome determinism() {
  std::string mismatched;
  for (const auto& c : criteria()) {
    const Outcome first = c.run();
    const Outcome second = c.run();
    if (first.report != second.report || first.report.empty()) mismatched += " " + std::to_string(c.id);
  }
  return {mismatched.empty(),
          mismatched.empty() ? "criteria 1-8 and 10 reproduce byte-identical reports on a second run"
                             : "differing or empty reports for criteria" + mismatched,
          ""};
}

void print(int id, const char* name, const Outcome& o) {
  std::printf("criterion %d (%s): %s - %s\n", id, name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
  std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
  const int only = argc > 1 ? std::atoi(argv[1]) : 0;
  bool all_pass = true;
  for (int id = 1; id <= 10; ++id) {
    if (only != 0 && only != id) continue;
    Outcome o;
    const char* name = "determinism";
    try {
      if (id == 9) {
        o = determinism();
      } else {
        for (const auto& c : criteria()) {
          if (c.id == id) {
            name = c.name;
            o = c.run();
          }
        }
      }
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what(), ""};
    }
    print(id, name, o);
    all_pass = all_pass && o.pass;
  }
  return all_pass ? 0 : 1;
}
