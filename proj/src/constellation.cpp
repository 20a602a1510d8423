#include "suctiongrip/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>
#include <unordered_map>

#include "suctiongrip/errors.hpp"

namespace suctiongrip {

namespace {

Vec3 mean_normal(const std::vector<GrippingPoint>& points) {
  Vec3 n = Vec3::Zero();
  for (const auto& p : points) n += p.normal;
  if (n.norm() > 1e-9) return n.normalized();
  // Normals cancel out: fall back to the best-fit plane of the positions.
  Vec3 c = Vec3::Zero();
  for (const auto& p : points) c += p.position;
  c /= static_cast<double>(points.size());
  Mat3 cov = Mat3::Zero();
  for (const auto& p : points) cov += (p.position - c) * (p.position - c).transpose();
  Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
  return eig.eigenvectors().col(0).normalized();
}

Vec3 centroid(const std::vector<GrippingPoint>& points) {
  Vec3 c = Vec3::Zero();
  for (const auto& p : points) c += p.position;
  return c / static_cast<double>(points.size());
}

GripperFrame frame_with_reference(const std::vector<GrippingPoint>& points, std::size_t ref) {
  GripperFrame f;
  f.origin = centroid(points);
  const Vec3 z = mean_normal(points);
  Vec3 x = points[ref].position - f.origin;
  x -= x.dot(z) * z;
  if (x.norm() <= 1e-12) {
    Vec3 v;
    complete_basis(z, x, v);
  } else {
    x.normalize();
  }
  const Vec3 y = z.cross(x);
  f.axes.row(0) = x.transpose();
  f.axes.row(1) = y.transpose();
  f.axes.row(2) = z.transpose();
  return f;
}

}  // namespace

GripperFrame frame_for(const std::vector<GrippingPoint>& points) {
  if (points.empty()) throw InvalidParams("constellation needs at least one point");
  return frame_with_reference(points, 0);
}

std::pair<double, double> polar_in_frame(const GripperFrame& frame, const Vec3& p) {
  const Vec3 l = frame.to_local(p);
  double angle = rad_to_deg(std::atan2(l.y(), l.x()));
  if (angle < 0.0) angle += 360.0;
  if (angle >= 360.0) angle -= 360.0;
  return {angle, std::hypot(l.x(), l.y())};
}

Constellation canonicalize(std::vector<GrippingPoint> points, double stability_score) {
  if (points.empty()) throw InvalidParams("constellation needs at least one point");
  const Vec3 o = centroid(points);
  const Vec3 z = mean_normal(points);
  std::size_t far = 0;
  double far_d = -1.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    Vec3 d = points[i].position - o;
    d -= d.dot(z) * z;
    const double r = d.norm();
    if (r > far_d + kGeomEps * std::max(1.0, r)) {
      far_d = r;
      far = i;
    }
  }
  const GripperFrame frame = frame_with_reference(points, far);

  std::vector<std::pair<double, std::size_t>> keyed;
  for (std::size_t i = 0; i < points.size(); ++i) {
    double a = i == far ? 0.0 : polar_in_frame(frame, points[i].position).first;
    // Angles a hair below 360 belong at the end, not wrapped to zero.
    keyed.push_back({i == far ? -1.0 : a, i});
  }
  std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second < b.second;
  });

  Constellation c;
  for (const auto& [angle, idx] : keyed) c.points.push_back(points[idx]);
  c.frame = frame;
  c.stability_score = stability_score;
  return c;
}

WorkpieceAnalysis analyze_workpiece(const TriangleMesh& mesh, const AnalysisParams& params,
                                    unsigned threads) {
  params.validate();
  WorkpieceAnalysis out;
  out.name = mesh.name();
  out.mass = mass_properties(mesh);

  std::vector<SeedPoint> seeds;
  try {
    seeds = raster_sample(mesh, params.effective_raster_spacing(), params.raster_frame);
  } catch (const EmptyRaster&) {
    out.empty_raster = true;
    return out;
  }
  out.seed_count = seeds.size();

  auto kept = normal_prefilter(seeds, params.approach_axis, params.max_tilt);
  out.prefiltered_count = kept.size();
  if (seeds.size() > kept.size()) out.rejections[RejectionReason::PrefilterTilt] = seeds.size() - kept.size();

  // Grid crossings found by two sweeps coincide; evaluate each location once.
  {
    constexpr double cell = 1e-6;
    constexpr double same = 1e-7;
    std::unordered_map<std::int64_t, std::vector<std::size_t>> grid;
    const auto key = [](std::int64_t x, std::int64_t y, std::int64_t z) {
      return (x * 73856093) ^ (y * 19349663) ^ (z * 83492791);
    };
    std::vector<SeedPoint> unique;
    for (const auto& s : kept) {
      const std::int64_t cx = static_cast<std::int64_t>(std::floor(s.position.x() / cell));
      const std::int64_t cy = static_cast<std::int64_t>(std::floor(s.position.y() / cell));
      const std::int64_t cz = static_cast<std::int64_t>(std::floor(s.position.z() / cell));
      bool dup = false;
      for (int dx = -1; dx <= 1 && !dup; ++dx) {
        for (int dy = -1; dy <= 1 && !dup; ++dy) {
          for (int dz = -1; dz <= 1 && !dup; ++dz) {
            auto it = grid.find(key(cx + dx, cy + dy, cz + dz));
            if (it == grid.end()) continue;
            for (std::size_t u : it->second) {
              if ((unique[u].position - s.position).norm() <= same) {
                dup = true;
                break;
              }
            }
          }
        }
      }
      if (dup) continue;
      grid[key(cx, cy, cz)].push_back(unique.size());
      unique.push_back(s);
    }
    out.seeds = std::move(unique);
  }
  out.evaluated_count = out.seeds.size();

  if (mesh.has_roughness() && mesh.roughness() > params.roughness_limit) {
    out.roughness_exceeded = true;
    return out;
  }

  std::vector<CandidateOutcome> outcomes(out.seeds.size(), Rejection{RejectionReason::BoundaryOverhang, {}});
  unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, out.seeds.size() / 16)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < out.seeds.size(); ++i) outcomes[i] = evaluate_candidate(mesh, out.seeds[i], params);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < out.seeds.size(); i += workers) {
          outcomes[i] = evaluate_candidate(mesh, out.seeds[i], params);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (auto* gp = std::get_if<GrippingPoint>(&outcomes[i])) {
      gp->seed_index = i;
      out.candidates.push_back(*gp);
    } else {
      ++out.rejections[std::get<Rejection>(outcomes[i]).reason];
    }
  }
  // Quality is compared at 1e-9 resolution so that rounding noise cannot reorder ties.
  std::stable_sort(out.candidates.begin(), out.candidates.end(),
                   [](const GrippingPoint& a, const GrippingPoint& b) {
                     const auto qa = std::llround(a.quality * 1e9);
                     const auto qb = std::llround(b.quality * 1e9);
                     if (qa != qb) return qa > qb;
                     return a.seed_index < b.seed_index;
                   });
  return out;
}

namespace {

struct Enumerator {
  const std::vector<GrippingPoint>& candidates;
  const Vec3& com;
  const AnalysisParams& params;
  ConstellationConstraints constraints;
  const ConstellationSink& sink;
  std::size_t node_budget;
  EnumerationStats stats;
  std::vector<std::size_t> chosen;
  bool stop = false;

  void run(const std::vector<std::size_t>& pool) {
    const std::size_t k = static_cast<std::size_t>(params.cup_count);
    if (chosen.size() == k) {
      std::vector<GrippingPoint> pts;
      for (std::size_t idx : chosen) pts.push_back(candidates[idx]);
      double clearance = 0.0;
      if (constellation_ok(pts, com, constraints, &clearance)) {
        ++stats.emitted;
        if (!sink(canonicalize(std::move(pts), clearance), chosen)) stop = true;
      }
      return;
    }
    const std::size_t need = k - chosen.size();
    for (std::size_t pos = 0; pos < pool.size() && !stop; ++pos) {
      if (pool.size() - pos < need) break;
      if (++stats.nodes > node_budget) {
        stats.truncated = true;
        stop = true;
        return;
      }
      const std::size_t idx = pool[pos];
      chosen.push_back(idx);
      const std::span<const std::size_t> rest(pool.data() + pos + 1, pool.size() - pos - 1);
      run(exclusion_region(candidates, rest, candidates[idx].position, params.min_spacing));
      chosen.pop_back();
    }
  }
};

}  // namespace

EnumerationStats for_each_constellation(const std::vector<GrippingPoint>& candidates, const Vec3& com,
                                        const AnalysisParams& params, const ConstellationSink& sink,
                                        std::size_t node_budget) {
  Enumerator e{candidates, com, params, ConstellationConstraints::from(params), sink, node_budget, {}, {}};
  std::vector<std::size_t> pool(candidates.size());
  std::iota(pool.begin(), pool.end(), 0);
  e.run(pool);
  return e.stats;
}

std::vector<Constellation> enumerate_constellations(const TriangleMesh& mesh,
                                                    const std::vector<GrippingPoint>& candidates,
                                                    const AnalysisParams& params, std::size_t limit) {
  params.validate();
  const Vec3 com = center_of_mass(mesh);
  std::vector<Constellation> out;
  const auto stats = for_each_constellation(candidates, com, params,
                                            [&](const Constellation& c, const std::vector<std::size_t>&) {
                                              out.push_back(c);
                                              return out.size() < limit;
                                            });
  if (out.empty()) {
    throw NoConstellation("no admissible " + std::to_string(params.cup_count) + "-cup constellation on '" +
                          mesh.name() + "' among " + std::to_string(candidates.size()) + " candidates" +
                          (stats.truncated ? " (search truncated)" : ""));
  }
  return out;
}

}  // namespace suctiongrip
