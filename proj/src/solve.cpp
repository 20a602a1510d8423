#include <sstream>

#include "suctiongrip/constellation.hpp"
#include "suctiongrip/errors.hpp"

namespace suctiongrip {

CommonResult solve_common(const std::vector<TriangleMesh>& workpieces, const AnalysisParams& params,
                          const ToleranceSpec& tol, std::size_t budget) {
  std::vector<WorkpieceAnalysis> analyses;
  std::vector<bool> watertight;
  for (const auto& mesh : workpieces) {
    analyses.push_back(analyze_workpiece(mesh, params));
    watertight.push_back(mesh.watertight());
  }
  return solve_common(analyses, watertight, params, tol, budget);
}

CommonResult solve_common(const std::vector<WorkpieceAnalysis>& analyses, const std::vector<bool>& watertight,
                          const AnalysisParams& params, const ToleranceSpec& tol, std::size_t budget) {
  params.validate();
  tol.validate();
  if (analyses.empty()) throw InvalidParams("solve needs at least one workpiece");

  CommonResult result;
  const std::size_t k = static_cast<std::size_t>(params.cup_count);
  for (std::size_t j = 0; j < analyses.size(); ++j) {
    const auto& a = analyses[j];
    WorkpieceDiagnostics d;
    d.name = a.name;
    d.seed_count = a.seed_count;
    d.candidate_count = a.candidates.size();
    d.rejections = a.rejections;
    d.roughness_exceeded = a.roughness_exceeded;
    d.watertight = j < watertight.size() ? static_cast<bool>(watertight[j]) : true;
    result.diagnostics.push_back(std::move(d));
  }

  std::ostringstream starved;
  for (const auto& d : result.diagnostics) {
    if (d.candidate_count < k) {
      starved << (starved.tellp() > 0 ? ", " : "") << "'" << d.name << "' has " << d.candidate_count
              << " candidate(s)";
    }
  }
  if (starved.tellp() > 0) {
    result.failure = "too few gripping candidates for " + std::to_string(k) + " cups: " + starved.str();
    return result;
  }

  const ConstellationConstraints constraints = ConstellationConstraints::from(params);
  const std::size_t n = analyses.size();

  const auto stats = for_each_constellation(
      analyses[0].candidates, analyses[0].mass.center, params,
      [&](const Constellation& c, const std::vector<std::size_t>&) {
        if (result.tried >= budget) return false;
        ++result.tried;

        std::vector<MatchResult> matches;
        std::size_t prefix = 1;
        for (std::size_t j = 1; j < n; ++j) {
          const auto& targets = analyses[j].candidates;
          const Vec3 com = analyses[j].mass.center;
          const AssignmentFilter admissible = [&](const std::vector<std::size_t>& assignment) {
            std::vector<GrippingPoint> pts;
            for (std::size_t idx : assignment) pts.push_back(targets[idx]);
            return constellation_ok(pts, com, constraints);
          };
          MatchResult m = match_constellation(c, targets, tol, admissible);
          if (!m.matched) break;
          matches.push_back(std::move(m));
          ++prefix;
        }

        if (!result.has_best || prefix > result.best_prefix) {
          result.has_best = true;
          result.best_prefix = prefix;
          result.common = c;
        }
        if (prefix < n) return true;

        result.found = true;
        result.common = c;
        result.per_workpiece.push_back(c);
        for (std::size_t j = 1; j < n; ++j) {
          const auto& targets = analyses[j].candidates;
          std::vector<GrippingPoint> pts;
          for (std::size_t idx : matches[j - 1].assignment) pts.push_back(targets[idx]);
          Constellation matched;
          matched.frame = frame_for(pts);
          double clearance = 0.0;
          constellation_ok(pts, analyses[j].mass.center, constraints, &clearance);
          matched.stability_score = clearance;
          matched.points = std::move(pts);
          result.per_workpiece.push_back(std::move(matched));
        }
        result.matches = std::move(matches);
        return false;
      });

  if (!result.found) {
    std::ostringstream msg;
    if (result.tried == 0) {
      msg << "no admissible constellation on '" << analyses[0].name << "'";
      if (stats.truncated) msg << " (search truncated)";
    } else {
      msg << "no common constellation after " << result.tried << " attempt(s); best attempt gripped "
          << result.best_prefix << " of " << n << " workpieces";
      if (result.best_prefix < n) msg << ", failing on '" << analyses[result.best_prefix].name << "'";
    }
    result.failure = msg.str();
  }
  return result;
}

}  // namespace suctiongrip
