#include "p3dc/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "p3dc/error.hpp"

namespace p3dc::sweep {

SweepGrid::SweepGrid(double step) : step_(step), levels_(0) {
  if (!(step > 0.0) || step > 1.0) throw Error(ErrorCode::Config, "sweep step must lie in (0, 1]");
  const double levels = 1.0 / step;
  const double rounded = std::round(levels);
  if (std::abs(levels - rounded) > 1e-9) throw Error(ErrorCode::Config, "sweep step must divide 1 evenly");
  levels_ = static_cast<std::size_t>(rounded);
  for (std::size_t i = 0; i <= levels_; ++i) {
    for (std::size_t j = 0; i + j <= levels_; ++j) {
      const double denom = static_cast<double>(levels_);
      points_.push_back({i, j, static_cast<double>(i) / denom, static_cast<double>(j) / denom});
    }
  }
}

std::pair<double, double> select_best(const SweepResult& result) {
  if (result.entries.empty()) throw Error(ErrorCode::Precondition, "sweep has no entries");
  const SweepEntry* best = &result.entries.front();
  for (const SweepEntry& e : result.entries) {
    const double sum = e.point.alpha + e.point.beta;
    const double best_sum = best->point.alpha + best->point.beta;
    if (e.mean > best->mean) {
      best = &e;
    } else if (e.mean == best->mean) {
      if (sum < best_sum - 1e-12 || (std::abs(sum - best_sum) <= 1e-12 && e.point.beta < best->point.beta)) {
        best = &e;
      }
    }
  }
  return {best->point.alpha, best->point.beta};
}

SweepResult grid_sweep(const store::FeatureDataset& validation, const store::BasePrototypeSet& protos,
                       const SweepGrid& grid, const nn::PredictMode& mode, const episode::EvalParams& params) {
  if (mode.transform != nn::Transform::P3DC) throw Error(ErrorCode::Config, "sweep requires the p3dc mode");
  episode::validate_params(params);
  nn::PredictMode base = mode;
  base.calib.alpha = 0.0;
  base.calib.beta = 0.0;
  episode::validate_mode(base);

  const auto& points = grid.points();
  // accuracy[p][t]: task t evaluated at grid point p.
  std::vector<std::vector<double>> accuracy(points.size(), std::vector<double>(params.tasks));

  episode::parallel_for(params.tasks, params.threads, [&](std::size_t t) {
    try {
      Rng rng(task_seed(params.seed, t));
      const episode::Episode ep = episode::sample_episode(validation, params.way, params.shot, params.queries, rng);
      episode::EncodedTask task;
      episode::encode_support(task, ep, protos, base);
      episode::encode_queries(task, ep, protos, base);
      const double total = static_cast<double>(ep.query.size());
      for (std::size_t p = 0; p < points.size(); ++p) {
        episode::set_calibration_weights(task, points[p].alpha, points[p].beta);
        accuracy[p][t] = static_cast<double>(episode::count_correct(task, base)) / total;
      }
    } catch (const Error& e) {
      throw Error(e.code(), "task " + std::to_string(t) + " (seed " + std::to_string(params.seed) + "): " + e.what());
    }
  });

  SweepResult result;
  result.entries.reserve(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    const episode::Interval ci = episode::confidence_interval(accuracy[p]);
    result.entries.push_back({points[p], ci.mean, ci.halfwidth, std::move(accuracy[p])});
  }
  result.best = select_best(result);
  return result;
}

std::string heatmap_csv(const SweepResult& result) {
  std::vector<const SweepEntry*> rows;
  for (const SweepEntry& e : result.entries) rows.push_back(&e);
  std::sort(rows.begin(), rows.end(), [](const SweepEntry* a, const SweepEntry* b) {
    if (a->point.alpha != b->point.alpha) return a->point.alpha < b->point.alpha;
    return a->point.beta < b->point.beta;
  });
  std::string out = "alpha,beta,accuracy,ci95\n";
  char line[128];
  for (const SweepEntry* e : rows) {
    std::snprintf(line, sizeof line, "%.4f,%.4f,%.4f,%.4f\n", e->point.alpha, e->point.beta, e->mean, e->ci95);
    out += line;
  }
  return out;
}

void emit_heatmap_csv(const SweepResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  const std::string csv = heatmap_csv(result);
  out.write(csv.data(), static_cast<std::streamsize>(csv.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

}  // namespace p3dc::sweep
