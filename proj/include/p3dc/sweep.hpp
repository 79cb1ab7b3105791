#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "p3dc/episode.hpp"

namespace p3dc::sweep {

struct GridPoint {
  std::size_t alpha_steps = 0;
  std::size_t beta_steps = 0;
  double alpha = 0.0;
  double beta = 0.0;
};

/// Lattice of (alpha, beta) on the calibration triangle: both multiples of
/// `step`, alpha + beta <= 1. `step` must divide 1 into an integer count.
class SweepGrid {
 public:
  explicit SweepGrid(double step = 0.1);

  double step() const { return step_; }
  std::size_t levels() const { return levels_; }
  /// Ordered by (alpha, beta).
  const std::vector<GridPoint>& points() const { return points_; }

 private:
  double step_;
  std::size_t levels_;
  std::vector<GridPoint> points_;
};

struct SweepEntry {
  GridPoint point;
  double mean = 0.0;
  double ci95 = 0.0;
  std::vector<double> per_task_accuracy;
};

struct SweepResult {
  std::vector<SweepEntry> entries;
  std::pair<double, double> best{0.0, 0.0};
};

/// Highest mean accuracy; ties prefer the smaller alpha + beta, then the
/// smaller beta.
std::pair<double, double> select_best(const SweepResult& result);

/// Evaluates every grid point on one shared episode set. `mode` must use the
/// P3DC transform; its alpha and beta are ignored. Each task's support
/// neighbors and endpoints are computed once and reused across points.
SweepResult grid_sweep(const store::FeatureDataset& validation, const store::BasePrototypeSet& protos,
                       const SweepGrid& grid, const nn::PredictMode& mode, const episode::EvalParams& params);

/// `alpha,beta,accuracy,ci95` header, 4-decimal rows sorted by (alpha, beta).
std::string heatmap_csv(const SweepResult& result);
void emit_heatmap_csv(const SweepResult& result, const std::filesystem::path& path);

}  // namespace p3dc::sweep
