#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "p3dc/feature_store.hpp"
#include "p3dc/vec.hpp"

namespace p3dc::calib {

using store::BasePrototypeSet;

/// What the power transform does with a negative entry under a fractional
/// exponent.
enum class NegativePolicy {
  Error,        // domain error
  ClampToZero,  // clamp and count
};

struct CalibConfig {
  double lambda = 0.5;  // Tukey exponent
  std::size_t m = 5;    // neighbors kept per support sample
  double alpha = 0.0;   // weight of the sample-level endpoint
  double beta = 0.0;    // weight of the task-level endpoint
  NegativePolicy negative_policy = NegativePolicy::Error;

  /// Throws ErrorCode::Config unless alpha, beta >= 0, alpha + beta <= 1,
  /// m >= 1 and lambda is finite.
  void validate() const;
};

/// Base prototypes ranked by inner product with one transformed support
/// feature. `indices` point into the BasePrototypeSet.
struct NeighborSet {
  std::vector<std::size_t> indices;
  std::vector<double> similarities;
};

/// Sorted, deduplicated prototype indices touched by a whole support set.
struct TaskNeighborUnion {
  std::vector<std::size_t> indices;
};

struct LabeledFeature {
  FeatureView feature;
  ClassId class_id = 0;
};

struct CalibratedSupport {
  FeatureVector original;
  FeatureVector normalized;       // unit
  FeatureVector transformed;      // power-transformed original
  FeatureVector sample_endpoint;  // unit
  FeatureVector task_endpoint;    // unit
  FeatureVector calibrated;       // unit
  ClassId class_id = 0;
  NeighborSet neighbors;
};

struct CalibratedTask {
  std::vector<CalibratedSupport> samples;
  TaskNeighborUnion task_neighbors;
  /// Entries clamped under NegativePolicy::ClampToZero.
  std::size_t clamped_entries = 0;
};

/// Throws ErrorCode::Degenerate for the zero vector.
FeatureVector l2_normalize(FeatureView v);

/// Elementwise v^lambda, or log(v) when lambda == 0.
///
/// Fractional exponents need non-negative entries and lambda == 0 needs
/// positive ones; violations raise ErrorCode::Domain unless `policy` clamps
/// negatives to zero, in which case `clamped` (if given) is incremented once
/// per clamped entry.
FeatureVector tukey_transform(FeatureView v, double lambda, NegativePolicy policy = NegativePolicy::Error,
                              std::size_t* clamped = nullptr);

/// Inner product of `x` with every prototype.
std::vector<double> similarities(FeatureView x, const BasePrototypeSet& protos);

/// The min(m, n_b) most similar prototypes by inner product, descending.
/// Equal similarities order by ascending class id.
NeighborSet top_m_prototypes(FeatureView x, const BasePrototypeSet& protos, std::size_t m);
NeighborSet top_m_from_similarities(std::span<const double> sims, const BasePrototypeSet& protos, std::size_t m);

/// Max-subtracted softmax.
std::vector<double> softmax(std::span<const double> logits);

/// Softmax of <x, p_j> over `subset`, aligned with `subset`.
std::vector<double> softmax_weights(FeatureView x, const BasePrototypeSet& protos,
                                    std::span<const std::size_t> subset);

/// x + sum_j w_j p_j over the sample's own neighbors (unnormalized).
FeatureVector sample_level_endpoint(FeatureView x, const BasePrototypeSet& protos, const NeighborSet& neighbors);

TaskNeighborUnion task_union(std::span<const NeighborSet> neighbor_sets);

/// x + sum_j w_j p_j over the task union (unnormalized).
FeatureVector task_level_endpoint(FeatureView x, const BasePrototypeSet& protos, const TaskNeighborUnion& task);

/// normalize((1 - alpha - beta) xbar + alpha sbar + beta tbar).
///
/// At the three corners of the triangle the matching vertex is returned
/// unchanged, so e.g. (0, 0) yields `xbar` bit for bit.
FeatureVector unified_calibrate(FeatureView xbar, FeatureView sbar, FeatureView tbar, double alpha, double beta);

/// Runs the full support calibration: normalize, transform, pick neighbors,
/// form both endpoints over the task union, then combine with cfg.alpha and
/// cfg.beta. Errors carry the index of the offending sample.
CalibratedTask calibrate_support_set(std::span<const LabeledFeature> support, const BasePrototypeSet& protos,
                                     const CalibConfig& cfg);

/// Recomputes only `calibrated` for new barycentric weights; the endpoints are
/// independent of alpha and beta.
void recombine(CalibratedTask& task, double alpha, double beta);

}  // namespace p3dc::calib
