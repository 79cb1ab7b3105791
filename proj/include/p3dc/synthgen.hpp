#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "p3dc/feature_store.hpp"

namespace p3dc::synth {

struct SynthConfig {
  std::size_t dim = 64;
  std::size_t num_base_classes = 20;
  std::size_t num_validation_classes = 10;
  std::size_t num_novel_classes = 10;
  std::size_t samples_per_class = 100;
  double intra_class_stddev = 0.05;
  /// Base centroids sit on the positive orthant of the sphere of this radius.
  double centroid_radius = 1.0;
  /// Each validation/novel centroid mixes this many distinct base centroids.
  std::size_t novel_mix_k = 2;
  /// Probability that a validation/novel sample is drawn from its class's
  /// outer shell (noise norm above the median of the noise distribution).
  double boundary_bias = 0.0;
  /// Fold samples to absolute values so fractional power transforms apply.
  bool nonneg = true;
  std::uint64_t seed = 0;

  /// Throws ErrorCode::Config on zero counts, negative spread, or an
  /// impossible mixture size.
  void validate() const;

  /// Named presets: "default", "boundary-bias", "separable", "nway".
  static SynthConfig preset(std::string_view name);
};

struct SynthData {
  store::FeatureDataset base;
  store::FeatureDataset validation;
  store::FeatureDataset novel;
  std::vector<FeatureVector> base_centroids;
  std::vector<FeatureVector> validation_centroids;
  std::vector<FeatureVector> novel_centroids;
};

/// Deterministic per seed. Class ids are dense per split (0..n-1).
///
/// Mixture components: each split's classes take distinct anchor base
/// centroids while there are enough of them, plus novel_mix_k - 1 other
/// distinct bases; weights are uniform on the simplex.
SynthData generate(const SynthConfig& cfg);

/// Writes all three splits as a feature store named `name`.
void write_store(const SynthData& data, const std::filesystem::path& dir, std::string_view name = "synthetic");

}  // namespace p3dc::synth
