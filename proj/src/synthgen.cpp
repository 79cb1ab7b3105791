#include "p3dc/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "p3dc/error.hpp"
#include "p3dc/rng.hpp"

namespace p3dc::synth {

namespace {

FeatureVector orthant_centroid(std::size_t dim, double radius, Rng& rng) {
  std::vector<double> v(dim);
  double sq = 0.0;
  for (double& x : v) {
    x = std::abs(rng.normal());
    sq += x * x;
  }
  const double scale = radius / std::sqrt(sq);
  for (double& x : v) x *= scale;
  return to_float(v);
}

std::vector<FeatureVector> mixed_centroids(std::size_t count, const std::vector<FeatureVector>& bases,
                                           std::size_t mix_k, Rng& rng) {
  const std::size_t nb = bases.size();
  std::vector<std::size_t> anchors(nb);
  std::iota(anchors.begin(), anchors.end(), std::size_t{0});
  for (std::size_t i = 0; i < nb; ++i) std::swap(anchors[i], anchors[i + rng.below(nb - i)]);

  std::vector<FeatureVector> out;
  out.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    const std::size_t anchor = anchors[c % nb];
    std::vector<std::size_t> others;
    for (std::size_t b = 0; b < nb; ++b) {
      if (b != anchor) others.push_back(b);
    }
    std::vector<std::size_t> parts{anchor};
    for (std::size_t i = 0; i + 1 < mix_k; ++i) {
      std::swap(others[i], others[i + rng.below(others.size() - i)]);
      parts.push_back(others[i]);
    }
    // Normalized exponentials are uniform on the simplex.
    std::vector<double> w(parts.size());
    double total = 0.0;
    for (double& x : w) {
      x = -std::log(1.0 - rng.uniform());
      total += x;
    }
    std::vector<double> mix(bases.front().size(), 0.0);
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const FeatureVector& b = bases[parts[i]];
      for (std::size_t k = 0; k < mix.size(); ++k) mix[k] += (w[i] / total) * b[k];
    }
    out.push_back(to_float(mix));
  }
  return out;
}

store::FeatureDataset sample_split(std::string name, const std::vector<FeatureVector>& centroids,
                                   const SynthConfig& cfg, double boundary_bias, Rng& rng) {
  const std::size_t dim = cfg.dim;
  const double sigma = cfg.intra_class_stddev;
  // Wilson-Hilferty median of chi-square with `dim` degrees of freedom.
  const double t = 1.0 - 2.0 / (9.0 * static_cast<double>(dim));
  const double shell_sq = sigma * sigma * static_cast<double>(dim) * t * t * t;

  std::vector<ClassId> labels;
  std::vector<float> values;
  labels.reserve(centroids.size() * cfg.samples_per_class);
  values.reserve(centroids.size() * cfg.samples_per_class * dim);
  std::vector<double> noise(dim);
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    for (std::size_t s = 0; s < cfg.samples_per_class; ++s) {
      const bool shell = boundary_bias > 0.0 && sigma > 0.0 && rng.uniform() < boundary_bias;
      for (;;) {
        double sq = 0.0;
        for (double& z : noise) {
          z = sigma * rng.normal();
          sq += z * z;
        }
        if (!shell || sq >= shell_sq) break;
      }
      for (std::size_t k = 0; k < dim; ++k) {
        double x = centroids[c][k] + noise[k];
        if (cfg.nonneg) x = std::abs(x);
        values.push_back(static_cast<float>(x));
      }
      labels.push_back(static_cast<ClassId>(c));
    }
  }
  return store::FeatureDataset(std::move(name), dim, std::move(labels), std::move(values));
}

}  // namespace

void SynthConfig::validate() const {
  if (dim == 0 || num_base_classes == 0 || num_validation_classes == 0 || num_novel_classes == 0 ||
      samples_per_class == 0) {
    throw Error(ErrorCode::Config, "synthetic counts must all be positive");
  }
  if (!(intra_class_stddev >= 0.0) || !std::isfinite(intra_class_stddev)) {
    throw Error(ErrorCode::Config, "intra_class_stddev must be finite and non-negative");
  }
  if (!(centroid_radius > 0.0)) throw Error(ErrorCode::Config, "centroid_radius must be positive");
  if (novel_mix_k < 1 || novel_mix_k > num_base_classes) {
    throw Error(ErrorCode::Config, "novel_mix_k must lie in [1, num_base_classes]");
  }
  if (!(boundary_bias >= 0.0 && boundary_bias <= 1.0)) {
    throw Error(ErrorCode::Config, "boundary_bias must lie in [0, 1]");
  }
}

SynthConfig SynthConfig::preset(std::string_view name) {
  SynthConfig cfg;
  if (name == "default") return cfg;
  if (name == "boundary-bias") {
    cfg.dim = 64;
    cfg.num_base_classes = 20;
    cfg.num_validation_classes = 10;
    cfg.num_novel_classes = 10;
    cfg.samples_per_class = 100;
    cfg.intra_class_stddev = 0.1;
    cfg.novel_mix_k = 2;
    cfg.boundary_bias = 1.0;
    cfg.seed = 20230731;
    return cfg;
  }
  if (name == "separable") {
    cfg.intra_class_stddev = 0.001;
    cfg.novel_mix_k = 1;
    cfg.seed = 7;
    return cfg;
  }
  if (name == "nway") {
    cfg.num_base_classes = 40;
    cfg.num_validation_classes = 20;
    cfg.num_novel_classes = 24;
    cfg.samples_per_class = 60;
    cfg.intra_class_stddev = 0.05;
    cfg.novel_mix_k = 2;
    cfg.seed = 11;
    return cfg;
  }
  throw Error(ErrorCode::Config, "unknown synth preset '" + std::string(name) + "'");
}

SynthData generate(const SynthConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  SynthData out;
  out.base_centroids.reserve(cfg.num_base_classes);
  for (std::size_t b = 0; b < cfg.num_base_classes; ++b) {
    out.base_centroids.push_back(orthant_centroid(cfg.dim, cfg.centroid_radius, rng));
  }
  out.validation_centroids = mixed_centroids(cfg.num_validation_classes, out.base_centroids, cfg.novel_mix_k, rng);
  out.novel_centroids = mixed_centroids(cfg.num_novel_classes, out.base_centroids, cfg.novel_mix_k, rng);

  out.base = sample_split("base", out.base_centroids, cfg, 0.0, rng);
  out.validation = sample_split("validation", out.validation_centroids, cfg, cfg.boundary_bias, rng);
  out.novel = sample_split("novel", out.novel_centroids, cfg, cfg.boundary_bias, rng);
  return out;
}

void write_store(const SynthData& data, const std::filesystem::path& dir, std::string_view name) {
  store::write_dataset(data.base, dir, name);
  store::write_dataset(data.validation, dir, name);
  store::write_dataset(data.novel, dir, name);
}

}  // namespace p3dc::synth
