#include "p3dc/calib.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "p3dc/error.hpp"

namespace p3dc::calib {

namespace {

// Slack for alpha + beta <= 1 so decimal grid values like 0.3 + 0.7 pass.
constexpr double kSimplexSlack = 1e-12;

void check_dim(FeatureView x, const BasePrototypeSet& protos) {
  if (x.size() != protos.dim()) {
    throw Error(ErrorCode::Precondition, "feature dim " + std::to_string(x.size()) + " does not match prototype dim " +
                                             std::to_string(protos.dim()));
  }
}

void check_barycentric(double alpha, double beta, ErrorCode code) {
  if (!(alpha >= 0.0) || !(beta >= 0.0) || alpha + beta > 1.0 + kSimplexSlack) {
    throw Error(code, "alpha and beta must be non-negative with alpha + beta <= 1 (got alpha=" +
                          std::to_string(alpha) + ", beta=" + std::to_string(beta) + ")");
  }
}

// x + sum_j w_j p_j, where w is the softmax of `logits` aligned with `subset`.
FeatureVector shifted_by_prototypes(FeatureView x, const BasePrototypeSet& protos,
                                    std::span<const std::size_t> subset, std::span<const double> logits) {
  const std::vector<double> w = softmax(logits);
  std::vector<double> acc(x.begin(), x.end());
  for (std::size_t j = 0; j < subset.size(); ++j) {
    const FeatureView p = protos.prototype(subset[j]);
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += w[j] * p[k];
  }
  return to_float(acc);
}

std::vector<double> gather(std::span<const double> values, std::span<const std::size_t> subset) {
  std::vector<double> out;
  out.reserve(subset.size());
  for (std::size_t i : subset) out.push_back(values[i]);
  return out;
}

Error annotate(const Error& e, std::size_t sample) {
  return Error(e.code(), "support sample " + std::to_string(sample) + ": " + e.what());
}

}  // namespace

void CalibConfig::validate() const {
  if (!std::isfinite(lambda)) throw Error(ErrorCode::Config, "lambda must be finite");
  if (m < 1) throw Error(ErrorCode::Config, "m must be at least 1");
  check_barycentric(alpha, beta, ErrorCode::Config);
}

FeatureVector l2_normalize(FeatureView v) {
  const double n = norm(v);
  if (!(n > 0.0)) throw Error(ErrorCode::Degenerate, "cannot normalize a zero vector");
  FeatureVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = static_cast<float>(v[i] / n);
  return out;
}

FeatureVector tukey_transform(FeatureView v, double lambda, NegativePolicy policy, std::size_t* clamped) {
  const bool fractional = lambda != std::floor(lambda);
  FeatureVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double x = v[i];
    if (x < 0.0 && (fractional || lambda == 0.0)) {
      if (policy != NegativePolicy::ClampToZero) {
        throw Error(ErrorCode::Domain, "negative entry " + std::to_string(x) + " at index " + std::to_string(i) +
                                           " under fractional exponent " + std::to_string(lambda));
      }
      x = 0.0;
      if (clamped != nullptr) ++*clamped;
    }
    double y;
    if (lambda == 0.0) {
      if (!(x > 0.0)) {
        throw Error(ErrorCode::Domain, "log transform needs positive entries (index " + std::to_string(i) + ")");
      }
      y = std::log(x);
    } else if (lambda == 0.5) {
      y = std::sqrt(x);
    } else {
      y = std::pow(x, lambda);
    }
    if (!std::isfinite(y)) {
      throw Error(ErrorCode::Domain, "power transform is not finite at index " + std::to_string(i));
    }
    out[i] = static_cast<float>(y);
  }
  return out;
}

std::vector<double> similarities(FeatureView x, const BasePrototypeSet& protos) {
  check_dim(x, protos);
  std::vector<double> sims(protos.size());
  for (std::size_t j = 0; j < protos.size(); ++j) sims[j] = dot(x, protos.prototype(j));
  return sims;
}

NeighborSet top_m_from_similarities(std::span<const double> sims, const BasePrototypeSet& protos, std::size_t m) {
  if (protos.empty()) throw Error(ErrorCode::Precondition, "no base prototypes");
  if (m < 1) throw Error(ErrorCode::Precondition, "m must be at least 1");
  const std::size_t keep = std::min(m, protos.size());
  std::vector<std::size_t> order(protos.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (sims[a] != sims[b]) return sims[a] > sims[b];
                      return protos.class_id(a) < protos.class_id(b);
                    });
  order.resize(keep);
  NeighborSet out;
  out.similarities = gather(sims, order);
  out.indices = std::move(order);
  return out;
}

NeighborSet top_m_prototypes(FeatureView x, const BasePrototypeSet& protos, std::size_t m) {
  if (protos.empty()) throw Error(ErrorCode::Precondition, "no base prototypes");
  return top_m_from_similarities(similarities(x, protos), protos, m);
}

std::vector<double> softmax(std::span<const double> logits) {
  if (logits.empty()) throw Error(ErrorCode::Precondition, "softmax over an empty set");
  const double peak = *std::max_element(logits.begin(), logits.end());
  std::vector<double> w(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    w[i] = std::exp(logits[i] - peak);
    total += w[i];
  }
  for (double& v : w) v /= total;
  return w;
}

std::vector<double> softmax_weights(FeatureView x, const BasePrototypeSet& protos,
                                    std::span<const std::size_t> subset) {
  check_dim(x, protos);
  std::vector<double> logits;
  logits.reserve(subset.size());
  for (std::size_t j : subset) logits.push_back(dot(x, protos.prototype(j)));
  return softmax(logits);
}

FeatureVector sample_level_endpoint(FeatureView x, const BasePrototypeSet& protos, const NeighborSet& neighbors) {
  if (neighbors.indices.empty()) throw Error(ErrorCode::Precondition, "empty neighbor set");
  check_dim(x, protos);
  std::vector<double> logits;
  for (std::size_t j : neighbors.indices) logits.push_back(dot(x, protos.prototype(j)));
  return shifted_by_prototypes(x, protos, neighbors.indices, logits);
}

TaskNeighborUnion task_union(std::span<const NeighborSet> neighbor_sets) {
  if (neighbor_sets.empty()) throw Error(ErrorCode::Precondition, "no neighbor sets to unite");
  TaskNeighborUnion out;
  for (const NeighborSet& s : neighbor_sets) out.indices.insert(out.indices.end(), s.indices.begin(), s.indices.end());
  std::sort(out.indices.begin(), out.indices.end());
  out.indices.erase(std::unique(out.indices.begin(), out.indices.end()), out.indices.end());
  return out;
}

FeatureVector task_level_endpoint(FeatureView x, const BasePrototypeSet& protos, const TaskNeighborUnion& task) {
  if (task.indices.empty()) throw Error(ErrorCode::Precondition, "empty task union");
  check_dim(x, protos);
  std::vector<double> logits;
  for (std::size_t j : task.indices) logits.push_back(dot(x, protos.prototype(j)));
  return shifted_by_prototypes(x, protos, task.indices, logits);
}

FeatureVector unified_calibrate(FeatureView xbar, FeatureView sbar, FeatureView tbar, double alpha, double beta) {
  check_barycentric(alpha, beta, ErrorCode::Precondition);
  if (xbar.size() != sbar.size() || xbar.size() != tbar.size()) {
    throw Error(ErrorCode::Precondition, "triangle vertices differ in dimension");
  }
  if (alpha == 0.0 && beta == 0.0) return FeatureVector(xbar.begin(), xbar.end());
  if (alpha == 1.0 && beta == 0.0) return FeatureVector(sbar.begin(), sbar.end());
  if (alpha == 0.0 && beta == 1.0) return FeatureVector(tbar.begin(), tbar.end());

  const double gamma = std::max(0.0, 1.0 - alpha - beta);
  std::vector<double> mix(xbar.size());
  double sq = 0.0;
  for (std::size_t k = 0; k < mix.size(); ++k) {
    mix[k] = gamma * xbar[k] + alpha * sbar[k] + beta * tbar[k];
    sq += mix[k] * mix[k];
  }
  const double n = std::sqrt(sq);
  if (!(n > 0.0)) throw Error(ErrorCode::Degenerate, "barycentric combination is the zero vector");
  for (double& v : mix) v /= n;
  return to_float(mix);
}

CalibratedTask calibrate_support_set(std::span<const LabeledFeature> support, const BasePrototypeSet& protos,
                                     const CalibConfig& cfg) {
  cfg.validate();
  if (support.empty()) throw Error(ErrorCode::Precondition, "empty support set");
  if (protos.empty()) throw Error(ErrorCode::Precondition, "no base prototypes");

  CalibratedTask task;
  task.samples.resize(support.size());
  std::vector<std::vector<double>> sims(support.size());
  std::vector<NeighborSet> neighbor_sets(support.size());

  // Neighbors for every sample first: the task union needs all of them.
  for (std::size_t i = 0; i < support.size(); ++i) {
    CalibratedSupport& s = task.samples[i];
    try {
      check_dim(support[i].feature, protos);
      s.original.assign(support[i].feature.begin(), support[i].feature.end());
      s.class_id = support[i].class_id;
      s.normalized = l2_normalize(s.original);
      s.transformed = tukey_transform(s.original, cfg.lambda, cfg.negative_policy, &task.clamped_entries);
      sims[i] = similarities(s.transformed, protos);
      s.neighbors = top_m_from_similarities(sims[i], protos, cfg.m);
      neighbor_sets[i] = s.neighbors;
    } catch (const Error& e) {
      throw annotate(e, i);
    }
  }
  task.task_neighbors = task_union(neighbor_sets);

  for (std::size_t i = 0; i < support.size(); ++i) {
    CalibratedSupport& s = task.samples[i];
    try {
      const std::vector<double> own = gather(sims[i], s.neighbors.indices);
      s.sample_endpoint = l2_normalize(shifted_by_prototypes(s.transformed, protos, s.neighbors.indices, own));
      const std::vector<double> shared = gather(sims[i], task.task_neighbors.indices);
      s.task_endpoint = l2_normalize(shifted_by_prototypes(s.transformed, protos, task.task_neighbors.indices, shared));
      s.calibrated = unified_calibrate(s.normalized, s.sample_endpoint, s.task_endpoint, cfg.alpha, cfg.beta);
    } catch (const Error& e) {
      throw annotate(e, i);
    }
  }
  return task;
}

void recombine(CalibratedTask& task, double alpha, double beta) {
  for (std::size_t i = 0; i < task.samples.size(); ++i) {
    CalibratedSupport& s = task.samples[i];
    try {
      s.calibrated = unified_calibrate(s.normalized, s.sample_endpoint, s.task_endpoint, alpha, beta);
    } catch (const Error& e) {
      throw annotate(e, i);
    }
  }
}

}  // namespace p3dc::calib
