#include "p3dc/episode.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "p3dc/error.hpp"

namespace p3dc::episode {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename T>
void partial_shuffle(std::vector<T>& pool, std::size_t picks, Rng& rng) {
  for (std::size_t i = 0; i < picks; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
}

FeatureVector normalized_copy(const FeatureVector& v) {
  return calib::l2_normalize(v);
}

void regroup_calibrated(EncodedTask& task) {
  for (auto& group : task.support_by_class) group.clear();
  for (const calib::CalibratedSupport& s : task.calibration.samples) {
    task.support_by_class[s.class_id].push_back(s.calibrated);
  }
}

}  // namespace

Episode sample_episode(const FeatureDataset& split, std::size_t n, std::size_t k, std::size_t q, Rng& rng) {
  if (n == 0 || k == 0) throw Error(ErrorCode::Config, "way and shot must be positive");
  const std::size_t per_class = k + q;
  std::vector<ClassId> pool;
  for (const auto& [id, records] : split.class_index()) {
    if (records.size() >= per_class) pool.push_back(id);
  }
  if (pool.size() < n) {
    throw Error(ErrorCode::Capacity, "need " + std::to_string(n) + " classes with at least " +
                                         std::to_string(per_class) + " records in split '" + split.split_name() +
                                         "', found " + std::to_string(pool.size()) + " (short by " +
                                         std::to_string(n - pool.size()) + ")");
  }
  partial_shuffle(pool, n, rng);

  Episode ep;
  ep.way = n;
  ep.shot = k;
  ep.queries_per_class = q;
  ep.class_map.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n));
  ep.support.reserve(n * k);
  ep.query.reserve(n * q);
  for (std::uint32_t label = 0; label < n; ++label) {
    std::vector<std::size_t> records = split.class_index().at(ep.class_map[label]);
    partial_shuffle(records, per_class, rng);
    for (std::size_t i = 0; i < per_class; ++i) {
      EpisodeSample s{records[i], split.feature(records[i]), label};
      (i < k ? ep.support : ep.query).push_back(s);
    }
  }
  return ep;
}

void encode_support(EncodedTask& task, const Episode& episode, const BasePrototypeSet& protos,
                    const nn::PredictMode& mode) {
  task.support_by_class.assign(episode.way, {});
  std::size_t clamped = 0;
  switch (mode.transform) {
    case nn::Transform::RawNN:
      for (const EpisodeSample& s : episode.support) {
        task.support_by_class[s.label].emplace_back(s.feature.begin(), s.feature.end());
      }
      break;
    case nn::Transform::L2N:
      for (const EpisodeSample& s : episode.support) {
        task.support_by_class[s.label].push_back(calib::l2_normalize(s.feature));
      }
      break;
    case nn::Transform::CL2N:
      for (const EpisodeSample& s : episode.support) {
        task.support_by_class[s.label].push_back(nn::cl2n_transform(s.feature, protos.global_mean()));
      }
      break;
    case nn::Transform::DCStyle:
      for (const EpisodeSample& s : episode.support) {
        task.support_by_class[s.label].push_back(nn::dc_style_calibrate(s.feature, protos, mode.calib, &clamped));
      }
      task.calibration.clamped_entries = clamped;
      break;
    case nn::Transform::P3DC: {
      std::vector<calib::LabeledFeature> support;
      support.reserve(episode.support.size());
      for (const EpisodeSample& s : episode.support) support.push_back({s.feature, s.label});
      task.calibration = calib::calibrate_support_set(support, protos, mode.calib);
      regroup_calibrated(task);
      break;
    }
  }
}

void encode_queries(EncodedTask& task, const Episode& episode, const BasePrototypeSet& protos,
                    const nn::PredictMode& mode) {
  task.queries.clear();
  task.query_labels.clear();
  for (const EpisodeSample& s : episode.query) {
    FeatureVector v;
    switch (mode.transform) {
      case nn::Transform::CL2N: {
        v.resize(s.feature.size());
        const FeatureVector& mean = protos.global_mean();
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = s.feature[i] - mean[i];
        break;
      }
      case nn::Transform::DCStyle:
        v = calib::tukey_transform(s.feature, mode.calib.lambda, mode.calib.negative_policy,
                                   &task.calibration.clamped_entries);
        break;
      default:
        v.assign(s.feature.begin(), s.feature.end());
    }
    task.queries.push_back(std::move(v));
    task.query_labels.push_back(s.label);
  }
  task.attention_queries.clear();
  if (mode.prototype == nn::PrototypeMode::Attentive && mode.normalized_query_attention) {
    for (const FeatureVector& v : task.queries) task.attention_queries.push_back(normalized_copy(v));
  }
}

void set_calibration_weights(EncodedTask& task, double alpha, double beta) {
  calib::recombine(task.calibration, alpha, beta);
  regroup_calibrated(task);
}

std::size_t count_correct(const EncodedTask& task, const nn::PredictMode& mode) {
  const nn::Similarity similarity =
      mode.transform == nn::Transform::RawNN ? nn::Similarity::InnerProduct : nn::Similarity::Cosine;
  const std::size_t way = task.support_by_class.size();
  std::vector<nn::ClassPrototype> prototypes(way);

  if (mode.prototype == nn::PrototypeMode::Average) {
    for (std::uint32_t c = 0; c < way; ++c) prototypes[c] = nn::average_prototype(task.support_by_class[c], c);
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < task.queries.size(); ++i) {
    if (mode.prototype == nn::PrototypeMode::Attentive) {
      const FeatureVector& attend = task.attention_queries.empty() ? task.queries[i] : task.attention_queries[i];
      for (std::uint32_t c = 0; c < way; ++c) {
        prototypes[c] = nn::attentive_prototype(attend, task.support_by_class[c], c);
      }
    }
    if (nn::classify(task.queries[i], prototypes, similarity).class_id == task.query_labels[i]) ++correct;
  }
  return correct;
}

TaskOutcome run_task(const Episode& episode, const BasePrototypeSet& protos, const nn::PredictMode& mode) {
  EncodedTask task;
  TaskOutcome out;

  auto start = Clock::now();
  encode_support(task, episode, protos, mode);
  out.calib_seconds = seconds_since(start);

  start = Clock::now();
  encode_queries(task, episode, protos, mode);
  const std::size_t correct = count_correct(task, mode);
  out.classify_seconds = seconds_since(start);

  out.accuracy = episode.query.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(episode.query.size());
  out.clamped_entries = task.calibration.clamped_entries;
  return out;
}

void validate_params(const EvalParams& params) {
  if (params.way < 1) throw Error(ErrorCode::Config, "way must be at least 1");
  if (params.shot < 1) throw Error(ErrorCode::Config, "shot must be at least 1");
  if (params.queries < 1) throw Error(ErrorCode::Config, "queries per class must be at least 1");
  if (params.tasks < 1) throw Error(ErrorCode::Config, "tasks must be at least 1");
}

void validate_mode(const nn::PredictMode& mode) { mode.calib.validate(); }

EvalReport evaluate(const FeatureDataset& novel, const BasePrototypeSet& protos, const nn::PredictMode& mode,
                    const EvalParams& params) {
  validate_params(params);
  validate_mode(mode);
  if (novel.dim() != protos.dim()) {
    throw Error(ErrorCode::Schema, "novel dim " + std::to_string(novel.dim()) + " differs from base dim " +
                                       std::to_string(protos.dim()));
  }

  std::vector<TaskOutcome> outcomes(params.tasks);
  parallel_for(params.tasks, params.threads, [&](std::size_t t) {
    try {
      Rng rng(task_seed(params.seed, t));
      const Episode ep = sample_episode(novel, params.way, params.shot, params.queries, rng);
      outcomes[t] = run_task(ep, protos, mode);
    } catch (const Error& e) {
      throw Error(e.code(), "task " + std::to_string(t) + " (seed " + std::to_string(params.seed) + "): " + e.what());
    }
  });

  EvalReport report;
  report.mode = mode;
  report.params = params;
  report.per_task_accuracy.reserve(outcomes.size());
  double calib = 0.0;
  double classify = 0.0;
  for (const TaskOutcome& o : outcomes) {
    report.per_task_accuracy.push_back(o.accuracy);
    calib += o.calib_seconds;
    classify += o.classify_seconds;
    report.clamped_entries += o.clamped_entries;
  }
  const Interval ci = confidence_interval(report.per_task_accuracy);
  report.mean = ci.mean;
  report.ci95_halfwidth = ci.halfwidth;
  report.calib_seconds_per_task = calib / static_cast<double>(outcomes.size());
  report.classify_seconds_per_task = classify / static_cast<double>(outcomes.size());
  return report;
}

Interval confidence_interval(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::Precondition, "confidence interval of an empty sample");
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  if (values.size() == 1) return {mean, 0.0};
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  const double sd = std::sqrt(sq / (n - 1.0));
  return {mean, 1.96 * sd / std::sqrt(n)};
}

Interval paired_difference(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::Precondition, "paired samples differ in length");
  std::vector<double> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  return confidence_interval(diff);
}

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body) {
  if (count == 0) return;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);

  std::vector<std::exception_ptr> errors(count);
  std::atomic<bool> failed{false};
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count || failed.load()) return;
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
        failed.store(true);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace p3dc::episode
