#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "p3dc/calib.hpp"
#include "p3dc/feature_store.hpp"
#include "p3dc/nn_classifier.hpp"
#include "p3dc/rng.hpp"

namespace p3dc::episode {

using store::BasePrototypeSet;
using store::FeatureDataset;

struct EpisodeSample {
  std::size_t record = 0;  // index into the source split
  FeatureView feature;     // view into the source split
  std::uint32_t label = 0; // local label, 0..way-1
};

/// One N-way K-shot task. Features are views into the split it was drawn
/// from, which must outlive the episode.
struct Episode {
  std::size_t way = 0;
  std::size_t shot = 0;
  std::size_t queries_per_class = 0;
  std::vector<EpisodeSample> support;  // class-major, `shot` per class
  std::vector<EpisodeSample> query;    // class-major, `queries_per_class` per class
  std::vector<ClassId> class_map;      // local label -> split class id
};

/// Draw order (pinned; changing it changes every result):
///  1. classes with at least k + q records, ascending id, form the pool;
///  2. a partial Fisher-Yates shuffle of the pool picks n classes, the i-th
///     pick becoming local label i;
///  3. for each picked class in label order, a partial Fisher-Yates shuffle of
///     its record indices (file order) picks k + q records; the first k are
///     support, the rest queries.
Episode sample_episode(const FeatureDataset& split, std::size_t n, std::size_t k, std::size_t q, Rng& rng);

struct EvalParams {
  std::size_t way = 5;
  std::size_t shot = 1;
  std::size_t queries = 15;
  std::size_t tasks = 2000;
  std::uint64_t seed = 0;
  /// 0 means one per hardware thread. Results do not depend on it.
  std::size_t threads = 0;
};

/// Support and query features of one episode after the mode's transform.
struct EncodedTask {
  std::vector<std::vector<FeatureVector>> support_by_class;
  std::vector<FeatureVector> queries;          // scored against prototypes
  std::vector<FeatureVector> attention_queries;
  std::vector<std::uint32_t> query_labels;
  calib::CalibratedTask calibration;           // filled for P3DC only
};

/// Support-side work (timed as calibration).
void encode_support(EncodedTask& task, const Episode& episode, const BasePrototypeSet& protos,
                    const nn::PredictMode& mode);
/// Query-side work (timed as classification).
void encode_queries(EncodedTask& task, const Episode& episode, const BasePrototypeSet& protos,
                    const nn::PredictMode& mode);

/// Re-weights an encoded P3DC task without redoing neighbor search.
void set_calibration_weights(EncodedTask& task, double alpha, double beta);

std::size_t count_correct(const EncodedTask& task, const nn::PredictMode& mode);

struct TaskOutcome {
  double accuracy = 0.0;
  double calib_seconds = 0.0;
  double classify_seconds = 0.0;
  std::size_t clamped_entries = 0;
};

TaskOutcome run_task(const Episode& episode, const BasePrototypeSet& protos, const nn::PredictMode& mode);

struct EvalReport {
  std::vector<double> per_task_accuracy;
  double mean = 0.0;
  double ci95_halfwidth = 0.0;
  double calib_seconds_per_task = 0.0;
  double classify_seconds_per_task = 0.0;
  std::size_t clamped_entries = 0;
  nn::PredictMode mode;
  EvalParams params;
};

/// Task t draws its episode from Rng(task_seed(params.seed, t)), so serial and
/// parallel runs agree. A failing task aborts the run; the error names the
/// task index and run seed.
EvalReport evaluate(const FeatureDataset& novel, const BasePrototypeSet& protos, const nn::PredictMode& mode,
                    const EvalParams& params);

struct Interval {
  double mean = 0.0;
  double halfwidth = 0.0;
};

/// Mean and 1.96 * s / sqrt(T) with the n - 1 sample deviation. A single
/// value has halfwidth 0.
Interval confidence_interval(std::span<const double> values);

/// confidence_interval of the element-wise differences a - b.
Interval paired_difference(std::span<const double> a, std::span<const double> b);

/// Calls body(i) for every i in [0, count) on up to `threads` workers
/// (0 = hardware concurrency). Exceptions are rethrown for the lowest failing
/// index after all workers finish.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body);

void validate_params(const EvalParams& params);
void validate_mode(const nn::PredictMode& mode);

}  // namespace p3dc::episode
