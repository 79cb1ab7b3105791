#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "p3dc/calib.hpp"
#include "p3dc/feature_store.hpp"
#include "p3dc/vec.hpp"

namespace p3dc::nn {

using calib::CalibConfig;
using store::BasePrototypeSet;

/// Feature treatment applied to support (and matching treatment to queries).
enum class Transform {
  RawNN,    // raw features, inner-product scoring
  L2N,      // L2 normalization
  CL2N,     // center on the base mean, then L2 normalize
  DCStyle,  // power transform + equal-weight top-M prototype shift
  P3DC,     // prior-driven discrete calibration
};

enum class PrototypeMode { Average, Attentive };

enum class Similarity { Cosine, InnerProduct };

std::string_view to_string(Transform t);
std::string_view to_string(PrototypeMode p);
/// Accepts the CLI spellings: nn, l2n, cl2n, dc, p3dc.
Transform parse_transform(std::string_view name);
PrototypeMode parse_prototype_mode(std::string_view name);

struct PredictMode {
  Transform transform = Transform::P3DC;
  PrototypeMode prototype = PrototypeMode::Attentive;
  CalibConfig calib;  // used by DCStyle (lambda, m) and P3DC (all fields)
  /// Use the normalized query for attention logits instead of the raw one.
  bool normalized_query_attention = false;
};

struct ClassPrototype {
  ClassId class_id = 0;
  FeatureVector vector;
};

struct Prediction {
  ClassId class_id = 0;
  /// One score per prototype, in the order the prototypes were given.
  std::vector<double> scores;
};

/// Softmax over <q, x_k> for the members of one class.
std::vector<double> attention_weights(FeatureView query, std::span<const FeatureVector> class_support);

/// Query-conditioned convex combination of the class's support features.
ClassPrototype attentive_prototype(FeatureView query, std::span<const FeatureVector> class_support,
                                   ClassId class_id = 0);

ClassPrototype average_prototype(std::span<const FeatureVector> class_support, ClassId class_id = 0);

/// Highest-scoring prototype wins; ties go to the smallest class id.
/// Cosine scoring normalizes the query (zero query is an error) and divides by
/// each prototype's norm; a zero prototype scores 0.
Prediction classify(FeatureView query, std::span<const ClassPrototype> prototypes,
                    Similarity similarity = Similarity::Cosine);

/// l2_normalize(v - base_mean).
FeatureVector cl2n_transform(FeatureView v, FeatureView base_mean);

/// normalize(tukey(x) + mean of tukey(x)'s top-M base prototypes).
FeatureVector dc_style_calibrate(FeatureView x, const BasePrototypeSet& protos, const CalibConfig& cfg,
                                 std::size_t* clamped = nullptr);

}  // namespace p3dc::nn
