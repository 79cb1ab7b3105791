#include "p3dc/nn_classifier.hpp"

#include <cmath>
#include <string>

#include "p3dc/error.hpp"

namespace p3dc::nn {

std::string_view to_string(Transform t) {
  switch (t) {
    case Transform::RawNN: return "nn";
    case Transform::L2N: return "l2n";
    case Transform::CL2N: return "cl2n";
    case Transform::DCStyle: return "dc";
    case Transform::P3DC: return "p3dc";
  }
  return "?";
}

std::string_view to_string(PrototypeMode p) {
  return p == PrototypeMode::Average ? "average" : "attentive";
}

Transform parse_transform(std::string_view name) {
  for (Transform t : {Transform::RawNN, Transform::L2N, Transform::CL2N, Transform::DCStyle, Transform::P3DC}) {
    if (name == to_string(t)) return t;
  }
  throw Error(ErrorCode::Config, "unknown mode '" + std::string(name) + "'");
}

PrototypeMode parse_prototype_mode(std::string_view name) {
  if (name == "average") return PrototypeMode::Average;
  if (name == "attentive") return PrototypeMode::Attentive;
  throw Error(ErrorCode::Config, "unknown prototype mode '" + std::string(name) + "'");
}

std::vector<double> attention_weights(FeatureView query, std::span<const FeatureVector> class_support) {
  if (class_support.empty()) throw Error(ErrorCode::Precondition, "class has no support features");
  std::vector<double> logits;
  logits.reserve(class_support.size());
  for (const FeatureVector& x : class_support) logits.push_back(dot(query, x));
  return calib::softmax(logits);
}

ClassPrototype attentive_prototype(FeatureView query, std::span<const FeatureVector> class_support,
                                   ClassId class_id) {
  const std::vector<double> a = attention_weights(query, class_support);
  std::vector<double> acc(class_support.front().size(), 0.0);
  for (std::size_t k = 0; k < class_support.size(); ++k) {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += a[k] * class_support[k][i];
  }
  return {class_id, to_float(acc)};
}

ClassPrototype average_prototype(std::span<const FeatureVector> class_support, ClassId class_id) {
  if (class_support.empty()) throw Error(ErrorCode::Precondition, "class has no support features");
  std::vector<double> acc(class_support.front().size(), 0.0);
  for (const FeatureVector& x : class_support) {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += x[i];
  }
  for (double& v : acc) v /= static_cast<double>(class_support.size());
  return {class_id, to_float(acc)};
}

Prediction classify(FeatureView query, std::span<const ClassPrototype> prototypes, Similarity similarity) {
  if (prototypes.empty()) throw Error(ErrorCode::Precondition, "no prototypes to classify against");
  double qnorm = 1.0;
  if (similarity == Similarity::Cosine) {
    qnorm = norm(query);
    if (!(qnorm > 0.0)) throw Error(ErrorCode::Degenerate, "cannot classify a zero query");
  }
  Prediction out;
  out.scores.reserve(prototypes.size());
  std::size_t best = 0;
  for (std::size_t n = 0; n < prototypes.size(); ++n) {
    const FeatureView p = prototypes[n].vector;
    if (p.size() != query.size()) throw Error(ErrorCode::Precondition, "prototype and query dims differ");
    double score = dot(query, p);
    if (similarity == Similarity::Cosine) {
      const double pnorm = norm(p);
      score = pnorm > 0.0 ? score / (qnorm * pnorm) : 0.0;
    }
    out.scores.push_back(score);
    const double top = out.scores[best];
    if (score > top || (score == top && prototypes[n].class_id < prototypes[best].class_id)) best = n;
  }
  out.class_id = prototypes[best].class_id;
  return out;
}

FeatureVector cl2n_transform(FeatureView v, FeatureView base_mean) {
  if (v.size() != base_mean.size()) throw Error(ErrorCode::Precondition, "base mean dim differs from feature dim");
  std::vector<double> centered(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) centered[i] = static_cast<double>(v[i]) - base_mean[i];
  double sq = 0.0;
  for (double c : centered) sq += c * c;
  const double n = std::sqrt(sq);
  if (!(n > 0.0)) throw Error(ErrorCode::Degenerate, "feature equals the base mean");
  for (double& c : centered) c /= n;
  return to_float(centered);
}

FeatureVector dc_style_calibrate(FeatureView x, const BasePrototypeSet& protos, const CalibConfig& cfg,
                                 std::size_t* clamped) {
  const FeatureVector transformed = calib::tukey_transform(x, cfg.lambda, cfg.negative_policy, clamped);
  const calib::NeighborSet near = calib::top_m_prototypes(transformed, protos, cfg.m);
  std::vector<double> acc(transformed.size(), 0.0);
  for (std::size_t j : near.indices) {
    const FeatureView p = protos.prototype(j);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += p[i];
  }
  const double count = static_cast<double>(near.indices.size());
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = transformed[i] + acc[i] / count;
  return calib::l2_normalize(to_float(acc));
}

}  // namespace p3dc::nn
