#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace p3dc {

/// Features live as 32-bit floats; reductions over them accumulate in double.
using FeatureVector = std::vector<float>;
using FeatureView = std::span<const float>;
using ClassId = std::uint32_t;

inline double dot(FeatureView a, FeatureView b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return acc;
}

inline double squared_norm(FeatureView v) { return dot(v, v); }

inline double norm(FeatureView v) { return std::sqrt(squared_norm(v)); }

inline FeatureVector to_float(std::span<const double> v) {
  FeatureVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = static_cast<float>(v[i]);
  return out;
}

}  // namespace p3dc
