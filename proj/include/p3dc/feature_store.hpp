#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "p3dc/vec.hpp"

namespace p3dc::store {

inline constexpr std::uint32_t kFormatVersion = 1;
inline constexpr char kMagic[4] = {'P', '3', 'D', 'C'};
/// magic + version + dim + count
inline constexpr std::size_t kHeaderBytes = 4 + 4 + 4 + 8;

/// One split (base, validation or novel) of labeled feature vectors.
///
/// Records are stored row-major in a single buffer; `class_index` maps each
/// class id to its record indices in file order. Immutable once built.
class FeatureDataset {
 public:
  FeatureDataset() = default;

  /// Validates shape and finiteness and builds the class index.
  /// `values` holds `labels.size() * dim` floats.
  FeatureDataset(std::string split_name, std::size_t dim, std::vector<ClassId> labels,
                 std::vector<float> values);

  const std::string& split_name() const { return split_name_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }

  FeatureView feature(std::size_t record) const {
    return FeatureView(values_).subspan(record * dim_, dim_);
  }
  ClassId label(std::size_t record) const { return labels_[record]; }

  const std::vector<ClassId>& labels() const { return labels_; }
  const std::vector<float>& values() const { return values_; }
  const std::map<ClassId, std::vector<std::size_t>>& class_index() const { return class_index_; }

  /// Sorted distinct class ids.
  std::vector<ClassId> class_ids() const;
  std::size_t num_classes() const { return class_index_.size(); }

  /// True when no entry is negative.
  bool nonneg() const;

  friend bool operator==(const FeatureDataset&, const FeatureDataset&) = default;

 private:
  std::string split_name_;
  std::size_t dim_ = 0;
  std::vector<ClassId> labels_;
  std::vector<float> values_;
  std::map<ClassId, std::vector<std::size_t>> class_index_;
};

struct SplitEntry {
  std::string file;
  std::size_t count = 0;
  std::size_t num_classes = 0;
  bool nonneg = true;
};

/// Contents of `manifest.json`.
struct Manifest {
  int format_version = static_cast<int>(kFormatVersion);
  std::string dataset;
  std::size_t dim = 0;
  std::map<std::string, SplitEntry> splits;
  std::map<ClassId, std::string> class_names;
};

bool is_valid_split_name(std::string_view name);

Manifest read_manifest(const std::filesystem::path& store);
void write_manifest(const std::filesystem::path& store, const Manifest& manifest);

/// Parses a split binary. Errors name the byte offset of the failure.
FeatureDataset read_split_binary(const std::filesystem::path& file, std::string split_name);
void write_split_binary(const std::filesystem::path& file, const FeatureDataset& dataset);

/// Loads one split of a store directory and checks it against the manifest.
FeatureDataset load_dataset(const std::filesystem::path& store, std::string_view split);

/// Writes `<split>.bin` into `store` and adds or replaces the split's manifest
/// entry, creating the manifest if needed.
void write_dataset(const FeatureDataset& dataset, const std::filesystem::path& store,
                   std::string_view dataset_name = "");

/// Per-base-class mean features plus the mean over every base record.
class BasePrototypeSet {
 public:
  BasePrototypeSet() = default;
  BasePrototypeSet(std::size_t dim, std::vector<ClassId> class_ids, std::vector<float> values,
                   FeatureVector global_mean);

  std::size_t size() const { return class_ids_.size(); }
  bool empty() const { return class_ids_.empty(); }
  std::size_t dim() const { return dim_; }

  FeatureView prototype(std::size_t index) const {
    return FeatureView(values_).subspan(index * dim_, dim_);
  }
  ClassId class_id(std::size_t index) const { return class_ids_[index]; }
  const std::vector<ClassId>& class_ids() const { return class_ids_; }
  const FeatureVector& global_mean() const { return global_mean_; }

 private:
  std::size_t dim_ = 0;
  std::vector<ClassId> class_ids_;
  std::vector<float> values_;
  FeatureVector global_mean_;
};

/// Prototype order follows ascending class id. Sums run in record-file order
/// in double and are rounded to float once.
BasePrototypeSet compute_base_prototypes(const FeatureDataset& base);

/// Packs prototypes into a dataset (one record per class) so they can be
/// written with the split binary format.
FeatureDataset prototypes_as_dataset(const BasePrototypeSet& protos);

}  // namespace p3dc::store
