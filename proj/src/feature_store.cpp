#include "p3dc/feature_store.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "json.hpp"
#include "p3dc/error.hpp"

namespace p3dc::store {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kManifestName = "manifest.json";

std::string offset_message(std::string_view what, std::size_t offset) {
  std::ostringstream os;
  os << what << " at byte offset " << offset;
  return os.str();
}

template <typename T>
void put_le(std::string& out, T value) {
  static_assert(std::is_unsigned_v<T>);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
  }
}

template <typename T>
T get_le(const unsigned char* p) {
  static_assert(std::is_unsigned_v<T>);
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(p[i]) << (8 * i);
  return value;
}

std::string read_file(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::Format, "cannot open " + file.string() + ": " + offset_message("missing file", 0));
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const fs::path& file, const std::string& bytes) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + file.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed for " + file.string());
}

}  // namespace

bool is_valid_split_name(std::string_view name) {
  return name == "base" || name == "validation" || name == "novel";
}

FeatureDataset::FeatureDataset(std::string split_name, std::size_t dim, std::vector<ClassId> labels,
                               std::vector<float> values)
    : split_name_(std::move(split_name)), dim_(dim), labels_(std::move(labels)), values_(std::move(values)) {
  if (!is_valid_split_name(split_name_)) {
    throw Error(ErrorCode::Precondition, "unknown split name '" + split_name_ + "'");
  }
  if (dim_ == 0) throw Error(ErrorCode::Precondition, "feature dimension must be positive");
  if (values_.size() != labels_.size() * dim_) {
    throw Error(ErrorCode::Precondition, "payload size does not match record count times dim");
  }
  for (std::size_t r = 0; r < labels_.size(); ++r) {
    for (float v : feature(r)) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::Data, "non-finite feature value in record " + std::to_string(r));
      }
    }
    class_index_[labels_[r]].push_back(r);
  }
}

std::vector<ClassId> FeatureDataset::class_ids() const {
  std::vector<ClassId> ids;
  ids.reserve(class_index_.size());
  for (const auto& [id, records] : class_index_) ids.push_back(id);
  return ids;
}

bool FeatureDataset::nonneg() const {
  for (float v : values_) {
    if (v < 0.0f) return false;
  }
  return true;
}

Manifest read_manifest(const fs::path& store) {
  const fs::path file = store / kManifestName;
  const std::string text = read_file(file);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Format, file.string() + ": " + offset_message("invalid JSON", e.byte));
  }
  Manifest m;
  try {
    m.format_version = j.at("format_version").get<int>();
    m.dataset = j.at("dataset").get<std::string>();
    m.dim = j.at("dim").get<std::size_t>();
    for (const auto& [name, entry] : j.at("splits").items()) {
      SplitEntry s;
      s.file = entry.at("file").get<std::string>();
      s.count = entry.at("count").get<std::size_t>();
      s.num_classes = entry.at("num_classes").get<std::size_t>();
      s.nonneg = entry.at("nonneg").get<bool>();
      m.splits.emplace(name, std::move(s));
    }
    if (auto it = j.find("class_names"); it != j.end()) {
      for (const auto& [id, label] : it->items()) {
        m.class_names.emplace(static_cast<ClassId>(std::stoul(id)), label.get<std::string>());
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Schema, file.string() + ": " + e.what());
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::Schema, file.string() + ": bad class_names key");
  }
  if (m.format_version != static_cast<int>(kFormatVersion)) {
    throw Error(ErrorCode::Schema, "unsupported format_version " + std::to_string(m.format_version));
  }
  for (const auto& [name, entry] : m.splits) {
    if (!is_valid_split_name(name)) throw Error(ErrorCode::Schema, "unknown split '" + name + "' in manifest");
  }
  return m;
}

void write_manifest(const fs::path& store, const Manifest& manifest) {
  json j;
  j["format_version"] = manifest.format_version;
  j["dataset"] = manifest.dataset;
  j["dim"] = manifest.dim;
  j["splits"] = json::object();
  for (const auto& [name, s] : manifest.splits) {
    j["splits"][name] = {{"file", s.file}, {"count", s.count}, {"num_classes", s.num_classes}, {"nonneg", s.nonneg}};
  }
  if (!manifest.class_names.empty()) {
    json names = json::object();
    for (const auto& [id, label] : manifest.class_names) names[std::to_string(id)] = label;
    j["class_names"] = std::move(names);
  }
  write_file(store / kManifestName, j.dump(2) + "\n");
}

FeatureDataset read_split_binary(const fs::path& file, std::string split_name) {
  const std::string bytes = read_file(file);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::size_t size = bytes.size();
  const std::string where = file.string() + ": ";

  if (size < kHeaderBytes) throw Error(ErrorCode::Format, where + offset_message("truncated header", size));
  if (std::memcmp(p, kMagic, 4) != 0) throw Error(ErrorCode::Format, where + offset_message("bad magic", 0));
  const auto version = get_le<std::uint32_t>(p + 4);
  if (version != kFormatVersion) {
    throw Error(ErrorCode::Format, where + offset_message("unsupported version " + std::to_string(version), 4));
  }
  const auto dim = get_le<std::uint32_t>(p + 8);
  const auto count = get_le<std::uint64_t>(p + 12);
  if (dim == 0) throw Error(ErrorCode::Format, where + offset_message("zero dimension", 8));

  const std::size_t record_bytes = 4 + 4 * static_cast<std::size_t>(dim);
  const std::size_t available = (size - kHeaderBytes) / record_bytes;
  if (count > available) {
    throw Error(ErrorCode::Format,
                where + offset_message("truncated record " + std::to_string(available), size));
  }
  const std::size_t expected = kHeaderBytes + count * record_bytes;
  if (size != expected) throw Error(ErrorCode::Format, where + offset_message("trailing bytes", expected));

  std::vector<ClassId> labels(count);
  std::vector<float> values(count * dim);
  std::size_t offset = kHeaderBytes;
  for (std::size_t r = 0; r < count; ++r) {
    labels[r] = get_le<std::uint32_t>(p + offset);
    offset += 4;
    for (std::size_t k = 0; k < dim; ++k, offset += 4) {
      const float v = std::bit_cast<float>(get_le<std::uint32_t>(p + offset));
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::Data,
                    where + offset_message("non-finite value in record " + std::to_string(r), offset));
      }
      values[r * dim + k] = v;
    }
  }
  return FeatureDataset(std::move(split_name), dim, std::move(labels), std::move(values));
}

void write_split_binary(const fs::path& file, const FeatureDataset& dataset) {
  std::string out;
  out.reserve(kHeaderBytes + dataset.size() * (4 + 4 * dataset.dim()));
  out.append(kMagic, 4);
  put_le<std::uint32_t>(out, kFormatVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(dataset.dim()));
  put_le<std::uint64_t>(out, dataset.size());
  for (std::size_t r = 0; r < dataset.size(); ++r) {
    put_le<std::uint32_t>(out, dataset.label(r));
    for (float v : dataset.feature(r)) put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(v));
  }
  write_file(file, out);
}

FeatureDataset load_dataset(const fs::path& store, std::string_view split) {
  const Manifest manifest = read_manifest(store);
  const auto it = manifest.splits.find(std::string(split));
  if (it == manifest.splits.end()) {
    throw Error(ErrorCode::Schema, "split '" + std::string(split) + "' not listed in manifest");
  }
  const SplitEntry& entry = it->second;
  FeatureDataset ds = read_split_binary(store / entry.file, std::string(split));

  if (ds.dim() != manifest.dim) {
    throw Error(ErrorCode::Schema, "manifest dim " + std::to_string(manifest.dim) + " but binary dim " +
                                       std::to_string(ds.dim()) + " in " + entry.file);
  }
  if (ds.size() != entry.count) {
    throw Error(ErrorCode::Schema, "manifest count " + std::to_string(entry.count) + " but binary holds " +
                                       std::to_string(ds.size()) + " records in " + entry.file);
  }
  if (ds.num_classes() != entry.num_classes) {
    throw Error(ErrorCode::Schema, "manifest num_classes " + std::to_string(entry.num_classes) +
                                       " but binary holds " + std::to_string(ds.num_classes()) + " classes");
  }
  if (entry.nonneg) {
    for (std::size_t r = 0; r < ds.size(); ++r) {
      for (float v : ds.feature(r)) {
        if (v < 0.0f) {
          throw Error(ErrorCode::Data, "manifest declares nonneg but record " + std::to_string(r) +
                                           " has a negative entry");
        }
      }
    }
  }
  return ds;
}

void write_dataset(const FeatureDataset& dataset, const fs::path& store, std::string_view dataset_name) {
  std::error_code ec;
  fs::create_directories(store, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + store.string() + ": " + ec.message());

  Manifest manifest;
  if (fs::exists(store / kManifestName)) {
    manifest = read_manifest(store);
    if (!manifest.splits.empty() && manifest.dim != dataset.dim()) {
      throw Error(ErrorCode::Schema, "store dim " + std::to_string(manifest.dim) + " differs from dataset dim " +
                                         std::to_string(dataset.dim()));
    }
  }
  manifest.dim = dataset.dim();
  if (!dataset_name.empty()) manifest.dataset = dataset_name;

  SplitEntry entry;
  entry.file = dataset.split_name() + ".bin";
  entry.count = dataset.size();
  entry.num_classes = dataset.num_classes();
  entry.nonneg = dataset.nonneg();
  write_split_binary(store / entry.file, dataset);
  manifest.splits[dataset.split_name()] = entry;
  write_manifest(store, manifest);
}

BasePrototypeSet::BasePrototypeSet(std::size_t dim, std::vector<ClassId> class_ids, std::vector<float> values,
                                   FeatureVector global_mean)
    : dim_(dim), class_ids_(std::move(class_ids)), values_(std::move(values)), global_mean_(std::move(global_mean)) {
  if (values_.size() != class_ids_.size() * dim_ || global_mean_.size() != dim_) {
    throw Error(ErrorCode::Precondition, "prototype buffer does not match class count times dim");
  }
}

BasePrototypeSet compute_base_prototypes(const FeatureDataset& base) {
  if (base.empty()) throw Error(ErrorCode::Precondition, "base split is empty");
  const std::size_t dim = base.dim();

  std::vector<ClassId> ids;
  std::vector<float> values;
  ids.reserve(base.num_classes());
  values.reserve(base.num_classes() * dim);
  std::vector<double> total(dim, 0.0);
  std::vector<double> acc(dim);

  for (const auto& [id, records] : base.class_index()) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t r : records) {
      const FeatureView f = base.feature(r);
      for (std::size_t k = 0; k < dim; ++k) acc[k] += f[k];
    }
    ids.push_back(id);
    const double n = static_cast<double>(records.size());
    for (std::size_t k = 0; k < dim; ++k) values.push_back(static_cast<float>(acc[k] / n));
  }
  for (std::size_t r = 0; r < base.size(); ++r) {
    const FeatureView f = base.feature(r);
    for (std::size_t k = 0; k < dim; ++k) total[k] += f[k];
  }
  for (double& t : total) t /= static_cast<double>(base.size());
  return BasePrototypeSet(dim, std::move(ids), std::move(values), to_float(total));
}

FeatureDataset prototypes_as_dataset(const BasePrototypeSet& protos) {
  std::vector<float> values;
  values.reserve(protos.size() * protos.dim());
  for (std::size_t j = 0; j < protos.size(); ++j) {
    const FeatureView p = protos.prototype(j);
    values.insert(values.end(), p.begin(), p.end());
  }
  return FeatureDataset("base", protos.dim(), protos.class_ids(), std::move(values));
}

}  // namespace p3dc::store
