#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace radialnet {

/// Raised when input data (model tables, datasets, feature references) is malformed.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a configuration value violates its documented range.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Number of non-empty feature groups that can be formed from n features (2^n - 1).
/// Throws std::invalid_argument for n < 1 or n > 63.
std::uint64_t model_count(int n);

/// A non-empty set of features, stored as a bitmask over the owning table's
/// feature list (bit i <=> features()[i]). At most 63 features per table.
class FeatureSubset {
 public:
  static constexpr std::size_t kMaxFeatures = 63;

  constexpr FeatureSubset() = default;
  static constexpr FeatureSubset from_bits(std::uint64_t bits) { return FeatureSubset(bits); }
  static FeatureSubset single(std::size_t index);
  static FeatureSubset of(std::initializer_list<std::size_t> indices);

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  std::size_t size() const;
  bool contains(std::size_t index) const;
  FeatureSubset with(std::size_t index) const;
  FeatureSubset without(std::size_t index) const;
  /// Member indices, ascending.
  std::vector<std::size_t> indices() const;

  constexpr auto operator<=>(const FeatureSubset&) const = default;

 private:
  constexpr explicit FeatureSubset(std::uint64_t bits) : bits_(bits) {}
  std::uint64_t bits_ = 0;
};

/// Canonical listing order for subsets: by size, then lexicographically by
/// ascending member index. Matches the [F1], [F2], ..., [F1, F2], ... listing.
bool canonical_subset_less(FeatureSubset a, FeatureSubset b);

struct TableMeta {
  std::string algorithm;
  std::string dataset;
};

/// One unvalidated (feature names, score) pair as read from a file or produced by an evaluator.
struct RawEntry {
  std::vector<std::string> features;
  double performance = 0.0;
};

struct ModelEntry {
  FeatureSubset subset;
  double performance = 0.0;
};

struct ValidatedTable;

/// Map from feature subsets to performance scores. Immutable once built; only
/// validate_table() constructs one.
class ModelTable {
 public:
  const std::vector<std::string>& features() const { return features_; }
  std::size_t feature_count() const { return features_.size(); }
  /// Entries in canonical subset order.
  const std::vector<ModelEntry>& entries() const { return entries_; }
  std::optional<double> performance(FeatureSubset subset) const;
  bool contains(FeatureSubset subset) const { return lookup_.contains(subset.bits()); }
  double singleton_performance(std::size_t feature) const;

  /// Index of a feature by name; throws ValidationError when unknown.
  std::size_t index_of(std::string_view name) const;
  FeatureSubset subset_of(const std::vector<std::string>& names) const;
  std::vector<std::string> names_of(FeatureSubset subset) const;

  const TableMeta& meta() const { return meta_; }

  bool operator==(const ModelTable& other) const;

 private:
  friend ValidatedTable validate_table(std::vector<std::string>, const std::vector<RawEntry>&, TableMeta);
  std::vector<std::string> features_;
  std::vector<ModelEntry> entries_;
  std::map<std::uint64_t, double> lookup_;
  TableMeta meta_;
};

struct ValidatedTable {
  ModelTable table;
  std::vector<std::string> warnings;
};

/// Builds a ModelTable. Errors (ValidationError): empty or duplicate feature
/// names, more than 63 features, unknown or repeated feature in an entry,
/// empty entry, duplicate subset, non-finite score, missing singleton.
/// Warnings: absent multi-feature subsets, scores outside [0, 1].
ValidatedTable validate_table(std::vector<std::string> features, const std::vector<RawEntry>& entries,
                              TableMeta meta = {});

/// Features ranked by singleton performance; position 1 is the best single
/// feature and the innermost arc. Ties go to the lexicographically smaller name.
class FeatureOrder {
 public:
  FeatureOrder() = default;
  explicit FeatureOrder(std::vector<std::size_t> by_position);

  std::size_t size() const { return by_position_.size(); }
  /// Table feature index at a 1-based position.
  std::size_t feature_at(std::size_t position) const { return by_position_.at(position - 1); }
  /// 1-based position of a table feature index.
  std::size_t position_of(std::size_t feature) const { return position_of_.at(feature); }
  const std::vector<std::size_t>& features() const { return by_position_; }
  std::vector<std::string> names(const ModelTable& table) const;
  /// Highest-position (outermost) member of a subset.
  std::size_t outermost(FeatureSubset subset) const;

  bool operator==(const FeatureOrder&) const = default;

 private:
  std::vector<std::size_t> by_position_;
  std::vector<std::size_t> position_of_;
};

FeatureOrder canonical_order(const ModelTable& table);

/// Members of a subset listed outermost-first (descending position).
struct FeaturePath {
  std::vector<std::size_t> outermost_first;

  /// Innermost-first listing; the storage key used by the line recursion.
  std::vector<std::size_t> innermost_first() const;
  FeatureSubset subset() const;
  bool operator==(const FeaturePath&) const = default;
};

/// Throws ValidationError if a member is not covered by the order.
FeaturePath canonical_path(FeatureSubset subset, const FeatureOrder& order);

struct FeatureImportance {
  std::string feature;
  double mean_performance = 0.0;
  std::size_t model_count = 0;
};

/// Mean score over all models containing each feature, sorted by mean descending
/// (ties by name ascending).
std::vector<FeatureImportance> feature_importance_summary(const ModelTable& table);

}  // namespace radialnet
