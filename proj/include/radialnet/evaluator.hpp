#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "radialnet/model_table.hpp"

namespace radialnet {

/// Labelled tabular data. `values` is row-major: row i occupies
/// values[i * feature_count() .. (i + 1) * feature_count()).
struct Dataset {
  std::string name;  // provenance, copied into the model table's meta
  std::vector<std::string> feature_columns;
  std::string label_column;
  std::vector<double> values;
  std::vector<std::string> labels;

  std::size_t rows() const { return labels.size(); }
  std::size_t feature_count() const { return feature_columns.size(); }
  double at(std::size_t row, std::size_t feature) const { return values[row * feature_count() + feature]; }
  /// Sorted distinct labels.
  std::vector<std::string> label_set() const;
  /// Throws ValidationError unless there are >= 2 rows, >= 2 labels and consistent sizes.
  void validate() const;
};

struct CsvLoadResult {
  Dataset dataset;
  std::size_t rejected_rows = 0;
  std::vector<std::string> warnings;
};

/// Parses RFC-4180-style CSV with a header row. Every non-label column is a numeric
/// feature; rows with an empty or non-numeric feature cell, an empty label or a
/// wrong field count are dropped with a warning.
/// Throws ValidationError for a missing label column or fewer than two usable rows.
CsvLoadResult load_csv(std::string_view text, std::string_view label_column);

std::string to_csv(const Dataset& ds);

struct EvalConfig {
  int k_neighbours = 5;
  int folds = 5;
  std::uint64_t seed = 42;
  int max_features = 12;
  bool standardize = true;
  /// Worker threads for evaluate_all_subsets; 0 = hardware concurrency.
  unsigned threads = 0;

  /// Range checks that do not need the dataset; throws ConfigError.
  void validate() const;
};

/// Fraction of test rows whose k-NN majority vote matches their label. Distances are
/// Euclidean over the subset's columns (z-scored with training statistics when
/// `standardize`); distance ties go to the lower row index, vote ties to the
/// lexicographically smaller label.
double knn_accuracy(const Dataset& ds, std::span<const std::size_t> train, std::span<const std::size_t> test,
                    FeatureSubset subset, int k, bool standardize = true);

/// Stratified fold index per row from a seeded shuffle; depends only on labels, folds and seed.
std::vector<int> assign_folds(const Dataset& ds, int folds, std::uint64_t seed);

/// Mean per-fold k-NN accuracy.
double cross_validate(const Dataset& ds, FeatureSubset subset, const EvalConfig& cfg);
double cross_validate(const Dataset& ds, FeatureSubset subset, const EvalConfig& cfg, std::span<const int> fold_of);

/// Scores every non-empty feature subset. Throws ConfigError when the dataset has more
/// than cfg.max_features features unless `allow_many_features`.
ModelTable evaluate_all_subsets(const Dataset& ds, const EvalConfig& cfg, bool allow_many_features = false);

/// Two-class synthetic data: feature j is N(0, 1) shifted by +/- separations[j] / 2
/// according to the class. Labels alternate "A"/"B" so classes are balanced.
/// Uses its own normal sampler so output is identical on every platform.
Dataset make_synthetic_dataset(const std::vector<std::string>& names, const std::vector<double>& separations,
                               std::size_t rows, std::uint64_t seed);

}  // namespace radialnet
