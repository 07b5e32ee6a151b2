#include "radialnet/model_table.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

namespace radialnet {

std::uint64_t model_count(int n) {
  if (n < 1 || n > static_cast<int>(FeatureSubset::kMaxFeatures)) {
    throw std::invalid_argument("model_count: feature count must be in 1..63, got " + std::to_string(n));
  }
  return (std::uint64_t{1} << n) - 1;
}

FeatureSubset FeatureSubset::single(std::size_t index) {
  if (index >= kMaxFeatures) throw std::out_of_range("FeatureSubset: feature index out of range");
  return FeatureSubset(std::uint64_t{1} << index);
}

FeatureSubset FeatureSubset::of(std::initializer_list<std::size_t> indices) {
  FeatureSubset s;
  for (auto i : indices) s = s.with(i);
  return s;
}

std::size_t FeatureSubset::size() const { return static_cast<std::size_t>(std::popcount(bits_)); }

bool FeatureSubset::contains(std::size_t index) const {
  return index < kMaxFeatures && ((bits_ >> index) & 1U) != 0;
}

FeatureSubset FeatureSubset::with(std::size_t index) const {
  return FeatureSubset(bits_ | single(index).bits_);
}

FeatureSubset FeatureSubset::without(std::size_t index) const {
  return FeatureSubset(bits_ & ~single(index).bits_);
}

std::vector<std::size_t> FeatureSubset::indices() const {
  std::vector<std::size_t> out;
  out.reserve(size());
  for (auto b = bits_; b != 0; b &= b - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(b)));
  return out;
}

bool canonical_subset_less(FeatureSubset a, FeatureSubset b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a.indices() < b.indices();
}

std::optional<double> ModelTable::performance(FeatureSubset subset) const {
  if (auto it = lookup_.find(subset.bits()); it != lookup_.end()) return it->second;
  return std::nullopt;
}

double ModelTable::singleton_performance(std::size_t feature) const {
  return lookup_.at(FeatureSubset::single(feature).bits());
}

std::size_t ModelTable::index_of(std::string_view name) const {
  auto it = std::find(features_.begin(), features_.end(), name);
  if (it == features_.end()) throw ValidationError("unknown feature '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - features_.begin());
}

FeatureSubset ModelTable::subset_of(const std::vector<std::string>& names) const {
  FeatureSubset s;
  for (const auto& n : names) s = s.with(index_of(n));
  return s;
}

std::vector<std::string> ModelTable::names_of(FeatureSubset subset) const {
  std::vector<std::string> out;
  for (auto i : subset.indices()) out.push_back(features_.at(i));
  return out;
}

bool ModelTable::operator==(const ModelTable& other) const {
  if (features_ != other.features_ || lookup_ != other.lookup_) return false;
  return meta_.algorithm == other.meta_.algorithm && meta_.dataset == other.meta_.dataset;
}

namespace {

std::string format_names(const std::vector<std::string>& names) {
  std::string out = "{";
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ", ";
    out += names[i];
  }
  return out + "}";
}

}  // namespace

ValidatedTable validate_table(std::vector<std::string> features, const std::vector<RawEntry>& entries,
                              TableMeta meta) {
  if (features.empty()) throw ValidationError("model table has an empty feature list");
  if (features.size() > FeatureSubset::kMaxFeatures) {
    throw ValidationError("model table has " + std::to_string(features.size()) +
                          " features; at most 63 are supported");
  }
  std::set<std::string> seen_names;
  for (const auto& f : features) {
    if (f.empty()) throw ValidationError("feature names must be non-empty");
    if (!seen_names.insert(f).second) throw ValidationError("duplicate feature name '" + f + "'");
  }

  ValidatedTable out;
  ModelTable& table = out.table;
  table.features_ = std::move(features);
  table.meta_ = std::move(meta);

  for (const auto& raw : entries) {
    if (raw.features.empty()) throw ValidationError("model entry with an empty feature list");
    FeatureSubset subset;
    for (const auto& name : raw.features) {
      auto index = table.index_of(name);
      if (subset.contains(index)) {
        throw ValidationError("model entry " + format_names(raw.features) + " lists feature '" + name +
                              "' twice");
      }
      subset = subset.with(index);
    }
    if (!std::isfinite(raw.performance)) {
      throw ValidationError("model " + format_names(raw.features) + " has a non-finite performance");
    }
    if (!table.lookup_.emplace(subset.bits(), raw.performance).second) {
      throw ValidationError("duplicate model entry for subset " + format_names(table.names_of(subset)));
    }
    if (raw.performance < 0.0 || raw.performance > 1.0) {
      out.warnings.push_back("model " + format_names(table.names_of(subset)) + " has performance " +
                             std::to_string(raw.performance) + " outside [0, 1]");
    }
  }

  const std::size_t n = table.features_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!table.contains(FeatureSubset::single(i))) {
      throw ValidationError("missing single-feature model for feature '" + table.features_[i] + "'");
    }
  }

  const std::uint64_t expected = model_count(static_cast<int>(n));
  const std::uint64_t missing = expected - table.lookup_.size();
  if (missing > 0) {
    // Listing each absent subset is only practical for modest N.
    if (n <= 20) {
      for (std::uint64_t bits = 1; bits <= expected; ++bits) {
        if (!table.lookup_.contains(bits)) {
          out.warnings.push_back("model table has no entry for subset " +
                                 format_names(table.names_of(FeatureSubset::from_bits(bits))) +
                                 "; its line is not drawn");
        }
      }
    } else {
      out.warnings.push_back("model table is missing " + std::to_string(missing) +
                             " multi-feature subsets; their lines are not drawn");
    }
  }

  table.entries_.reserve(table.lookup_.size());
  for (const auto& [bits, perf] : table.lookup_) {
    table.entries_.push_back({FeatureSubset::from_bits(bits), perf});
  }
  std::sort(table.entries_.begin(), table.entries_.end(),
            [](const ModelEntry& a, const ModelEntry& b) { return canonical_subset_less(a.subset, b.subset); });
  return out;
}

FeatureOrder::FeatureOrder(std::vector<std::size_t> by_position) : by_position_(std::move(by_position)) {
  position_of_.assign(by_position_.size(), 0);
  for (std::size_t p = 0; p < by_position_.size(); ++p) {
    if (by_position_[p] >= by_position_.size() || position_of_[by_position_[p]] != 0) {
      throw std::invalid_argument("FeatureOrder: not a permutation");
    }
    position_of_[by_position_[p]] = p + 1;
  }
}

std::vector<std::string> FeatureOrder::names(const ModelTable& table) const {
  std::vector<std::string> out;
  out.reserve(by_position_.size());
  for (auto f : by_position_) out.push_back(table.features().at(f));
  return out;
}

std::size_t FeatureOrder::outermost(FeatureSubset subset) const {
  std::size_t best = 0;
  std::size_t best_pos = 0;
  for (auto f : subset.indices()) {
    auto p = position_of(f);
    if (p > best_pos) {
      best_pos = p;
      best = f;
    }
  }
  if (best_pos == 0) throw std::invalid_argument("FeatureOrder::outermost: empty subset");
  return best;
}

FeatureOrder canonical_order(const ModelTable& table) {
  const auto& names = table.features();
  std::vector<std::size_t> idx(names.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (!table.contains(FeatureSubset::single(i))) {
      throw ValidationError("missing single-feature model for feature '" + names[i] + "'");
    }
    idx[i] = i;
  }
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const double pa = table.singleton_performance(a);
    const double pb = table.singleton_performance(b);
    if (pa != pb) return pa > pb;
    return names[a] < names[b];
  });
  return FeatureOrder(std::move(idx));
}

std::vector<std::size_t> FeaturePath::innermost_first() const {
  return {outermost_first.rbegin(), outermost_first.rend()};
}

FeatureSubset FeaturePath::subset() const {
  FeatureSubset s;
  for (auto f : outermost_first) s = s.with(f);
  return s;
}

FeaturePath canonical_path(FeatureSubset subset, const FeatureOrder& order) {
  if (subset.empty()) throw ValidationError("feature path of an empty subset");
  FeaturePath path;
  path.outermost_first = subset.indices();
  for (auto f : path.outermost_first) {
    if (f >= order.size()) {
      throw ValidationError("feature index " + std::to_string(f) + " is not part of the feature order");
    }
  }
  std::sort(path.outermost_first.begin(), path.outermost_first.end(),
            [&](std::size_t a, std::size_t b) { return order.position_of(a) > order.position_of(b); });
  return path;
}

std::vector<FeatureImportance> feature_importance_summary(const ModelTable& table) {
  const auto n = table.feature_count();
  std::vector<double> sums(n, 0.0);
  std::vector<std::size_t> counts(n, 0);
  for (const auto& e : table.entries()) {
    for (auto f : e.subset.indices()) {
      sums[f] += e.performance;
      ++counts[f];
    }
  }
  std::vector<FeatureImportance> out;
  out.reserve(n);
  for (std::size_t f = 0; f < n; ++f) {
    out.push_back({table.features()[f], sums[f] / static_cast<double>(counts[f]), counts[f]});
  }
  std::sort(out.begin(), out.end(), [](const FeatureImportance& a, const FeatureImportance& b) {
    if (a.mean_performance != b.mean_performance) return a.mean_performance > b.mean_performance;
    return a.feature < b.feature;
  });
  return out;
}

}  // namespace radialnet
