#include "radialnet/evaluator.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <set>
#include <thread>

namespace radialnet {

namespace {

// Splits CSV text into records of fields. Quoted fields may contain commas, quotes
// ("" escape) and line breaks. Blank lines are skipped.
std::vector<std::vector<std::string>> parse_csv_records(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    if (!(record.size() == 1 && record.front().empty())) records.push_back(std::move(record));
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field_started) in_quotes = true;
        else field += c;
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        end_record();
        break;
      case '\n':
        end_record();
        break;
      default:
        field += c;
        field_started = true;
    }
  }
  if (field_started || !field.empty() || !record.empty()) end_record();
  return records;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool parse_finite(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size() && std::isfinite(out);
}

// Uniform draw in (0, 1) built from the raw 64-bit engine output; the standard
// distributions are implementation-defined and would break cross-platform output.
double open_unit(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double standard_normal(std::mt19937_64& rng) {
  const double u1 = open_unit(rng);
  const double u2 = open_unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

std::vector<std::string> Dataset::label_set() const {
  std::set<std::string> s(labels.begin(), labels.end());
  return {s.begin(), s.end()};
}

void Dataset::validate() const {
  if (values.size() != rows() * feature_count()) throw ValidationError("dataset value count does not match its shape");
  if (feature_count() == 0) throw ValidationError("dataset has no feature columns");
  if (rows() < 2) throw ValidationError("dataset needs at least 2 rows, has " + std::to_string(rows()));
  if (label_set().size() < 2) throw ValidationError("dataset needs at least 2 distinct labels");
}

CsvLoadResult load_csv(std::string_view text, std::string_view label_column) {
  auto records = parse_csv_records(text);
  if (records.empty()) throw ValidationError("CSV input has no header row");
  const auto& header = records.front();
  std::size_t label_at = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (trim(header[i]) == label_column) label_at = i;
  }
  if (label_at == header.size()) throw ValidationError("label column '" + std::string(label_column) + "' not found");

  CsvLoadResult out;
  Dataset& ds = out.dataset;
  ds.label_column = std::string(label_column);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i != label_at) ds.feature_columns.emplace_back(trim(header[i]));
  }
  for (const auto& name : ds.feature_columns) {
    if (name.empty()) throw ValidationError("CSV header has an empty column name");
  }

  std::vector<double> row_values(ds.feature_count());
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    const auto line = std::to_string(r + 1);
    if (rec.size() != header.size()) {
      out.warnings.push_back("record " + line + ": expected " + std::to_string(header.size()) + " fields, got " +
                             std::to_string(rec.size()) + "; row dropped");
      ++out.rejected_rows;
      continue;
    }
    bool ok = true;
    std::size_t col = 0;
    for (std::size_t i = 0; i < rec.size() && ok; ++i) {
      if (i == label_at) continue;
      if (!parse_finite(rec[i], row_values[col])) {
        out.warnings.push_back("record " + line + ": column '" + ds.feature_columns[col] +
                               "' is not a finite number; row dropped");
        ok = false;
      }
      ++col;
    }
    const auto label = trim(rec[label_at]);
    if (ok && label.empty()) {
      out.warnings.push_back("record " + line + ": empty label; row dropped");
      ok = false;
    }
    if (!ok) {
      ++out.rejected_rows;
      continue;
    }
    ds.values.insert(ds.values.end(), row_values.begin(), row_values.end());
    ds.labels.emplace_back(label);
  }
  if (ds.rows() < 2) throw ValidationError("CSV has fewer than 2 usable rows");
  return out;
}

std::string to_csv(const Dataset& ds) {
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  };
  std::string out;
  for (const auto& f : ds.feature_columns) out += quote(f) + ",";
  out += quote(ds.label_column) + "\n";
  char buf[64];
  for (std::size_t r = 0; r < ds.rows(); ++r) {
    for (std::size_t f = 0; f < ds.feature_count(); ++f) {
      std::snprintf(buf, sizeof(buf), "%.6f,", ds.at(r, f));
      out += buf;
    }
    out += quote(ds.labels[r]) + "\n";
  }
  return out;
}

void EvalConfig::validate() const {
  if (k_neighbours < 1) throw ConfigError("k must be >= 1");
  if (folds < 2) throw ConfigError("folds must be >= 2");
  if (max_features < 1) throw ConfigError("max_features must be >= 1");
}

double knn_accuracy(const Dataset& ds, std::span<const std::size_t> train, std::span<const std::size_t> test,
                    FeatureSubset subset, int k, bool standardize) {
  if (test.empty()) throw std::invalid_argument("knn_accuracy: empty test slice");
  if (k < 1 || static_cast<std::size_t>(k) > train.size()) {
    throw ConfigError("k = " + std::to_string(k) + " must be in 1..training size (" + std::to_string(train.size()) +
                      ")");
  }
  const auto columns = subset.indices();
  if (columns.empty()) throw std::invalid_argument("knn_accuracy: empty feature subset");
  for (auto c : columns) {
    if (c >= ds.feature_count()) throw ValidationError("feature subset refers to a column outside the dataset");
  }

  std::vector<double> mean(columns.size(), 0.0);
  std::vector<double> scale(columns.size(), 1.0);
  if (standardize) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      double sum = 0.0;
      for (auto r : train) sum += ds.at(r, columns[j]);
      mean[j] = sum / static_cast<double>(train.size());
      double ss = 0.0;
      for (auto r : train) {
        const double d = ds.at(r, columns[j]) - mean[j];
        ss += d * d;
      }
      const double sd = std::sqrt(ss / static_cast<double>(train.size()));
      scale[j] = sd > 0.0 ? sd : 1.0;
    }
  }

  // Label ids follow lexicographic order, so "smallest id" is the vote tie-break.
  const auto label_names = ds.label_set();
  std::map<std::string, int> label_id;
  for (std::size_t i = 0; i < label_names.size(); ++i) label_id.emplace(label_names[i], static_cast<int>(i));

  auto project = [&](std::size_t row, std::vector<double>& out) {
    for (std::size_t j = 0; j < columns.size(); ++j) out[j] = (ds.at(row, columns[j]) - mean[j]) / scale[j];
  };
  std::vector<double> train_proj(train.size() * columns.size());
  std::vector<double> tmp(columns.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    project(train[i], tmp);
    std::copy(tmp.begin(), tmp.end(), train_proj.begin() + static_cast<std::ptrdiff_t>(i * columns.size()));
  }

  std::vector<std::pair<double, std::size_t>> dist(train.size());
  std::vector<int> votes(label_names.size());
  std::size_t correct = 0;
  for (auto t : test) {
    project(t, tmp);
    for (std::size_t i = 0; i < train.size(); ++i) {
      double d2 = 0.0;
      for (std::size_t j = 0; j < columns.size(); ++j) {
        const double d = train_proj[i * columns.size() + j] - tmp[j];
        d2 += d * d;
      }
      dist[i] = {d2, train[i]};
    }
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
    std::fill(votes.begin(), votes.end(), 0);
    for (int i = 0; i < k; ++i) {
      // dist[i].second is a dataset row index.
      ++votes[static_cast<std::size_t>(label_id.at(ds.labels[dist[static_cast<std::size_t>(i)].second]))];
    }
    const auto best = static_cast<std::size_t>(std::max_element(votes.begin(), votes.end()) - votes.begin());
    if (label_names[best] == ds.labels[t]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

std::vector<int> assign_folds(const Dataset& ds, int folds, std::uint64_t seed) {
  if (folds < 2) throw ConfigError("folds must be >= 2");
  if (static_cast<std::size_t>(folds) > ds.rows()) {
    throw ConfigError("folds (" + std::to_string(folds) + ") exceed the number of rows (" + std::to_string(ds.rows()) +
                      ")");
  }
  std::map<std::string, std::vector<std::size_t>> by_label;
  for (std::size_t r = 0; r < ds.rows(); ++r) by_label[ds.labels[r]].push_back(r);

  std::mt19937_64 rng(seed);
  std::vector<int> fold_of(ds.rows(), 0);
  std::size_t dealt = 0;
  for (auto& [label, rows] : by_label) {
    for (std::size_t i = rows.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(rng() % i);
      std::swap(rows[i - 1], rows[j]);
    }
    for (auto r : rows) fold_of[r] = static_cast<int>(dealt++ % static_cast<std::size_t>(folds));
  }
  return fold_of;
}

double cross_validate(const Dataset& ds, FeatureSubset subset, const EvalConfig& cfg) {
  cfg.validate();
  const auto fold_of = assign_folds(ds, cfg.folds, cfg.seed);
  return cross_validate(ds, subset, cfg, fold_of);
}

double cross_validate(const Dataset& ds, FeatureSubset subset, const EvalConfig& cfg, std::span<const int> fold_of) {
  cfg.validate();
  if (fold_of.size() != ds.rows()) throw std::invalid_argument("cross_validate: fold assignment size mismatch");
  double total = 0.0;
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  for (int f = 0; f < cfg.folds; ++f) {
    train.clear();
    test.clear();
    for (std::size_t r = 0; r < ds.rows(); ++r) (fold_of[r] == f ? test : train).push_back(r);
    if (train.empty()) throw ValidationError("fold " + std::to_string(f) + " leaves an empty training set");
    if (test.empty()) throw ValidationError("fold " + std::to_string(f) + " has no test rows");
    total += knn_accuracy(ds, train, test, subset, cfg.k_neighbours, cfg.standardize);
  }
  return total / static_cast<double>(cfg.folds);
}

ModelTable evaluate_all_subsets(const Dataset& ds, const EvalConfig& cfg, bool allow_many_features) {
  cfg.validate();
  ds.validate();
  const auto n = ds.feature_count();
  if (n > static_cast<std::size_t>(cfg.max_features) && !allow_many_features) {
    throw ConfigError("dataset has " + std::to_string(n) + " features, above the limit of " +
                      std::to_string(cfg.max_features) + " (" + std::to_string(model_count(static_cast<int>(
                                                                     std::min<std::size_t>(n, 63)))) +
                      " models); raise the limit or override explicitly");
  }
  if (n > 30) throw ConfigError("exhaustive subset evaluation is limited to 30 features");

  const auto fold_of = assign_folds(ds, cfg.folds, cfg.seed);
  std::vector<FeatureSubset> subsets;
  for (std::uint64_t bits = 1; bits <= model_count(static_cast<int>(n)); ++bits) {
    subsets.push_back(FeatureSubset::from_bits(bits));
  }
  std::sort(subsets.begin(), subsets.end(), canonical_subset_less);

  std::vector<double> scores(subsets.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (auto i = next.fetch_add(1); i < subsets.size(); i = next.fetch_add(1)) {
        scores[i] = cross_validate(ds, subsets[i], cfg, fold_of);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = subsets.size();
    }
  };
  unsigned threads = cfg.threads ? cfg.threads : std::max(1U, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(subsets.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<RawEntry> entries;
  entries.reserve(subsets.size());
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    std::vector<std::string> names;
    for (auto f : subsets[i].indices()) names.push_back(ds.feature_columns[f]);
    entries.push_back({std::move(names), scores[i]});
  }
  TableMeta meta{"knn (k=" + std::to_string(cfg.k_neighbours) + ", folds=" + std::to_string(cfg.folds) +
                     ", seed=" + std::to_string(cfg.seed) + ")",
                 ds.name};
  return validate_table(ds.feature_columns, entries, std::move(meta)).table;
}

Dataset make_synthetic_dataset(const std::vector<std::string>& names, const std::vector<double>& separations,
                               std::size_t rows, std::uint64_t seed) {
  if (names.size() != separations.size()) throw std::invalid_argument("one separation per feature required");
  Dataset ds;
  ds.feature_columns = names;
  ds.label_column = "label";
  std::mt19937_64 rng(seed);
  ds.values.reserve(rows * names.size());
  for (std::size_t r = 0; r < rows; ++r) {
    const bool positive = r % 2 == 1;
    for (double sep : separations) ds.values.push_back((positive ? sep : -sep) / 2.0 + standard_normal(rng));
    ds.labels.emplace_back(positive ? "B" : "A");
  }
  return ds;
}

}  // namespace radialnet
