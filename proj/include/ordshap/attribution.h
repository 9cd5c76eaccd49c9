/*
 * Copyright 2026 The OrdShap Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ORDSHAP_ATTRIBUTION_H_
#define ORDSHAP_ATTRIBUTION_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace ordshap {

// Maps each sequence position 1..n to a position label (a group or time
// index). Labels must be positive and non-decreasing in the position. The
// identity grouping labels position l with l.
class PositionGrouping {
 public:
  static PositionGrouping Identity(int n);
  // Throws std::invalid_argument if `labels` is empty, non-positive or
  // decreasing.
  explicit PositionGrouping(std::vector<int> labels);

  int num_positions() const { return static_cast<int>(labels_.size()); }
  int num_columns() const { return static_cast<int>(columns_.size()); }

  // g(position).
  int LabelOf(int position) const { return labels_[position - 1]; }
  // 1-based column of the position's label in the sorted label set G.
  int ColumnOf(int position) const { return column_of_[position - 1]; }

  // Sorted distinct labels G.
  const std::vector<int>& column_labels() const { return columns_; }
  // Number of positions carrying each label.
  const std::vector<int>& column_sizes() const { return sizes_; }
  const std::vector<int>& labels() const { return labels_; }

  // Mean label over positions: the centering constant for the positional
  // regressor. Equals (n + 1) / 2 for the identity grouping.
  double MeanLabel() const;
  bool IsIdentity() const;

  friend bool operator==(const PositionGrouping& a,
                         const PositionGrouping& b) {
    return a.labels_ == b.labels_;
  }

 private:
  std::vector<int> labels_;
  std::vector<int> column_of_;
  std::vector<int> columns_;
  std::vector<int> sizes_;
};

// Feature-by-position attribution matrix gamma. Row i is feature i, column c
// is the c-th position label of the grouping. Unvisited cells (possible for
// sampled estimates) hold no value.
class OrdShapMatrix {
 public:
  OrdShapMatrix(int num_features, PositionGrouping grouping);

  int num_features() const { return num_features_; }
  int num_columns() const { return grouping_.num_columns(); }
  const PositionGrouping& grouping() const { return grouping_; }

  // 1-based feature and column.
  double at(int feature, int column) const;
  bool has(int feature, int column) const;
  void set(int feature, int column, double value);
  void clear(int feature, int column);

  std::vector<std::optional<double>> Row(int feature) const;

  nlohmann::json ToJson() const;

 private:
  std::size_t Index(int feature, int column) const;

  int num_features_;
  PositionGrouping grouping_;
  std::vector<double> values_;
  std::vector<char> present_;
};

// Value importance of one matrix row: (1/n) * sum over columns. With missing
// cells the sum runs over the visited columns and n over the positions they
// cover.
double RowValueImportance(const OrdShapMatrix& gamma, int feature);
// Position importance of one row: least-squares slope of the per-position
// importance against the centered position label, each column weighted by
// the number of positions it covers. For the identity grouping this is
//   sum_l (l - lbar)(gamma_l - vi) / sum_l (l - lbar)^2.
// Throws std::invalid_argument with fewer than two distinct labels.
double RowPositionImportance(const OrdShapMatrix& gamma, int feature);

struct AttributionMeta {
  std::string estimator;  // "exact", "sampling" or "least-squares"
  std::string game;
  int K = 0;
  int L = 0;
  std::uint64_t seed = 0;
  double baseline = 0.0;
  std::int64_t evaluations = 0;
};

struct AttributionResult {
  std::vector<double> vi;
  std::vector<double> pi;
  std::optional<OrdShapMatrix> gamma;
  AttributionMeta meta;

  nlohmann::json ToJson() const;
  // Throws std::invalid_argument on malformed input.
  static AttributionResult FromJson(const nlohmann::json& j);
};

// Fills vi and pi from the matrix rows.
AttributionResult ResultFromMatrix(OrdShapMatrix gamma, AttributionMeta meta);

}  // namespace ordshap

#endif  // ORDSHAP_ATTRIBUTION_H_
