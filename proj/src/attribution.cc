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

#include "ordshap/attribution.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ordshap {

PositionGrouping PositionGrouping::Identity(int n) {
  std::vector<int> labels(n);
  std::iota(labels.begin(), labels.end(), 1);
  return PositionGrouping(std::move(labels));
}

PositionGrouping::PositionGrouping(std::vector<int> labels)
    : labels_(std::move(labels)) {
  if (labels_.empty()) throw std::invalid_argument("grouping is empty");
  for (std::size_t k = 0; k < labels_.size(); ++k) {
    if (labels_[k] < 1) {
      throw std::invalid_argument("group labels must be positive");
    }
    if (k > 0 && labels_[k] < labels_[k - 1]) {
      throw std::invalid_argument(
          "group labels must be non-decreasing in the position");
    }
  }
  column_of_.reserve(labels_.size());
  for (int label : labels_) {
    if (columns_.empty() || columns_.back() != label) {
      columns_.push_back(label);
      sizes_.push_back(0);
    }
    ++sizes_.back();
    column_of_.push_back(static_cast<int>(columns_.size()));
  }
}

double PositionGrouping::MeanLabel() const {
  double sum = 0.0;
  for (int label : labels_) sum += label;
  return sum / static_cast<double>(labels_.size());
}

bool PositionGrouping::IsIdentity() const {
  for (std::size_t k = 0; k < labels_.size(); ++k) {
    if (labels_[k] != static_cast<int>(k) + 1) return false;
  }
  return true;
}

OrdShapMatrix::OrdShapMatrix(int num_features, PositionGrouping grouping)
    : num_features_(num_features),
      grouping_(std::move(grouping)),
      values_(static_cast<std::size_t>(num_features) * num_columns(), 0.0),
      present_(values_.size(), 0) {
  if (num_features < 1) throw std::invalid_argument("matrix needs rows");
}

std::size_t OrdShapMatrix::Index(int feature, int column) const {
  if (feature < 1 || feature > num_features_ || column < 1 ||
      column > num_columns()) {
    throw std::out_of_range("matrix cell (" + std::to_string(feature) + "," +
                            std::to_string(column) + ") out of range");
  }
  return static_cast<std::size_t>(feature - 1) * num_columns() + (column - 1);
}

double OrdShapMatrix::at(int feature, int column) const {
  const std::size_t k = Index(feature, column);
  return present_[k] ? values_[k] : std::nan("");
}

bool OrdShapMatrix::has(int feature, int column) const {
  return present_[Index(feature, column)] != 0;
}

void OrdShapMatrix::set(int feature, int column, double value) {
  const std::size_t k = Index(feature, column);
  values_[k] = value;
  present_[k] = 1;
}

void OrdShapMatrix::clear(int feature, int column) {
  const std::size_t k = Index(feature, column);
  values_[k] = 0.0;
  present_[k] = 0;
}

std::vector<std::optional<double>> OrdShapMatrix::Row(int feature) const {
  std::vector<std::optional<double>> row;
  for (int c = 1; c <= num_columns(); ++c) {
    if (has(feature, c)) {
      row.emplace_back(at(feature, c));
    } else {
      row.emplace_back(std::nullopt);
    }
  }
  return row;
}

nlohmann::json OrdShapMatrix::ToJson() const {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 1; i <= num_features_; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 1; c <= num_columns(); ++c) {
      row.push_back(has(i, c) ? nlohmann::json(at(i, c)) : nlohmann::json());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

double RowValueImportance(const OrdShapMatrix& gamma, int feature) {
  const auto& sizes = gamma.grouping().column_sizes();
  double sum = 0.0;
  int covered = 0;
  for (int c = 1; c <= gamma.num_columns(); ++c) {
    if (!gamma.has(feature, c)) continue;
    sum += gamma.at(feature, c);
    covered += sizes[c - 1];
  }
  return covered == 0 ? std::nan("") : sum / covered;
}

double RowPositionImportance(const OrdShapMatrix& gamma, int feature) {
  const auto& labels = gamma.grouping().column_labels();
  const auto& sizes = gamma.grouping().column_sizes();
  if (labels.size() < 2) {
    throw std::invalid_argument(
        "position importance needs at least two positions");
  }
  double weight = 0.0;
  double weighted_label = 0.0;
  for (int c = 1; c <= gamma.num_columns(); ++c) {
    if (!gamma.has(feature, c)) continue;
    weight += sizes[c - 1];
    weighted_label += sizes[c - 1] * static_cast<double>(labels[c - 1]);
  }
  if (weight == 0.0) return std::nan("");
  const double mean_label = weighted_label / weight;
  const double vi = RowValueImportance(gamma, feature);
  double numerator = 0.0;
  double denominator = 0.0;
  for (int c = 1; c <= gamma.num_columns(); ++c) {
    if (!gamma.has(feature, c)) continue;
    const double centered = labels[c - 1] - mean_label;
    const double per_position = gamma.at(feature, c) / sizes[c - 1];
    numerator += sizes[c - 1] * centered * (per_position - vi);
    denominator += sizes[c - 1] * centered * centered;
  }
  return denominator == 0.0 ? std::nan("") : numerator / denominator;
}

AttributionResult ResultFromMatrix(OrdShapMatrix gamma, AttributionMeta meta) {
  AttributionResult result;
  const int n = gamma.num_features();
  result.vi.resize(n);
  result.pi.resize(n);
  for (int i = 1; i <= n; ++i) {
    result.vi[i - 1] = RowValueImportance(gamma, i);
    result.pi[i - 1] = gamma.num_columns() >= 2
                           ? RowPositionImportance(gamma, i)
                           : std::nan("");
  }
  result.gamma = std::move(gamma);
  result.meta = std::move(meta);
  return result;
}

namespace {

nlohmann::json NumberOrNull(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json();
}

double NumberOrNan(const nlohmann::json& j) {
  return j.is_null() ? std::nan("") : j.get<double>();
}

}  // namespace

nlohmann::json AttributionResult::ToJson() const {
  nlohmann::json j;
  j["vi"] = nlohmann::json::array();
  j["pi"] = nlohmann::json::array();
  for (double v : vi) j["vi"].push_back(NumberOrNull(v));
  for (double v : pi) j["pi"].push_back(NumberOrNull(v));
  if (gamma) {
    j["gamma"] = gamma->ToJson();
    j["position_labels"] = gamma->grouping().labels();
  }
  j["meta"] = {{"estimator", meta.estimator},
               {"game", meta.game},
               {"K", meta.K},
               {"L", meta.L},
               {"seed", meta.seed},
               {"baseline", NumberOrNull(meta.baseline)},
               {"evaluations", meta.evaluations}};
  return j;
}

AttributionResult AttributionResult::FromJson(const nlohmann::json& j) {
  AttributionResult result;
  try {
    for (const auto& v : j.at("vi")) result.vi.push_back(NumberOrNan(v));
    for (const auto& v : j.at("pi")) result.pi.push_back(NumberOrNan(v));
    if (result.vi.size() != result.pi.size()) {
      throw std::invalid_argument("vi and pi lengths differ");
    }
    if (j.contains("gamma") && !j["gamma"].is_null()) {
      const auto& rows = j["gamma"];
      std::vector<int> labels;
      if (j.contains("position_labels")) {
        labels = j["position_labels"].get<std::vector<int>>();
      } else {
        labels.resize(rows.at(0).size());
        std::iota(labels.begin(), labels.end(), 1);
      }
      OrdShapMatrix gamma(static_cast<int>(rows.size()),
                          PositionGrouping(labels));
      for (int i = 1; i <= gamma.num_features(); ++i) {
        const auto& row = rows.at(i - 1);
        if (static_cast<int>(row.size()) != gamma.num_columns()) {
          throw std::invalid_argument("gamma row has the wrong width");
        }
        for (int c = 1; c <= gamma.num_columns(); ++c) {
          if (!row[c - 1].is_null()) gamma.set(i, c, row[c - 1].get<double>());
        }
      }
      result.gamma = std::move(gamma);
    }
    if (j.contains("meta")) {
      const auto& m = j["meta"];
      result.meta.estimator = m.value("estimator", std::string());
      result.meta.game = m.value("game", std::string());
      result.meta.K = m.value("K", 0);
      result.meta.L = m.value("L", 0);
      result.meta.seed = m.value("seed", std::uint64_t{0});
      result.meta.baseline =
          m.contains("baseline") ? NumberOrNan(m["baseline"]) : 0.0;
      result.meta.evaluations = m.value("evaluations", std::int64_t{0});
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad attribution file: ") +
                                e.what());
  }
  return result;
}

}  // namespace ordshap
