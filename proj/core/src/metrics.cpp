// Copyright 2026 The ldprec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ldprec/metrics.hpp"

#include <sstream>
#include <stdexcept>

namespace ldprec {

ClassificationReport ComputeClassificationReport(const std::vector<size_t>& y_true,
                                                 const std::vector<size_t>& y_pred,
                                                 size_t n_classes) {
  if (y_true.size() != y_pred.size()) {
    throw std::invalid_argument("ComputeClassificationReport: length mismatch");
  }
  if (y_true.empty()) {
    throw std::invalid_argument("ComputeClassificationReport: empty test set");
  }

  ClassificationReport r;
  r.confusion.assign(n_classes, std::vector<size_t>(n_classes, 0));
  size_t correct = 0;
  for (size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] >= n_classes || y_pred[i] >= n_classes) {
      throw std::invalid_argument("ComputeClassificationReport: label out of range");
    }
    r.confusion[y_true[i]][y_pred[i]]++;
    correct += y_true[i] == y_pred[i];
  }
  r.accuracy = static_cast<double>(correct) / static_cast<double>(y_true.size());

  r.precision.assign(n_classes, 0.0);
  r.recall.assign(n_classes, 0.0);
  r.f1.assign(n_classes, 0.0);
  r.support.assign(n_classes, 0);
  for (size_t c = 0; c < n_classes; ++c) {
    size_t tp = r.confusion[c][c];
    size_t fn = 0, fp = 0;
    for (size_t other = 0; other < n_classes; ++other) {
      if (other == c) continue;
      fn += r.confusion[c][other];
      fp += r.confusion[other][c];
    }
    r.support[c] = tp + fn;
    r.precision[c] = (tp + fp) ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    r.recall[c] = (tp + fn) ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    r.f1[c] = (r.precision[c] + r.recall[c]) > 0.0
                  ? 2.0 * r.precision[c] * r.recall[c] / (r.precision[c] + r.recall[c])
                  : 0.0;
  }
  return r;
}

std::string ClassificationReport::ToCsv(const std::vector<std::string>& class_names) const {
  std::ostringstream out;
  out << "class,precision,recall,f1,support\n";
  for (size_t c = 0; c < precision.size(); ++c) {
    if (c < class_names.size()) {
      out << class_names[c];
    } else {
      out << c;
    }
    out << ',' << precision[c] << ',' << recall[c] << ',' << f1[c] << ',' << support[c]
        << '\n';
  }
  out << "accuracy," << accuracy << ",,,\n";
  return out.str();
}

std::string ClassificationReport::ConfusionCsv() const {
  std::ostringstream out;
  for (const auto& row : confusion) {
    for (size_t j = 0; j < row.size(); ++j) {
      if (j) out << ',';
      out << row[j];
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace ldprec
