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

#ifndef LDPREC_METRICS_HPP_
#define LDPREC_METRICS_HPP_

#include <cstddef>
#include <string>
#include <vector>

namespace ldprec {

// Multiclass classification metrics.  confusion[t][p] counts samples of
// true class t predicted as p, so row sums equal per-class support.
struct ClassificationReport {
  std::vector<double> precision;
  std::vector<double> recall;
  std::vector<double> f1;
  std::vector<size_t> support;
  double accuracy = 0.0;
  std::vector<std::vector<size_t>> confusion;

  std::string ToCsv(const std::vector<std::string>& class_names = {}) const;
  std::string ConfusionCsv() const;
};

// Computes accuracy, per-class precision/recall/f1 and the confusion
// matrix.  Classes with zero predicted positives get precision 0; classes
// with zero support get recall 0.
ClassificationReport ComputeClassificationReport(const std::vector<size_t>& y_true,
                                                 const std::vector<size_t>& y_pred,
                                                 size_t n_classes);

}  // namespace ldprec

#endif  // LDPREC_METRICS_HPP_
