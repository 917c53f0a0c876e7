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

#ifndef LDPREC_KMEANS_HPP_
#define LDPREC_KMEANS_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ldprec/taxonomy.hpp"

namespace ldprec {

struct ClusteringResult {
  Eigen::MatrixXd centroids;        // K x d
  std::vector<size_t> assignments;  // one cluster index per input row
  double wcss = 0.0;
  size_t iterations = 0;
  size_t K = 0;
  // WCSS measured after each assignment step; nonincreasing.
  std::vector<double> wcss_history;

  std::string ToCsv() const;
};

// Lloyd iterations from kmeans++ seeding until centroid movement < tol or
// max_iters.  Empty clusters are reseeded to the point farthest from its
// assigned centroid.  Deterministic under seed.  With restarts > 1 the
// best-WCSS run of that many seeded inits is returned.
ClusteringResult KMeansCluster(const Eigen::MatrixXd& points, size_t K, uint64_t seed,
                               size_t max_iters = 100, double tol = 1e-6,
                               size_t restarts = 1);

// One kmeans run per k in [k_lo, k_hi], same per-k seed policy.
std::vector<std::pair<size_t, double>> ElbowScan(const Eigen::MatrixXd& points, size_t k_lo,
                                                 size_t k_hi, uint64_t seed);

// Best label-permutation agreement between two assignment lists: exact
// permutation search for K <= 8, optimal assignment solver above.
double MatchedAccuracy(const std::vector<size_t>& reference, const std::vector<size_t>& test,
                       size_t K);

// Concatenated per-category one-hot blocks, one row per profile.
Eigen::MatrixXd OneHotFeatures(const std::vector<Profile>& profiles, const Taxonomy& taxonomy);

}  // namespace ldprec

#endif  // LDPREC_KMEANS_HPP_
