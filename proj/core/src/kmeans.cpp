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

#include "ldprec/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ldprec/rng.hpp"

namespace ldprec {

namespace {

double SquaredDistance(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
  return (a - b).squaredNorm();
}

// kmeans++: first centroid uniform, then distance^2-weighted picks.
Eigen::MatrixXd SeedCentroids(const Eigen::MatrixXd& points, size_t K, Rng& rng) {
  const auto n = static_cast<size_t>(points.rows());
  Eigen::MatrixXd centroids(K, points.cols());
  centroids.row(0) = points.row(static_cast<Eigen::Index>(rng.NextBelow(n)));

  Eigen::VectorXd dist2(n);
  for (size_t i = 0; i < n; ++i) {
    dist2(static_cast<Eigen::Index>(i)) =
        SquaredDistance(points.row(static_cast<Eigen::Index>(i)), centroids.row(0));
  }
  for (size_t c = 1; c < K; ++c) {
    const double total = dist2.sum();
    size_t pick = 0;
    if (total > 0.0) {
      const double target = rng.NextDouble() * total;
      double acc = 0.0;
      pick = n - 1;
      for (size_t i = 0; i < n; ++i) {
        acc += dist2(static_cast<Eigen::Index>(i));
        if (target < acc) {
          pick = i;
          break;
        }
      }
    } else {
      pick = rng.NextBelow(n);  // all points coincide with chosen centroids
    }
    centroids.row(static_cast<Eigen::Index>(c)) = points.row(static_cast<Eigen::Index>(pick));
    for (size_t i = 0; i < n; ++i) {
      const double d = SquaredDistance(points.row(static_cast<Eigen::Index>(i)),
                                       centroids.row(static_cast<Eigen::Index>(c)));
      auto& slot = dist2(static_cast<Eigen::Index>(i));
      if (d < slot) slot = d;
    }
  }
  return centroids;
}

}  // namespace

namespace {
ClusteringResult KMeansSingleRun(const Eigen::MatrixXd& points, size_t K, uint64_t seed,
                                 size_t max_iters, double tol);
}  // namespace

ClusteringResult KMeansCluster(const Eigen::MatrixXd& points, size_t K, uint64_t seed,
                               size_t max_iters, double tol, size_t restarts) {
  if (restarts == 0) throw std::invalid_argument("KMeansCluster: restarts >= 1");
  RngFactory factory(seed);
  ClusteringResult best;
  for (size_t r = 0; r < restarts; ++r) {
    ClusteringResult run = KMeansSingleRun(
        points, K, factory.Stream({0x72756e /* "run" */, r}).NextU64(), max_iters, tol);
    if (r == 0 || run.wcss < best.wcss) best = std::move(run);
  }
  return best;
}

namespace {

ClusteringResult KMeansSingleRun(const Eigen::MatrixXd& points, size_t K, uint64_t seed,
                                 size_t max_iters, double tol) {
  const auto n = static_cast<size_t>(points.rows());
  if (n == 0) throw std::invalid_argument("KMeansCluster: empty input");
  if (K == 0 || K > n) throw std::invalid_argument("KMeansCluster: need 1 <= K <= #points");

  Rng rng = RngFactory(seed).Stream(0x6b6d /* "km" */);
  Eigen::MatrixXd centroids = SeedCentroids(points, K, rng);

  ClusteringResult result;
  result.K = K;
  result.assignments.assign(n, 0);

  for (size_t iter = 0; iter < max_iters; ++iter) {
    // Assignment step; measure WCSS here so the history is monotone.
    double wcss = 0.0;
    for (size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      size_t best_c = 0;
      for (size_t c = 0; c < K; ++c) {
        const double d = SquaredDistance(points.row(static_cast<Eigen::Index>(i)),
                                         centroids.row(static_cast<Eigen::Index>(c)));
        if (d < best) {
          best = d;
          best_c = c;
        }
      }
      result.assignments[i] = best_c;
      wcss += best;
    }
    result.wcss_history.push_back(wcss);
    result.iterations = iter + 1;

    // Update step: per-cluster means accumulated in index order.
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(K, points.cols());
    std::vector<size_t> counts(K, 0);
    for (size_t i = 0; i < n; ++i) {
      sums.row(static_cast<Eigen::Index>(result.assignments[i])) +=
          points.row(static_cast<Eigen::Index>(i));
      counts[result.assignments[i]]++;
    }

    // Reseed empty clusters to the point farthest from its own centroid.
    for (size_t c = 0; c < K; ++c) {
      if (counts[c] > 0) continue;
      double farthest = -1.0;
      size_t pick = 0;
      for (size_t i = 0; i < n; ++i) {
        if (counts[result.assignments[i]] <= 1) continue;  // keep donors nonempty
        const double d = SquaredDistance(
            points.row(static_cast<Eigen::Index>(i)),
            centroids.row(static_cast<Eigen::Index>(result.assignments[i])));
        if (d > farthest) {
          farthest = d;
          pick = i;
        }
      }
      const size_t old = result.assignments[pick];
      sums.row(static_cast<Eigen::Index>(old)) -= points.row(static_cast<Eigen::Index>(pick));
      counts[old]--;
      sums.row(static_cast<Eigen::Index>(c)) = points.row(static_cast<Eigen::Index>(pick));
      counts[c] = 1;
      result.assignments[pick] = c;
    }

    double movement2 = 0.0;
    for (size_t c = 0; c < K; ++c) {
      Eigen::RowVectorXd mean =
          sums.row(static_cast<Eigen::Index>(c)) / static_cast<double>(counts[c]);
      movement2 = std::max(movement2,
                           SquaredDistance(mean, centroids.row(static_cast<Eigen::Index>(c))));
      centroids.row(static_cast<Eigen::Index>(c)) = mean;
    }
    if (movement2 < tol * tol) break;
  }

  // Final assignment against the final centroids.
  double wcss = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    size_t best_c = 0;
    for (size_t c = 0; c < K; ++c) {
      const double d = SquaredDistance(points.row(static_cast<Eigen::Index>(i)),
                                       centroids.row(static_cast<Eigen::Index>(c)));
      if (d < best) {
        best = d;
        best_c = c;
      }
    }
    result.assignments[i] = best_c;
    wcss += best;
  }
  result.wcss_history.push_back(wcss);
  result.centroids = std::move(centroids);
  result.wcss = wcss;
  return result;
}

}  // namespace

std::vector<std::pair<size_t, double>> ElbowScan(const Eigen::MatrixXd& points, size_t k_lo,
                                                 size_t k_hi, uint64_t seed) {
  if (k_lo == 0 || k_lo > k_hi || k_hi > static_cast<size_t>(points.rows())) {
    throw std::invalid_argument("ElbowScan: need 1 <= k_lo <= k_hi <= #points");
  }
  RngFactory factory(seed);
  std::vector<std::pair<size_t, double>> out;
  for (size_t k = k_lo; k <= k_hi; ++k) {
    // Per-k seed so scans are reproducible point by point.
    const uint64_t k_seed = factory.Stream({0x656c626f /* "elbo" */, k}).NextU64();
    out.emplace_back(k, KMeansCluster(points, k, k_seed, 100, 1e-6, /*restarts=*/4).wcss);
  }
  return out;
}

namespace {

// Contingency counts[ref][test].
std::vector<std::vector<size_t>> Contingency(const std::vector<size_t>& reference,
                                             const std::vector<size_t>& test, size_t K) {
  std::vector<std::vector<size_t>> counts(K, std::vector<size_t>(K, 0));
  for (size_t i = 0; i < reference.size(); ++i) {
    if (reference[i] >= K || test[i] >= K) {
      throw std::invalid_argument("MatchedAccuracy: assignment out of range");
    }
    counts[reference[i]][test[i]]++;
  }
  return counts;
}

// Max-sum assignment on a KxK nonnegative matrix (Hungarian, potentials
// form, O(K^3)).  Returns the best total.
size_t SolveAssignment(const std::vector<std::vector<size_t>>& gain) {
  const size_t K = gain.size();
  const long long kInf = std::numeric_limits<long long>::max() / 4;
  // Minimize cost = max_gain - gain.
  long long max_gain = 0;
  for (const auto& row : gain) {
    for (size_t v : row) max_gain = std::max(max_gain, static_cast<long long>(v));
  }
  std::vector<long long> u(K + 1, 0), v(K + 1, 0);
  std::vector<size_t> way(K + 1, 0), matched(K + 1, 0);
  for (size_t i = 1; i <= K; ++i) {
    matched[0] = i;
    size_t j0 = 0;
    std::vector<long long> minv(K + 1, kInf);
    std::vector<bool> used(K + 1, false);
    do {
      used[j0] = true;
      const size_t i0 = matched[j0];
      long long delta = kInf;
      size_t j1 = 0;
      for (size_t j = 1; j <= K; ++j) {
        if (used[j]) continue;
        const long long cost =
            max_gain - static_cast<long long>(gain[i0 - 1][j - 1]) - u[i0] - v[j];
        if (cost < minv[j]) {
          minv[j] = cost;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (size_t j = 0; j <= K; ++j) {
        if (used[j]) {
          u[matched[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (matched[j0] != 0);
    do {
      const size_t j1 = way[j0];
      matched[j0] = matched[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  size_t total = 0;
  for (size_t j = 1; j <= K; ++j) {
    if (matched[j] != 0) total += gain[matched[j] - 1][j - 1];
  }
  return total;
}

}  // namespace

double MatchedAccuracy(const std::vector<size_t>& reference, const std::vector<size_t>& test,
                       size_t K) {
  if (reference.size() != test.size()) {
    throw std::invalid_argument("MatchedAccuracy: length mismatch");
  }
  if (reference.empty()) throw std::invalid_argument("MatchedAccuracy: empty assignments");
  if (K == 0) throw std::invalid_argument("MatchedAccuracy: K must be >= 1");

  const auto counts = Contingency(reference, test, K);
  size_t best = 0;
  if (K <= 8) {
    std::vector<size_t> perm(K);
    std::iota(perm.begin(), perm.end(), size_t{0});
    do {
      size_t total = 0;
      for (size_t t = 0; t < K; ++t) total += counts[perm[t]][t];
      best = std::max(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    best = SolveAssignment(counts);
  }
  return static_cast<double>(best) / static_cast<double>(reference.size());
}

Eigen::MatrixXd OneHotFeatures(const std::vector<Profile>& profiles, const Taxonomy& taxonomy) {
  const size_t dim = taxonomy.TotalClassCount();
  Eigen::MatrixXd features = Eigen::MatrixXd::Zero(profiles.size(), dim);
  for (size_t i = 0; i < profiles.size(); ++i) {
    size_t offset = 0;
    for (size_t j = 0; j < taxonomy.categories.size(); ++j) {
      features(static_cast<Eigen::Index>(i),
               static_cast<Eigen::Index>(offset + profiles[i].selections[j])) = 1.0;
      offset += taxonomy.categories[j].classes.size();
    }
  }
  return features;
}

std::string ClusteringResult::ToCsv() const {
  std::ostringstream out;
  out << "K,wcss,iterations\n" << K << ',' << wcss << ',' << iterations << '\n';
  out << "index,assignment\n";
  for (size_t i = 0; i < assignments.size(); ++i) {
    out << i << ',' << assignments[i] << '\n';
  }
  return out.str();
}

}  // namespace ldprec
