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

#ifndef LDPREC_MLP_HPP_
#define LDPREC_MLP_HPP_

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ldprec/bitvector.hpp"
#include "ldprec/metrics.hpp"
#include "ldprec/taxonomy.hpp"

namespace ldprec {

// Two-hidden-layer classifier configuration.  Hidden sizes 60/50, 25
// epochs, batch 70 and Adam are the pipeline defaults; the input layer
// width always equals the Bloom filter size.
struct MlpConfig {
  size_t input_size = 0;
  size_t hidden1_size = 60;
  size_t hidden2_size = 50;
  size_t output_size = 0;
  double dropout_rate = 0.2;   // after each hidden layer, training only
  size_t epochs = 25;
  size_t batch_size = 70;
  double learning_rate = 0.001;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  uint64_t seed = 0;

  void Validate() const;
};

// Dense weights for input -> hidden1 -> hidden2 -> output.  Hidden
// activations are rectified linear, the output is a softmax.
struct MlpModel {
  MlpConfig config;
  // weights[l] has shape (fan_out, fan_in); biases[l] has shape (fan_out).
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
  // Mean training loss per epoch, in order.
  std::vector<double> epoch_losses;

  void Save(std::ostream& out) const;
  static MlpModel Load(std::istream& in);
};

// Training pairs: one bit vector per sample plus its class label.
struct TrainingSet {
  std::vector<BitVector> inputs;
  std::vector<size_t> labels;
};

// Mini-batch gradient descent with categorical cross-entropy, Adam updates
// and inverted dropout.  Deterministic under config.seed.
MlpModel TrainMlp(const TrainingSet& data, const MlpConfig& config);

// Class probabilities for one input; dropout disabled.  The label is the
// argmax with lowest-index tie-break.
std::pair<size_t, Eigen::VectorXd> Predict(const MlpModel& model, const BitVector& input);

// Batched versions (row = sample).
Eigen::MatrixXd PredictProba(const MlpModel& model, const Eigen::MatrixXd& inputs);
std::vector<size_t> PredictLabels(const MlpModel& model, const Eigen::MatrixXd& inputs);

// Runs the model over a labeled test set and scores it.
ClassificationReport Evaluate(const MlpModel& model, const TrainingSet& test);

// One model per taxonomy category, all consuming the same report vector.
Profile DecodeProfile(const std::vector<MlpModel>& models, const BitVector& report);

// Packs bit vectors into a dense row-major sample matrix.
Eigen::MatrixXd ToMatrix(const std::vector<BitVector>& inputs);

namespace internal {

// Loss and analytic gradients with dropout disabled; exposed for the
// finite-difference gradient check.
struct LossGrads {
  double loss = 0.0;
  std::vector<Eigen::MatrixXd> weight_grads;
  std::vector<Eigen::VectorXd> bias_grads;
};

LossGrads LossAndGradients(const MlpModel& model, const Eigen::MatrixXd& batch,
                           const std::vector<size_t>& labels);

double MeanLoss(const MlpModel& model, const Eigen::MatrixXd& batch,
                const std::vector<size_t>& labels);

}  // namespace internal

}  // namespace ldprec

#endif  // LDPREC_MLP_HPP_
