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

#include "ldprec/mlp.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ldprec/rng.hpp"

namespace ldprec {

namespace {

double GaussianSample(Rng& rng) {
  // Box-Muller; uniform u1 shifted away from zero for the log.
  const double u1 = 1.0 - rng.NextDouble();
  const double u2 = rng.NextDouble();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

struct ForwardPass {
  Eigen::MatrixXd z1, a1, z2, a2, z3, probs;
};

// mask[l] is empty when dropout is disabled; otherwise it already carries
// the inverted-dropout scale.
ForwardPass Forward(const MlpModel& m, const Eigen::MatrixXd& x,
                    const Eigen::MatrixXd* mask1, const Eigen::MatrixXd* mask2) {
  ForwardPass f;
  f.z1 = (x * m.weights[0].transpose()).rowwise() + m.biases[0].transpose();
  f.a1 = f.z1.cwiseMax(0.0);
  if (mask1) f.a1 = f.a1.cwiseProduct(*mask1);
  f.z2 = (f.a1 * m.weights[1].transpose()).rowwise() + m.biases[1].transpose();
  f.a2 = f.z2.cwiseMax(0.0);
  if (mask2) f.a2 = f.a2.cwiseProduct(*mask2);
  f.z3 = (f.a2 * m.weights[2].transpose()).rowwise() + m.biases[2].transpose();
  // Row-wise softmax, stabilized by the row max.
  f.probs = f.z3;
  for (Eigen::Index r = 0; r < f.probs.rows(); ++r) {
    const double zmax = f.probs.row(r).maxCoeff();
    f.probs.row(r) = (f.probs.row(r).array() - zmax).exp();
    f.probs.row(r) /= f.probs.row(r).sum();
  }
  return f;
}

double CrossEntropy(const ForwardPass& f, const std::vector<size_t>& labels) {
  double loss = 0.0;
  for (Eigen::Index r = 0; r < f.probs.rows(); ++r) {
    const double zmax = f.z3.row(r).maxCoeff();
    const double lse = zmax + std::log((f.z3.row(r).array() - zmax).exp().sum());
    loss += lse - f.z3(r, static_cast<Eigen::Index>(labels[r]));
  }
  return loss / static_cast<double>(f.probs.rows());
}

struct Grads {
  std::vector<Eigen::MatrixXd> w;
  std::vector<Eigen::VectorXd> b;
};

Grads Backward(const MlpModel& m, const Eigen::MatrixXd& x, const ForwardPass& f,
               const std::vector<size_t>& labels, const Eigen::MatrixXd* mask1,
               const Eigen::MatrixXd* mask2) {
  const double batch = static_cast<double>(x.rows());
  Eigen::MatrixXd dz3 = f.probs;
  for (Eigen::Index r = 0; r < dz3.rows(); ++r) {
    dz3(r, static_cast<Eigen::Index>(labels[r])) -= 1.0;
  }
  dz3 /= batch;

  Grads g;
  g.w.resize(3);
  g.b.resize(3);
  g.w[2] = dz3.transpose() * f.a2;
  g.b[2] = dz3.colwise().sum();

  Eigen::MatrixXd da2 = dz3 * m.weights[2];
  if (mask2) da2 = da2.cwiseProduct(*mask2);
  Eigen::MatrixXd dz2 = da2.cwiseProduct((f.z2.array() > 0.0).cast<double>().matrix());
  g.w[1] = dz2.transpose() * f.a1;
  g.b[1] = dz2.colwise().sum();

  Eigen::MatrixXd da1 = dz2 * m.weights[1];
  if (mask1) da1 = da1.cwiseProduct(*mask1);
  Eigen::MatrixXd dz1 = da1.cwiseProduct((f.z1.array() > 0.0).cast<double>().matrix());
  g.w[0] = dz1.transpose() * x;
  g.b[0] = dz1.colwise().sum();
  return g;
}

}  // namespace

void MlpConfig::Validate() const {
  if (input_size == 0 || hidden1_size == 0 || hidden2_size == 0 || output_size == 0) {
    throw std::invalid_argument("MlpConfig: all layer sizes must be positive");
  }
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw std::invalid_argument("MlpConfig: dropout_rate in [0,1)");
  }
  if (epochs == 0 || batch_size == 0) {
    throw std::invalid_argument("MlpConfig: epochs and batch_size must be >= 1");
  }
  if (!(learning_rate > 0.0)) {
    throw std::invalid_argument("MlpConfig: learning_rate must be > 0");
  }
}

Eigen::MatrixXd ToMatrix(const std::vector<BitVector>& inputs) {
  if (inputs.empty()) throw std::invalid_argument("ToMatrix: empty input list");
  Eigen::MatrixXd x(inputs.size(), inputs[0].length());
  for (size_t i = 0; i < inputs.size(); ++i) {
    if (inputs[i].length() != inputs[0].length()) {
      throw std::invalid_argument("ToMatrix: inconsistent vector lengths");
    }
    for (size_t j = 0; j < inputs[i].length(); ++j) {
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          inputs[i].Get(j) ? 1.0 : 0.0;
    }
  }
  return x;
}

MlpModel TrainMlp(const TrainingSet& data, const MlpConfig& config) {
  config.Validate();
  if (data.inputs.empty()) throw std::invalid_argument("TrainMlp: empty dataset");
  if (data.inputs.size() != data.labels.size()) {
    throw std::invalid_argument("TrainMlp: inputs/labels size mismatch");
  }
  for (const auto& bv : data.inputs) {
    if (bv.length() != config.input_size) {
      throw std::invalid_argument("TrainMlp: input length != input_size");
    }
  }
  std::set<size_t> distinct;
  for (size_t label : data.labels) {
    if (label >= config.output_size) {
      throw std::invalid_argument("TrainMlp: label out of range");
    }
    distinct.insert(label);
  }
  if (distinct.size() < 2) {
    std::cerr << "TrainMlp: warning: single-class dataset\n";
  }

  MlpModel model;
  model.config = config;
  const size_t sizes[4] = {config.input_size, config.hidden1_size, config.hidden2_size,
                           config.output_size};
  RngFactory factory(config.seed);
  Rng init_rng = factory.Stream(0x696e6974 /* "init" */);
  model.weights.resize(3);
  model.biases.resize(3);
  for (int l = 0; l < 3; ++l) {
    const auto fan_in = static_cast<Eigen::Index>(sizes[l]);
    const auto fan_out = static_cast<Eigen::Index>(sizes[l + 1]);
    const double stddev = std::sqrt(2.0 / static_cast<double>(sizes[l]));
    model.weights[l].resize(fan_out, fan_in);
    for (Eigen::Index r = 0; r < fan_out; ++r) {
      for (Eigen::Index c = 0; c < fan_in; ++c) {
        model.weights[l](r, c) = stddev * GaussianSample(init_rng);
      }
    }
    model.biases[l] = Eigen::VectorXd::Zero(fan_out);
  }

  const Eigen::MatrixXd x = ToMatrix(data.inputs);
  const size_t n = data.inputs.size();

  // Adam state.
  std::vector<Eigen::MatrixXd> mw(3), vw(3);
  std::vector<Eigen::VectorXd> mb(3), vb(3);
  for (int l = 0; l < 3; ++l) {
    mw[l] = Eigen::MatrixXd::Zero(model.weights[l].rows(), model.weights[l].cols());
    vw[l] = mw[l];
    mb[l] = Eigen::VectorXd::Zero(model.biases[l].size());
    vb[l] = mb[l];
  }
  size_t step = 0;

  Rng shuffle_rng = factory.Stream(0x73687566 /* "shuf" */);
  Rng dropout_rng = factory.Stream(0x64726f70 /* "drop" */);
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});

  const bool use_dropout = config.dropout_rate > 0.0;
  const double keep = 1.0 - config.dropout_rate;

  for (size_t epoch = 0; epoch < config.epochs; ++epoch) {
    for (size_t i = n; i > 1; --i) {
      std::swap(order[i - 1], order[shuffle_rng.NextBelow(i)]);
    }
    double epoch_loss = 0.0;
    for (size_t start = 0; start < n; start += config.batch_size) {
      const size_t batch_n = std::min(config.batch_size, n - start);
      Eigen::MatrixXd bx(batch_n, config.input_size);
      std::vector<size_t> by(batch_n);
      for (size_t i = 0; i < batch_n; ++i) {
        bx.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(order[start + i]));
        by[i] = data.labels[order[start + i]];
      }

      Eigen::MatrixXd mask1, mask2;
      const Eigen::MatrixXd* m1 = nullptr;
      const Eigen::MatrixXd* m2 = nullptr;
      if (use_dropout) {
        mask1.resize(batch_n, config.hidden1_size);
        for (Eigen::Index r = 0; r < mask1.rows(); ++r) {
          for (Eigen::Index c = 0; c < mask1.cols(); ++c) {
            mask1(r, c) = dropout_rng.Bernoulli(keep) ? 1.0 / keep : 0.0;
          }
        }
        mask2.resize(batch_n, config.hidden2_size);
        for (Eigen::Index r = 0; r < mask2.rows(); ++r) {
          for (Eigen::Index c = 0; c < mask2.cols(); ++c) {
            mask2(r, c) = dropout_rng.Bernoulli(keep) ? 1.0 / keep : 0.0;
          }
        }
        m1 = &mask1;
        m2 = &mask2;
      }

      const ForwardPass fwd = Forward(model, bx, m1, m2);
      epoch_loss += CrossEntropy(fwd, by) * static_cast<double>(batch_n);
      const Grads g = Backward(model, bx, fwd, by, m1, m2);

      ++step;
      const double bc1 = 1.0 - std::pow(config.adam_beta1, static_cast<double>(step));
      const double bc2 = 1.0 - std::pow(config.adam_beta2, static_cast<double>(step));
      for (int l = 0; l < 3; ++l) {
        mw[l] = config.adam_beta1 * mw[l] + (1.0 - config.adam_beta1) * g.w[l];
        vw[l] = config.adam_beta2 * vw[l] +
                (1.0 - config.adam_beta2) * g.w[l].cwiseProduct(g.w[l]);
        model.weights[l].array() -=
            config.learning_rate * (mw[l].array() / bc1) /
            ((vw[l].array() / bc2).sqrt() + config.adam_epsilon);

        mb[l] = config.adam_beta1 * mb[l] + (1.0 - config.adam_beta1) * g.b[l];
        vb[l] = config.adam_beta2 * vb[l] +
                (1.0 - config.adam_beta2) * g.b[l].cwiseProduct(g.b[l]);
        model.biases[l].array() -= config.learning_rate * (mb[l].array() / bc1) /
                                   ((vb[l].array() / bc2).sqrt() + config.adam_epsilon);
      }
    }
    model.epoch_losses.push_back(epoch_loss / static_cast<double>(n));
  }
  return model;
}

Eigen::MatrixXd PredictProba(const MlpModel& model, const Eigen::MatrixXd& inputs) {
  if (static_cast<size_t>(inputs.cols()) != model.config.input_size) {
    throw std::invalid_argument("PredictProba: input width != input_size");
  }
  return Forward(model, inputs, nullptr, nullptr).probs;
}

std::vector<size_t> PredictLabels(const MlpModel& model, const Eigen::MatrixXd& inputs) {
  const Eigen::MatrixXd probs = PredictProba(model, inputs);
  std::vector<size_t> labels(probs.rows());
  for (Eigen::Index r = 0; r < probs.rows(); ++r) {
    size_t best = 0;
    for (Eigen::Index c = 1; c < probs.cols(); ++c) {
      if (probs(r, c) > probs(r, static_cast<Eigen::Index>(best))) {
        best = static_cast<size_t>(c);
      }
    }
    labels[static_cast<size_t>(r)] = best;
  }
  return labels;
}

std::pair<size_t, Eigen::VectorXd> Predict(const MlpModel& model, const BitVector& input) {
  if (input.length() != model.config.input_size) {
    throw std::invalid_argument("Predict: input length != input_size");
  }
  Eigen::MatrixXd x(1, input.length());
  for (size_t j = 0; j < input.length(); ++j) {
    x(0, static_cast<Eigen::Index>(j)) = input.Get(j) ? 1.0 : 0.0;
  }
  const Eigen::MatrixXd probs = PredictProba(model, x);
  size_t best = 0;
  for (Eigen::Index c = 1; c < probs.cols(); ++c) {
    if (probs(0, c) > probs(0, static_cast<Eigen::Index>(best))) best = static_cast<size_t>(c);
  }
  return {best, probs.row(0).transpose()};
}

ClassificationReport Evaluate(const MlpModel& model, const TrainingSet& test) {
  if (test.inputs.empty()) throw std::invalid_argument("Evaluate: empty test set");
  const std::vector<size_t> pred = PredictLabels(model, ToMatrix(test.inputs));
  return ComputeClassificationReport(test.labels, pred, model.config.output_size);
}

Profile DecodeProfile(const std::vector<MlpModel>& models, const BitVector& report) {
  Profile p;
  p.selections.reserve(models.size());
  for (const auto& model : models) {
    p.selections.push_back(Predict(model, report).first);
  }
  return p;
}

namespace {

void WriteMatrix(std::ostream& out, const Eigen::MatrixXd& mat) {
  char buf[32];
  for (Eigen::Index r = 0; r < mat.rows(); ++r) {
    for (Eigen::Index c = 0; c < mat.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", mat(r, c));
      if (c) out << ' ';
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace

void MlpModel::Save(std::ostream& out) const {
  out << "ldprec-mlp 1\n";
  out << "input " << config.input_size << "\nhidden1 " << config.hidden1_size
      << "\nhidden2 " << config.hidden2_size << "\noutput " << config.output_size << '\n';
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", config.dropout_rate);
  out << "dropout " << buf << '\n';
  out << "epochs " << config.epochs << "\nbatch " << config.batch_size << '\n';
  std::snprintf(buf, sizeof(buf), "%.17g", config.learning_rate);
  out << "lr " << buf << '\n';
  std::snprintf(buf, sizeof(buf), "%.17g", config.adam_beta1);
  out << "beta1 " << buf << '\n';
  std::snprintf(buf, sizeof(buf), "%.17g", config.adam_beta2);
  out << "beta2 " << buf << '\n';
  std::snprintf(buf, sizeof(buf), "%.17g", config.adam_epsilon);
  out << "adam_eps " << buf << '\n';
  out << "seed " << config.seed << '\n';
  for (int l = 0; l < 3; ++l) {
    out << "W " << weights[l].rows() << ' ' << weights[l].cols() << '\n';
    WriteMatrix(out, weights[l]);
    out << "b " << biases[l].size() << '\n';
    WriteMatrix(out, biases[l].transpose());
  }
}

MlpModel MlpModel::Load(std::istream& in) {
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != "ldprec-mlp" || version != 1) {
    throw std::runtime_error("MlpModel::Load: bad header");
  }
  MlpModel model;
  auto expect = [&in](const char* key) {
    std::string word;
    in >> word;
    if (word != key) throw std::runtime_error(std::string("MlpModel::Load: expected ") + key);
  };
  expect("input");
  in >> model.config.input_size;
  expect("hidden1");
  in >> model.config.hidden1_size;
  expect("hidden2");
  in >> model.config.hidden2_size;
  expect("output");
  in >> model.config.output_size;
  expect("dropout");
  in >> model.config.dropout_rate;
  expect("epochs");
  in >> model.config.epochs;
  expect("batch");
  in >> model.config.batch_size;
  expect("lr");
  in >> model.config.learning_rate;
  expect("beta1");
  in >> model.config.adam_beta1;
  expect("beta2");
  in >> model.config.adam_beta2;
  expect("adam_eps");
  in >> model.config.adam_epsilon;
  expect("seed");
  in >> model.config.seed;
  model.weights.resize(3);
  model.biases.resize(3);
  for (int l = 0; l < 3; ++l) {
    expect("W");
    Eigen::Index rows = 0, cols = 0;
    in >> rows >> cols;
    model.weights[l].resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) in >> model.weights[l](r, c);
    }
    expect("b");
    Eigen::Index size = 0;
    in >> size;
    model.biases[l].resize(size);
    for (Eigen::Index i = 0; i < size; ++i) in >> model.biases[l](i);
  }
  if (!in) throw std::runtime_error("MlpModel::Load: truncated file");
  return model;
}

namespace internal {

LossGrads LossAndGradients(const MlpModel& model, const Eigen::MatrixXd& batch,
                           const std::vector<size_t>& labels) {
  const ForwardPass fwd = Forward(model, batch, nullptr, nullptr);
  const Grads g = Backward(model, batch, fwd, labels, nullptr, nullptr);
  LossGrads out;
  out.loss = CrossEntropy(fwd, labels);
  out.weight_grads = g.w;
  out.bias_grads = g.b;
  return out;
}

double MeanLoss(const MlpModel& model, const Eigen::MatrixXd& batch,
                const std::vector<size_t>& labels) {
  return CrossEntropy(Forward(model, batch, nullptr, nullptr), labels);
}

}  // namespace internal

}  // namespace ldprec
