// Copyright 2026 The mvgcn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Two-layer graph convolutional network
//
//     Z = softmax(A_hat ReLU(A_hat X W0) W1)
//
// trained full-batch with masked softmax cross-entropy, hand-written
// backpropagation and Adam.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "mvgcn/graph.hpp"

namespace mvgcn {

struct GcnModel {
  Eigen::MatrixXd w0;  // F x H
  Eigen::MatrixXd w1;  // H x C

  Index input_dim() const { return w0.rows(); }
  Index hidden_dim() const { return w0.cols(); }
  Index num_classes() const { return w1.cols(); }
};

struct TrainConfig {
  double learning_rate = 0.01;
  int max_epochs = 200;
  Index hidden_units = 16;
  double dropout = 0.5;
  double weight_decay = 5e-4;  // on W0 only
  int early_stop_patience = 10;
  std::uint64_t seed = 0;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;

  void validate() const;
};

/// Disjoint train/validation/test vertex lists. `labels` has one entry per
/// vertex, -1 for unlabeled.
struct LabeledSplit {
  std::vector<Vertex> train;
  std::vector<Vertex> val;
  std::vector<Vertex> test;
  std::vector<int> labels;
  /// Output width of the model; 0 infers it as 1 + max label.
  int num_classes = 0;

  int class_count() const;

  /// Throws InvalidArgument on overlap, out-of-range index, missing label or
  /// class id outside [0, num_classes).
  void validate(Index n, int num_classes) const;
};

/// Forward pass. Dropout (inverted scaling) hits X and the hidden layer only
/// when `dropout_active`; the masks are drawn from `seed`.
Eigen::MatrixXd forward(const GcnModel& model, const SparseMatrix& a_hat,
                        const Eigen::MatrixXd& x, bool dropout_active = false,
                        std::uint64_t seed = 0, double dropout = 0.5);

struct LossAndGrads {
  double loss = 0.0;
  Eigen::MatrixXd grad_w0;
  Eigen::MatrixXd grad_w1;
};

/// Mean cross-entropy over split.train plus weight_decay/2 * ||W0||_F^2, with
/// exact gradients. Pass `dropout_seed` to train with dropout masks from that
/// seed; without it the pass is deterministic and dropout-free.
LossAndGrads loss_and_grads(const GcnModel& model, const SparseMatrix& a_hat,
                            const Eigen::MatrixXd& x, const LabeledSplit& split,
                            const TrainConfig& cfg,
                            std::optional<std::uint64_t> dropout_seed = std::nullopt);

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_acc = 0.0;
};

struct TrainResult {
  GcnModel model;  // parameters of the best validation-loss epoch
  std::vector<EpochRecord> history;
  int best_epoch = 0;
};

/// Glorot-uniform initialization, width cfg.hidden_units.
GcnModel init_model(Index input_dim, Index num_classes, const TrainConfig& cfg);

/// Full-batch Adam with early stopping on validation loss. With an empty
/// validation list the last epoch's parameters are returned.
TrainResult train(const SparseMatrix& a_hat, const Eigen::MatrixXd& x,
                  const LabeledSplit& split, const TrainConfig& cfg);

/// Row-wise argmax, ties to the lowest class id.
std::vector<int> predict(const Eigen::MatrixXd& probabilities);

/// Fraction of `idx` whose predicted class equals `labels[v]`.
double accuracy(std::span<const int> predicted, std::span<const Vertex> idx,
                std::span<const int> labels);

double evaluate(const GcnModel& model, const SparseMatrix& a_hat,
                const Eigen::MatrixXd& x, std::span<const Vertex> idx,
                std::span<const int> labels);

/// Checkpoint: char[8] "MVGCNGC1", uint64 F, H, C, then W0 and W1 row-major.
void save_model(const std::filesystem::path& path, const GcnModel& model);
GcnModel load_model(const std::filesystem::path& path);

/// CSV with header `epoch,train_loss,val_loss,val_acc`.
void write_history_csv(const std::filesystem::path& path,
                       std::span<const EpochRecord> history);

}  // namespace mvgcn
