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

#include "mvgcn/gcn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <string>

#include "binary_io.hpp"
#include "mvgcn/error.hpp"
#include "text_util.hpp"

namespace mvgcn {

void TrainConfig::validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw InvalidArgument("train: learning_rate must be finite and >= 0");
  }
  if (max_epochs < 1) throw InvalidArgument("train: max_epochs must be >= 1");
  if (hidden_units < 1) throw InvalidArgument("train: hidden_units must be >= 1");
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw InvalidArgument("train: dropout must lie in [0, 1)");
  }
  if (!(weight_decay >= 0.0)) {
    throw InvalidArgument("train: weight_decay must be >= 0");
  }
  if (early_stop_patience < 1) {
    throw InvalidArgument("train: early_stop_patience must be >= 1");
  }
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) ||
      !(adam_beta2 >= 0.0 && adam_beta2 < 1.0) || !(adam_eps > 0.0)) {
    throw InvalidArgument("train: invalid Adam parameters");
  }
}

int LabeledSplit::class_count() const {
  if (num_classes > 0) return num_classes;
  int mx = -1;
  for (int l : labels) mx = std::max(mx, l);
  return mx + 1;
}

void LabeledSplit::validate(Index n, int num_classes) const {
  if (static_cast<Index>(labels.size()) != n) {
    throw InvalidArgument("split: labels must have one entry per vertex");
  }
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  const auto check = [&](const std::vector<Vertex>& idx, const char* name) {
    for (Vertex v : idx) {
      if (v < 0 || v >= n) {
        throw InvalidArgument(std::string("split: ") + name +
                              " index out of range: " + std::to_string(v));
      }
      if (seen[v]) {
        throw InvalidArgument(std::string("split: vertex ") + std::to_string(v) +
                              " appears twice (overlapping index sets)");
      }
      seen[v] = 1;
      if (labels[v] < 0 || labels[v] >= num_classes) {
        throw InvalidArgument(std::string("split: ") + name + " vertex " +
                              std::to_string(v) + " has no valid label");
      }
    }
  };
  check(train, "train");
  check(val, "val");
  check(test, "test");
}

namespace {

struct Pass {
  Eigen::MatrixXd x_dropped;       // empty when no dropout on X
  Eigen::MatrixXd pre_activation;  // A_hat X W0
  Eigen::MatrixXd hidden_mask;     // scaled keep mask, empty when inactive
  Eigen::MatrixXd hidden;          // ReLU output after dropout
  Eigen::MatrixXd logits;
};

void check_shapes(const GcnModel& model, const SparseMatrix& a_hat,
                  const Eigen::MatrixXd& x) {
  if (a_hat.rows() != a_hat.cols() || a_hat.rows() != x.rows()) {
    throw InvalidArgument("gcn: A_hat is " + std::to_string(a_hat.rows()) + "x" +
                          std::to_string(a_hat.cols()) + " but X has " +
                          std::to_string(x.rows()) + " rows");
  }
  if (model.w0.rows() != x.cols()) {
    throw InvalidArgument("gcn: W0 expects " + std::to_string(model.w0.rows()) +
                          " features, X has " + std::to_string(x.cols()));
  }
  if (model.w1.rows() != model.w0.cols()) {
    throw InvalidArgument("gcn: W0/W1 hidden width mismatch");
  }
}

Eigen::MatrixXd dropout_mask(Index rows, Index cols, double rate,
                             std::mt19937_64& rng) {
  std::bernoulli_distribution keep(1.0 - rate);
  const double scale = 1.0 / (1.0 - rate);
  Eigen::MatrixXd mask(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) mask(i, j) = keep(rng) ? scale : 0.0;
  return mask;
}

void require_finite_layer(const Eigen::MatrixXd& m, const char* layer) {
  if (!m.allFinite()) {
    throw NumericalError(std::string("gcn: non-finite values in ") + layer);
  }
}

Pass run_forward(const GcnModel& model, const SparseMatrix& a_hat,
                 const Eigen::MatrixXd& x, std::optional<std::uint64_t> seed,
                 double rate) {
  check_shapes(model, a_hat, x);
  Pass p;
  const bool active = seed.has_value() && rate > 0.0;
  std::mt19937_64 rng(seed.value_or(0));
  if (active) {
    p.x_dropped = x.cwiseProduct(dropout_mask(x.rows(), x.cols(), rate, rng));
  }
  const Eigen::MatrixXd& input = active ? p.x_dropped : x;
  p.pre_activation = a_hat * (input * model.w0);
  require_finite_layer(p.pre_activation, "layer 1 (A_hat X W0)");
  p.hidden = p.pre_activation.cwiseMax(0.0);
  if (active) {
    p.hidden_mask = dropout_mask(p.hidden.rows(), p.hidden.cols(), rate, rng);
    p.hidden = p.hidden.cwiseProduct(p.hidden_mask);
  }
  p.logits = a_hat * (p.hidden * model.w1);
  require_finite_layer(p.logits, "layer 2 (A_hat H W1)");
  return p;
}

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd z(logits.rows(), logits.cols());
  for (Index i = 0; i < logits.rows(); ++i) {
    const double mx = logits.row(i).maxCoeff();
    z.row(i) = (logits.row(i).array() - mx).exp();
    z.row(i) /= z.row(i).sum();
  }
  return z;
}

// Mean of -log softmax(logits)[v, label] over idx.
double cross_entropy(const Eigen::MatrixXd& logits, std::span<const Vertex> idx,
                     std::span<const int> labels) {
  if (idx.empty()) return 0.0;
  double total = 0.0;
  for (Vertex v : idx) {
    const double mx = logits.row(v).maxCoeff();
    const double lse = mx + std::log((logits.row(v).array() - mx).exp().sum());
    total += lse - logits(v, labels[v]);
  }
  return total / static_cast<double>(idx.size());
}

}  // namespace

Eigen::MatrixXd forward(const GcnModel& model, const SparseMatrix& a_hat,
                        const Eigen::MatrixXd& x, bool dropout_active,
                        std::uint64_t seed, double dropout) {
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw InvalidArgument("gcn: dropout must lie in [0, 1)");
  }
  const Pass p = run_forward(model, a_hat, x,
                             dropout_active ? std::optional(seed) : std::nullopt,
                             dropout);
  return softmax_rows(p.logits);
}

LossAndGrads loss_and_grads(const GcnModel& model, const SparseMatrix& a_hat,
                            const Eigen::MatrixXd& x, const LabeledSplit& split,
                            const TrainConfig& cfg,
                            std::optional<std::uint64_t> dropout_seed) {
  if (split.train.empty()) throw InvalidArgument("gcn: empty training set");
  const Pass p = run_forward(model, a_hat, x, dropout_seed, cfg.dropout);
  const Eigen::MatrixXd z = softmax_rows(p.logits);

  LossAndGrads out;
  out.loss = cross_entropy(p.logits, split.train, split.labels) +
             0.5 * cfg.weight_decay * model.w0.squaredNorm();

  const double inv = 1.0 / static_cast<double>(split.train.size());
  Eigen::MatrixXd d_logits = Eigen::MatrixXd::Zero(z.rows(), z.cols());
  for (Vertex v : split.train) {
    d_logits.row(v) = z.row(v) * inv;
    d_logits(v, split.labels[v]) -= inv;
  }
  // A_hat is symmetric, so A_hat^T G == A_hat G.
  const Eigen::MatrixXd d_out = a_hat * d_logits;
  out.grad_w1 = p.hidden.transpose() * d_out;
  Eigen::MatrixXd d_hidden = d_out * model.w1.transpose();
  if (p.hidden_mask.size() > 0) d_hidden = d_hidden.cwiseProduct(p.hidden_mask);
  d_hidden = (p.pre_activation.array() > 0.0).select(d_hidden, 0.0);
  const Eigen::MatrixXd d_in = a_hat * d_hidden;
  const Eigen::MatrixXd& input = p.x_dropped.size() > 0 ? p.x_dropped : x;
  out.grad_w0 = input.transpose() * d_in + cfg.weight_decay * model.w0;
  return out;
}

GcnModel init_model(Index input_dim, Index num_classes, const TrainConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  const auto glorot = [&rng](Index rows, Index cols) {
    const double r = std::sqrt(6.0 / static_cast<double>(rows + cols));
    std::uniform_real_distribution<double> u(-r, r);
    Eigen::MatrixXd w(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) w(i, j) = u(rng);
    return w;
  };
  GcnModel m;
  m.w0 = glorot(input_dim, cfg.hidden_units);
  m.w1 = glorot(cfg.hidden_units, num_classes);
  return m;
}

TrainResult train(const SparseMatrix& a_hat, const Eigen::MatrixXd& x,
                  const LabeledSplit& split, const TrainConfig& cfg) {
  cfg.validate();
  require_finite(x, "features");
  const int num_classes = split.class_count();
  if (num_classes < 1) throw InvalidArgument("train: no labeled vertices");
  split.validate(x.rows(), num_classes);

  TrainResult result;
  GcnModel model = init_model(x.cols(), num_classes, cfg);
  result.model = model;

  // Separate stream from initialization: toggling dropout never changes W.
  std::seed_seq mask_seq{static_cast<std::uint32_t>(cfg.seed),
                         static_cast<std::uint32_t>(cfg.seed >> 32), 0xd209u};
  std::mt19937_64 mask_rng(mask_seq);

  Eigen::MatrixXd m0 = Eigen::MatrixXd::Zero(model.w0.rows(), model.w0.cols());
  Eigen::MatrixXd v0 = m0;
  Eigen::MatrixXd m1 = Eigen::MatrixXd::Zero(model.w1.rows(), model.w1.cols());
  Eigen::MatrixXd v1 = m1;
  const auto adam = [&cfg](Eigen::MatrixXd& w, const Eigen::MatrixXd& g,
                           Eigen::MatrixXd& m, Eigen::MatrixXd& v, int t) {
    m = cfg.adam_beta1 * m + (1.0 - cfg.adam_beta1) * g;
    v = cfg.adam_beta2 * v + (1.0 - cfg.adam_beta2) * g.cwiseProduct(g);
    const double c1 = 1.0 - std::pow(cfg.adam_beta1, t);
    const double c2 = 1.0 - std::pow(cfg.adam_beta2, t);
    w.array() -= cfg.learning_rate * (m.array() / c1) /
                 ((v.array() / c2).sqrt() + cfg.adam_eps);
  };

  double best_val = std::numeric_limits<double>::infinity();
  int stale = 0;
  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    const std::uint64_t mask_seed = mask_rng();
    const LossAndGrads lg = loss_and_grads(
        model, a_hat, x, split, cfg,
        cfg.dropout > 0.0 ? std::optional(mask_seed) : std::nullopt);
    adam(model.w0, lg.grad_w0, m0, v0, epoch);
    adam(model.w1, lg.grad_w1, m1, v1, epoch);

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = lg.loss;
    if (!split.val.empty()) {
      const Pass p = run_forward(model, a_hat, x, std::nullopt, 0.0);
      rec.val_loss = cross_entropy(p.logits, split.val, split.labels);
      rec.val_acc = accuracy(predict(p.logits), split.val, split.labels);
    }
    result.history.push_back(rec);

    if (split.val.empty()) {
      result.model = model;
      result.best_epoch = epoch;
      continue;
    }
    if (rec.val_loss < best_val) {
      best_val = rec.val_loss;
      result.model = model;
      result.best_epoch = epoch;
      stale = 0;
    } else if (++stale >= cfg.early_stop_patience) {
      break;
    }
  }
  return result;
}

std::vector<int> predict(const Eigen::MatrixXd& probabilities) {
  std::vector<int> out(static_cast<std::size_t>(probabilities.rows()));
  for (Index i = 0; i < probabilities.rows(); ++i) {
    Index best = 0;
    for (Index c = 1; c < probabilities.cols(); ++c) {
      if (probabilities(i, c) > probabilities(i, best)) best = c;
    }
    out[i] = static_cast<int>(best);
  }
  return out;
}

double accuracy(std::span<const int> predicted, std::span<const Vertex> idx,
                std::span<const int> labels) {
  if (idx.empty()) throw InvalidArgument("accuracy: empty index list");
  std::size_t hits = 0;
  for (Vertex v : idx) {
    if (v < 0 || static_cast<std::size_t>(v) >= predicted.size() ||
        static_cast<std::size_t>(v) >= labels.size()) {
      throw InvalidArgument("accuracy: index out of range");
    }
    if (predicted[v] == labels[v]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(idx.size());
}

double evaluate(const GcnModel& model, const SparseMatrix& a_hat,
                const Eigen::MatrixXd& x, std::span<const Vertex> idx,
                std::span<const int> labels) {
  return accuracy(predict(forward(model, a_hat, x)), idx, labels);
}

namespace {
constexpr std::string_view kModelMagic = "MVGCNGC1";
}

void save_model(const std::filesystem::path& path, const GcnModel& model) {
  detail::BinaryWriter w(path.string());
  w.magic(kModelMagic);
  w.u64(static_cast<std::uint64_t>(model.input_dim()));
  w.u64(static_cast<std::uint64_t>(model.hidden_dim()));
  w.u64(static_cast<std::uint64_t>(model.num_classes()));
  w.matrix(model.w0);
  w.matrix(model.w1);
  w.finish();
}

GcnModel load_model(const std::filesystem::path& path) {
  detail::BinaryReader r(path.string());
  r.expect_magic(kModelMagic);
  const std::uint64_t f = r.u64();
  const std::uint64_t h = r.u64();
  const std::uint64_t c = r.u64();
  GcnModel m;
  m.w0 = r.matrix(f, h);
  m.w1 = r.matrix(h, c);
  r.expect_end();
  require_finite(m.w0, "checkpoint W0");
  require_finite(m.w1, "checkpoint W1");
  return m;
}

void write_history_csv(const std::filesystem::path& path,
                       std::span<const EpochRecord> history) {
  std::ofstream out(path);
  if (!out) throw IoError(path.string(), 0, "cannot open for writing");
  out << "epoch,train_loss,val_loss,val_acc\n";
  for (const EpochRecord& r : history) {
    out << r.epoch << ',' << detail::format_double(r.train_loss) << ','
        << detail::format_double(r.val_loss) << ','
        << detail::format_double(r.val_acc) << '\n';
  }
}

}  // namespace mvgcn
