#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "diophnet/encoding.hpp"
#include "diophnet/linalg.hpp"
#include "diophnet/network.hpp"

namespace diophnet {

/// Paired samples: row i of `inputs` maps to row i of `targets`.
struct Dataset {
  Matrix inputs;   // n x in
  Matrix targets;  // n x out

  Dataset() = default;
  Dataset(Matrix inputs, Matrix targets);

  std::size_t size() const { return inputs.rows(); }
  bool empty() const { return inputs.rows() == 0; }
  Dataset subset(std::span<const std::size_t> rows) const;
};

enum class TaskLoss { mse, cross_entropy };

struct LossConfig {
  TaskLoss task = TaskLoss::mse;
  double lambda = 0.0;   // constraint penalty weight
  double gamma = 0.0;    // adversarial loss weight
  double epsilon = 0.0;  // adversarial step size
  std::optional<Constraint> constraint;

  // lambda > 0 requires a constraint.  gamma > 0 with epsilon = 0 is legal and
  // simply counts the clean loss twice.
  void validate() const;
};

/// Loss between two equal-length vectors.  For mse this is the mean of the
/// squared differences; for cross_entropy `pred` holds logits and `target` a
/// class distribution (usually one-hot).
double task_loss(const Vector& pred, const Vector& target, TaskLoss kind);

// Per-sample contribution to a batch loss: sum of squared errors for mse,
// negative log-likelihood for cross_entropy.  Batch losses average these.
double sample_loss(const Vector& pred, const Vector& target, TaskLoss kind);
Vector sample_loss_gradient(const Vector& pred, const Vector& target, TaskLoss kind);

// Regression: every output within 0.5 of its target.  Classification: argmax match.
bool prediction_correct(const Vector& pred, const Vector& target, TaskLoss kind);

// Mean sample_loss of net over the data.
double dataset_loss(const Network& net, const Dataset& data, TaskLoss kind);
double accuracy(const Network& net, const Dataset& data, TaskLoss kind);

}  // namespace diophnet
