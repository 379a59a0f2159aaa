#pragma once

#include <functional>
#include <span>
#include <vector>

#include "diophnet/encoding.hpp"
#include "diophnet/linalg.hpp"
#include "diophnet/loss.hpp"
#include "diophnet/network.hpp"

namespace diophnet {

struct LayerGradient {
  Matrix d_weights;
  Vector d_bias;
};

/// Parameter gradients aligned with the network's layers, plus the gradient
/// of the clean task loss with respect to every input row (n x in).
struct Gradients {
  std::vector<LayerGradient> layers;
  Matrix d_inputs;

  static Gradients zeros_like(const Network& net);
  // Layer gradients from a flat vector in flatten_parameters order.
  static Gradients from_flat(const Network& net, std::span<const double> flat);

  // Same order as flatten_parameters.
  std::vector<double> flatten() const;
};

struct TaskBackprop {
  double loss = 0.0;  // mean sample_loss over the batch
  Gradients grads;
};

// Reverse-mode pass for the batch-mean task loss alone.
TaskBackprop backprop_task(const Network& net, const Dataset& batch, TaskLoss kind);

struct BackwardResult {
  double loss = 0.0;  // task + lambda * constraint + gamma * adversarial
  double task_loss = 0.0;
  double constraint_loss = 0.0;
  double adversarial_loss = 0.0;
  Gradients grads;
};

/// Exact gradients of the configured total loss.
///
/// The adversarial copy of the batch is generated from the current parameters
/// and then held fixed, so its contribution is gamma times the task gradient
/// on the perturbed inputs.  The constraint term is differentiated through
/// the smooth embedding P(scale * theta).
BackwardResult backward(const Network& net, const Dataset& batch, const LossConfig& cfg);

// Gradient of diophantine_loss(c, theta) laid out per layer.
Gradients constraint_gradient(const Network& net, const Constraint& c);

// Central differences (f(x + h e_i) - f(x - h e_i)) / 2h for every coordinate.
std::vector<double> central_difference(const std::function<double(std::span<const double>)>& f,
                                       std::span<const double> x, double h);

// Finite-difference oracle of total_loss over every network parameter.
// d_inputs is left empty.
Gradients finite_diff_grad(const Network& net, const Dataset& batch, const LossConfig& cfg,
                           double h = 1e-6);

}  // namespace diophnet
