#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "diophnet/activation.hpp"
#include "diophnet/linalg.hpp"

namespace diophnet {

/// Dense layer computing activation(weights * x + bias).
struct Layer {
  Matrix weights;  // out x in
  Vector bias;     // out
  ActivationSpec activation = Identity{};

  std::size_t in_dim() const { return weights.cols(); }
  std::size_t out_dim() const { return weights.rows(); }
  std::size_t parameter_count() const { return weights.size() + bias.size(); }

  bool operator==(const Layer&) const = default;
};

/// Feed-forward stack of dense layers.  Construction validates that the
/// layer dimensions chain and that every activation is well-formed.
class Network {
 public:
  Network() = default;
  explicit Network(std::vector<Layer> layers);

  const std::vector<Layer>& layers() const { return layers_; }
  const Layer& layer(std::size_t i) const { return layers_.at(i); }
  std::size_t depth() const { return layers_.size(); }
  std::size_t input_dim() const;
  std::size_t output_dim() const;
  std::size_t parameter_count() const;

  bool operator==(const Network&) const = default;

 private:
  std::vector<Layer> layers_;
};

/// Intermediate values of one forward pass; inputs[l] feeds layer l.
struct ForwardTrace {
  std::vector<Vector> inputs;
  std::vector<Vector> pre_activations;
  Vector output;
};

Vector forward(const Network& net, const Vector& x);
ForwardTrace forward_trace(const Network& net, const Vector& x);

// Flattened parameter order: per layer, weights row-major, then bias.
std::vector<double> flatten_parameters(const Network& net);

// Copy of `net` with its parameters replaced by `theta` (same order as
// flatten_parameters).
Network with_parameters(const Network& net, std::span<const double> theta);

// Single-layer helper used throughout the examples.
Network make_single_layer(Matrix weights, Vector bias, ActivationSpec activation = Identity{});

}  // namespace diophnet
