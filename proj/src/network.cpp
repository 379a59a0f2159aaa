#include "diophnet/network.hpp"

#include <string>

#include "diophnet/error.hpp"

namespace diophnet {

Network::Network(std::vector<Layer> layers) : layers_(std::move(layers)) {
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const Layer& layer = layers_[l];
    if (layer.bias.size() != layer.out_dim()) {
      throw ShapeError("layer " + std::to_string(l) + ": bias length " +
                       std::to_string(layer.bias.size()) + " != weight rows " +
                       std::to_string(layer.out_dim()));
    }
    if (l > 0 && layer.in_dim() != layers_[l - 1].out_dim()) {
      throw ShapeError("layer " + std::to_string(l) + ": input dim " +
                       std::to_string(layer.in_dim()) + " does not chain with previous output " +
                       std::to_string(layers_[l - 1].out_dim()));
    }
    require_finite(layer.weights.data(), "layer weights");
    require_finite(layer.bias.data(), "layer bias");
    validate(layer.activation);
  }
}

std::size_t Network::input_dim() const { return layers_.empty() ? 0 : layers_.front().in_dim(); }

std::size_t Network::output_dim() const { return layers_.empty() ? 0 : layers_.back().out_dim(); }

std::size_t Network::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += l.parameter_count();
  return n;
}

ForwardTrace forward_trace(const Network& net, const Vector& x) {
  if (x.size() != net.input_dim()) {
    throw ShapeError("forward: input length " + std::to_string(x.size()) + " != " +
                     std::to_string(net.input_dim()));
  }
  ForwardTrace trace;
  trace.inputs.reserve(net.depth());
  trace.pre_activations.reserve(net.depth());
  Vector a = x;
  for (const Layer& layer : net.layers()) {
    Vector z = axpy(1.0, matvec(layer.weights, a), layer.bias);
    Vector out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = activation_eval(layer.activation, z[i]);
    require_finite(out.data(), "activation output");
    trace.inputs.push_back(std::move(a));
    trace.pre_activations.push_back(std::move(z));
    a = std::move(out);
  }
  trace.output = std::move(a);
  return trace;
}

Vector forward(const Network& net, const Vector& x) { return forward_trace(net, x).output; }

std::vector<double> flatten_parameters(const Network& net) {
  std::vector<double> theta;
  theta.reserve(net.parameter_count());
  for (const Layer& layer : net.layers()) {
    theta.insert(theta.end(), layer.weights.data().begin(), layer.weights.data().end());
    theta.insert(theta.end(), layer.bias.data().begin(), layer.bias.data().end());
  }
  return theta;
}

Network with_parameters(const Network& net, std::span<const double> theta) {
  if (theta.size() != net.parameter_count()) {
    throw ShapeError("with_parameters: expected " + std::to_string(net.parameter_count()) +
                     " values, got " + std::to_string(theta.size()));
  }
  std::vector<Layer> layers;
  layers.reserve(net.depth());
  std::size_t offset = 0;
  for (const Layer& layer : net.layers()) {
    auto w = theta.subspan(offset, layer.weights.size());
    offset += w.size();
    auto b = theta.subspan(offset, layer.bias.size());
    offset += b.size();
    layers.push_back(Layer{Matrix(layer.out_dim(), layer.in_dim(), {w.begin(), w.end()}),
                           Vector(std::vector<double>(b.begin(), b.end())), layer.activation});
  }
  return Network(std::move(layers));
}

Network make_single_layer(Matrix weights, Vector bias, ActivationSpec activation) {
  return Network({Layer{std::move(weights), std::move(bias), activation}});
}

}  // namespace diophnet
