#include "diophnet/grad.hpp"

#include <cmath>
#include <string>

#include "diophnet/adversarial.hpp"
#include "diophnet/error.hpp"
#include "diophnet/training.hpp"

namespace diophnet {

Gradients Gradients::zeros_like(const Network& net) {
  Gradients g;
  g.layers.reserve(net.depth());
  for (const Layer& l : net.layers())
    g.layers.push_back(LayerGradient{Matrix(l.out_dim(), l.in_dim()), Vector(l.out_dim())});
  return g;
}

Gradients Gradients::from_flat(const Network& net, std::span<const double> flat) {
  if (flat.size() != net.parameter_count()) throw ShapeError("Gradients::from_flat: size mismatch");
  Gradients g;
  std::size_t offset = 0;
  for (const Layer& l : net.layers()) {
    auto w = flat.subspan(offset, l.weights.size());
    offset += w.size();
    auto b = flat.subspan(offset, l.bias.size());
    offset += b.size();
    g.layers.push_back(LayerGradient{Matrix(l.out_dim(), l.in_dim(), {w.begin(), w.end()}),
                                     Vector(std::vector<double>(b.begin(), b.end()))});
  }
  return g;
}

std::vector<double> Gradients::flatten() const {
  std::vector<double> out;
  for (const auto& l : layers) {
    out.insert(out.end(), l.d_weights.data().begin(), l.d_weights.data().end());
    out.insert(out.end(), l.d_bias.data().begin(), l.d_bias.data().end());
  }
  return out;
}

TaskBackprop backprop_task(const Network& net, const Dataset& batch, TaskLoss kind) {
  if (batch.empty()) throw ShapeError("backward: empty batch");
  if (batch.inputs.cols() != net.input_dim() || batch.targets.cols() != net.output_dim()) {
    throw ShapeError("backward: batch shape does not match network");
  }
  const std::size_t n = batch.size();
  const double inv_n = 1.0 / static_cast<double>(n);

  TaskBackprop out;
  out.grads = Gradients::zeros_like(net);
  out.grads.d_inputs = Matrix(n, net.input_dim());

  for (std::size_t s = 0; s < n; ++s) {
    const ForwardTrace trace = forward_trace(net, batch.inputs.row_vector(s));
    const Vector target = batch.targets.row_vector(s);
    out.loss += sample_loss(trace.output, target, kind);

    Vector upstream = sample_loss_gradient(trace.output, target, kind);
    for (std::size_t l = net.depth(); l-- > 0;) {
      const Layer& layer = net.layer(l);
      const Vector& z = trace.pre_activations[l];
      Vector dz(z.size());
      for (std::size_t i = 0; i < z.size(); ++i)
        dz[i] = upstream[i] * activation_derivative(layer.activation, z[i]);
      auto& lg = out.grads.layers[l];
      lg.d_weights = axpy(inv_n, outer(dz, trace.inputs[l]), lg.d_weights);
      lg.d_bias = axpy(inv_n, dz, lg.d_bias);
      upstream = matvec_transposed(layer.weights, dz);
    }
    for (std::size_t c = 0; c < upstream.size(); ++c) out.grads.d_inputs(s, c) = upstream[c] * inv_n;
  }
  out.loss *= inv_n;
  if (!std::isfinite(out.loss)) throw NumericError("backward: non-finite loss");
  return out;
}

Gradients constraint_gradient(const Network& net, const Constraint& c) {
  return Gradients::from_flat(net, diophantine_loss_gradient(c, flatten_parameters(net)));
}

BackwardResult backward(const Network& net, const Dataset& batch, const LossConfig& cfg) {
  cfg.validate();
  TaskBackprop clean = backprop_task(net, batch, cfg.task);

  BackwardResult out;
  out.task_loss = clean.loss;
  out.grads = std::move(clean.grads);

  if (cfg.gamma > 0.0) {
    const Dataset adv = adversarial_batch(net, batch, cfg.epsilon, cfg.task);
    const TaskBackprop adv_bp = backprop_task(net, adv, cfg.task);
    out.adversarial_loss = adv_bp.loss;
    for (std::size_t l = 0; l < net.depth(); ++l) {
      auto& lg = out.grads.layers[l];
      lg.d_weights = axpy(cfg.gamma, adv_bp.grads.layers[l].d_weights, lg.d_weights);
      lg.d_bias = axpy(cfg.gamma, adv_bp.grads.layers[l].d_bias, lg.d_bias);
    }
  }
  if (cfg.lambda > 0.0) {
    const std::vector<double> theta = flatten_parameters(net);
    out.constraint_loss = diophantine_loss(*cfg.constraint, theta);
    const Gradients cg = constraint_gradient(net, *cfg.constraint);
    for (std::size_t l = 0; l < net.depth(); ++l) {
      auto& lg = out.grads.layers[l];
      lg.d_weights = axpy(cfg.lambda, cg.layers[l].d_weights, lg.d_weights);
      lg.d_bias = axpy(cfg.lambda, cg.layers[l].d_bias, lg.d_bias);
    }
  }
  out.loss = out.task_loss + cfg.lambda * out.constraint_loss + cfg.gamma * out.adversarial_loss;
  if (!std::isfinite(out.loss)) throw NumericError("backward: non-finite total loss");
  return out;
}

std::vector<double> central_difference(const std::function<double(std::span<const double>)>& f,
                                       std::span<const double> x, double h) {
  if (!(h > 0.0)) throw DomainError("central_difference: h must be > 0");
  std::vector<double> point(x.begin(), x.end());
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = point[i];
    point[i] = orig + h;
    const double up = f(point);
    point[i] = orig - h;
    const double down = f(point);
    point[i] = orig;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

Gradients finite_diff_grad(const Network& net, const Dataset& batch, const LossConfig& cfg, double h) {
  cfg.validate();
  const std::vector<double> theta = flatten_parameters(net);
  auto f = [&](std::span<const double> p) { return total_loss(with_parameters(net, p), batch, cfg); };
  return Gradients::from_flat(net, central_difference(f, theta, h));
}

}  // namespace diophnet
