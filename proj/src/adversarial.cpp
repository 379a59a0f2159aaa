#include "diophnet/adversarial.hpp"

#include <string>

#include "diophnet/error.hpp"
#include "diophnet/grad.hpp"

namespace diophnet {

namespace {

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

Vector adversarial_perturb(const Network& net, const Vector& x, const Vector& y, double epsilon,
                           TaskLoss kind) {
  if (!(epsilon >= 0.0)) throw DomainError("adversarial_perturb: epsilon must be >= 0");
  if (epsilon == 0.0) return x;
  const Dataset single(Matrix(1, x.size(), x.values()), Matrix(1, y.size(), y.values()));
  const auto bp = backprop_task(net, single, kind);
  Vector out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += epsilon * sign(bp.grads.d_inputs(0, i));
  return out;
}

Dataset adversarial_batch(const Network& net, const Dataset& batch, double epsilon, TaskLoss kind) {
  if (!(epsilon >= 0.0)) throw DomainError("adversarial_batch: epsilon must be >= 0");
  if (epsilon == 0.0) return batch;
  // Row signs of the batch-mean input gradient equal the per-sample signs.
  const auto bp = backprop_task(net, batch, kind);
  Matrix inputs = batch.inputs;
  for (std::size_t r = 0; r < inputs.rows(); ++r)
    for (std::size_t c = 0; c < inputs.cols(); ++c)
      inputs(r, c) += epsilon * sign(bp.grads.d_inputs(r, c));
  return Dataset(std::move(inputs), batch.targets);
}

}  // namespace diophnet
