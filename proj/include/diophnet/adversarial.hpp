#pragma once

#include "diophnet/linalg.hpp"
#include "diophnet/loss.hpp"
#include "diophnet/network.hpp"

namespace diophnet {

/// Fast-gradient-sign step x + epsilon * sign(grad_x loss(net(x), y)),
/// with sign(0) = 0.
Vector adversarial_perturb(const Network& net, const Vector& x, const Vector& y, double epsilon,
                           TaskLoss kind = TaskLoss::mse);

// adversarial_perturb applied row by row.
Dataset adversarial_batch(const Network& net, const Dataset& batch, double epsilon, TaskLoss kind);

}  // namespace diophnet
