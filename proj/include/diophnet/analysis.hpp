#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "diophnet/encoding.hpp"
#include "diophnet/linalg.hpp"
#include "diophnet/loss.hpp"
#include "diophnet/network.hpp"

namespace diophnet {

/// Monte-Carlo estimate of E[ ||N(x + dx) - N(x)||^2 ] with dx drawn
/// coordinatewise from N(0, sigma^2).  Deterministic for a given seed.
double output_variance(const Network& net, const Vector& x, double sigma, std::size_t samples,
                       std::uint64_t seed);

enum class NormBound {
  spectral,   // largest singular value of each weight matrix
  frobenius,  // Frobenius norm, a looser certified bound
};

struct LipschitzReport {
  double bound = 0.0;
  NormBound norm = NormBound::spectral;
  std::vector<double> layer_factors;  // L_phi(M) * ||W_l|| per layer
};

/// Product over layers of lipschitz_constant(activation, m) times the weight
/// norm bound.  `m` must bound every pre-activation magnitude.
LipschitzReport network_lipschitz_upper(const Network& net, double m,
                                        NormBound norm = NormBound::spectral);

double adversarial_accuracy(const Network& net, const Dataset& data, double epsilon,
                            TaskLoss kind = TaskLoss::mse);

struct ErrorPropagationReport {
  std::vector<double> ratios;  // ||layer(a + d) - layer(a)|| / ||d|| per layer
  std::vector<double> bounds;  // L_phi(M) * ||W_l||_2 per layer
  double product_bound = 0.0;
  // Product of the activation constants alone, without weight norms.
  double activation_only_bound = 0.0;
  bool within_bounds = true;
};

/// Pushes x and x + delta through the network side by side and records the
/// amplification of the difference at every layer.  Throws
/// DegenerateInputError when delta is zero.
ErrorPropagationReport error_propagation_report(const Network& net, const Vector& x,
                                                const Vector& delta, double m);

struct StabilityReport {
  double variance = 0.0;
  double lipschitz_upper = 0.0;
  std::size_t samples = 0;
  double sigma = 0.0;
  // variance <= lipschitz_upper^2 * sigma^2 * input_dim is expected.
  double variance_ceiling = 0.0;
};

StabilityReport stability_report(const Network& net, const Vector& x, double sigma,
                                 std::size_t samples, std::uint64_t seed, double m);

/// Fraction of Gaussian parameter perturbations theta + d (scale sigma) whose
/// encoding still satisfies the constraint exactly.
double constrained_perturbation_survival(const Constraint& c, std::span<const double> theta,
                                         double sigma, std::size_t samples, std::uint64_t seed);

}  // namespace diophnet
