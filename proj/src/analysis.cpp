#include "diophnet/analysis.hpp"

#include <cmath>
#include <random>

#include "diophnet/adversarial.hpp"
#include "diophnet/error.hpp"

namespace diophnet {

namespace {

// Relative slack added to computed norms so round-off cannot undercut the
// certified bound.
constexpr double kNormMargin = 1e-12;

double weight_norm(const Matrix& w, NormBound norm) {
  const double raw = norm == NormBound::spectral ? spectral_norm(w) : std::sqrt(frobenius_sq(w));
  return raw * (1.0 + kNormMargin);
}

Vector apply_layer(const Layer& layer, const Vector& a) {
  Vector z = axpy(1.0, matvec(layer.weights, a), layer.bias);
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = activation_eval(layer.activation, z[i]);
  return z;
}

}  // namespace

double output_variance(const Network& net, const Vector& x, double sigma, std::size_t samples,
                       std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw DomainError("output_variance: sigma must be >= 0");
  if (samples < 1) throw DomainError("output_variance: samples must be >= 1");
  if (sigma == 0.0) return 0.0;
  const Vector base = forward(net, x);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  double acc = 0.0;
  Vector shifted = x;
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t i = 0; i < x.size(); ++i) shifted[i] = x[i] + noise(rng);
    const Vector y = forward(net, shifted);
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double d = y[i] - base[i];
      acc += d * d;
    }
  }
  return acc / static_cast<double>(samples);
}

LipschitzReport network_lipschitz_upper(const Network& net, double m, NormBound norm) {
  LipschitzReport report;
  report.norm = norm;
  report.bound = 1.0;
  for (const Layer& layer : net.layers()) {
    const double factor = lipschitz_constant(layer.activation, m) * weight_norm(layer.weights, norm);
    report.layer_factors.push_back(factor);
    report.bound *= factor;
  }
  return report;
}

double adversarial_accuracy(const Network& net, const Dataset& data, double epsilon, TaskLoss kind) {
  return accuracy(net, adversarial_batch(net, data, epsilon, kind), kind);
}

ErrorPropagationReport error_propagation_report(const Network& net, const Vector& x,
                                                const Vector& delta, double m) {
  if (delta.size() != x.size()) throw ShapeError("error_propagation_report: delta length mismatch");
  if (norm(delta) == 0.0) throw DegenerateInputError("error_propagation_report: zero perturbation");

  ErrorPropagationReport report;
  report.product_bound = 1.0;
  report.activation_only_bound = 1.0;
  Vector clean = x;
  Vector noisy = axpy(1.0, delta, x);
  for (const Layer& layer : net.layers()) {
    const double in_gap = norm(axpy(-1.0, clean, noisy));
    Vector next_clean = apply_layer(layer, clean);
    Vector next_noisy = apply_layer(layer, noisy);
    const double out_gap = norm(axpy(-1.0, next_clean, next_noisy));
    const double ratio = in_gap == 0.0 ? 0.0 : out_gap / in_gap;
    const double act = lipschitz_constant(layer.activation, m);
    const double bound = act * weight_norm(layer.weights, NormBound::spectral);
    report.ratios.push_back(ratio);
    report.bounds.push_back(bound);
    report.product_bound *= bound;
    report.activation_only_bound *= act;
    if (ratio > bound) report.within_bounds = false;
    clean = std::move(next_clean);
    noisy = std::move(next_noisy);
  }
  return report;
}

StabilityReport stability_report(const Network& net, const Vector& x, double sigma,
                                 std::size_t samples, std::uint64_t seed, double m) {
  StabilityReport r;
  r.variance = output_variance(net, x, sigma, samples, seed);
  r.lipschitz_upper = network_lipschitz_upper(net, m).bound;
  r.samples = samples;
  r.sigma = sigma;
  r.variance_ceiling = r.lipschitz_upper * r.lipschitz_upper * sigma * sigma *
                       static_cast<double>(net.input_dim());
  return r;
}

double constrained_perturbation_survival(const Constraint& c, std::span<const double> theta,
                                         double sigma, std::size_t samples, std::uint64_t seed) {
  if (samples < 1) throw DomainError("constrained_perturbation_survival: samples must be >= 1");
  if (!(sigma >= 0.0)) throw DomainError("constrained_perturbation_survival: sigma must be >= 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma > 0.0 ? sigma : 1.0);
  std::vector<double> moved(theta.begin(), theta.end());
  std::size_t kept = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t i = 0; i < moved.size(); ++i) moved[i] = theta[i] + (sigma > 0.0 ? noise(rng) : 0.0);
    if (c.polynomial.eval(encode(c.select(moved), c.map)) == 0) ++kept;
  }
  return static_cast<double>(kept) / static_cast<double>(samples);
}

}  // namespace diophnet
