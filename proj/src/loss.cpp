#include "diophnet/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "diophnet/error.hpp"

namespace diophnet {

namespace {

void require_same_length(const Vector& a, const Vector& b, const char* what) {
  if (a.size() != b.size()) {
    throw ShapeError(std::string(what) + ": length " + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()));
  }
}

double log_sum_exp(const Vector& v) {
  const double m = *std::max_element(v.begin(), v.end());
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

std::size_t argmax(const Vector& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

Dataset::Dataset(Matrix in, Matrix out) : inputs(std::move(in)), targets(std::move(out)) {
  if (inputs.rows() != targets.rows()) {
    throw ShapeError("Dataset: " + std::to_string(inputs.rows()) + " inputs vs " +
                     std::to_string(targets.rows()) + " targets");
  }
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  std::vector<double> in, out;
  in.reserve(rows.size() * inputs.cols());
  out.reserve(rows.size() * targets.cols());
  for (auto r : rows) {
    if (r >= size()) throw ShapeError("Dataset::subset: row out of range");
    auto a = inputs.row(r);
    auto b = targets.row(r);
    in.insert(in.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
  }
  return Dataset(Matrix(rows.size(), inputs.cols(), std::move(in)),
                 Matrix(rows.size(), targets.cols(), std::move(out)));
}

void LossConfig::validate() const {
  if (!(lambda >= 0.0) || !(gamma >= 0.0) || !(epsilon >= 0.0) || !std::isfinite(lambda) ||
      !std::isfinite(gamma) || !std::isfinite(epsilon))
    throw ConfigError("lambda, gamma and epsilon must be finite and >= 0");
  if (lambda > 0.0 && !constraint) throw ConfigError("lambda > 0 requires a constraint");
  if (constraint && !(constraint->map.scale > 0.0 && std::isfinite(constraint->map.scale)))
    throw ConfigError("constraint scale must be > 0");
}

double task_loss(const Vector& pred, const Vector& target, TaskLoss kind) {
  require_same_length(pred, target, "task_loss");
  if (pred.empty()) throw ShapeError("task_loss: empty input");
  if (kind == TaskLoss::cross_entropy) return sample_loss(pred, target, kind);
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double r = target[i] - pred[i];
    acc += r * r;
  }
  return acc / static_cast<double>(pred.size());
}

double sample_loss(const Vector& pred, const Vector& target, TaskLoss kind) {
  require_same_length(pred, target, "sample_loss");
  if (kind == TaskLoss::mse) {
    double acc = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      const double r = target[i] - pred[i];
      acc += r * r;
    }
    return acc;
  }
  const double lse = log_sum_exp(pred);
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) acc -= target[i] * (pred[i] - lse);
  return acc;
}

Vector sample_loss_gradient(const Vector& pred, const Vector& target, TaskLoss kind) {
  require_same_length(pred, target, "sample_loss_gradient");
  Vector g(pred.size());
  if (kind == TaskLoss::mse) {
    for (std::size_t i = 0; i < pred.size(); ++i) g[i] = 2.0 * (pred[i] - target[i]);
    return g;
  }
  const double lse = log_sum_exp(pred);
  double mass = 0.0;
  for (double t : target) mass += t;
  for (std::size_t i = 0; i < pred.size(); ++i) g[i] = mass * std::exp(pred[i] - lse) - target[i];
  return g;
}

bool prediction_correct(const Vector& pred, const Vector& target, TaskLoss kind) {
  require_same_length(pred, target, "prediction_correct");
  if (kind == TaskLoss::cross_entropy) return argmax(pred) == argmax(target);
  for (std::size_t i = 0; i < pred.size(); ++i)
    if (std::abs(pred[i] - target[i]) > 0.5) return false;
  return true;
}

double dataset_loss(const Network& net, const Dataset& data, TaskLoss kind) {
  if (data.empty()) throw ShapeError("dataset_loss: empty dataset");
  double acc = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i)
    acc += sample_loss(forward(net, data.inputs.row_vector(i)), data.targets.row_vector(i), kind);
  return acc / static_cast<double>(data.size());
}

double accuracy(const Network& net, const Dataset& data, TaskLoss kind) {
  if (data.empty()) throw ShapeError("accuracy: empty dataset");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < data.size(); ++i)
    if (prediction_correct(forward(net, data.inputs.row_vector(i)), data.targets.row_vector(i), kind))
      ++hits;
  return static_cast<double>(hits) / static_cast<double>(data.size());
}

}  // namespace diophnet
