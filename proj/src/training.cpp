#include "diophnet/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "diophnet/adversarial.hpp"
#include "diophnet/error.hpp"

namespace diophnet {

std::string_view mode_name(TrainingMode mode) {
  return mode == TrainingMode::normal ? "normal" : "diophantine";
}

TrainingMode parse_mode(std::string_view text) {
  if (text == "normal") return TrainingMode::normal;
  if (text == "diophantine") return TrainingMode::diophantine;
  throw ConfigError("unknown training mode '" + std::string(text) + "'");
}

void TrainingConfig::validate() const {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ConfigError("eta must be > 0");
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
}

double total_loss(const Network& net, const Dataset& batch, const LossConfig& cfg) {
  cfg.validate();
  double loss = dataset_loss(net, batch, cfg.task);
  if (cfg.lambda > 0.0) loss += cfg.lambda * diophantine_loss(*cfg.constraint, flatten_parameters(net));
  if (cfg.gamma > 0.0) {
    loss += cfg.gamma * dataset_loss(net, adversarial_batch(net, batch, cfg.epsilon, cfg.task), cfg.task);
  }
  return loss;
}

Network apply_update(const Network& net, const Gradients& grads, double eta, TrainingMode mode) {
  std::vector<double> theta = flatten_parameters(net);
  const std::vector<double> g = grads.flatten();
  if (g.size() != theta.size()) throw ShapeError("apply_update: gradient shape mismatch");
  for (std::size_t i = 0; i < theta.size(); ++i) theta[i] -= eta * g[i];
  require_finite(theta, "apply_update");
  if (mode == TrainingMode::diophantine) theta = project_integers(theta);
  return with_parameters(net, theta);
}

EpochMetrics evaluate(const Network& net, const Dataset& train, const Dataset& val,
                      const LossConfig& cfg, std::size_t epoch) {
  EpochMetrics m;
  m.epoch = epoch;
  m.train_loss = dataset_loss(net, train, cfg.task);
  m.train_acc = accuracy(net, train, cfg.task);
  m.val_loss = dataset_loss(net, val, cfg.task);
  m.val_acc = accuracy(net, val, cfg.task);
  m.adv_acc = accuracy(net, adversarial_batch(net, val, cfg.epsilon, cfg.task), cfg.task);
  if (cfg.constraint) m.constraint_residual = constraint_residual(*cfg.constraint, flatten_parameters(net));
  return m;
}

EpochResult train_epoch(const Network& net, const Dataset& train, const Dataset& val,
                        const TrainingConfig& t_cfg, const LossConfig& l_cfg, std::mt19937_64& rng,
                        std::size_t epoch) {
  if (train.empty()) throw ShapeError("train_epoch: empty training data");
  const std::size_t n = train.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  const bool full_batch = t_cfg.batch_size == 0 || t_cfg.batch_size >= n;
  if (!full_batch) std::shuffle(order.begin(), order.end(), rng);
  const std::size_t bs = full_batch ? n : t_cfg.batch_size;

  Network current = net;
  std::size_t batch_index = 0;
  for (std::size_t start = 0; start < n; start += bs, ++batch_index) {
    const std::size_t stop = std::min(n, start + bs);
    const Dataset batch =
        full_batch ? train : train.subset(std::span<const std::size_t>(order).subspan(start, stop - start));
    try {
      const BackwardResult bw = backward(current, batch, l_cfg);
      current = apply_update(current, bw.grads, t_cfg.eta, t_cfg.mode);
    } catch (const NumericError& e) {
      throw NumericError("epoch " + std::to_string(epoch) + ", batch " + std::to_string(batch_index) +
                         ": " + e.what());
    }
  }
  try {
    EpochMetrics metrics = evaluate(current, train, val, l_cfg, epoch);
    return EpochResult{std::move(current), metrics};
  } catch (const NumericError& e) {
    throw NumericError("epoch " + std::to_string(epoch) + ", after batch " +
                       std::to_string(batch_index - 1) + ": " + e.what());
  }
}

TrainResult train(const Network& net, const Dataset& train_data, const Dataset& val_data,
                  const TrainingConfig& t_cfg, const LossConfig& l_cfg) {
  t_cfg.validate();
  l_cfg.validate();
  if (val_data.empty()) throw ShapeError("train: empty validation data");

  TrainResult result;
  Network current = net;
  if (t_cfg.lll_init) {
    const EncodingMap map = l_cfg.constraint ? l_cfg.constraint->map : EncodingMap{};
    result.lll = lll_init(current, map);
    current = result.lll->net;
  }
  if (t_cfg.mode == TrainingMode::diophantine) current = project_integers(current);

  std::mt19937_64 rng(t_cfg.seed);
  result.history.reserve(t_cfg.epochs);
  for (std::size_t epoch = 1; epoch <= t_cfg.epochs; ++epoch) {
    EpochResult step = train_epoch(current, train_data, val_data, t_cfg, l_cfg, rng, epoch);
    current = std::move(step.net);
    result.history.push_back(step.metrics);
  }
  result.net = std::move(current);
  return result;
}

}  // namespace diophnet
