#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "diophnet/grad.hpp"
#include "diophnet/lattice.hpp"
#include "diophnet/loss.hpp"
#include "diophnet/network.hpp"

namespace diophnet {

enum class TrainingMode { normal, diophantine };

std::string_view mode_name(TrainingMode mode);
TrainingMode parse_mode(std::string_view text);

struct TrainingConfig {
  double eta = 0.1;
  std::size_t epochs = 1;
  std::size_t batch_size = 0;  // 0 or >= dataset size: full batch
  TrainingMode mode = TrainingMode::normal;
  std::uint64_t seed = 0;
  bool lll_init = false;

  void validate() const;
  bool operator==(const TrainingConfig&) const = default;
};

struct EpochMetrics {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double train_acc = 0.0;
  double val_loss = 0.0;
  double val_acc = 0.0;
  double adv_acc = 0.0;
  double constraint_residual = 0.0;

  bool operator==(const EpochMetrics&) const = default;
};

/// task loss on the clean batch + lambda * constraint penalty
/// + gamma * task loss on the adversarially perturbed batch.
double total_loss(const Network& net, const Dataset& batch, const LossConfig& cfg);

// theta - eta * grad, then the integer projection in diophantine mode.
Network apply_update(const Network& net, const Gradients& grads, double eta, TrainingMode mode);

// Task loss/accuracy on both splits, adversarial accuracy on the validation
// split and the exact constraint residual.
EpochMetrics evaluate(const Network& net, const Dataset& train, const Dataset& val,
                      const LossConfig& cfg, std::size_t epoch);

struct EpochResult {
  Network net;
  EpochMetrics metrics;
};

/// One pass over `train`, shuffled by `rng` when mini-batching.  Throws
/// NumericError naming the epoch and batch on a non-finite loss.
EpochResult train_epoch(const Network& net, const Dataset& train, const Dataset& val,
                        const TrainingConfig& t_cfg, const LossConfig& l_cfg, std::mt19937_64& rng,
                        std::size_t epoch);

struct TrainResult {
  Network net;
  std::vector<EpochMetrics> history;
  std::optional<LllInitResult> lll;
};

/// Full run.  In diophantine mode the initial parameters are projected before
/// the first step, so every epoch boundary sees integral parameters.
TrainResult train(const Network& net, const Dataset& train_data, const Dataset& val_data,
                  const TrainingConfig& t_cfg, const LossConfig& l_cfg);

}  // namespace diophnet
