#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "diophnet/loss.hpp"
#include "diophnet/network.hpp"
#include "diophnet/training.hpp"

namespace diophnet {

inline constexpr std::string_view kMetricsHeader =
    "epoch,train_loss,train_acc,val_loss,val_acc,adv_acc,constraint_residual";
inline constexpr std::string_view kAnalysisHeader =
    "epsilon,clean_acc,adv_acc,variance_normal,variance_diophantine";

enum class TaskKind { example1, example2, example3, synthetic_regression, synthetic_classification };

std::string_view task_name(TaskKind task);

struct ConstraintSpec {
  std::string polynomial;
  double scale = 1.0;
  std::vector<std::size_t> parameters;  // empty: all parameters
};

struct NetworkSpec {
  std::vector<std::size_t> hidden;
  ActivationSpec hidden_activation = Relu{};
  ActivationSpec output_activation = Identity{};
  double init_scale = 1.0;
};

struct DataSpec {
  std::size_t train_size = 128;
  std::size_t val_size = 64;
  // Label noise for regression, cluster spread for classification.
  // Unset: 0.05 and 0.7 respectively.
  std::optional<double> noise;
};

struct AnalysisSpec {
  std::vector<double> epsilons{0.0, 0.05, 0.1, 0.2};
  std::optional<double> sigma;  // unset: each row uses sigma = epsilon
  std::size_t samples = 200;
  std::size_t max_points = 32;  // validation rows averaged for the variance columns
};

struct ExperimentConfig {
  TaskKind task = TaskKind::example1;
  TrainingConfig training;
  std::optional<TaskLoss> task_loss;  // default depends on the task
  double lambda = 0.0;
  double gamma = 0.0;
  double epsilon = 0.0;
  std::optional<ConstraintSpec> constraint;
  std::optional<NetworkSpec> network;
  DataSpec data;
  std::optional<AnalysisSpec> analysis;
  std::filesystem::path output_dir = "out";
};

/// Parses a JSON experiment config.  Throws ConfigError naming the offending
/// field (or line/column for syntax errors).
ExperimentConfig parse_experiment_config(std::string_view text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct TaskSetup {
  Network net;
  Dataset train;
  Dataset val;
  LossConfig loss;
};

// Deterministic initial network, data splits and loss configuration.
TaskSetup build_task(const ExperimentConfig& cfg);

std::string metrics_csv(const std::vector<EpochMetrics>& history);

struct AnalysisRow {
  double epsilon = 0.0;
  double clean_acc = 0.0;
  double adv_acc = 0.0;
  double variance_normal = 0.0;
  double variance_diophantine = 0.0;
};

/// Accuracy and adversarial accuracy of `subject`, with output variances of
/// the normal-mode and diophantine-mode networks side by side.
std::vector<AnalysisRow> adversarial_sweep(const Network& subject, const Network& normal_net,
                                           const Network& diophantine_net, const Dataset& val,
                                           TaskLoss kind, const AnalysisSpec& spec,
                                           std::uint64_t seed);
std::string analysis_csv(const std::vector<AnalysisRow>& rows);

struct ExperimentArtifacts {
  TrainResult result;
  std::optional<TrainResult> companion;  // the other training mode, when analysis runs
  std::vector<AnalysisRow> analysis;
  std::filesystem::path metrics_path;
  std::filesystem::path model_path;
  std::optional<std::filesystem::path> analysis_path;
};

/// Trains per config and writes metrics.csv, model.json and (when analysis is
/// configured) analysis.csv into cfg.output_dir.
ExperimentArtifacts run_experiment(const ExperimentConfig& cfg);

}  // namespace diophnet
