#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "diophnet/network.hpp"
#include "diophnet/training.hpp"

namespace diophnet {

inline constexpr int kModelFormatVersion = 1;

// Shortest decimal string that parses back to exactly `v`.
std::string format_decimal(double v);
double parse_decimal(std::string_view text);

nlohmann::json activation_to_json(const ActivationSpec& spec);
// Throws ConfigError on unknown kinds or invalid parameters.
ActivationSpec activation_from_json(const nlohmann::json& j);

struct ModelBundle {
  Network net;
  TrainingConfig training;
};

/// Model file layout (JSON):
///
///   { "format": "diophnet-model", "version": 1, "mode": "...", "seed": N,
///     "training": { "eta": "0.1", "epochs": E, "batch_size": B, "lll_init": false },
///     "layers": [ { "in": I, "out": O, "activation": {...},
///                   "weights": ["..."], "bias": ["..."] } ] }
///
/// Every real number is a decimal string that round-trips bit-exactly.
std::string serialize_model(const Network& net, const TrainingConfig& training);
// Throws FormatError on malformed input or a version mismatch.
ModelBundle parse_model(std::string_view text);

void save_model(const Network& net, const TrainingConfig& training, const std::filesystem::path& path);
ModelBundle load_model(const std::filesystem::path& path);

// Shared helpers for text artifacts; throw IoError.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace diophnet
