#include "diophnet/model_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "diophnet/error.hpp"

namespace diophnet {

using nlohmann::json;

std::string format_decimal(double v) {
  if (v == 0.0) return "0";  // folds -0
  // Integral values are written as plain digit strings; anything else as the
  // shortest round-tripping form.
  char buf[400];
  auto [ptr, ec] = v == std::trunc(v) ? std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed)
                                      : std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw FormatError("format_decimal: conversion failed");
  return std::string(buf, ptr);
}

double parse_decimal(std::string_view text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw FormatError("invalid decimal '" + std::string(text) + "'");
  }
  return v;
}

namespace {

double real_field(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("activation: missing '") + key + "'");
  const json& v = j.at(key);
  if (v.is_string()) return parse_decimal(v.get<std::string>());
  if (v.is_number()) return v.get<double>();
  throw ConfigError(std::string("activation: '") + key + "' must be a number");
}

json reals(std::span<const double> values) {
  json arr = json::array();
  for (double v : values) arr.push_back(format_decimal(v));
  return arr;
}

std::vector<double> parse_reals(const json& arr, std::size_t expected, const char* what) {
  if (!arr.is_array() || arr.size() != expected) {
    throw FormatError(std::string(what) + ": expected " + std::to_string(expected) + " values");
  }
  std::vector<double> out;
  out.reserve(expected);
  for (const auto& v : arr) {
    if (!v.is_string()) throw FormatError(std::string(what) + ": values must be decimal strings");
    out.push_back(parse_decimal(v.get<std::string>()));
  }
  return out;
}

}  // namespace

json activation_to_json(const ActivationSpec& spec) {
  json j;
  j["kind"] = std::string(kind_name(spec));
  if (const auto* f = std::get_if<DioLinear>(&spec)) {
    j["a"] = format_decimal(f->a);
    j["b"] = format_decimal(f->b);
    j["c"] = format_decimal(f->c);
  } else if (const auto* q = std::get_if<DioQuadratic>(&spec)) {
    j["a"] = format_decimal(q->a);
    j["b"] = format_decimal(q->b);
    j["c"] = format_decimal(q->c);
    j["z"] = format_decimal(q->z);
    j["d"] = format_decimal(q->d);
  } else if (const auto* e = std::get_if<DioExponential>(&spec)) {
    j["a"] = e->a;
    j["b"] = e->b;
    j["k"] = format_decimal(e->k);
  }
  return j;
}

ActivationSpec activation_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw ConfigError("activation: expected an object with a string 'kind'");
  const auto kind = j.at("kind").get<std::string>();
  ActivationSpec spec;
  if (kind == "identity") {
    spec = Identity{};
  } else if (kind == "relu") {
    spec = Relu{};
  } else if (kind == "sigmoid") {
    spec = Sigmoid{};
  } else if (kind == "dio_linear") {
    spec = DioLinear{real_field(j, "a"), real_field(j, "b"), real_field(j, "c")};
  } else if (kind == "dio_quadratic") {
    spec = DioQuadratic{real_field(j, "a"), real_field(j, "b"), real_field(j, "c"),
                        j.contains("z") ? real_field(j, "z") : 0.0, real_field(j, "d")};
  } else if (kind == "dio_exponential") {
    if (!j.contains("a") || !j.contains("b") || !j.at("a").is_number_integer() ||
        !j.at("b").is_number_integer())
      throw ConfigError("dio_exponential: 'a' and 'b' must be integers");
    spec = DioExponential{j.at("a").get<int>(), j.at("b").get<int>(), real_field(j, "k")};
  } else {
    throw ConfigError("activation: unknown kind '" + kind + "'");
  }
  try {
    validate(spec);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("activation: ") + e.what());
  }
  return spec;
}

std::string serialize_model(const Network& net, const TrainingConfig& training) {
  json j;
  j["format"] = "diophnet-model";
  j["version"] = kModelFormatVersion;
  j["mode"] = std::string(mode_name(training.mode));
  j["seed"] = training.seed;
  j["training"] = {{"eta", format_decimal(training.eta)},
                   {"epochs", training.epochs},
                   {"batch_size", training.batch_size},
                   {"lll_init", training.lll_init}};
  json layers = json::array();
  for (const Layer& l : net.layers()) {
    layers.push_back({{"in", l.in_dim()},
                      {"out", l.out_dim()},
                      {"activation", activation_to_json(l.activation)},
                      {"weights", reals(l.weights.data())},
                      {"bias", reals(l.bias.data())}});
  }
  j["layers"] = std::move(layers);
  return j.dump(2) + "\n";
}

ModelBundle parse_model(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (!j.is_object() || j.value("format", "") != "diophnet-model")
      throw FormatError("not a diophnet model file");
    if (!j.contains("version") || !j.at("version").is_number_integer())
      throw FormatError("model file: missing version");
    const int version = j.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw FormatError("model file: unsupported version " + std::to_string(version) + " (expected " +
                        std::to_string(kModelFormatVersion) + ")");
    }
    ModelBundle bundle;
    bundle.training.mode = parse_mode(j.at("mode").get<std::string>());
    bundle.training.seed = j.at("seed").get<std::uint64_t>();
    const json& t = j.at("training");
    bundle.training.eta = parse_decimal(t.at("eta").get<std::string>());
    bundle.training.epochs = t.at("epochs").get<std::size_t>();
    bundle.training.batch_size = t.at("batch_size").get<std::size_t>();
    bundle.training.lll_init = t.at("lll_init").get<bool>();

    std::vector<Layer> layers;
    for (const json& lj : j.at("layers")) {
      const auto in = lj.at("in").get<std::size_t>();
      const auto out = lj.at("out").get<std::size_t>();
      layers.push_back(Layer{Matrix(out, in, parse_reals(lj.at("weights"), in * out, "weights")),
                             Vector(parse_reals(lj.at("bias"), out, "bias")),
                             activation_from_json(lj.at("activation"))});
    }
    bundle.net = Network(std::move(layers));
    return bundle;
  } catch (const FormatError&) {
    throw;
  } catch (const json::exception& e) {
    throw FormatError(std::string("model file: ") + e.what());
  } catch (const Error& e) {
    throw FormatError(std::string("model file: ") + e.what());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create '" + path.parent_path().string() + "': " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

void save_model(const Network& net, const TrainingConfig& training, const std::filesystem::path& path) {
  write_text_file(path, serialize_model(net, training));
}

ModelBundle load_model(const std::filesystem::path& path) { return parse_model(read_text_file(path)); }

}  // namespace diophnet
