// diophnet: command-line harness for integer-projected network training.
//
// Exit codes: 0 success, 1 golden/acceptance mismatch, 2 config error,
// 3 I/O error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "diophnet/analysis.hpp"
#include "diophnet/encoding.hpp"
#include "diophnet/error.hpp"
#include "diophnet/experiment.hpp"
#include "diophnet/lattice.hpp"
#include "diophnet/model_io.hpp"
#include "diophnet/reproduce.hpp"

namespace fs = std::filesystem;
using namespace diophnet;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct CommonOptions {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string mode;
};

ExperimentConfig load_with_overrides(const CommonOptions& o) {
  ExperimentConfig cfg = load_experiment_config(o.config);
  if (!o.out.empty()) cfg.output_dir = o.out;
  if (o.seed) cfg.training.seed = *o.seed;
  if (!o.mode.empty()) cfg.training.mode = parse_mode(o.mode);
  return cfg;
}

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "Experiment config (JSON)")->required();
  cmd->add_option("--out", o.out, "Output directory (overrides output_dir)");
  cmd->add_option("--seed", o.seed, "Seed (overrides training.seed)");
  cmd->add_option("--mode", o.mode, "normal | diophantine (overrides training.mode)")
      ->check(CLI::IsMember({"normal", "diophantine"}));
}

int cmd_reproduce(const std::string& out, const std::string& rounding) {
  const Rounding rule = rounding == "half_up" ? Rounding::half_up : Rounding::half_toward_zero;
  const ReproductionReport report = reproduce_examples(rule);
  const std::string text = report.to_text();
  std::cout << text;
  if (!out.empty()) write_text_file(out, text);
  return report.passed() ? kExitOk : kExitMismatch;
}

int cmd_train(const CommonOptions& o) {
  const ExperimentConfig cfg = load_with_overrides(o);
  const ExperimentArtifacts art = run_experiment(cfg);
  const EpochMetrics& last = art.result.history.back();
  std::cout << "task=" << task_name(cfg.task) << " mode=" << mode_name(cfg.training.mode)
            << " epochs=" << art.result.history.size() << " train_loss=" << format_decimal(last.train_loss)
            << " val_acc=" << format_decimal(last.val_acc) << '\n';
  if (art.result.lll) std::cout << "lll_init: " << art.result.lll->note << '\n';
  std::cout << "wrote " << art.metrics_path.string() << '\n' << "wrote " << art.model_path.string() << '\n';
  if (art.analysis_path) std::cout << "wrote " << art.analysis_path->string() << '\n';
  return kExitOk;
}

int cmd_eval(const CommonOptions& o, const std::string& model_path) {
  const ExperimentConfig cfg = load_with_overrides(o);
  const TaskSetup setup = build_task(cfg);
  const ModelBundle model = load_model(model_path);
  if (model.net.input_dim() != setup.net.input_dim() || model.net.output_dim() != setup.net.output_dim())
    throw ConfigError("model shape does not match task '" + std::string(task_name(cfg.task)) + "'");

  std::string csv = "split,loss,acc,adv_acc\n";
  for (const auto& [name, data] : {std::pair<const char*, const Dataset*>{"train", &setup.train},
                                   std::pair<const char*, const Dataset*>{"val", &setup.val}}) {
    const double loss = dataset_loss(model.net, *data, setup.loss.task);
    const double acc = accuracy(model.net, *data, setup.loss.task);
    const double adv = adversarial_accuracy(model.net, *data, setup.loss.epsilon, setup.loss.task);
    csv += std::string(name) + "," + format_decimal(loss) + "," + format_decimal(acc) + "," +
           format_decimal(adv) + "\n";
  }
  std::cout << csv;
  if (!o.out.empty()) {
    write_text_file(fs::path(o.out) / "eval.csv", csv);
  }
  return kExitOk;
}

int cmd_attack(const CommonOptions& o, const std::vector<double>& epsilons) {
  ExperimentConfig cfg = load_with_overrides(o);
  if (!cfg.analysis) cfg.analysis = AnalysisSpec{};
  if (!epsilons.empty()) cfg.analysis->epsilons = epsilons;
  const ExperimentArtifacts art = run_experiment(cfg);

  const TaskSetup setup = build_task(cfg);
  const bool normal_first = cfg.training.mode == TrainingMode::normal;
  const Network& normal_net = normal_first ? art.result.net : art.companion->net;
  const Network& dio_net = normal_first ? art.companion->net : art.result.net;
  std::cout << "epsilon,adv_acc_normal,adv_acc_diophantine\n";
  for (double eps : cfg.analysis->epsilons) {
    std::cout << format_decimal(eps) << ','
              << format_decimal(adversarial_accuracy(normal_net, setup.val, eps, setup.loss.task)) << ','
              << format_decimal(adversarial_accuracy(dio_net, setup.val, eps, setup.loss.task)) << '\n';
  }
  std::cout << "wrote " << art.analysis_path->string() << '\n';
  return kExitOk;
}

int cmd_encode(const std::string& model_path, const std::string& op, double scale, std::int64_t max_den,
               double delta, const std::string& out) {
  const ModelBundle model = load_model(model_path);
  const EncodingMap map{scale};
  const std::vector<double> theta = flatten_parameters(model.net);
  std::string text;
  if (op == "phi") {
    nlohmann::json j = {{"scale", format_decimal(scale)}, {"encoded", encode(theta, map)}};
    text = j.dump(2) + "\n";
  } else if (op == "project") {
    TrainingConfig t = model.training;
    text = serialize_model(project_integers(model.net), t);
  } else if (op == "cf") {
    nlohmann::json arr = nlohmann::json::array();
    for (double v : theta) {
      const Rational r = rational_approx(v, max_den);
      arr.push_back({{"value", format_decimal(v)}, {"p", r.p}, {"q", r.q}});
    }
    text = nlohmann::json{{"max_den", max_den}, {"approximations", arr}}.dump(2) + "\n";
  } else {
    const LllInitResult r = lll_init(model.net, map, delta);
    nlohmann::json j = nlohmann::json::parse(serialize_model(r.net, model.training));
    j["lll"] = {{"fell_back", r.fell_back}, {"note", r.note}, {"delta", format_decimal(delta)}};
    text = j.dump(2) + "\n";
  }
  if (out.empty()) {
    std::cout << text;
  } else {
    write_text_file(out, text);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Integer-projected neural network training harness"};
  app.require_subcommand(1);

  std::string reproduce_out;
  std::string rounding = "half_toward_zero";
  auto* reproduce = app.add_subcommand("reproduce", "Re-run the worked examples and check golden values");
  reproduce->add_option("--out", reproduce_out, "Also write the report to this file");
  reproduce->add_option("--rounding", rounding, "Projection tie rule (negative control)")
      ->check(CLI::IsMember({"half_toward_zero", "half_up"}));

  CommonOptions train_opts;
  auto* train_cmd = app.add_subcommand("train", "Train per config; write metrics.csv and model.json");
  add_common(train_cmd, train_opts);

  CommonOptions eval_opts;
  std::string eval_model;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a saved model on the config's task");
  add_common(eval_cmd, eval_opts);
  eval_cmd->add_option("--model", eval_model, "Model file")->required();

  CommonOptions attack_opts;
  std::vector<double> epsilons;
  auto* attack_cmd = app.add_subcommand("attack", "Adversarial-accuracy sweep; writes analysis.csv");
  add_common(attack_cmd, attack_opts);
  attack_cmd->add_option("--epsilons", epsilons, "Override the epsilon grid");

  std::string enc_model, enc_op = "phi", enc_out;
  double enc_scale = 1.0, enc_delta = 0.75;
  std::int64_t enc_max_den = 1000;
  auto* encode_cmd = app.add_subcommand("encode", "Apply the encoding toolkit to a model file");
  encode_cmd->add_option("--model", enc_model, "Model file")->required();
  encode_cmd->add_option("--op", enc_op, "phi | project | cf | lll")
      ->check(CLI::IsMember({"phi", "project", "cf", "lll"}));
  encode_cmd->add_option("--scale", enc_scale, "Fixed-point scale s")->check(CLI::PositiveNumber);
  encode_cmd->add_option("--max-den", enc_max_den, "Largest continued-fraction denominator")
      ->check(CLI::Range(std::int64_t{1}, INT64_MAX));
  encode_cmd->add_option("--delta", enc_delta, "LLL Lovasz parameter");
  encode_cmd->add_option("--out", enc_out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*reproduce) return cmd_reproduce(reproduce_out, rounding);
    if (*train_cmd) return cmd_train(train_opts);
    if (*eval_cmd) return cmd_eval(eval_opts, eval_model);
    if (*attack_cmd) return cmd_attack(attack_opts, epsilons);
    if (*encode_cmd) return cmd_encode(enc_model, enc_op, enc_scale, enc_max_den, enc_delta, enc_out);
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitMismatch;
  }
  return kExitOk;
}
