#include "diophnet/experiment.hpp"

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "diophnet/analysis.hpp"
#include "diophnet/error.hpp"
#include "diophnet/model_io.hpp"

namespace diophnet {

using nlohmann::json;

namespace {

// Typed access to one JSON object, rejecting keys nobody asked for.
class Fields {
 public:
  Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + ": expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  const json& raw(const std::string& key) { return j_.at(key); }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  double real(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number()) throw ConfigError(field(key) + ": expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(field(key) + ": must be finite");
    return d;
  }

  std::size_t count(const std::string& key, std::size_t fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
      throw ConfigError(field(key) + ": expected a non-negative integer");
    return v.get<std::size_t>();
  }

  bool flag(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    if (!j_.at(key).is_boolean()) throw ConfigError(field(key) + ": expected true or false");
    return j_.at(key).get<bool>();
  }

  std::string text(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    if (!j_.at(key).is_string()) throw ConfigError(field(key) + ": expected a string");
    return j_.at(key).get<std::string>();
  }

  std::vector<std::size_t> counts(const std::string& key) {
    std::vector<std::size_t> out;
    if (!has(key)) return out;
    const json& v = j_.at(key);
    if (!v.is_array()) throw ConfigError(field(key) + ": expected an array");
    for (const auto& e : v) {
      if (!e.is_number_integer() || e.get<std::int64_t>() < 0)
        throw ConfigError(field(key) + ": expected non-negative integers");
      out.push_back(e.get<std::size_t>());
    }
    return out;
  }

  void finish() const {
    for (const auto& [key, _] : j_.items()) {
      if (!seen_.count(key)) throw ConfigError(field(key) + ": unknown field");
    }
  }

 private:
  std::string where() const { return path_.empty() ? "config" : path_; }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

TaskKind parse_task(const std::string& s) {
  for (auto t : {TaskKind::example1, TaskKind::example2, TaskKind::example3,
                 TaskKind::synthetic_regression, TaskKind::synthetic_classification}) {
    if (task_name(t) == s) return t;
  }
  throw ConfigError("task: unknown task '" + s + "'");
}

ActivationSpec parse_activation_field(Fields& f, const std::string& key, ActivationSpec fallback) {
  if (!f.has(key)) return fallback;
  try {
    return activation_from_json(f.raw(key));
  } catch (const ConfigError& e) {
    throw ConfigError(f.field(key) + ": " + e.what());
  }
}

Matrix from_rows(std::size_t cols, std::vector<double> values) {
  const std::size_t rows = values.size() / cols;
  return Matrix(rows, cols, std::move(values));
}

Network random_network(std::size_t in, std::size_t out, const NetworkSpec& spec, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-spec.init_scale, spec.init_scale);
  std::vector<std::size_t> dims{in};
  dims.insert(dims.end(), spec.hidden.begin(), spec.hidden.end());
  dims.push_back(out);
  std::vector<Layer> layers;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    Matrix w(dims[l + 1], dims[l]);
    for (double& v : w.data()) v = u(rng);
    const bool last = l + 2 == dims.size();
    layers.push_back(Layer{std::move(w), Vector(dims[l + 1]),
                           last ? spec.output_activation : spec.hidden_activation});
  }
  return Network(std::move(layers));
}

Dataset regression_data(std::size_t n, double noise, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::normal_distribution<double> eps(0.0, 1.0);
  std::vector<double> x, y;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = u(rng);
    const double b = u(rng);
    x.push_back(a);
    x.push_back(b);
    y.push_back(2.0 * a - b + 1.0 + noise * eps(rng));
  }
  return Dataset(from_rows(2, std::move(x)), from_rows(1, std::move(y)));
}

Dataset classification_data(std::size_t n, double spread, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> x, y;
  for (std::size_t i = 0; i < n; ++i) {
    const bool positive = i % 2 == 0;
    const double cx = positive ? 1.0 : -1.0;
    const double cy = positive ? 0.5 : -0.5;
    x.push_back(cx + spread * g(rng));
    x.push_back(cy + spread * g(rng));
    y.push_back(positive ? 1.0 : 0.0);
    y.push_back(positive ? 0.0 : 1.0);
  }
  return Dataset(from_rows(2, std::move(x)), from_rows(2, std::move(y)));
}

std::string csv_line(std::initializer_list<double> values) {
  std::string line;
  for (double v : values) {
    if (!line.empty()) line += ',';
    line += format_decimal(v);
  }
  return line;
}

}  // namespace

std::string_view task_name(TaskKind task) {
  switch (task) {
    case TaskKind::example1:
      return "example1";
    case TaskKind::example2:
      return "example2";
    case TaskKind::example3:
      return "example3";
    case TaskKind::synthetic_regression:
      return "synthetic_regression";
    case TaskKind::synthetic_classification:
      return "synthetic_classification";
  }
  return "unknown";
}

ExperimentConfig parse_experiment_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config syntax error: ") + e.what());
  }

  ExperimentConfig cfg;
  Fields top(j, "");
  cfg.task = parse_task(top.text("task", "example1"));
  cfg.output_dir = top.text("output_dir", "out");

  if (top.has("training")) {
    Fields t(top.raw("training"), "training");
    cfg.training.eta = t.real("eta", cfg.training.eta);
    cfg.training.epochs = t.count("epochs", cfg.training.epochs);
    cfg.training.batch_size = t.count("batch_size", cfg.training.batch_size);
    const std::string mode = t.text("mode", "normal");
    try {
      cfg.training.mode = parse_mode(mode);
    } catch (const ConfigError&) {
      throw ConfigError("training.mode: expected 'normal' or 'diophantine'");
    }
    if (t.has("seed")) {
      if (!t.raw("seed").is_number_unsigned()) throw ConfigError("training.seed: expected a non-negative integer");
      cfg.training.seed = t.raw("seed").get<std::uint64_t>();
    }
    cfg.training.lll_init = t.flag("lll_init", false);
    t.finish();
  }
  if (cfg.training.epochs < 1) throw ConfigError("training.epochs: must be >= 1");
  if (!(cfg.training.eta > 0.0)) throw ConfigError("training.eta: must be > 0");

  if (top.has("loss")) {
    Fields l(top.raw("loss"), "loss");
    if (l.has("task")) {
      const std::string kind = l.text("task", "mse");
      if (kind == "mse") {
        cfg.task_loss = TaskLoss::mse;
      } else if (kind == "cross_entropy") {
        cfg.task_loss = TaskLoss::cross_entropy;
      } else {
        throw ConfigError("loss.task: expected 'mse' or 'cross_entropy'");
      }
    }
    cfg.lambda = l.real("lambda", 0.0);
    cfg.gamma = l.real("gamma", 0.0);
    cfg.epsilon = l.real("epsilon", 0.0);
    if (l.has("constraint")) {
      Fields c(l.raw("constraint"), "loss.constraint");
      ConstraintSpec spec;
      spec.polynomial = c.text("polynomial", "");
      if (spec.polynomial.empty()) throw ConfigError("loss.constraint.polynomial: required");
      spec.scale = c.real("scale", 1.0);
      if (!(spec.scale > 0.0)) throw ConfigError("loss.constraint.scale: must be > 0");
      spec.parameters = c.counts("parameters");
      c.finish();
      try {
        (void)DiophantinePolynomial::parse(spec.polynomial,
                                           spec.parameters.empty() ? 0 : spec.parameters.size());
      } catch (const Error& e) {
        throw ConfigError(std::string("loss.constraint.polynomial: ") + e.what());
      }
      cfg.constraint = std::move(spec);
    }
    l.finish();
  }
  if (cfg.lambda < 0.0 || cfg.gamma < 0.0 || cfg.epsilon < 0.0)
    throw ConfigError("loss: lambda, gamma and epsilon must be >= 0");
  if (cfg.lambda > 0.0 && !cfg.constraint) throw ConfigError("loss.lambda: > 0 requires loss.constraint");

  if (top.has("network")) {
    Fields n(top.raw("network"), "network");
    NetworkSpec spec;
    spec.hidden = n.counts("hidden");
    for (auto h : spec.hidden)
      if (h == 0) throw ConfigError("network.hidden: widths must be >= 1");
    spec.hidden_activation = parse_activation_field(n, "activation", spec.hidden_activation);
    spec.output_activation = parse_activation_field(n, "output_activation", spec.output_activation);
    spec.init_scale = n.real("init_scale", spec.init_scale);
    n.finish();
    cfg.network = std::move(spec);
  }

  if (top.has("data")) {
    Fields d(top.raw("data"), "data");
    cfg.data.train_size = d.count("train_size", cfg.data.train_size);
    cfg.data.val_size = d.count("val_size", cfg.data.val_size);
    if (d.has("noise")) {
      cfg.data.noise = d.real("noise", 0.0);
      if (*cfg.data.noise < 0.0) throw ConfigError("data.noise: must be >= 0");
    }
    d.finish();
    if (cfg.data.train_size < 1 || cfg.data.val_size < 1)
      throw ConfigError("data: train_size and val_size must be >= 1");
  }

  if (top.has("analysis")) {
    Fields a(top.raw("analysis"), "analysis");
    AnalysisSpec spec;
    if (a.has("epsilons")) {
      const json& e = a.raw("epsilons");
      if (!e.is_array() || e.empty()) throw ConfigError("analysis.epsilons: expected a non-empty array");
      spec.epsilons.clear();
      for (const auto& v : e) {
        if (!v.is_number() || v.get<double>() < 0.0)
          throw ConfigError("analysis.epsilons: expected numbers >= 0");
        spec.epsilons.push_back(v.get<double>());
      }
    }
    if (a.has("sigma")) spec.sigma = a.real("sigma", 0.0);
    spec.samples = a.count("samples", spec.samples);
    spec.max_points = a.count("max_points", spec.max_points);
    a.finish();
    if (spec.samples < 1) throw ConfigError("analysis.samples: must be >= 1");
    cfg.analysis = std::move(spec);
  }
  top.finish();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  return parse_experiment_config(read_text_file(path));
}

TaskSetup build_task(const ExperimentConfig& cfg) {
  TaskSetup s;
  std::mt19937_64 rng(cfg.training.seed);
  TaskLoss kind = TaskLoss::mse;

  switch (cfg.task) {
    case TaskKind::example1: {
      s.train = Dataset(Matrix{{1}, {2}, {3}}, Matrix{{3}, {5}, {7}});
      s.net = make_single_layer(Matrix{{0}}, Vector{0});
      break;
    }
    case TaskKind::example2: {
      // Features (x^2, x) turn y = W x^2 + V x + b into a single linear layer.
      s.train = Dataset(Matrix{{1, 1}, {4, 2}, {9, 3}}, Matrix{{6}, {11}, {18}});
      s.net = make_single_layer(Matrix{{0, 0}}, Vector{0});
      break;
    }
    case TaskKind::example3: {
      const Matrix target{{2, -1}, {1, 2}};
      const Matrix x{{1, 0}, {0, 1}, {1, 1}, {2, -1}};
      s.train = Dataset(x, transpose(matmul(target, transpose(x))));
      s.net = Network({Layer{Matrix{{2.5, -1.3}, {0.7, 1.6}}, Vector(2), Identity{}},
                       Layer{Matrix::identity(2), Vector(2), Identity{}}});
      break;
    }
    case TaskKind::synthetic_regression: {
      const double noise = cfg.data.noise.value_or(0.05);
      s.train = regression_data(cfg.data.train_size, noise, rng);
      s.val = regression_data(cfg.data.val_size, noise, rng);
      NetworkSpec spec = cfg.network.value_or(NetworkSpec{{4}, Relu{}, Identity{}, 1.0});
      s.net = random_network(2, 1, spec, rng);
      break;
    }
    case TaskKind::synthetic_classification: {
      kind = TaskLoss::cross_entropy;
      const double spread = cfg.data.noise.value_or(0.7);
      s.train = classification_data(cfg.data.train_size, spread, rng);
      s.val = classification_data(cfg.data.val_size, spread, rng);
      NetworkSpec spec = cfg.network.value_or(NetworkSpec{{8}, Relu{}, Identity{}, 1.0});
      s.net = random_network(2, 2, spec, rng);
      break;
    }
  }
  // The worked examples are too small to split; they validate on the training set.
  if (s.val.empty()) s.val = s.train;

  s.loss.task = cfg.task_loss.value_or(kind);
  s.loss.lambda = cfg.lambda;
  s.loss.gamma = cfg.gamma;
  s.loss.epsilon = cfg.epsilon;
  if (cfg.constraint) {
    const auto& spec = *cfg.constraint;
    const std::size_t arity = spec.parameters.empty() ? s.net.parameter_count() : spec.parameters.size();
    try {
      Constraint c{DiophantinePolynomial::parse(spec.polynomial, arity), EncodingMap{spec.scale},
                   spec.parameters};
      (void)c.select(flatten_parameters(s.net));
      s.loss.constraint = std::move(c);
    } catch (const Error& e) {
      throw ConfigError(std::string("loss.constraint: ") + e.what());
    }
  }
  return s;
}

std::string metrics_csv(const std::vector<EpochMetrics>& history) {
  std::ostringstream out;
  out << kMetricsHeader << '\n';
  for (const auto& m : history) {
    out << m.epoch << ','
        << csv_line({m.train_loss, m.train_acc, m.val_loss, m.val_acc, m.adv_acc, m.constraint_residual})
        << '\n';
  }
  return out.str();
}

std::vector<AnalysisRow> adversarial_sweep(const Network& subject, const Network& normal_net,
                                           const Network& diophantine_net, const Dataset& val,
                                           TaskLoss kind, const AnalysisSpec& spec,
                                           std::uint64_t seed) {
  const std::size_t points = std::min(spec.max_points == 0 ? val.size() : spec.max_points, val.size());
  auto mean_variance = [&](const Network& net, double sigma) {
    double acc = 0.0;
    for (std::size_t i = 0; i < points; ++i)
      acc += output_variance(net, val.inputs.row_vector(i), sigma, spec.samples, seed + i);
    return acc / static_cast<double>(points);
  };

  std::vector<AnalysisRow> rows;
  const double clean = accuracy(subject, val, kind);
  for (double eps : spec.epsilons) {
    const double sigma = spec.sigma.value_or(eps);
    rows.push_back(AnalysisRow{eps, clean, adversarial_accuracy(subject, val, eps, kind),
                               mean_variance(normal_net, sigma), mean_variance(diophantine_net, sigma)});
  }
  return rows;
}

std::string analysis_csv(const std::vector<AnalysisRow>& rows) {
  std::ostringstream out;
  out << kAnalysisHeader << '\n';
  for (const auto& r : rows)
    out << csv_line({r.epsilon, r.clean_acc, r.adv_acc, r.variance_normal, r.variance_diophantine})
        << '\n';
  return out.str();
}

ExperimentArtifacts run_experiment(const ExperimentConfig& cfg) {
  const TaskSetup setup = build_task(cfg);
  ExperimentArtifacts art;
  art.result = train(setup.net, setup.train, setup.val, cfg.training, setup.loss);

  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + cfg.output_dir.string() + "': " + ec.message());

  art.metrics_path = cfg.output_dir / "metrics.csv";
  art.model_path = cfg.output_dir / "model.json";
  write_text_file(art.metrics_path, metrics_csv(art.result.history));
  save_model(art.result.net, cfg.training, art.model_path);

  if (cfg.analysis) {
    TrainingConfig other = cfg.training;
    other.mode = cfg.training.mode == TrainingMode::normal ? TrainingMode::diophantine : TrainingMode::normal;
    art.companion = train(setup.net, setup.train, setup.val, other, setup.loss);
    const bool normal_first = cfg.training.mode == TrainingMode::normal;
    const Network& normal_net = normal_first ? art.result.net : art.companion->net;
    const Network& dio_net = normal_first ? art.companion->net : art.result.net;
    art.analysis = adversarial_sweep(art.result.net, normal_net, dio_net, setup.val, setup.loss.task,
                                     *cfg.analysis, cfg.training.seed);
    art.analysis_path = cfg.output_dir / "analysis.csv";
    write_text_file(*art.analysis_path, analysis_csv(art.analysis));
  }
  return art;
}

}  // namespace diophnet
