// Python bindings.  Matrices cross the boundary as lists of rows, vectors as
// lists of floats; exact polynomial values come back as Python ints.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "diophnet/adversarial.hpp"
#include "diophnet/analysis.hpp"
#include "diophnet/encoding.hpp"
#include "diophnet/error.hpp"
#include "diophnet/experiment.hpp"
#include "diophnet/grad.hpp"
#include "diophnet/lattice.hpp"
#include "diophnet/model_io.hpp"
#include "diophnet/reproduce.hpp"
#include "diophnet/training.hpp"

namespace py = pybind11;
using namespace diophnet;

namespace {

using Rows = std::vector<std::vector<double>>;

Matrix to_matrix(const Rows& rows) {
  if (rows.empty()) throw ShapeError("matrix needs at least one row");
  const std::size_t cols = rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw ShapeError("ragged matrix rows");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return Matrix(rows.size(), cols, std::move(flat));
}

Rows from_matrix(const Matrix& m) {
  Rows out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) out[i] = m.row_vector(i).values();
  return out;
}

py::int_ wide_to_py(WideInt v) {
  const std::string s = to_string(v);
  return py::reinterpret_steal<py::int_>(PyLong_FromString(s.c_str(), nullptr, 10));
}

py::dict metrics_dict(const EpochMetrics& m) {
  py::dict d;
  d["epoch"] = m.epoch;
  d["train_loss"] = m.train_loss;
  d["train_acc"] = m.train_acc;
  d["val_loss"] = m.val_loss;
  d["val_acc"] = m.val_acc;
  d["adv_acc"] = m.adv_acc;
  d["constraint_residual"] = m.constraint_residual;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Integer-projected neural network training";
  m.attr("__version__") = "0.1.0";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ShapeError>(m, "ShapeError", base.ptr());
  py::register_exception<NumericError>(m, "NumericError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<UnsupportedError>(m, "UnsupportedError", base.ptr());
  py::register_exception<ArithmeticError>(m, "ArithmeticError", base.ptr());
  py::register_exception<RankError>(m, "RankError", base.ptr());
  py::register_exception<DegenerateInputError>(m, "DegenerateInputError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<FormatError>(m, "FormatError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  // activations
  py::class_<Identity>(m, "Identity").def(py::init<>());
  py::class_<Relu>(m, "Relu").def(py::init<>());
  py::class_<Sigmoid>(m, "Sigmoid").def(py::init<>());
  py::class_<DioLinear>(m, "DioLinear")
      .def(py::init([](double a, double b, double c) { return DioLinear{a, b, c}; }),
           py::arg("a"), py::arg("b"), py::arg("c"))
      .def_readonly("a", &DioLinear::a)
      .def_readonly("b", &DioLinear::b)
      .def_readonly("c", &DioLinear::c);
  py::class_<DioQuadratic>(m, "DioQuadratic")
      .def(py::init([](double a, double b, double c, double z, double d) { return DioQuadratic{a, b, c, z, d}; }),
           py::arg("a"), py::arg("b"), py::arg("c"), py::arg("z"), py::arg("d"));
  py::class_<DioExponential>(m, "DioExponential")
      .def(py::init([](int a, int b, double k) { return DioExponential{a, b, k}; }),
           py::arg("a"), py::arg("b"), py::arg("k"));

  m.def("activation_eval", &activation_eval, py::arg("spec"), py::arg("x"));
  m.def("activation_derivative", &activation_derivative, py::arg("spec"), py::arg("x"));
  m.def("activation_bound", &activation_bound, py::arg("spec"), py::arg("m"));
  m.def("lipschitz_constant", &lipschitz_constant, py::arg("spec"), py::arg("m"));
  m.def("kind_name", [](const ActivationSpec& s) { return std::string(kind_name(s)); });

  // network
  py::class_<Network>(m, "Network")
      .def(py::init([](const std::vector<std::tuple<Rows, std::vector<double>, ActivationSpec>>& layers) {
             std::vector<Layer> ls;
             for (const auto& [w, b, act] : layers) ls.push_back(Layer{to_matrix(w), Vector(b), act});
             return Network(std::move(ls));
           }),
           py::arg("layers"), "layers: list of (weights rows, bias, activation)")
      .def_property_readonly("depth", &Network::depth)
      .def_property_readonly("input_dim", &Network::input_dim)
      .def_property_readonly("output_dim", &Network::output_dim)
      .def_property_readonly("parameter_count", &Network::parameter_count)
      .def("weights", [](const Network& n, std::size_t i) { return from_matrix(n.layer(i).weights); })
      .def("bias", [](const Network& n, std::size_t i) { return n.layer(i).bias.values(); })
      .def("activation", [](const Network& n, std::size_t i) { return n.layer(i).activation; })
      .def("forward", [](const Network& n, const std::vector<double>& x) { return forward(n, Vector(x)).values(); })
      .def("parameters", [](const Network& n) { return flatten_parameters(n); })
      .def("with_parameters",
           [](const Network& n, const std::vector<double>& theta) { return with_parameters(n, theta); })
      .def("__eq__", [](const Network& a, const Network& b) { return a == b; });

  // constraints module
  py::enum_<Rounding>(m, "Rounding")
      .value("half_toward_zero", Rounding::half_toward_zero)
      .value("half_up", Rounding::half_up);
  m.def("round_to_integer", &round_to_integer, py::arg("v"), py::arg("rule") = Rounding::half_toward_zero);
  m.def(
      "project_integers",
      [](const std::vector<double>& theta, Rounding rule) { return project_integers(theta, rule); },
      py::arg("theta"), py::arg("rule") = Rounding::half_toward_zero);
  m.def(
      "project_network", [](const Network& n, Rounding rule) { return project_integers(n, rule); },
      py::arg("net"), py::arg("rule") = Rounding::half_toward_zero);
  m.def(
      "encode",
      [](const std::vector<double>& theta, double scale) { return encode(theta, EncodingMap{scale}); },
      py::arg("theta"), py::arg("scale") = 1.0);
  m.def(
      "decode",
      [](const std::vector<std::int64_t>& x, double scale) { return decode(x, EncodingMap{scale}); },
      py::arg("x"), py::arg("scale") = 1.0);
  m.def(
      "convergents",
      [](double theta, std::int64_t max_den) {
        std::vector<std::pair<std::int64_t, std::int64_t>> out;
        for (const Rational& r : convergents(theta, max_den)) out.emplace_back(r.p, r.q);
        return out;
      },
      py::arg("theta"), py::arg("max_den"));
  m.def(
      "rational_approx",
      [](double theta, std::int64_t max_den) {
        const Rational r = rational_approx(theta, max_den);
        return std::make_pair(r.p, r.q);
      },
      py::arg("theta"), py::arg("max_den"));
  m.def(
      "lll_reduce",
      [](const std::vector<IntVector>& basis, double delta) { return lll_reduce(LatticeBasis{basis}, delta).vectors; },
      py::arg("basis"), py::arg("delta") = 0.75);
  m.def(
      "lll_init",
      [](const Network& n, double scale, double delta) {
        const LllInitResult r = lll_init(n, EncodingMap{scale}, delta);
        return py::make_tuple(r.net, r.fell_back, r.note);
      },
      py::arg("net"), py::arg("scale") = 1.0, py::arg("delta") = 0.75);

  py::class_<DiophantinePolynomial>(m, "Polynomial")
      .def(py::init([](const std::string& text, std::size_t n_vars) {
             return DiophantinePolynomial::parse(text, n_vars);
           }),
           py::arg("text"), py::arg("n_vars") = 0)
      .def_property_readonly("n_vars", &DiophantinePolynomial::n_vars)
      .def("eval", [](const DiophantinePolynomial& p, const std::vector<std::int64_t>& x) { return wide_to_py(p.eval(x)); })
      .def("eval_real", [](const DiophantinePolynomial& p, const std::vector<double>& x) { return p.eval_real(x); })
      .def("__str__", &DiophantinePolynomial::to_string);
  m.def(
      "diophantine_loss",
      [](const DiophantinePolynomial& p, const std::vector<double>& theta, double scale) {
        return diophantine_loss(Constraint{p, EncodingMap{scale}, {}}, theta);
      },
      py::arg("poly"), py::arg("theta"), py::arg("scale") = 1.0);

  // training
  py::enum_<TrainingMode>(m, "TrainingMode")
      .value("normal", TrainingMode::normal)
      .value("diophantine", TrainingMode::diophantine);
  py::enum_<TaskLoss>(m, "TaskLoss").value("mse", TaskLoss::mse).value("cross_entropy", TaskLoss::cross_entropy);

  m.def(
      "train",
      [](const Network& net, const Rows& x, const Rows& y, double eta, std::size_t epochs, TrainingMode mode,
         std::uint64_t seed, std::size_t batch_size, TaskLoss task, double lambda, double gamma, double epsilon,
         const std::optional<std::string>& constraint, double scale) {
        const Dataset data(to_matrix(x), to_matrix(y));
        TrainingConfig t;
        t.eta = eta;
        t.epochs = epochs;
        t.mode = mode;
        t.seed = seed;
        t.batch_size = batch_size;
        LossConfig l;
        l.task = task;
        l.lambda = lambda;
        l.gamma = gamma;
        l.epsilon = epsilon;
        if (constraint)
          l.constraint = Constraint{DiophantinePolynomial::parse(*constraint, net.parameter_count()),
                                    EncodingMap{scale}, {}};
        const TrainResult r = train(net, data, data, t, l);
        py::list history;
        for (const auto& e : r.history) history.append(metrics_dict(e));
        return py::make_tuple(r.net, history);
      },
      py::arg("net"), py::arg("x"), py::arg("y"), py::arg("eta") = 0.1, py::arg("epochs") = 1,
      py::arg("mode") = TrainingMode::normal, py::arg("seed") = 0, py::arg("batch_size") = 0,
      py::arg("task") = TaskLoss::mse, py::arg("lam") = 0.0, py::arg("gamma") = 0.0, py::arg("epsilon") = 0.0,
      py::arg("constraint") = py::none(), py::arg("scale") = 1.0);

  m.def(
      "gradients",
      [](const Network& net, const Rows& x, const Rows& y, TaskLoss task) {
        LossConfig l;
        l.task = task;
        const BackwardResult r = backward(net, Dataset(to_matrix(x), to_matrix(y)), l);
        return py::make_tuple(r.loss, r.grads.flatten());
      },
      py::arg("net"), py::arg("x"), py::arg("y"), py::arg("task") = TaskLoss::mse);

  m.def(
      "adversarial_perturb",
      [](const Network& net, const std::vector<double>& x, const std::vector<double>& y, double eps, TaskLoss task) {
        return adversarial_perturb(net, Vector(x), Vector(y), eps, task).values();
      },
      py::arg("net"), py::arg("x"), py::arg("y"), py::arg("epsilon"), py::arg("task") = TaskLoss::mse);

  // analysis
  m.def(
      "output_variance",
      [](const Network& net, const std::vector<double>& x, double sigma, std::size_t samples, std::uint64_t seed) {
        return output_variance(net, Vector(x), sigma, samples, seed);
      },
      py::arg("net"), py::arg("x"), py::arg("sigma"), py::arg("samples"), py::arg("seed") = 0);
  m.def(
      "network_lipschitz_upper", [](const Network& net, double m) { return network_lipschitz_upper(net, m).bound; },
      py::arg("net"), py::arg("m"));
  m.def(
      "adversarial_accuracy",
      [](const Network& net, const Rows& x, const Rows& y, double eps, TaskLoss task) {
        return adversarial_accuracy(net, Dataset(to_matrix(x), to_matrix(y)), eps, task);
      },
      py::arg("net"), py::arg("x"), py::arg("y"), py::arg("epsilon"), py::arg("task") = TaskLoss::mse);

  // harness
  m.def(
      "reproduce_examples",
      [](Rounding rule) {
        const ReproductionReport r = reproduce_examples(rule);
        return py::make_tuple(r.passed(), r.to_text());
      },
      py::arg("rule") = Rounding::half_toward_zero);
  m.def(
      "run_experiment",
      [](const std::string& config_text, const std::optional<std::string>& out) {
        ExperimentConfig cfg = parse_experiment_config(config_text);
        if (out) cfg.output_dir = *out;
        const ExperimentArtifacts a = run_experiment(cfg);
        py::list history;
        for (const auto& e : a.result.history) history.append(metrics_dict(e));
        return py::make_tuple(a.result.net, history);
      },
      py::arg("config_json"), py::arg("out") = py::none());
  m.def(
      "save_model",
      [](const Network& net, const std::string& path, TrainingMode mode, std::uint64_t seed) {
        TrainingConfig t;
        t.mode = mode;
        t.seed = seed;
        save_model(net, t, path);
      },
      py::arg("net"), py::arg("path"), py::arg("mode") = TrainingMode::normal, py::arg("seed") = 0);
  m.def(
      "load_model", [](const std::string& path) { return load_model(path).net; }, py::arg("path"));
}
