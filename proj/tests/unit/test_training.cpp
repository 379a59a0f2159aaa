#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "diophnet/encoding.hpp"
#include "diophnet/error.hpp"
#include "diophnet/experiment.hpp"
#include "diophnet/grad.hpp"
#include "diophnet/training.hpp"

using namespace diophnet;

namespace {

Dataset example1() { return Dataset(Matrix{{1}, {2}, {3}}, Matrix{{3}, {5}, {7}}); }
Network zero1() { return make_single_layer(Matrix{{0}}, Vector{0}); }

TrainingConfig cfg(TrainingMode mode, std::size_t epochs, double eta = 0.1) {
  TrainingConfig t;
  t.eta = eta;
  t.epochs = epochs;
  t.mode = mode;
  return t;
}

}  // namespace

TEST(TrainEpoch, ExampleOneNormal) {
  std::mt19937_64 rng(0);
  const auto r = train_epoch(zero1(), example1(), example1(), cfg(TrainingMode::normal, 1), LossConfig{}, rng, 1);
  EXPECT_NEAR(r.net.layer(0).weights(0, 0), 2.27, 0.01);
  EXPECT_NEAR(r.net.layer(0).bias[0], 1.0, 1e-9);
  EXPECT_NEAR(r.metrics.train_loss, dataset_loss(r.net, example1(), TaskLoss::mse), 1e-12);
}

TEST(TrainEpoch, ExampleOneDiophantine) {
  std::mt19937_64 rng(0);
  const auto r =
      train_epoch(zero1(), example1(), example1(), cfg(TrainingMode::diophantine, 1), LossConfig{}, rng, 1);
  EXPECT_EQ(r.net.layer(0).weights(0, 0), 2.0);
  EXPECT_EQ(r.net.layer(0).bias[0], 1.0);
}

TEST(ApplyUpdate, ExampleThreeMatrix) {
  const Network net({Layer{Matrix{{2.5, -1.3}, {0.7, 1.6}}, Vector(2), Identity{}}});
  Gradients g = Gradients::zeros_like(net);
  g.layers[0].d_weights = Matrix{{0.1, -0.4}, {0.3, 0.2}};
  const Network normal = apply_update(net, g, 0.01, TrainingMode::normal);
  const Matrix want{{2.499, -1.296}, {0.697, 1.598}};
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(normal.layer(0).weights(i, j), want(i, j), 1e-9);
  EXPECT_EQ(apply_update(net, g, 0.01, TrainingMode::diophantine).layer(0).weights, (Matrix{{2, -1}, {1, 2}}));
}

TEST(Train, PerfectInitStaysAtZeroLoss) {
  const auto r = train(make_single_layer(Matrix{{2}}, Vector{1}), example1(), example1(),
                       cfg(TrainingMode::normal, 5), LossConfig{});
  ASSERT_EQ(r.history.size(), 5u);
  for (const auto& m : r.history) {
    EXPECT_EQ(m.train_loss, 0.0);
    EXPECT_EQ(m.train_acc, 1.0);
  }
}

TEST(Train, ExampleOneConvergesToExactFit) {
  const auto r = train(zero1(), example1(), example1(), cfg(TrainingMode::normal, 2000, 0.05), LossConfig{});
  EXPECT_NEAR(r.net.layer(0).weights(0, 0), 2.0, 0.05);
  EXPECT_NEAR(r.net.layer(0).bias[0], 1.0, 0.05);
}

TEST(Train, MonotoneDescentAtSmallStep) {
  const auto r = train(zero1(), example1(), example1(), cfg(TrainingMode::normal, 100, 0.01), LossConfig{});
  for (std::size_t i = 1; i < r.history.size(); ++i) EXPECT_LE(r.history[i].train_loss, r.history[i - 1].train_loss);
}

TEST(Train, IntegralAtEveryEpochBoundary) {
  ExperimentConfig ec;
  ec.task = TaskKind::synthetic_regression;
  ec.training = cfg(TrainingMode::diophantine, 30, 0.01);
  ec.training.batch_size = 16;
  const TaskSetup s = build_task(ec);
  std::mt19937_64 rng(ec.training.seed);
  Network net = project_integers(s.net);
  for (std::size_t e = 1; e <= ec.training.epochs; ++e) {
    net = train_epoch(net, s.train, s.val, ec.training, s.loss, rng, e).net;
    ASSERT_TRUE(all_integral(flatten_parameters(net))) << "epoch " << e;
  }
  // train() projects the initial parameters too
  const auto r = train(s.net, s.train, s.val, ec.training, s.loss);
  EXPECT_TRUE(all_integral(flatten_parameters(r.net)));
}

TEST(Train, SeedDeterminism) {
  ExperimentConfig ec;
  ec.task = TaskKind::synthetic_classification;
  ec.training = cfg(TrainingMode::normal, 5, 0.1);
  ec.training.batch_size = 8;
  ec.training.seed = 42;
  const TaskSetup s = build_task(ec);
  const auto a = train(s.net, s.train, s.val, ec.training, s.loss);
  const auto b = train(s.net, s.train, s.val, ec.training, s.loss);
  EXPECT_EQ(a.history, b.history);
  EXPECT_EQ(a.net, b.net);
  ec.training.seed = 43;
  const auto c = train(s.net, s.train, s.val, ec.training, s.loss);
  EXPECT_NE(a.history, c.history);
}

TEST(Train, NonFiniteLossNamesEpochAndBatch) {
  const Network net = make_single_layer(Matrix{{1}}, Vector{0}, DioQuadratic{1, 0, 0, 0, 1});
  const Dataset d(Matrix{{1e3}, {1e3}}, Matrix{{0}, {0}});
  try {
    train(net, d, d, cfg(TrainingMode::normal, 20, 10.0), LossConfig{});
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("epoch"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("batch"), std::string::npos) << e.what();
  }
}

TEST(Train, LllInitIsRecorded) {
  TrainingConfig t = cfg(TrainingMode::diophantine, 1);
  t.lll_init = true;
  const Network net({Layer{Matrix{{1}}, Vector{0}, Identity{}}, Layer{Matrix{{0}}, Vector{1}, Identity{}}});
  const auto r = train(net, example1(), example1(), t, LossConfig{});
  ASSERT_TRUE(r.lll.has_value());
  EXPECT_FALSE(r.lll->fell_back);
}

TEST(TrainingConfig, Validation) {
  TrainingConfig t;
  t.epochs = 0;
  EXPECT_THROW(t.validate(), ConfigError);
  t.epochs = 1;
  t.eta = -1;
  EXPECT_THROW(t.validate(), ConfigError);
  EXPECT_THROW(parse_mode("integer"), ConfigError);
  EXPECT_EQ(parse_mode("diophantine"), TrainingMode::diophantine);
}

TEST(Metrics, ConstraintResidualReported) {
  LossConfig l;
  l.lambda = 0.5;
  l.constraint = Constraint{DiophantinePolynomial::parse("x1 - 2 x2"), EncodingMap{1}, {}};
  const auto r = train(zero1(), example1(), example1(), cfg(TrainingMode::diophantine, 3), l);
  for (const auto& m : r.history) EXPECT_GE(m.constraint_residual, 0.0);
  EXPECT_EQ(r.history.back().constraint_residual, constraint_residual(*l.constraint, flatten_parameters(r.net)));
}
