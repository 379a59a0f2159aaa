#include <random>

#include <gtest/gtest.h>

#include "diophnet/error.hpp"
#include "diophnet/network.hpp"
#include "oracles.hpp"

using namespace diophnet;

TEST(Forward, Examples) {
  EXPECT_EQ(forward(make_single_layer(Matrix::identity(2), Vector(2)), Vector{1, 2}), (Vector{1, 2}));
  EXPECT_EQ(forward(make_single_layer(Matrix{{2}}, Vector{1}), Vector{3}), (Vector{7}));
  EXPECT_EQ(forward(make_single_layer(Matrix{{1}}, Vector{0}, DioLinear{1, 1, 0}), Vector{4}), (Vector{-4}));
}

TEST(Forward, IdentityStackIsIdentity) {
  std::vector<Layer> layers(4, Layer{Matrix::identity(3), Vector(3), Identity{}});
  const Network net(layers);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int t = 0; t < 100; ++t) {
    const Vector x{u(rng), u(rng), u(rng)};
    EXPECT_EQ(forward(net, x), x);
  }
}

TEST(Forward, ShapeErrors) {
  const Network net = make_single_layer(Matrix(2, 3), Vector(2));
  EXPECT_THROW(forward(net, Vector{1, 2}), ShapeError);
  EXPECT_THROW(Network({Layer{Matrix(2, 3), Vector(2), Identity{}}, Layer{Matrix(1, 3), Vector(1), Identity{}}}),
               ShapeError);
  EXPECT_THROW(Network({Layer{Matrix(2, 3), Vector(3), Identity{}}}), ShapeError);
  EXPECT_THROW(Network({Layer{Matrix(1, 1), Vector(1), DioLinear{1, 0, 0}}}), DomainError);
}

TEST(Forward, TraceRecordsEveryLayer) {
  std::mt19937_64 rng(2);
  const Network net = oracle::random_network(rng, {3, 4, 2}, {Relu{}, Sigmoid{}});
  const Vector x{0.1, -0.2, 0.3};
  const ForwardTrace t = forward_trace(net, x);
  ASSERT_EQ(t.inputs.size(), 2u);
  ASSERT_EQ(t.pre_activations.size(), 2u);
  EXPECT_EQ(t.inputs[0], x);
  EXPECT_EQ(t.output, forward(net, x));
  EXPECT_EQ(t.pre_activations[1], axpy(1.0, matvec(net.layer(1).weights, t.inputs[1]), net.layer(1).bias));
}

TEST(Parameters, FlattenRoundTrip) {
  std::mt19937_64 rng(3);
  const Network net = oracle::random_network(rng, {2, 3, 1}, {DioQuadratic{1, 1, 1, 0, 2}, Identity{}});
  const auto theta = flatten_parameters(net);
  ASSERT_EQ(theta.size(), net.parameter_count());
  EXPECT_EQ(theta.size(), 6u + 3u + 3u + 1u);
  EXPECT_EQ(theta[0], net.layer(0).weights(0, 0));
  EXPECT_EQ(theta[1], net.layer(0).weights(0, 1));
  EXPECT_EQ(theta[6], net.layer(0).bias[0]);
  EXPECT_EQ(with_parameters(net, theta), net);
  EXPECT_THROW(with_parameters(net, std::vector<double>(3)), ShapeError);
}

// The per-activation inequality at network level for a single dio_linear unit.
TEST(Lipschitz, LinearUnitInequality) {
  const DioLinear f{3, -4, 1};
  const Network net = make_single_layer(Matrix{{1}}, Vector{0}, f);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-100, 100);
  for (int t = 0; t < 10000; ++t) {
    const double x1 = u(rng), x2 = u(rng);
    const double d = std::abs(forward(net, Vector{x1})[0] - forward(net, Vector{x2})[0]);
    ASSERT_LE(d, 0.75 * std::abs(x1 - x2) + 1e-9);
  }
}
