#include <filesystem>
#include <random>
#include <regex>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "diophnet/encoding.hpp"
#include "diophnet/error.hpp"
#include "diophnet/model_io.hpp"
#include "oracles.hpp"

using namespace diophnet;
namespace fs = std::filesystem;

namespace {

Network awkward_network() {
  std::mt19937_64 rng(8);
  Network net = oracle::random_network(rng, {3, 4, 2},
                                       {DioExponential{2, 3, 0.125}, DioQuadratic{0.1, -1.0 / 3, 1e-300, 2.5, -7}});
  auto theta = flatten_parameters(net);
  theta[0] = 0.1 + 0.2;
  theta[1] = -0.0;
  theta[2] = 5e-324;
  theta[3] = 1.7976931348623157e308;
  return with_parameters(net, theta);
}

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "diophnet_model_io";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Decimal, ShortestRoundTrip) {
  for (double v : {0.0, 1.0, -2.5, 0.1 + 0.2, 1e-300, 5e-324, 1.7976931348623157e308, -123456789.125}) {
    EXPECT_EQ(parse_decimal(format_decimal(v)), v) << format_decimal(v);
  }
  EXPECT_EQ(format_decimal(-0.0), "0");
  EXPECT_EQ(format_decimal(3.0), "3");
  EXPECT_EQ(format_decimal(-1e20), "-100000000000000000000");
  EXPECT_EQ(format_decimal(0.5), "0.5");
  EXPECT_THROW(parse_decimal("1.5x"), FormatError);
  EXPECT_THROW(parse_decimal(""), FormatError);
  EXPECT_THROW(parse_decimal("nan"), FormatError);
}

TEST(ModelFile, RoundTripIsBitExact) {
  const Network net = awkward_network();
  TrainingConfig t;
  t.eta = 0.037;
  t.epochs = 12;
  t.mode = TrainingMode::diophantine;
  t.seed = 18446744073709551615ull;
  const fs::path p = temp_file("roundtrip.json");
  save_model(net, t, p);
  const ModelBundle back = load_model(p);
  const auto a = flatten_parameters(net), b = flatten_parameters(back.net);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    EXPECT_EQ(std::bit_cast<std::uint64_t>(a[i] == 0.0 ? 0.0 : a[i]), std::bit_cast<std::uint64_t>(b[i]));
  for (std::size_t l = 0; l < net.depth(); ++l) EXPECT_EQ(net.layer(l).activation, back.net.layer(l).activation);
  EXPECT_EQ(back.training.seed, t.seed);
  EXPECT_EQ(back.training.mode, t.mode);
  EXPECT_EQ(back.training.eta, t.eta);
  EXPECT_EQ(back.training.epochs, t.epochs);
  EXPECT_EQ(serialize_model(back.net, back.training), serialize_model(net, t));
}

TEST(ModelFile, IntegerModeStoresIntegerStrings) {
  const Network net = project_integers(awkward_network());
  TrainingConfig t;
  t.mode = TrainingMode::diophantine;
  const auto j = nlohmann::json::parse(serialize_model(net, t));
  for (const auto& layer : j.at("layers")) {
    for (const char* key : {"weights", "bias"})
      for (const auto& v : layer.at(key)) {
        const std::string s = v.get<std::string>();
        EXPECT_TRUE(std::regex_match(s, std::regex("-?[0-9]+"))) << s;
      }
  }
}

TEST(ModelFile, TruncatedFileIsFormatError) {
  const std::string text = serialize_model(awkward_network(), TrainingConfig{});
  for (std::size_t cut : {std::size_t{0}, std::size_t{10}, text.size() / 2, text.size() - 3}) {
    EXPECT_THROW(parse_model(text.substr(0, cut)), FormatError) << cut;
  }
}

TEST(ModelFile, StructuralErrors) {
  auto j = nlohmann::json::parse(serialize_model(awkward_network(), TrainingConfig{}));
  auto expect_bad = [](const nlohmann::json& doc) { EXPECT_THROW(parse_model(doc.dump()), FormatError) << doc.dump(); };

  auto v = j;
  v["version"] = kModelFormatVersion + 1;
  expect_bad(v);
  auto f = j;
  f["format"] = "something-else";
  expect_bad(f);
  auto w = j;
  w["layers"][0]["weights"].erase(0);
  expect_bad(w);
  auto s = j;
  s["layers"][1]["in"] = 7;
  expect_bad(s);
  auto n = j;
  n["layers"][0]["bias"][0] = 1.5;  // numbers must be decimal strings
  expect_bad(n);
  auto a = j;
  a["layers"][0]["activation"] = {{"kind", "dio_linear"}, {"a", "1"}, {"b", "0"}, {"c", "0"}};
  expect_bad(a);
  auto m = j;
  m["mode"] = "integer";
  expect_bad(m);
}

TEST(ModelFile, IoErrors) {
  EXPECT_THROW(load_model("/nonexistent/dir/model.json"), IoError);
  EXPECT_THROW(save_model(awkward_network(), TrainingConfig{}, "/proc/definitely/not/here.json"), IoError);
}
