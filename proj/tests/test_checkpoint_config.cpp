//
// ddigraph - Copyright 2026 The ddigraph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <catch_amalgamated.hpp>

#include <cstring>
#include <filesystem>
#include <fstream>

#include "ddigraph/checkpoint.hpp"
#include "ddigraph/config.hpp"
#include "ddigraph/error.hpp"
#include "support.hpp"

using namespace ddigraph;

namespace {

template <typename Fn>
ErrorCode error_of(Fn &&fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  return ErrorCode::kIo;  // sentinel: nothing thrown
}

ModelShape small_shape() {
  ModelShape s;
  s.dim = 4;
  s.hidden_dim = 8;
  s.layers = 1;
  s.heads = 2;
  s.classes = 3;
  return s;
}

}  // namespace

TEST_CASE("checkpoint round trip is bit exact", "[checkpoint][property]") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    ModelShape shape = small_shape();
    shape.layers = 1 + static_cast<int>(rng.below(3));
    shape.classes = 2 + static_cast<int>(rng.below(6));
    ModelParams params = init_params(shape, seed);
    testing::randomize(params, rng, 1e3);
    Config cfg;
    cfg.set("train.seed", std::to_string(seed));

    const Checkpoint back = decode_checkpoint(encode_checkpoint(params, cfg));
    CHECK(back.params.shape == shape);
    CHECK(back.config.get_string("train.seed", "") == std::to_string(seed));
    const auto want = params.all();
    const auto got = back.params.all();
    REQUIRE(want.size() == got.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
      CHECK(got[i]->name == want[i]->name);
      CHECK(std::memcmp(got[i]->value.data(), want[i]->value.data(),
                        sizeof(double) * want[i]->value.size())
            == 0);
    }
  }
}

TEST_CASE("checkpoint byte layout", "[checkpoint]") {
  const std::string bytes = encode_checkpoint(init_params(small_shape(), 1), {});
  CHECK(bytes.compare(0, 8, "DDIGCKPT") == 0);
  std::uint32_t version;
  std::memcpy(&version, bytes.data() + 8, 4);
  CHECK(version == 1);
}

TEST_CASE("checkpoint errors", "[checkpoint]") {
  const ModelParams params = init_params(small_shape(), 2);
  const std::string good = encode_checkpoint(params, {});

  std::string bad_magic = good;
  bad_magic[0] = 'X';
  CHECK(error_of([&] { decode_checkpoint(bad_magic); }) == ErrorCode::kCorruptCheckpoint);

  std::string v2 = good;
  const std::uint32_t two = 2;
  std::memcpy(v2.data() + 8, &two, 4);
  CHECK(error_of([&] { decode_checkpoint(v2); }) == ErrorCode::kVersionMismatch);

  for (std::size_t len = 0; len < good.size(); ++len) {
    INFO("prefix " << len);
    CHECK(error_of([&] { decode_checkpoint(std::string_view(good).substr(0, len)); })
          == ErrorCode::kCorruptCheckpoint);
  }
  CHECK(error_of([&] { decode_checkpoint(good + "x"); }) == ErrorCode::kCorruptCheckpoint);

  ModelParams wrong = params;
  wrong.proj_bias.value.resize(1, small_shape().dim + 1);
  wrong.proj_bias.value.setZero();
  const std::string mismatched = encode_checkpoint(wrong, {});
  CHECK(error_of([&] { decode_checkpoint(mismatched); }) == ErrorCode::kShapeMismatch);

  CHECK(error_of([] { load_checkpoint("/nonexistent/none.ckpt"); }) == ErrorCode::kIo);
}

TEST_CASE("checkpoint files", "[checkpoint]") {
  const auto path = std::filesystem::temp_directory_path() / "ddigraph_test_ckpt.bin";
  const ModelParams params = init_params(small_shape(), 3);
  save_checkpoint(path, params, {});
  const Checkpoint back = load_checkpoint(path);
  CHECK(back.params.query.value == params.query.value);
  std::filesystem::remove(path);
}

TEST_CASE("config text", "[config]") {
  const Config c = Config::parse("# comment\n\n  train.lr = 0.01  \nname=a b # tail\r\n");
  CHECK(c.get_double("train.lr", 0) == 0.01);
  CHECK(c.get_string("name", "") == "a b");
  CHECK(c.get_int("missing", 7) == 7);
  CHECK(Config::parse(c.to_string()) == c);

  CHECK(error_of([] { Config::parse("no equals sign"); }) == ErrorCode::kInvalidConfig);
  CHECK(error_of([] { Config::parse("= value"); }) == ErrorCode::kInvalidConfig);
  CHECK(error_of([&] { c.get_int("train.lr", 0); }) == ErrorCode::kInvalidConfig);
  CHECK(error_of([&] { c.get_double("name", 0); }) == ErrorCode::kInvalidConfig);
}

TEST_CASE("config precedence", "[config]") {
  Config defaults = Config::parse("a=1\nb=2\nc=3\n");
  const Config file = Config::parse("b=20\nc=30\n");
  const Config flags = Config::parse("c=300\n");
  defaults.merge(file);
  defaults.merge(flags);
  CHECK(defaults.get_int("a", 0) == 1);
  CHECK(defaults.get_int("b", 0) == 20);
  CHECK(defaults.get_int("c", 0) == 300);
}

TEST_CASE("doubles survive text formatting", "[config][property]") {
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    const double v = rng.normal() * std::pow(10.0, rng.uniform(-12, 12));
    Config c;
    c.set("v", format_double(v));
    CHECK(Config::parse(c.to_string()).get_double("v", 0) == v);
  }
}

TEST_CASE("model shape in config", "[checkpoint][config]") {
  Config c;
  store_shape(small_shape(), c);
  CHECK(read_shape(c) == small_shape());
  c.set("model.heads", "3");
  CHECK(error_of([&] { read_shape(c); }) == ErrorCode::kHeadsNotDividing);
}
