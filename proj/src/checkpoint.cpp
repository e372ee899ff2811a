//
// ddigraph - Copyright 2026 The ddigraph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "ddigraph/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "ddigraph/error.hpp"

namespace ddigraph {
namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint encoding assumes a little-endian host");

void put_u32(std::string &out, std::uint32_t v) {
  char buf[4];
  std::memcpy(buf, &v, 4);
  out.append(buf, 4);
}

void put_f64(std::string &out, double v) {
  char buf[8];
  std::memcpy(buf, &v, 8);
  out.append(buf, 8);
}

class Reader {
public:
  explicit Reader(std::string_view bytes): bytes_(bytes) { }

  std::string_view take(std::size_t n, const char *what) {
    if (bytes_.size() - pos_ < n)
      throw Error(ErrorCode::kCorruptCheckpoint,
                  std::string("truncated while reading ") + what);
    const std::string_view s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  std::uint32_t u32(const char *what) {
    std::uint32_t v;
    std::memcpy(&v, take(4, what).data(), 4);
    return v;
  }

  double f64(const char *what) {
    double v;
    std::memcpy(&v, take(8, what).data(), 8);
    return v;
  }

  bool done() const { return pos_ == bytes_.size(); }

private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

void store_shape(const ModelShape &shape, Config &config) {
  config.set("model.feature_dim", std::to_string(shape.feature_dim));
  config.set("model.dim", std::to_string(shape.dim));
  config.set("model.hidden_dim", std::to_string(shape.hidden_dim));
  config.set("model.layers", std::to_string(shape.layers));
  config.set("model.heads", std::to_string(shape.heads));
  config.set("model.classes", std::to_string(shape.classes));
}

ModelShape read_shape(const Config &config) {
  ModelShape s;
  s.feature_dim = static_cast<int>(config.get_int("model.feature_dim", -1));
  s.dim = static_cast<int>(config.get_int("model.dim", -1));
  s.hidden_dim = static_cast<int>(config.get_int("model.hidden_dim", -1));
  s.layers = static_cast<int>(config.get_int("model.layers", -1));
  s.heads = static_cast<int>(config.get_int("model.heads", -1));
  s.classes = static_cast<int>(config.get_int("model.classes", -1));
  s.validate();
  return s;
}

std::string encode_checkpoint(const ModelParams &params, Config config) {
  store_shape(params.shape, config);
  const std::string cfg = config.to_string();
  const auto all = params.all();

  std::string out(kCheckpointMagic, sizeof(kCheckpointMagic));
  put_u32(out, kCheckpointVersion);
  put_u32(out, static_cast<std::uint32_t>(cfg.size()));
  out += cfg;
  put_u32(out, static_cast<std::uint32_t>(all.size()));
  for (const Param *p: all) {
    put_u32(out, static_cast<std::uint32_t>(p->name.size()));
    out += p->name;
    put_u32(out, static_cast<std::uint32_t>(p->value.rows()));
    put_u32(out, static_cast<std::uint32_t>(p->value.cols()));
    for (Eigen::Index i = 0; i < p->value.rows(); ++i) {
      for (Eigen::Index j = 0; j < p->value.cols(); ++j)
        put_f64(out, p->value(i, j));
    }
  }
  return out;
}

Checkpoint decode_checkpoint(std::string_view bytes) {
  Reader r(bytes);
  if (r.take(sizeof(kCheckpointMagic), "magic")
      != std::string_view(kCheckpointMagic, sizeof(kCheckpointMagic)))
    throw Error(ErrorCode::kCorruptCheckpoint, "bad magic");
  const std::uint32_t version = r.u32("version");
  if (version != kCheckpointVersion)
    throw Error(ErrorCode::kVersionMismatch,
                "checkpoint version " + std::to_string(version)
                    + ", expected " + std::to_string(kCheckpointVersion));

  Checkpoint ck;
  const std::uint32_t cfg_len = r.u32("config length");
  ck.config = Config::parse(r.take(cfg_len, "config"));
  ck.params = zero_params(read_shape(ck.config));

  std::map<std::string, Param *> by_name;
  for (Param *p: ck.params.all())
    by_name.emplace(p->name, p);

  const std::uint32_t count = r.u32("parameter count");
  if (count != by_name.size())
    throw Error(ErrorCode::kShapeMismatch,
                "checkpoint holds " + std::to_string(count)
                    + " parameters, model expects "
                    + std::to_string(by_name.size()));
  for (std::uint32_t k = 0; k < count; ++k) {
    const std::uint32_t name_len = r.u32("name length");
    const std::string name(r.take(name_len, "name"));
    const std::uint32_t rows = r.u32("rows");
    const std::uint32_t cols = r.u32("cols");
    const auto it = by_name.find(name);
    if (it == by_name.end())
      throw Error(ErrorCode::kShapeMismatch, "unknown parameter " + name);
    Param &p = *it->second;
    if (rows != p.value.rows() || cols != p.value.cols())
      throw Error(ErrorCode::kShapeMismatch,
                  name + ": stored " + std::to_string(rows) + "x"
                      + std::to_string(cols) + ", expected "
                      + std::to_string(p.value.rows()) + "x"
                      + std::to_string(p.value.cols()));
    for (std::uint32_t i = 0; i < rows; ++i) {
      for (std::uint32_t j = 0; j < cols; ++j)
        p.value(i, j) = r.f64("values");
    }
    by_name.erase(it);
  }
  if (!r.done())
    throw Error(ErrorCode::kCorruptCheckpoint, "trailing bytes");
  return ck;
}

void save_checkpoint(const std::filesystem::path &path,
                     const ModelParams &params, const Config &config) {
  const std::string bytes = encode_checkpoint(params, config);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out)
    throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return decode_checkpoint(ss.str());
}

}  // namespace ddigraph
