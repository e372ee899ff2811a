//
// ddigraph - Copyright 2026 The ddigraph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DDIGRAPH_CHECKPOINT_HPP_
#define DDIGRAPH_CHECKPOINT_HPP_

// Binary checkpoint container; byte layout in docs/checkpoint_format.md.

#include <cstdint>
#include <filesystem>
#include <string>

#include "ddigraph/config.hpp"
#include "ddigraph/model.hpp"

namespace ddigraph {

inline constexpr char kCheckpointMagic[8] = { 'D', 'D', 'I', 'G', 'C', 'K',
                                              'P', 'T' };
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  ModelParams params;
  Config config;  // includes the model.* shape keys
};

/// Writes model.* shape keys into `config`.
void store_shape(const ModelShape &shape, Config &config);
ModelShape read_shape(const Config &config);

std::string encode_checkpoint(const ModelParams &params, Config config);
Checkpoint decode_checkpoint(std::string_view bytes);

void save_checkpoint(const std::filesystem::path &path,
                     const ModelParams &params, const Config &config);
Checkpoint load_checkpoint(const std::filesystem::path &path);

}  // namespace ddigraph

#endif  // DDIGRAPH_CHECKPOINT_HPP_
