//
// ddigraph - Copyright 2026 The ddigraph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DDIGRAPH_TOOLS_COMMANDS_HPP_
#define DDIGRAPH_TOOLS_COMMANDS_HPP_

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "ddigraph/config.hpp"

namespace ddigraph::cli {

// Bad flags or flag combinations; mapped to exit code 2.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char *kOutputRootEnv = "DDIGRAPH_OUTPUT_ROOT";

// Command names as recorded in manifests.
inline constexpr const char *kTrain = "train";
inline constexpr const char *kEval = "eval";
inline constexpr const char *kPredict = "predict";
inline constexpr const char *kOversmooth = "analyze oversmooth";
inline constexpr const char *kDistance = "analyze distance";
inline constexpr const char *kEdges = "analyze edges";
inline constexpr const char *kSynth = "synth";

/// Runs `command` with a fully merged config (file entries overridden by
/// flags). Writes every output plus manifest.json into the run directory and
/// returns that directory.
std::filesystem::path run(const std::string &command, Config config);

/// Re-executes the run described by a manifest. Fails when an input file's
/// digest changed or a deterministic output differs.
std::filesystem::path replay(const std::filesystem::path &manifest,
                             const std::optional<std::filesystem::path> &out);

std::string sha256_file(const std::filesystem::path &path);

}  // namespace ddigraph::cli

#endif  // DDIGRAPH_TOOLS_COMMANDS_HPP_
