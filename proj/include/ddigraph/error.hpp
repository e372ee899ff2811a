//
// ddigraph - Copyright 2026 The ddigraph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DDIGRAPH_ERROR_HPP_
#define DDIGRAPH_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace ddigraph {

enum class ErrorCode {
  // SMILES front end
  kEmptyInput,
  kUnsupportedToken,
  kUnclosedBranch,
  kUnmatchedRingBond,
  kInvalidBond,
  kAtomCapExceeded,
  // numerics
  kShapeMismatch,
  kNonFinite,
  kNonScalarLoss,
  kHeadsNotDividing,
  kSizeCapExceeded,
  kLabelOutOfRange,
  // data and splits
  kMissingColumn,
  kMalformedRow,
  kEmptyDataset,
  kInsufficientDrugs,
  // metrics and analysis
  kIndexOutOfRange,
  kEmptyMatrix,
  kEmptySubset,
  kNoMatchingSamples,
  kKExceedsEdges,
  // persistence
  kVersionMismatch,
  kCorruptCheckpoint,
  kIo,
  kInvalidConfig,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) { }

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Parse failures carry the 0-based character offset of the offending token.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, std::size_t position, const std::string &what)
      : Error(code, what + " at position " + std::to_string(position)),
        position_(position) { }

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace ddigraph

#endif  // DDIGRAPH_ERROR_HPP_
