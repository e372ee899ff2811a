//
// ddigraph - Copyright 2026 The ddigraph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "ddigraph/error.hpp"

namespace ddigraph {

std::string_view to_string(ErrorCode code) {
  switch (code) {
  case ErrorCode::kEmptyInput:
    return "EmptyInput";
  case ErrorCode::kUnsupportedToken:
    return "UnsupportedToken";
  case ErrorCode::kUnclosedBranch:
    return "UnclosedBranch";
  case ErrorCode::kUnmatchedRingBond:
    return "UnmatchedRingBond";
  case ErrorCode::kInvalidBond:
    return "InvalidBond";
  case ErrorCode::kAtomCapExceeded:
    return "AtomCapExceeded";
  case ErrorCode::kShapeMismatch:
    return "ShapeMismatch";
  case ErrorCode::kNonFinite:
    return "NonFinite";
  case ErrorCode::kNonScalarLoss:
    return "NonScalarLoss";
  case ErrorCode::kHeadsNotDividing:
    return "HeadsNotDividing";
  case ErrorCode::kSizeCapExceeded:
    return "SizeCapExceeded";
  case ErrorCode::kLabelOutOfRange:
    return "LabelOutOfRange";
  case ErrorCode::kMissingColumn:
    return "MissingColumn";
  case ErrorCode::kMalformedRow:
    return "MalformedRow";
  case ErrorCode::kEmptyDataset:
    return "EmptyDataset";
  case ErrorCode::kInsufficientDrugs:
    return "InsufficientDrugs";
  case ErrorCode::kIndexOutOfRange:
    return "IndexOutOfRange";
  case ErrorCode::kEmptyMatrix:
    return "EmptyMatrix";
  case ErrorCode::kEmptySubset:
    return "EmptySubset";
  case ErrorCode::kNoMatchingSamples:
    return "NoMatchingSamples";
  case ErrorCode::kKExceedsEdges:
    return "KExceedsEdges";
  case ErrorCode::kVersionMismatch:
    return "VersionMismatch";
  case ErrorCode::kCorruptCheckpoint:
    return "CorruptCheckpoint";
  case ErrorCode::kIo:
    return "IoError";
  case ErrorCode::kInvalidConfig:
    return "InvalidConfig";
  }
  return "Unknown";
}

}  // namespace ddigraph
