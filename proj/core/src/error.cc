// Copyright 2026 The treebargain Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "treebargain/error.h"

namespace treebargain {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidTree:
      return "InvalidTree";
    case ErrorCode::kEmptyAfterPrune:
      return "EmptyAfterPrune";
    case ErrorCode::kMissingShare:
      return "MissingShare";
    case ErrorCode::kDimensionMismatch:
      return "DimensionMismatch";
    case ErrorCode::kInvalidInstance:
      return "InvalidInstance";
    case ErrorCode::kInfeasiblePoint:
      return "InfeasiblePoint";
    case ErrorCode::kBoundViolation:
      return "BoundViolation";
    case ErrorCode::kInvalidPerturbation:
      return "InvalidPerturbation";
    case ErrorCode::kTooLarge:
      return "TooLarge";
    case ErrorCode::kUnsupported:
      return "Unsupported";
    case ErrorCode::kInvalidConfig:
      return "InvalidConfig";
  }
  return "Unknown";
}

}  // namespace treebargain
