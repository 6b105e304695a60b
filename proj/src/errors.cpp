// Copyright 2026 The kikuchi Authors.
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

#include "kikuchi/errors.hpp"

namespace kikuchi {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DuplicateRegion: return "DuplicateRegion";
    case ErrorKind::EmptyRegion: return "EmptyRegion";
    case ErrorKind::VertexOutOfRange: return "VertexOutOfRange";
    case ErrorKind::NotTwoLayer: return "NotTwoLayer";
    case ErrorKind::ScopeMismatch: return "ScopeMismatch";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::SupportViolation: return "SupportViolation";
    case ErrorKind::InvalidPseudomarginals: return "InvalidPseudomarginals";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::TooManyRegions: return "TooManyRegions";
    case ErrorKind::TooManyVertices: return "TooManyVertices";
    case ErrorKind::TooManyFactors: return "TooManyFactors";
    case ErrorKind::HallConditionViolated: return "HallConditionViolated";
    case ErrorKind::BoundaryPoint: return "BoundaryPoint";
    case ErrorKind::InfeasiblePoint: return "InfeasiblePoint";
    case ErrorKind::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorKind::NonIntegerWeight: return "NonIntegerWeight";
    case ErrorKind::BadFamilyParameter: return "BadFamilyParameter";
    case ErrorKind::InvalidWeights: return "InvalidWeights";
    case ErrorKind::NonFiniteMessage: return "NonFiniteMessage";
    case ErrorKind::NonPositiveEdgeWeight: return "NonPositiveEdgeWeight";
    case ErrorKind::NotPerfectSquare: return "NotPerfectSquare";
    case ErrorKind::TooSmall: return "TooSmall";
    case ErrorKind::InvalidModel: return "InvalidModel";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace kikuchi
