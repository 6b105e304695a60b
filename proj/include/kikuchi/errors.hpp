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

#ifndef KIKUCHI_ERRORS_HPP
#define KIKUCHI_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace kikuchi {

enum class ErrorKind {
  DuplicateRegion,
  EmptyRegion,
  VertexOutOfRange,
  NotTwoLayer,
  ScopeMismatch,
  NotNormalized,
  SupportViolation,
  InvalidPseudomarginals,
  TooLarge,
  TooManyRegions,
  TooManyVertices,
  TooManyFactors,
  HallConditionViolated,
  BoundaryPoint,
  InfeasiblePoint,
  NonPositiveWeight,
  NonIntegerWeight,
  BadFamilyParameter,
  InvalidWeights,
  NonFiniteMessage,
  NonPositiveEdgeWeight,
  NotPerfectSquare,
  TooSmall,
  InvalidModel,
  ParseError,
};

const char* to_string(ErrorKind kind);

/// Base exception for every failure reported by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Thrown by hall_labeling; carries a subset U of the left side with
/// w(U) > w(N(U)).
class HallConditionViolated : public Error {
 public:
  explicit HallConditionViolated(std::vector<int> subset)
      : Error(ErrorKind::HallConditionViolated,
              "no saturating labeling exists"),
        subset_(std::move(subset)) {}

  const std::vector<int>& subset() const noexcept { return subset_; }

 private:
  std::vector<int> subset_;
};

/// Thrown by the message-passing solvers when an update produces a
/// non-finite value.
class NonFiniteMessage : public Error {
 public:
  explicit NonFiniteMessage(int iteration)
      : Error(ErrorKind::NonFiniteMessage,
              "non-finite message at iteration " + std::to_string(iteration)),
        iteration_(iteration) {}

  int iteration() const noexcept { return iteration_; }

 private:
  int iteration_;
};

}  // namespace kikuchi

#endif  // KIKUCHI_ERRORS_HPP
