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

#ifndef KIKUCHI_TANGENT_SPACE_HPP
#define KIKUCHI_TANGENT_SPACE_HPP

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "kikuchi/region_graph.hpp"
#include "kikuchi/tables.hpp"

namespace kikuchi {

/// Directions that keep every local-polytope equality satisfied: unit mass
/// per region and Σ_{x_{u∖t}} τ_u = τ_t for every containment t ⊊ u.
///
/// All region tables are stacked into one vector (region order, each table
/// in its own layout). basis() has orthonormal columns spanning the null
/// space of the stacked constraint matrix.
class TangentSpace {
 public:
  explicit TangentSpace(const RegionGraph& graph);

  std::size_t ambient_dimension() const { return offsets_.back(); }
  std::size_t dimension() const { return static_cast<std::size_t>(basis_.cols()); }
  const Eigen::MatrixXd& basis() const { return basis_; }

  Eigen::VectorXd flatten(const RegionTables& tables) const;
  /// Reshapes a stacked vector using `like` for scopes and cardinalities.
  RegionTables unflatten(const Eigen::VectorXd& v, const RegionTables& like) const;

  /// Orthogonal projection onto the tangent space.
  Eigen::VectorXd project(const Eigen::VectorXd& v) const;

 private:
  std::vector<std::size_t> offsets_;
  Eigen::MatrixXd basis_;
};

}  // namespace kikuchi

#endif  // KIKUCHI_TANGENT_SPACE_HPP
