/*******************************************************************************
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *******************************************************************************/
#pragma once

// Data-splitting selection of the angle threshold lambda.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "psi/core.hpp"
#include "psi/loading.hpp"

namespace psi {

struct SplitPlan {
  std::vector<Index> train;  // sorted
  std::vector<Index> test;   // sorted
  std::uint64_t seed = 0;
};

/// Uniform random partition of {0..n-1}; train receives ceil(n/2) columns.
SplitPlan split(Index n, std::uint64_t seed);

/// Columns `cols` of x, in the given order.
Matrix select_columns(const Matrix& x, std::span<const Index> cols);

struct TestScores {
  Matrix w;  // n_test x r, orthonormal columns
  /// X_test^T U_tr has numerical rank below r; w is still a minimizer.
  bool degenerate = false;
};

/// Orthogonal Procrustes: argmin_W ||X_test - U_tr W^T||_F subject to
/// W^T W = I, given by P Q^T from the SVD X_test^T U_tr = P S Q^T.
TestScores test_scores(const Matrix& x_test, const Matrix& u_train);

/// sum_k ||X_test,k - U_(k) W_test^T||_F^2 / ||X_test,k||_F^2.
double empirical_risk(std::span<const Matrix> x_test, std::span<const Matrix> u_train,
                      const Matrix& w_test);

struct CurvePoint {
  double lambda = 0.0;  // radians
  double value = 0.0;
};

struct TuningResult {
  SplitPlan plan;
  double lambda_tilde = 0.0;
  PartialJointStructure structure_train;
  double lambda_hat = 0.0;
  PartialJointStructure structure_hat;
  std::vector<CurvePoint> risk_curve;
  std::vector<CurvePoint> dissimilarity_curve;
  /// Whole-data structure at each grid point.
  std::vector<PartialJointStructure> whole_structures;
};

/// 0, 1, ..., 89 degrees in radians.
std::vector<double> default_grid();

/// Degrees lo, lo+step, ... <= hi (inclusive up to 1e-9), converted to radians.
std::vector<double> degree_grid(double lo_deg, double hi_deg, double step_deg);

/// Index of the first minimum (smallest lambda on ties).
std::size_t first_argmin(std::span<const CurvePoint> curve);

TuningResult select_lambda(const MultiBlockDataset& data, std::span<const int> ranks,
                           const IndexOrdering& ordering, std::span<const double> grid,
                           std::uint64_t seed, int threads = 1);

/// Most frequent structure (binary-multiset equality); ties go to the first
/// occurrence.
std::pair<PartialJointStructure, int> mode_structure(std::span<const PartialJointStructure> structures);

}  // namespace psi
