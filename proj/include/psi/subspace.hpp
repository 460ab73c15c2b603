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

// Subspace geometry on R^n: orthonormal bases, sine distance and principal
// angle between a direction and a subspace, the one-dimensional flag mean,
// and deflation of a basis by a direction.

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

namespace psi {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Entrywise tolerance on B^T B - I accepted without re-orthonormalization.
inline constexpr double kOrthonormalTol = 1e-10;

/// n x r matrix with orthonormal columns. r = 0 is the zero subspace.
class OrthonormalBasis {
 public:
  OrthonormalBasis() = default;

  /// Zero subspace {0} of R^n.
  static OrthonormalBasis zero(Index n);

  /// Wraps columns that are already orthonormal. Columns that drift beyond
  /// kOrthonormalTol are re-orthonormalized by QR; rank-deficient or
  /// non-finite input is rejected.
  static OrthonormalBasis from_columns(Matrix columns);

  const Matrix& columns() const noexcept { return columns_; }
  Index ambient_dim() const noexcept { return columns_.rows(); }
  Index dim() const noexcept { return columns_.cols(); }
  bool empty() const noexcept { return columns_.cols() == 0; }

  /// P = B B^T.
  Matrix projector() const { return columns_ * columns_.transpose(); }

 private:
  explicit OrthonormalBasis(Matrix columns) : columns_(std::move(columns)) {}

  Matrix columns_;
};

/// Unit-norm vector in R^n.
class UnitDirection {
 public:
  /// Normalizes v. Throws ValidationError for a zero or non-finite vector.
  static UnitDirection normalized(const Vector& v);

  const Vector& vector() const noexcept { return v_; }
  Index ambient_dim() const noexcept { return v_.size(); }

 private:
  explicit UnitDirection(Vector v) : v_(std::move(v)) {}

  Vector v_;
};

/// Flips v so that its entry of largest magnitude is positive (ties: lowest
/// index).
void fix_sign(Eigen::Ref<Vector> v);

/// Applies fix_sign to every column.
void fix_column_signs(Matrix& m);

/// Orthonormal basis of the column space of raw. Columns whose singular value
/// is <= tol * (largest singular value) are dropped. All-zero input gives the
/// r = 0 basis.
OrthonormalBasis orthonormalize(const Matrix& raw, double tol = kOrthonormalTol);

/// d([w],[B]) = sqrt(1 - w^T B B^T w), clamped to [0,1]. Returns 1 for r = 0.
double sine_distance(const UnitDirection& w, const OrthonormalBasis& basis);

/// arcsin(sine_distance(w, B)), in [0, pi/2].
double principal_angle(const UnitDirection& w, const OrthonormalBasis& basis);

struct FlagMean {
  UnitDirection direction;
  /// w^T (sum_k B_k B_k^T) w at the returned direction.
  double objective = 0.0;
  /// True when the top eigenvalue of sum_k B_k B_k^T is repeated.
  bool degenerate = false;
  /// Multiplicity of the top eigenvalue.
  Index tie_dimension = 1;
};

/// One-dimensional flag mean: the unit w maximizing w^T (sum_k B_k B_k^T) w.
///
/// Computed from the eigendecomposition of the Gram matrix H^T H of the
/// concatenated bases H = [B_1 ... B_m]. When the top eigenvalue is repeated
/// the maximizer is not unique; the returned direction is then the one in the
/// top eigenspace that maximizes sum_k cos^4(theta_k), found by a shifted
/// power iteration started from the solver's leading eigenvector. This keeps
/// the objective optimal and prefers directions lying inside whole subspaces
/// over blends of several of them.
FlagMean flag_mean(std::span<const OrthonormalBasis> bases);

UnitDirection flag_mean_direction(std::span<const OrthonormalBasis> bases);

/// Orthogonal complement of the normalized projection P_B w inside span(B).
/// Returns std::nullopt when ||B^T w|| <= tol, meaning there is nothing to
/// peel.
std::optional<OrthonormalBasis> deflate(const OrthonormalBasis& basis, const UnitDirection& w,
                                        double tol = 1e-12);

// Helpers for exact-arithmetic subspace algebra (used by the uniqueness
// diagnostics).

/// Intersection of two subspaces: directions whose principal-angle cosine
/// exceeds 1 - cos_tol.
OrthonormalBasis intersect(const OrthonormalBasis& a, const OrthonormalBasis& b,
                           double cos_tol = 1e-9);

/// Intersection of a nonempty list of subspaces, folded pairwise.
OrthonormalBasis intersect_all(std::span<const OrthonormalBasis> bases, double cos_tol = 1e-9);

/// Basis of the sum a_1 + ... + a_m (ambient dimension n, used when the list
/// is empty).
OrthonormalBasis subspace_sum(std::span<const OrthonormalBasis> bases, Index n);

/// Basis of P_C^perp(span(A)): projects A onto the orthogonal complement of C.
OrthonormalBasis project_out(const OrthonormalBasis& a, const OrthonormalBasis& c);

/// Largest |cosine| between the two subspaces (0 if either is empty).
double max_cosine(const OrthonormalBasis& a, const OrthonormalBasis& b);

/// ||P_A - P_B||_F.
double projector_distance(const OrthonormalBasis& a, const OrthonormalBasis& b);

}  // namespace psi
