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
#include "psi/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "psi/error.hpp"
#include "psi/kernels.hpp"

namespace psi {

namespace {

/// Left singular vectors of raw whose singular value exceeds threshold.
Matrix left_singular_above(const Matrix& raw, double threshold) {
  if (raw.cols() == 0 || raw.rows() == 0) return Matrix(raw.rows(), 0);
  Eigen::BDCSVD<Matrix> svd(raw, Eigen::ComputeThinU);
  const Vector& s = svd.singularValues();
  Index keep = 0;
  while (keep < s.size() && s[keep] > threshold) ++keep;
  Matrix u = svd.matrixU().leftCols(keep);
  fix_column_signs(u);
  return u;
}

void require_same_ambient(Index a, Index b, const char* what) {
  if (a != b) {
    throw ValidationError(std::string(what) + ": ambient dimension mismatch (" +
                          std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

// Below this absolute singular value a projected orthonormal column is
// treated as lying inside the subspace it was projected against.
constexpr double kExactRankTol = 1e-9;

}  // namespace

OrthonormalBasis OrthonormalBasis::zero(Index n) { return OrthonormalBasis(Matrix(n, 0)); }

OrthonormalBasis OrthonormalBasis::from_columns(Matrix columns) {
  if (!columns.allFinite()) throw ValidationError("basis has non-finite entries");
  const Index r = columns.cols();
  if (r > columns.rows()) throw ValidationError("basis has more columns than rows");
  if (r == 0) return OrthonormalBasis(std::move(columns));
  const Matrix gram = columns.transpose() * columns;
  const double drift = (gram - Matrix::Identity(r, r)).cwiseAbs().maxCoeff();
  if (drift <= kOrthonormalTol) return OrthonormalBasis(std::move(columns));

  Eigen::HouseholderQR<Matrix> qr(columns);
  const Matrix rfac = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  const double scale = rfac.diagonal().cwiseAbs().maxCoeff();
  if (rfac.diagonal().cwiseAbs().minCoeff() <= 1e-10 * scale) {
    throw ValidationError("basis columns are linearly dependent");
  }
  Matrix q = qr.householderQ() * Matrix::Identity(columns.rows(), r);
  // Keep each column pointing the way the input column did.
  for (Index j = 0; j < r; ++j) {
    if (rfac(j, j) < 0) q.col(j) = -q.col(j);
  }
  return OrthonormalBasis(std::move(q));
}

UnitDirection UnitDirection::normalized(const Vector& v) {
  if (!v.allFinite()) throw ValidationError("direction has non-finite entries");
  const double norm = v.norm();
  if (norm == 0.0) throw ValidationError("direction is the zero vector");
  return UnitDirection(v / norm);
}

void fix_sign(Eigen::Ref<Vector> v) {
  if (v.size() == 0) return;
  Index best = 0;
  for (Index i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  }
  if (v[best] < 0) v = -v;
}

void fix_column_signs(Matrix& m) {
  for (Index j = 0; j < m.cols(); ++j) {
    Vector col = m.col(j);
    fix_sign(col);
    m.col(j) = col;
  }
}

OrthonormalBasis orthonormalize(const Matrix& raw, double tol) {
  if (raw.rows() < 1) throw ValidationError("orthonormalize: ambient dimension must be >= 1");
  if (tol < 0) throw ValidationError("orthonormalize: tolerance must be nonnegative");
  if (!raw.allFinite()) throw ValidationError("orthonormalize: non-finite input");
  if (raw.cols() == 0 || raw.isZero(0.0)) return OrthonormalBasis::zero(raw.rows());

  Eigen::BDCSVD<Matrix> svd(raw, Eigen::ComputeThinU);
  const double largest = svd.singularValues()[0];
  return OrthonormalBasis::from_columns(left_singular_above(raw, tol * largest));
}

double sine_distance(const UnitDirection& w, const OrthonormalBasis& basis) {
  require_same_ambient(w.ambient_dim(), basis.ambient_dim(), "sine_distance");
  if (basis.empty()) return 1.0;
  const Vector& v = w.vector();
  const Vector coef = basis.columns().transpose() * v;
  const Vector residual = v - basis.columns() * coef;
  const double d = std::sqrt(kernels::sum_squares({residual.data(), static_cast<std::size_t>(residual.size())}));
  return std::clamp(d, 0.0, 1.0);
}

double principal_angle(const UnitDirection& w, const OrthonormalBasis& basis) {
  return std::asin(sine_distance(w, basis));
}

FlagMean flag_mean(std::span<const OrthonormalBasis> bases) {
  if (bases.empty()) throw ValidationError("flag_mean: no subspaces given");
  const Index n = bases.front().ambient_dim();
  Index total = 0;
  for (const auto& b : bases) {
    require_same_ambient(n, b.ambient_dim(), "flag_mean");
    if (b.empty()) throw ValidationError("flag_mean: zero-dimensional subspace");
    total += b.dim();
  }

  Matrix h(n, total);
  Index at = 0;
  for (const auto& b : bases) {
    h.middleCols(at, b.dim()) = b.columns();
    at += b.dim();
  }

  Eigen::SelfAdjointEigenSolver<Matrix> eig(h.transpose() * h);
  if (eig.info() != Eigen::Success) throw NumericalError("flag_mean: eigensolver failed");
  const Vector& values = eig.eigenvalues();  // ascending
  const double top = values[total - 1];
  const double tie_tol = 1e-9 * std::max(top, 1.0);
  Index ties = 1;
  while (ties < total && values[total - 1 - ties] >= top - tie_tol) ++ties;

  Vector w;
  if (ties == 1) {
    w = h * eig.eigenvectors().col(total - 1);
  } else {
    // Orthonormal basis of the top eigenspace of H H^T.
    Matrix q = h * eig.eigenvectors().rightCols(ties);
    for (Index j = 0; j < ties; ++j) q.col(j) /= std::sqrt(values[total - ties + j]);

    std::vector<Matrix> restricted;
    restricted.reserve(bases.size());
    for (const auto& b : bases) {
      const Matrix c = b.columns().transpose() * q;
      restricted.push_back(c.transpose() * c);
    }
    const double shift = 3.0 * static_cast<double>(bases.size());
    Vector y = Vector::Unit(ties, ties - 1);
    for (int iter = 0; iter < 20000; ++iter) {
      Vector g = shift * y;
      for (const auto& m : restricted) {
        const Vector my = m * y;
        g += y.dot(my) * my;
      }
      g.normalize();
      const double step = (g - y).norm();
      y = std::move(g);
      if (step < 1e-14) break;
    }
    w = q * y;
  }
  w.normalize();
  fix_sign(w);

  double objective = 0.0;
  for (const auto& b : bases) objective += (b.columns().transpose() * w).squaredNorm();
  return FlagMean{UnitDirection::normalized(w), objective, ties > 1, ties};
}

UnitDirection flag_mean_direction(std::span<const OrthonormalBasis> bases) {
  return flag_mean(bases).direction;
}

std::optional<OrthonormalBasis> deflate(const OrthonormalBasis& basis, const UnitDirection& w,
                                        double tol) {
  require_same_ambient(w.ambient_dim(), basis.ambient_dim(), "deflate");
  if (basis.empty()) return std::nullopt;
  const Vector coef = basis.columns().transpose() * w.vector();
  if (coef.norm() <= tol) return std::nullopt;
  const Index r = basis.dim();
  if (r == 1) return OrthonormalBasis::zero(basis.ambient_dim());

  // Householder reflector mapping coef onto e_1; its trailing r-1 columns
  // span coef^perp inside R^r.
  Eigen::HouseholderQR<Matrix> qr{Matrix(coef)};
  const Matrix q = qr.householderQ() * Matrix::Identity(r, r);
  Matrix peeled = basis.columns() * q.rightCols(r - 1);
  fix_column_signs(peeled);
  return OrthonormalBasis::from_columns(std::move(peeled));
}

OrthonormalBasis intersect(const OrthonormalBasis& a, const OrthonormalBasis& b, double cos_tol) {
  require_same_ambient(a.ambient_dim(), b.ambient_dim(), "intersect");
  if (a.empty() || b.empty()) return OrthonormalBasis::zero(a.ambient_dim());
  Eigen::JacobiSVD<Matrix> svd(a.columns().transpose() * b.columns(), Eigen::ComputeThinU);
  const Vector& cosines = svd.singularValues();
  Index keep = 0;
  while (keep < cosines.size() && cosines[keep] > 1.0 - cos_tol) ++keep;
  Matrix shared = a.columns() * svd.matrixU().leftCols(keep);
  fix_column_signs(shared);
  return OrthonormalBasis::from_columns(std::move(shared));
}

OrthonormalBasis intersect_all(std::span<const OrthonormalBasis> bases, double cos_tol) {
  if (bases.empty()) throw ValidationError("intersect_all: no subspaces given");
  OrthonormalBasis acc = bases.front();
  for (std::size_t i = 1; i < bases.size(); ++i) acc = intersect(acc, bases[i], cos_tol);
  return acc;
}

OrthonormalBasis subspace_sum(std::span<const OrthonormalBasis> bases, Index n) {
  Index total = 0;
  for (const auto& b : bases) {
    require_same_ambient(n, b.ambient_dim(), "subspace_sum");
    total += b.dim();
  }
  if (total == 0) return OrthonormalBasis::zero(n);
  Matrix all(n, total);
  Index at = 0;
  for (const auto& b : bases) {
    all.middleCols(at, b.dim()) = b.columns();
    at += b.dim();
  }
  return OrthonormalBasis::from_columns(left_singular_above(all, kExactRankTol));
}

OrthonormalBasis project_out(const OrthonormalBasis& a, const OrthonormalBasis& c) {
  require_same_ambient(a.ambient_dim(), c.ambient_dim(), "project_out");
  if (a.empty() || c.empty()) return a;
  const Matrix residual = a.columns() - c.columns() * (c.columns().transpose() * a.columns());
  return OrthonormalBasis::from_columns(left_singular_above(residual, kExactRankTol));
}

double max_cosine(const OrthonormalBasis& a, const OrthonormalBasis& b) {
  require_same_ambient(a.ambient_dim(), b.ambient_dim(), "max_cosine");
  if (a.empty() || b.empty()) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a.columns().transpose() * b.columns());
  return svd.singularValues()[0];
}

double projector_distance(const OrthonormalBasis& a, const OrthonormalBasis& b) {
  require_same_ambient(a.ambient_dim(), b.ambient_dim(), "projector_distance");
  return (a.projector() - b.projector()).norm();
}

}  // namespace psi
