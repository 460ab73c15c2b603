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
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "../support/fixtures.hpp"
#include "psi/error.hpp"
#include "psi/subspace.hpp"

using namespace psi;
using namespace psi::testing;

TEST_SUITE("basis") {
  TEST_CASE("orthonormal input is kept as is") {
    const auto b = basis(3, {{1, 0, 0}, {0, 1, 0}});
    CHECK(b.dim() == 2);
    CHECK(b.ambient_dim() == 3);
    CHECK(b.columns().isApprox(columns(3, {{1, 0, 0}, {0, 1, 0}})));
  }

  TEST_CASE("drifted columns are re-orthonormalized spanning the same space") {
    const Matrix raw = columns(3, {{1, 0, 0}, {1, 1, 0}});
    const auto b = OrthonormalBasis::from_columns(raw);
    CHECK((b.columns().transpose() * b.columns() - Matrix::Identity(2, 2)).norm() < 1e-14);
    CHECK(projector_gap(b.columns(), raw) < 1e-12);
  }

  TEST_CASE("dependent, non-finite and oversized inputs are rejected") {
    CHECK_THROWS_AS(OrthonormalBasis::from_columns(columns(3, {{1, 0, 0}, {2, 0, 0}})), ValidationError);
    CHECK_THROWS_AS(OrthonormalBasis::from_columns(columns(2, {{NAN, 0}})), ValidationError);
    CHECK_THROWS_AS(OrthonormalBasis::from_columns(Matrix::Identity(2, 3)), ValidationError);
  }

  TEST_CASE("zero basis") {
    const auto z = OrthonormalBasis::zero(5);
    CHECK(z.empty());
    CHECK(z.ambient_dim() == 5);
    CHECK(z.projector().isZero());
  }

  TEST_CASE("unit direction rejects the zero vector") {
    CHECK_THROWS_AS(UnitDirection::normalized(Vector::Zero(3)), ValidationError);
    CHECK(UnitDirection::normalized(Vector::Constant(4, 2.0)).vector().norm() == doctest::Approx(1.0));
  }
}

TEST_CASE("sign convention: largest magnitude entry positive, ties to the lowest index") {
  Vector v(3);
  v << 0.1, -0.9, 0.3;
  fix_sign(v);
  CHECK(v(1) == doctest::Approx(0.9));
  Vector t(2);
  t << -0.5, 0.5;
  fix_sign(t);
  CHECK(t(0) == doctest::Approx(0.5));
}

TEST_CASE("orthonormalize drops directions below the relative tolerance") {
  Matrix raw = columns(3, {{1, 0, 0}, {0, 1, 0}, {1, 1, 0}});
  CHECK(orthonormalize(raw).dim() == 2);
  CHECK(orthonormalize(Matrix::Zero(4, 2)).empty());
  CHECK(orthonormalize(Matrix(4, 0)).empty());
}

TEST_SUITE("principal angles") {
  TEST_CASE("sine distance matches the explicit projector oracle") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
      const auto b = random_basis(12, 1 + trial % 5, rng);
      const Vector v = gaussian_matrix(12, 1, rng).col(0);
      const auto w = UnitDirection::normalized(v);
      const Matrix p = b.columns() * b.columns().transpose();
      const double oracle = std::sqrt(std::max(0.0, 1.0 - w.vector().dot(p * w.vector())));
      CHECK(sine_distance(w, b) == doctest::Approx(oracle).epsilon(1e-10));
    }
  }

  TEST_CASE("rotation fixture: angle between a rotated line and the plane") {
    for (double a : {0.0, 10.0, 33.0, 60.0, 89.0}) {
      const auto w = UnitDirection::normalized(columns(3, {{std::cos(deg(a)), 0, std::sin(deg(a))}}).col(0));
      CHECK(principal_angle(w, basis(3, {{1, 0, 0}, {0, 1, 0}})) == doctest::Approx(deg(a)).epsilon(1e-12));
    }
  }

  TEST_CASE("empty subspace is at the maximal distance") {
    const auto w = UnitDirection::normalized(unit(3, 0));
    CHECK(sine_distance(w, OrthonormalBasis::zero(3)) == 1.0);
    CHECK(principal_angle(w, OrthonormalBasis::zero(3)) == doctest::Approx(std::numbers::pi / 2));
  }

  TEST_CASE("ambient mismatch is a validation error") {
    CHECK_THROWS_AS(sine_distance(UnitDirection::normalized(unit(3, 0)), basis(4, {{1, 0, 0, 0}})),
                    ValidationError);
  }
}

TEST_SUITE("flag mean") {
  TEST_CASE("half-angle example") {
    const auto v = tilted_pair();
    const FlagMean fm = flag_mean(v);
    Vector expected(3);
    expected << std::cos(deg(15)), 0.0, std::sin(deg(15));
    CHECK((fm.direction.vector() - expected).norm() < 1e-10);
    CHECK_FALSE(fm.degenerate);
    for (const auto& b : v) CHECK(principal_angle(fm.direction, b) == doctest::Approx(std::numbers::pi / 12).epsilon(1e-10));
  }

  TEST_CASE("matches the eigensolver oracle on the summed projectors") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
      const Index n = 15;
      std::vector<OrthonormalBasis> bases;
      Matrix sum = Matrix::Zero(n, n);
      for (int k = 0; k < 3; ++k) {
        bases.push_back(random_basis(n, 1 + (trial + k) % 4, rng));
        sum += bases.back().projector();
      }
      Eigen::SelfAdjointEigenSolver<Matrix> eig(sum);
      const Vector top = eig.eigenvectors().col(n - 1);
      const FlagMean fm = flag_mean(bases);
      CHECK(fm.objective == doctest::Approx(eig.eigenvalues()(n - 1)).epsilon(1e-10));
      CHECK(std::abs(std::abs(top.dot(fm.direction.vector())) - 1.0) < 1e-9);
    }
  }

  TEST_CASE("repeated top eigenvalue is flagged and resolved toward a shared axis") {
    const std::vector<OrthonormalBasis> bases{basis(3, {{1, 0, 0}}), basis(3, {{0, 1, 0}})};
    const FlagMean fm = flag_mean(bases);
    CHECK(fm.degenerate);
    CHECK(fm.tie_dimension == 2);
    CHECK(fm.objective == doctest::Approx(1.0));
    const Vector& w = fm.direction.vector();
    CHECK(std::max(std::abs(w(0)), std::abs(w(1))) == doctest::Approx(1.0).epsilon(1e-9));
  }

  TEST_CASE("three-way tie inside a common plane selects one of the lines") {
    const std::vector<OrthonormalBasis> bases{basis(3, {{1, 0, 0}}), basis(3, {{0, 1, 0}}), basis(3, {{0, 0, 1}})};
    const FlagMean fm = flag_mean(bases);
    CHECK(fm.degenerate);
    CHECK(fm.direction.vector().cwiseAbs().maxCoeff() == doctest::Approx(1.0).epsilon(1e-9));
  }

  TEST_CASE("empty input is rejected") {
    CHECK_THROWS_AS(flag_mean(std::vector<OrthonormalBasis>{}), ValidationError);
  }
}

TEST_SUITE("deflate") {
  TEST_CASE("example leaves the orthogonal direction") {
    const auto v = tilted_pair();
    const auto w = flag_mean_direction(v);
    const auto d1 = deflate(v[0], w);
    REQUIRE(d1.has_value());
    CHECK(d1->empty());
    const auto d2 = deflate(v[1], w);
    REQUIRE(d2.has_value());
    CHECK(projector_gap(d2->columns(), unit(3, 1)) < 1e-10);
  }

  TEST_CASE("matches the projector-difference oracle") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 40; ++trial) {
      const auto b = random_basis(10, 2 + trial % 4, rng);
      const auto w = UnitDirection::normalized(gaussian_matrix(10, 1, rng).col(0));
      const auto d = deflate(b, w);
      REQUIRE(d.has_value());
      const Vector u = (b.projector() * w.vector()).normalized();
      const Matrix oracle = b.projector() - u * u.transpose();
      CHECK((d->projector() - oracle).norm() < 1e-10);
      CHECK(d->dim() == b.dim() - 1);
    }
  }

  TEST_CASE("direction orthogonal to the subspace has nothing to peel") {
    CHECK_FALSE(deflate(basis(3, {{1, 0, 0}}), UnitDirection::normalized(unit(3, 2))).has_value());
    CHECK_FALSE(deflate(OrthonormalBasis::zero(3), UnitDirection::normalized(unit(3, 2))).has_value());
  }
}

TEST_SUITE("subspace algebra") {
  TEST_CASE("intersection, sum and projection on the relative-independence example") {
    const auto v = independent_triple();
    const auto i12 = intersect(v[0], v[1]);
    CHECK(i12.dim() == 1);
    CHECK(projector_gap(i12.columns(), unit(4, 0)) < 1e-12);
    CHECK(intersect_all(v).dim() == 1);

    const auto s = subspace_sum(v, 4);
    CHECK(s.dim() == 4);

    const auto p = project_out(v[1], i12);
    CHECK(projector_gap(p.columns(), columns(4, {{0, 1 / kR2, 1 / kR2, 0}})) < 1e-12);
  }

  TEST_CASE("max cosine and projector distance") {
    const auto a = basis(3, {{1, 0, 0}});
    const auto b = basis(3, {{0, 1, 0}});
    CHECK(max_cosine(a, b) == doctest::Approx(0.0));
    CHECK(projector_distance(a, b) == doctest::Approx(std::sqrt(2.0)));
    CHECK(projector_distance(a, a) == doctest::Approx(0.0));
    CHECK(max_cosine(a, OrthonormalBasis::zero(3)) == 0.0);

    std::mt19937_64 rng(2);
    const auto c = random_basis(8, 3, rng);
    const auto d = random_basis(8, 2, rng);
    CHECK(projector_distance(c, d) == doctest::Approx(projector_gap(c.columns(), d.columns())).epsilon(1e-12));
  }
}
