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

#include <random>

#include "../support/fixtures.hpp"
#include "psi/error.hpp"
#include "psi/simgen.hpp"

using namespace psi;
using namespace psi::testing;

namespace {

/// The true decomposition laid out on the default ordering.
DecompositionResult truth_as_result(const SimulationModel& m, const GroundTruth& g) {
  DecompositionResult r;
  r.ordering = default_ordering(m.num_blocks);
  std::vector<StructureEntry> entries;
  for (const auto& set : r.ordering.sets()) {
    Matrix w(m.n, 0);
    const auto& e = m.true_structure.entries();
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i].set == set) w = g.w[i];
    }
    r.scores.push_back(OrthonormalBasis::from_columns(w));
    entries.push_back({set, static_cast<int>(w.cols())});
  }
  r.structure = PartialJointStructure(m.num_blocks, entries);
  return r;
}

}  // namespace

TEST_SUITE("presets") {
  TEST_CASE("preset models") {
    const auto m2 = model_preset(2);
    CHECK(same_structure(m2.true_structure, structure_of(3, {{{1, 2, 3}, 2}})));
    CHECK(m2.sigma2 == std::vector<std::vector<double>>{{1.0, 0.9}});

    const auto m1 = model_preset(1);
    CHECK(same_structure(m1.true_structure, structure_of(3, {{{1}, 2}, {{2}, 2}, {{3}, 2}})));
    CHECK(m1.sigma2 == std::vector<std::vector<double>>{{1.4, 0.8}, {1.3, 0.7}, {1.2, 0.6}});

    const auto m3 = model_preset(3);
    CHECK(same_structure(m3.true_structure, structure_of(3, {{{1, 2}, 2}, {{1, 3}, 2}, {{2, 3}, 2}})));
    CHECK(m3.sigma2 == std::vector<std::vector<double>>{{1.4, 0.8}, {1.3, 0.7}, {1.2, 0.6}});

    const auto m4 = model_preset(4);
    CHECK(same_structure(m4.true_structure, structure_of(3, {{{1, 2, 3}, 2}, {{1}, 2}, {{2}, 2}, {{3}, 2}})));
    CHECK(m4.sigma2.front() == std::vector<double>{1.5, 0.8});

    const auto m5 = model_preset(5);
    CHECK(same_structure(m5.true_structure,
                         structure_of(3, {{{1, 2, 3}, 2}, {{1, 2}, 2}, {{1, 3}, 2}, {{2, 3}, 2}})));
    CHECK(m5.sigma2.back() == std::vector<double>{1.2, 0.5});

    const auto m6 = model_preset(6);
    CHECK(m6.true_structure.entries().size() == 7);
    for (const auto& e : m6.true_structure.entries()) CHECK(e.rank == 2);
    CHECK(m6.sigma2.front() == std::vector<double>{1.8, 0.8});
    CHECK(m6.sigma2.back() == std::vector<double>{1.2, 0.2});

    CHECK(m1.n == 200);
    CHECK(m1.p == std::vector<Index>{200, 200, 200});
    CHECK_FALSE(m1.snr.has_value());
    CHECK_THROWS_AS(model_preset(0), ValidationError);
    CHECK_THROWS_AS(model_preset(7), ValidationError);
  }

  TEST_CASE("imbalanced settings") {
    const auto js = imbalanced_preset(ImbalancedCase::JointStrong);
    CHECK(js.sigma2[0].front() == doctest::Approx(15.0));
    CHECK(js.sigma2[0].back() == doctest::Approx(5.5));
    CHECK(js.sigma2[1].front() == doctest::Approx(0.150));
    CHECK(js.sigma2[1].back() == doctest::Approx(0.069));
    CHECK(js.sigma2[3].back() == doctest::Approx(0.063));
    CHECK(js.true_structure.total_rank() == 40);

    const auto is = imbalanced_preset(ImbalancedCase::IndividualStrong);
    CHECK(is.sigma2[0].front() == doctest::Approx(0.15));
    CHECK(is.sigma2[0].back() == doctest::Approx(0.055));
    CHECK(is.sigma2[1].front() == doctest::Approx(15.0));
    CHECK(is.sigma2[1].back() == doctest::Approx(6.9));
    CHECK(is.sigma2[2].back() == doctest::Approx(6.6));
    CHECK(is.true_structure.total_rank() == 40);
  }
}

TEST_SUITE("generate") {
  TEST_CASE("noiseless observations equal the signal and ranks follow the structure") {
    const auto m = model_preset(2, 40, 30);
    const auto g = generate(m, 1);
    for (int k = 0; k < 3; ++k) {
      CHECK(g.x[k] == g.z[k]);
      Eigen::JacobiSVD<Matrix> svd(g.z[k]);
      const Vector s = svd.singularValues();
      CHECK(s(1) > 1e-6 * s(0));
      CHECK(s(2) < 1e-10 * s(0));
    }
  }

  TEST_CASE("bit-identical for the same seed") {
    auto m = model_preset(4, 30, 20);
    m.snr = 5.0;
    const auto a = generate(m, 42);
    const auto b = generate(m, 42);
    for (int k = 0; k < 3; ++k) CHECK(a.x[k] == b.x[k]);
    CHECK_FALSE(generate(m, 43).x[0] == a.x[0]);
  }

  TEST_CASE("loadings stay fixed across repetition seeds") {
    const auto m = model_preset(1, 30, 20);
    CHECK(generate(m, 1).u[0][0] == generate(m, 2).u[0][0]);
  }

  TEST_CASE("joint generation gives mutually orthogonal scores, per-set only within sets") {
    auto m = model_preset(6, 40, 30);
    const auto g = generate(m, 3);
    Matrix all(40, 14);
    Index at = 0;
    for (const auto& w : g.w) {
      all.middleCols(at, w.cols()) = w;
      at += w.cols();
    }
    CHECK((all.transpose() * all - Matrix::Identity(14, 14)).norm() < 1e-12);

    m.w_generation = WGeneration::PerSet;
    const auto h = generate(m, 3);
    for (const auto& w : h.w) CHECK((w.transpose() * w - Matrix::Identity(2, 2)).norm() < 1e-12);
    CHECK((h.w[0].transpose() * h.w[1]).cwiseAbs().maxCoeff() > 1e-6);
  }

  TEST_CASE("signal entry variance matches the Monte-Carlo oracle") {
    auto m = model_preset(5, 20, 20);
    const int seeds = 200;
    std::vector<double> acc(3, 0.0);
    for (int s = 0; s < seeds; ++s) {
      m.loading_seed = 1000 + s;
      const auto g = generate(m, s);
      for (int k = 0; k < 3; ++k) acc[k] += g.z[k].squaredNorm() / static_cast<double>(g.z[k].size());
    }
    for (int k = 1; k <= 3; ++k) {
      double expected = 0.0;
      const auto& e = m.true_structure.entries();
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (!e[i].set.contains(k)) continue;
        for (double v : m.sigma2[i]) expected += v;
      }
      expected /= static_cast<double>(m.n);
      CHECK(acc[k - 1] / seeds == doctest::Approx(expected).epsilon(0.10));
    }
  }

  TEST_CASE("noise variance is the reciprocal of the SNR") {
    auto m = model_preset(1, 200, 200);
    m.snr = 4.0;
    const auto g = generate(m, 9);
    const double var = (g.x[0] - g.z[0]).squaredNorm() / static_cast<double>(g.x[0].size());
    CHECK(var == doctest::Approx(0.25).epsilon(0.02));
  }

  TEST_CASE("rank budget and parameter checks") {
    auto m = model_preset(6, 10, 5);
    CHECK_THROWS_AS(generate(m, 1), ValidationError);
    auto bad = model_preset(1, 30, 30);
    bad.snr = 0.0;
    CHECK_THROWS_AS(generate(bad, 1), ValidationError);
    bad = model_preset(1, 30, 30);
    bad.sigma2[0].pop_back();
    CHECK_THROWS_AS(generate(bad, 1), ValidationError);
  }
}

TEST_SUITE("metrics") {
  TEST_CASE("accuracy is multiset equality") {
    const auto t = structure_of(3, {{{1, 2}, 1}, {{3}, 2}});
    CHECK(metric_accuracy(t, t) == 1);
    CHECK(metric_accuracy(structure_of(3, {{{3}, 2}, {{1}, 0}, {{1, 2}, 1}}), t) == 1);
    CHECK(metric_accuracy(structure_of(3, {{{1, 2}, 1}, {{3}, 2}, {{1}, 1}}), t) == 0);
  }

  TEST_CASE("true decomposition scores perfectly") {
    const auto m = model_preset(5, 40, 30);
    const auto g = generate(m, 2);
    const auto r = truth_as_result(m, g);
    const auto l = estimate_loadings(g.z, r);
    CHECK(metric_rse(g, l, r) <= 1e-20);
    const auto a = metric_angles(g, m, l, r);
    CHECK(a.theta_u == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(a.theta_w < 1e-6);
  }

  TEST_CASE("empty estimate scores worst") {
    const auto m = model_preset(2, 20, 10);
    const auto g = generate(m, 2);
    DecompositionResult r;
    r.ordering = default_ordering(3);
    r.scores.assign(7, OrthonormalBasis::zero(20));
    std::vector<StructureEntry> entries;
    for (const auto& s : r.ordering.sets()) entries.push_back({s, 0});
    r.structure = PartialJointStructure(3, entries);
    const auto l = estimate_loadings(g.z, r);
    CHECK(metric_rse(g, l, r) == doctest::Approx(1.0));
    const auto a = metric_angles(g, m, l, r);
    CHECK(a.theta_u == 90.0);
    CHECK(a.theta_w == 90.0);
  }

  TEST_CASE("scores orthogonal to the truth give 90 degrees") {
    const auto m = model_preset(2, 20, 10);
    const auto g = generate(m, 2);
    const Matrix p = Matrix::Identity(20, 20) - g.w[0] * g.w[0].transpose();
    DecompositionResult r;
    r.ordering = default_ordering(3);
    r.scores.assign(7, OrthonormalBasis::zero(20));
    r.scores[0] = orthonormalize(p.leftCols(2));
    std::vector<StructureEntry> entries;
    for (const auto& s : r.ordering.sets()) entries.push_back({s, s.size() == 3 ? 2 : 0});
    r.structure = PartialJointStructure(3, entries);
    const auto l = estimate_loadings(g.z, r);
    CHECK(metric_angles(g, m, l, r).theta_w == doctest::Approx(90.0));
  }

  TEST_CASE("rse is invariant under re-basing scores with counter-rotated loadings") {
    auto m = model_preset(3, 40, 30);
    m.snr = 10.0;
    const auto g = generate(m, 4);
    auto r = truth_as_result(m, g);
    const auto l = estimate_loadings(g.x, r);
    const double base = metric_rse(g, l, r);
    std::mt19937_64 rng(1);
    for (auto& s : r.scores) {
      if (s.empty()) continue;
      s = OrthonormalBasis::from_columns(s.columns() * random_orthonormal(s.dim(), s.dim(), rng));
    }
    CHECK(metric_rse(g, estimate_loadings(g.x, r), r) == doctest::Approx(base).epsilon(1e-10));
  }
}
