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
#include <vector>

#include "psi/kernels.hpp"

using namespace psi::kernels;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

double naive_dot(const std::vector<double>& a, const std::vector<double>& b) {
  long double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<long double>(a[i]) * b[i];
  return static_cast<double>(s);
}

}  // namespace

TEST_CASE("scalar kernels match a long-double reference") {
  std::mt19937_64 rng(7);
  for (std::size_t n : {0u, 1u, 3u, 15u, 16u, 17u, 100u, 1023u}) {
    const auto a = random_vector(n, rng);
    const auto b = random_vector(n, rng);
    std::vector<double> diff(n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = a[i] - b[i];
    CHECK(scalar::dot(a.data(), b.data(), n) == doctest::Approx(naive_dot(a, b)).epsilon(1e-13));
    CHECK(scalar::sum_squares(a.data(), n) == doctest::Approx(naive_dot(a, a)).epsilon(1e-13));
    CHECK(scalar::sum_squared_diff(a.data(), b.data(), n) == doctest::Approx(naive_dot(diff, diff)).epsilon(1e-13));
  }
}

TEST_CASE("every available ISA agrees with the scalar reference") {
  std::mt19937_64 rng(11);
  for (Isa isa : {Isa::Avx2, Isa::Neon}) {
    const KernelTable& t = table_for(isa);
    CAPTURE(isa_name(t.isa));
    for (std::size_t n = 0; n < 70; ++n) {
      const auto a = random_vector(n, rng);
      const auto b = random_vector(n, rng);
      const double tol = 1e-13 * (1.0 + static_cast<double>(n));
      CHECK(std::abs(t.dot(a.data(), b.data(), n) - scalar::dot(a.data(), b.data(), n)) <= tol);
      CHECK(std::abs(t.sum_squares(a.data(), n) - scalar::sum_squares(a.data(), n)) <= tol);
      CHECK(std::abs(t.sum_squared_diff(a.data(), b.data(), n) - scalar::sum_squared_diff(a.data(), b.data(), n)) <=
            tol);
    }
  }
}

TEST_CASE("unsupported ISAs fall back to scalar") {
  const KernelTable& s = table_for(Isa::Scalar);
  CHECK(s.isa == Isa::Scalar);
  if (!avx2::available()) CHECK(table_for(Isa::Avx2).isa == Isa::Scalar);
  if (!neon::available()) CHECK(table_for(Isa::Neon).isa == Isa::Scalar);
}

TEST_CASE("span wrappers dispatch to the active table") {
  const std::vector<double> a{1, 2, 3, 4, 5};
  const std::vector<double> b{5, 4, 3, 2, 1};
  CHECK(dot(a, b) == doctest::Approx(35.0));
  CHECK(sum_squares(a) == doctest::Approx(55.0));
  CHECK(sum_squared_diff(a, b) == doctest::Approx(40.0));
  CHECK(!isa_name(active().isa).empty());
}
