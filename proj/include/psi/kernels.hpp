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

// Reduction kernels used on the hot paths (risk, reconstruction error,
// subspace residuals). Every kernel has a scalar reference implementation;
// SIMD variants are selected once at startup and must agree with the
// reference up to summation-order rounding.

#include <cstddef>
#include <span>
#include <string_view>

namespace psi::kernels {

enum class Isa { Scalar, Avx2, Neon };

struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum_squares)(const double* a, std::size_t n);
  double (*sum_squared_diff)(const double* a, const double* b, std::size_t n);
};

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double sum_squares(const double* a, std::size_t n);
double sum_squared_diff(const double* a, const double* b, std::size_t n);
}  // namespace scalar

namespace avx2 {
bool available();
double dot(const double* a, const double* b, std::size_t n);
double sum_squares(const double* a, std::size_t n);
double sum_squared_diff(const double* a, const double* b, std::size_t n);
}  // namespace avx2

namespace neon {
bool available();
double dot(const double* a, const double* b, std::size_t n);
double sum_squares(const double* a, std::size_t n);
double sum_squared_diff(const double* a, const double* b, std::size_t n);
}  // namespace neon

/// Table for a given ISA; falls back to scalar when the ISA is not compiled
/// in or not supported by the running CPU.
const KernelTable& table_for(Isa isa);

/// Active table. Chosen on first use: the best supported ISA, unless the
/// PSI_KERNELS environment variable is set to "scalar".
const KernelTable& active();

std::string_view isa_name(Isa isa);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline double sum_squares(std::span<const double> a) {
  return active().sum_squares(a.data(), a.size());
}

inline double sum_squared_diff(std::span<const double> a, std::span<const double> b) {
  return active().sum_squared_diff(a.data(), b.data(), a.size());
}

}  // namespace psi::kernels
