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
#include <cstdlib>
#include <string>

#include "psi/kernels.hpp"

namespace psi::kernels {

namespace {

constexpr KernelTable kScalar{Isa::Scalar, &scalar::dot, &scalar::sum_squares,
                              &scalar::sum_squared_diff};

#ifdef PSI_HAVE_AVX2
constexpr KernelTable kAvx2{Isa::Avx2, &avx2::dot, &avx2::sum_squares, &avx2::sum_squared_diff};
#endif

#ifdef PSI_HAVE_NEON
constexpr KernelTable kNeon{Isa::Neon, &neon::dot, &neon::sum_squares, &neon::sum_squared_diff};
#endif

const KernelTable& select_best() {
  if (const char* env = std::getenv("PSI_KERNELS"); env != nullptr && std::string(env) == "scalar") {
    return kScalar;
  }
#ifdef PSI_HAVE_AVX2
  if (avx2::available()) return kAvx2;
#endif
#ifdef PSI_HAVE_NEON
  if (neon::available()) return kNeon;
#endif
  return kScalar;
}

}  // namespace

#ifndef PSI_HAVE_AVX2
bool avx2::available() { return false; }
#endif
#ifndef PSI_HAVE_NEON
bool neon::available() { return false; }
#endif

const KernelTable& table_for(Isa isa) {
  switch (isa) {
    case Isa::Avx2:
#ifdef PSI_HAVE_AVX2
      if (avx2::available()) return kAvx2;
#endif
      return kScalar;
    case Isa::Neon:
#ifdef PSI_HAVE_NEON
      if (neon::available()) return kNeon;
#endif
      return kScalar;
    case Isa::Scalar:
      break;
  }
  return kScalar;
}

const KernelTable& active() {
  static const KernelTable& table = select_best();
  return table;
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Avx2:
      return "avx2";
    case Isa::Neon:
      return "neon";
    case Isa::Scalar:
      break;
  }
  return "scalar";
}

}  // namespace psi::kernels
