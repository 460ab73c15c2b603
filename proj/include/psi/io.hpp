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

// CSV matrices and small file helpers.

#include <filesystem>
#include <string>
#include <vector>

#include "psi/subspace.hpp"

namespace psi::io {

struct CsvMatrix {
  Matrix values;
  std::vector<std::string> header;  // empty when the file has none
};

/// Rows = variables, columns = samples. The first row is treated as a header
/// when any of its fields is not a number.
CsvMatrix read_csv_matrix(const std::filesystem::path& path);

/// Values written with %.17g; header written first when nonempty.
void write_csv_matrix(const std::filesystem::path& path, const Matrix& m,
                      const std::vector<std::string>& header = {});

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

/// %.17g formatting.
std::string format_double(double v);

/// Creates the directory (and parents) if needed; throws if not writable.
void ensure_directory(const std::filesystem::path& dir);

}  // namespace psi::io
