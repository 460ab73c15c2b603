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

// Fixed-size worker pool helpers.

#include <cstddef>
#include <functional>

namespace psi {

/// Explicit request if positive, else PSI_THREADS if set and positive, else
/// std::thread::hardware_concurrency() (at least 1).
int resolve_threads(int requested);

/// Runs body(0..count-1) on up to `threads` workers pulling indices from an
/// atomic counter. The first exception thrown by any task is rethrown after
/// all workers have joined.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace psi
