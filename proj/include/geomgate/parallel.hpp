// Copyright 2026 The geomgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace geomgate {

/// Number of worker threads. GEOMGATE_THREADS caps it; defaults to the
/// hardware concurrency.
inline std::size_t worker_count() {
  std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GEOMGATE_THREADS")) {
    try {
      long requested = std::stol(env);
      if (requested >= 1) return static_cast<std::size_t>(requested);
    } catch (const std::exception&) {
      // fall through to the hardware default
    }
  }
  return hw;
}

/// Calls body(i) for i in [0, count) on up to `workers` threads. Results must
/// be written to per-index slots so assembly is independent of scheduling.
/// If several indices throw, the exception of the lowest index is rethrown.
template <class Body>
void parallel_for(std::size_t count, Body&& body, std::size_t workers = worker_count()) {
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  auto run = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace geomgate
