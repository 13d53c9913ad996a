// Copyright 2026 The Aloha Stability Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ALOHA_PARALLEL_HPP_
#define ALOHA_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace aloha {

// Worker count from ALOHA_THREADS, falling back to the hardware concurrency.
std::size_t default_thread_count();

// Runs body(i) for i in [0, n) on a bounded pool. The first exception thrown
// by any body is rethrown after all workers join. threads == 0 selects
// default_thread_count().
void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace aloha

#endif  // ALOHA_PARALLEL_HPP_
