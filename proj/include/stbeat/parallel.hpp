// include/stbeat/parallel.hpp

// Copyright 2026  The stbeat authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef STBEAT_PARALLEL_HPP
#define STBEAT_PARALLEL_HPP

#include <cstddef>

namespace stbeat {

/// Number of worker threads: hardware concurrency, capped by the
/// STBEAT_THREADS environment variable when set to a positive integer.
/// Read fresh on every call so tests can vary it.
std::size_t worker_count();

}  // namespace stbeat

#endif  // STBEAT_PARALLEL_HPP
