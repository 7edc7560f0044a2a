// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MORKIT_NUMERICS_PARALLEL_HPP
#define MORKIT_NUMERICS_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace morkit
{

// Worker count: MORKIT_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

// Calls body(i) for i in [0, n) on a small thread pool. Results must be
// written by index so the outcome does not depend on scheduling. The first exception
// thrown by any worker is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body);

}  // namespace morkit

#endif  // MORKIT_NUMERICS_PARALLEL_HPP
