// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "morkit/numerics/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace morkit
{

unsigned worker_count()
{
  if (const char *env = std::getenv("MORKIT_THREADS"))
  {
    try
    {
      const long v = std::stol(env);
      if (v > 0)
        return static_cast<unsigned>(v);
    }
    catch (...)
    {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body)
{
  const std::size_t workers = std::min<std::size_t>(worker_count(), n);
  if (workers <= 1)
  {
    for (std::size_t i = 0; i < n; ++i)
      body(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::size_t failure_index = n;
  std::mutex guard;

  auto run = [&]() {
    for (;;)
    {
      const std::size_t i = next.fetch_add(1);
      if (i >= n)
        return;
      try
      {
        body(i);
      }
      catch (...)
      {
        // Keep the lowest failing index so the reported error is reproducible.
        std::lock_guard<std::mutex> lock(guard);
        if (i < failure_index)
        {
          failure_index = i;
          failure = std::current_exception();
        }
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t t = 1; t < workers; ++t)
    pool.emplace_back(run);
  run();
  for (auto &th : pool)
    th.join();
  if (failure)
    std::rethrow_exception(failure);
}

}  // namespace morkit
