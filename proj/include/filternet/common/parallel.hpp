// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef FILTERNET_COMMON_PARALLEL_HPP_
#define FILTERNET_COMMON_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace filternet {

// Upper bound on worker threads for read-only fan-out. Defaults to the
// hardware concurrency; 0 restores that default.
void set_thread_count(std::size_t threads);
std::size_t thread_count();

// Calls task(i) for every i in [0, count), spread over thread_count()
// workers. Tasks must write only to state owned by index i. The first
// exception thrown by any task is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task);

}  // namespace filternet

#endif  // FILTERNET_COMMON_PARALLEL_HPP_
