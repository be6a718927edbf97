#pragma once

#include <cstddef>
#include <functional>

namespace erc {

/// Resolves a requested worker count; 0 means hardware concurrency.
std::size_t resolve_threads(std::size_t requested);

/// Calls body(i) for every i in [0, count) from up to `threads` workers.
/// Work is handed out by index, so any reduction the caller performs in
/// index order is independent of the worker count. The first exception
/// thrown by a body is rethrown on the calling thread.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace erc
