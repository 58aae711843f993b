#pragma once

#include <cstddef>
#include <functional>

namespace symmorse {

/// Runs body(i) for i in [0, count) on up to `threads` workers with static striding.
/// The first exception thrown by any worker is rethrown after all workers join.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace symmorse
