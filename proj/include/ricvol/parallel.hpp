#pragma once

#include <cstddef>
#include <functional>

namespace ricvol {

/// Runs body(i) for i in [0, n) on up to hardware_concurrency threads.
/// The first exception thrown by any job is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace ricvol
