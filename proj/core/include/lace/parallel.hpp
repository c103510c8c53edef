#pragma once

#include <cstddef>
#include <functional>

namespace lace {

/// Runs fn(i) for i in [0, count) across a thread pool.  Work items must
/// write only to their own slots; chunk boundaries are fixed so results do
/// not depend on the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace lace
