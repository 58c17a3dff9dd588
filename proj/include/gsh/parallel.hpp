#pragma once

#include <cstddef>
#include <functional>

namespace gsh::runtime {

/// Worker cap for module-internal parallelism. Defaults to 1; the CLI wires
/// --threads / GSH_THREADS through here. Outputs are computed into disjoint
/// slots with fixed inner summation order, so results do not depend on the
/// worker count.
int thread_count();
void set_thread_count(int n);

/// Invoke fn(begin, end) over a partition of [0, n).
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace gsh::runtime
