#pragma once

#include <cstddef>

namespace dispel {

// Thread cap from DISPEL_THREADS (unset or invalid: OpenMP default).
int configured_threads();
void apply_thread_env();

// Number of fixed-size chunks used by deterministic reductions. The split
// depends only on the problem size, never on the thread count.
inline std::size_t chunk_count(std::size_t n, std::size_t chunk) { return (n + chunk - 1) / chunk; }

}  // namespace dispel
