#pragma once

#include <cstddef>
#include <functional>

namespace hfmri {

/// Worker cap: min(hardware_concurrency, HFMRI_THREADS if set). At least 1.
int thread_budget();

/// Runs fn(begin, end) over disjoint chunks of [0, count) on up to
/// thread_budget() threads. Chunk boundaries depend only on (count, threads),
/// so any cross-chunk reduction done in chunk order is reproducible for a
/// fixed thread count.
void parallel_chunks(std::size_t count, const std::function<void(std::size_t, std::size_t)>& fn);

/// Convenience wrapper: fn(i) for each i in [0, count), chunked as above.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace hfmri
