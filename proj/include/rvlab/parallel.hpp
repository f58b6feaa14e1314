#pragma once

#include <cstddef>
#include <functional>

namespace rvlab {

/// Process-wide default worker count used when a call passes workers == 0.
void set_default_workers(unsigned workers);
unsigned default_workers();

/// Runs body(chunk, begin, end) for every fixed-size chunk of [0, total).
///
/// Chunk boundaries depend only on total and chunk_size, never on the
/// number of workers, so callers that seed per chunk and write results by
/// index get schedule-independent output. Exceptions thrown by a body are
/// rethrown on the calling thread (the first one wins).
void parallel_chunks(std::size_t total, std::size_t chunk_size, unsigned workers,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

/// One task per index.
void parallel_for(std::size_t total, unsigned workers,
                  const std::function<void(std::size_t)>& body);

}  // namespace rvlab
