#pragma once

namespace folitor {

// Number of worker threads used by the parallel kernels.  Defaults to the
// OpenMP maximum and is capped by the FOLITOR_THREADS environment variable
// (read once, at first use).
int thread_count();

// Force a specific thread count (0 restores the default).  Intended for
// benchmarks and tests; not thread-safe against concurrent kernel calls.
void set_thread_count(int n);

}  // namespace folitor
