#pragma once

namespace sensorforge {

// Worker count for parallel kernels. Reads SENSORFORGE_THREADS once on first
// use; 0, unset, or garbage means "all available cores". Always 1 when built
// without OpenMP.
int worker_count();

// Test hook: override the cached value (0 restores auto detection).
void set_worker_count(int n);

}  // namespace sensorforge
