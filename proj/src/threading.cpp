#include "sensorforge/threading.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sensorforge {

namespace {

int g_override = 0;

int detect() {
  const char* env = std::getenv("SENSORFORGE_THREADS");
  if (env != nullptr) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<int>(v);
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace

int worker_count() {
  if (g_override > 0) return g_override;
  static const int detected = detect();
  return detected;
}

void set_worker_count(int n) { g_override = n > 0 ? n : 0; }

}  // namespace sensorforge
