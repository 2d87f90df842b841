#include "dispel/common/parallel.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

namespace dispel {

int configured_threads() {
  const char* env = std::getenv("DISPEL_THREADS");
  if (env) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<int>(n);
  }
  return omp_get_max_threads();
}

void apply_thread_env() { omp_set_num_threads(configured_threads()); }

}  // namespace dispel
