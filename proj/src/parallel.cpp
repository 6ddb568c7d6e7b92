#include "maslov/parallel.hpp"

#include <cstdlib>
#include <string>

namespace maslov::parallel {

int worker_count() {
  if (const char* env = std::getenv("MASLOV_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (...) {
    }
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace maslov::parallel
