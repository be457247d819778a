#include "uniformity/parallel.hpp"

#include <cstdlib>
#include <string>

namespace unif {

int worker_threads() {
    if (const char* env = std::getenv("UNIFORMITY_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void apply_thread_env() {
#ifdef _OPENMP
    omp_set_num_threads(worker_threads());
#endif
}

} // namespace unif
