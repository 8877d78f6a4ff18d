#include "relaxlbm/parallel.hpp"

#include <cstdlib>
#include <string>

#if defined(RELAXLBM_HAVE_OPENMP)
#include <omp.h>
#endif

namespace relaxlbm {

namespace {
#if defined(RELAXLBM_HAVE_OPENMP)
const int kDefaultThreads = omp_get_max_threads();
#endif
}  // namespace

void set_thread_count(int n) {
#if defined(RELAXLBM_HAVE_OPENMP)
    omp_set_num_threads(n > 0 ? n : kDefaultThreads);
#else
    (void)n;
#endif
}

int thread_count() {
#if defined(RELAXLBM_HAVE_OPENMP)
    return omp_get_max_threads();
#else
    return 1;
#endif
}

int apply_thread_env() {
    if (const char* env = std::getenv("RELAXLBM_THREADS")) {
        try {
            set_thread_count(std::stoi(env));
        } catch (const std::exception&) {
            set_thread_count(0);
        }
    } else {
        set_thread_count(0);
    }
    return thread_count();
}

}  // namespace relaxlbm
