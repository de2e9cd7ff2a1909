#include "folitor/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace folitor {

namespace {

int detect_threads() {
#ifdef _OPENMP
    int n = omp_get_max_threads();
#else
    int n = 1;
#endif
    if (const char* env = std::getenv("FOLITOR_THREADS")) {
        try {
            int cap = std::stoi(env);
            if (cap >= 1 && cap < n) n = cap;
        } catch (...) {
            // ignore malformed values, keep the default
        }
    }
    return n < 1 ? 1 : n;
}

int g_override = 0;

}  // namespace

int thread_count() {
    if (g_override > 0) return g_override;
    static const int n = detect_threads();
    return n;
}

void set_thread_count(int n) { g_override = n > 0 ? n : 0; }

}  // namespace folitor
