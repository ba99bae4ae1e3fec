#include "rholab/parallel.hpp"

namespace rholab {

namespace {
std::atomic<unsigned> configured_threads{0};
}

void set_thread_count(unsigned count) { configured_threads.store(count); }

unsigned thread_count() {
    const unsigned c = configured_threads.load();
    if (c > 0) return c;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

}  // namespace rholab
