#include "agr/parallel.hpp"

#include <atomic>

namespace agr {

namespace {
std::atomic<unsigned> g_threads{1};
}

unsigned thread_count() { return g_threads.load(); }
void set_thread_count(unsigned n) { g_threads.store(n ? n : 1); }

}  // namespace agr
