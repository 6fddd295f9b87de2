#include "scales/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace scales {

namespace {
std::atomic<unsigned> requested{0};
}

void set_thread_count(unsigned n) { requested.store(n); }

unsigned thread_count() {
  if (unsigned n = requested.load(); n > 0) return n;
  if (const char* env = std::getenv("SCALES_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace scales
