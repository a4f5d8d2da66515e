#include "outerdim/parallel.hpp"

#include <cstdlib>
#include <string>

namespace outerdim {

unsigned thread_count() {
  if (const char* env = std::getenv("OUTERDIM_THREADS")) {
    try {
      long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(std::min<long>(v, 256));
    } catch (const std::exception&) {
    }
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace outerdim
