#include "prandtl_lab/parallel.hpp"

#include <cstdlib>
#include <string>
#include <thread>

namespace prandtl_lab {

int worker_count() {
  static const int count = [] {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("PRANDTL_LAB_THREADS")) {
      try {
        const int cap = std::stoi(env);
        if (cap >= 1 && cap < n) n = cap;
      } catch (...) {
        // unparsable value: keep hardware default
      }
    }
    return n;
  }();
  return count;
}

}  // namespace prandtl_lab
