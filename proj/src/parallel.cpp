#include "csfs/parallel.hpp"

#include <cstdlib>

#include "csfs/text_format.hpp"

namespace csfs {

int default_workers() {
  if (const char* env = std::getenv("CSFS_WORKERS")) {
    if (const auto v = parse_integer(env); v && *v >= 1) return static_cast<int>(*v);
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

}  // namespace csfs
