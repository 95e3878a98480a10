#include "permrd/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <string_view>

namespace permrd {

std::size_t default_thread_count() {
  if (const char* env = std::getenv("PERMRD_THREADS")) {
    const std::string_view text(env);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec == std::errc{} && ptr == text.data() + text.size() && value > 0) return value;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

}  // namespace permrd
