#include "linklab/parallel.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <cstring>

namespace linklab {
namespace {

std::atomic<std::size_t> g_limit{0};

std::size_t env_limit() {
  const char* value = std::getenv("LINKLAB_THREADS");
  if (value == nullptr) return 0;
  std::size_t n = 0;
  auto [ptr, ec] = std::from_chars(value, value + std::strlen(value), n);
  if (ec != std::errc()) return 0;
  return n;
}

}  // namespace

std::size_t thread_count() {
  std::size_t n = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  if (std::size_t fixed = g_limit.load(); fixed > 0) return fixed;
  if (std::size_t cap = env_limit(); cap > 0) n = std::min(n, cap);
  return n;
}

void set_thread_limit(std::size_t limit) { g_limit.store(limit); }

}  // namespace linklab
