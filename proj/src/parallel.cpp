#include "plankline/parallel.hpp"

#include <atomic>

namespace plankline {

namespace {

unsigned default_threads() {
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

std::atomic<unsigned> g_threads{default_threads()};

}  // namespace

void set_thread_count(unsigned count) { g_threads = count == 0 ? default_threads() : count; }

unsigned thread_count() { return g_threads; }

}  // namespace plankline
