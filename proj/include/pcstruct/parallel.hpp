#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace pcstruct {

// Thread cap: min(hardware, PCSTRUCT_THREADS). Results never depend on the
// value because workers write disjoint, preallocated slots.
inline int max_threads() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("PCSTRUCT_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1 && static_cast<unsigned>(cap) < hw) hw = static_cast<unsigned>(cap);
  }
  return static_cast<int>(hw);
}

// Static block partition of [0, n) across worker threads.
inline void parallel_for(int n, const std::function<void(int)>& body) {
  const int nthreads = std::min(max_threads(), n);
  if (nthreads <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(nthreads);
  for (int t = 0; t < nthreads; ++t) {
    workers.emplace_back([&, t] {
      for (int i = t; i < n; i += nthreads) body(i);
    });
  }
  for (auto& w : workers) w.join();
}

}  // namespace pcstruct
