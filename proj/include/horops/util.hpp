#pragma once

#include <cstdint>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace horops {

// shortest-roundtrip-ish formatting; %.17g keeps doubles stable across
// reruns so output files compare byte-identical
inline std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string fmt_double_short(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

using Rng = std::mt19937_64;

// Deterministic chunked parallel map: each index writes only its own slot,
// so results do not depend on scheduling.  With threads <= 1 it degrades to
// a plain loop.
inline void parallel_for(std::size_t n, unsigned threads,
                         const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  unsigned t = std::min<unsigned>(threads, std::thread::hardware_concurrency() > 0
                                               ? std::thread::hardware_concurrency()
                                               : 1);
  t = std::min<std::size_t>(t, n);
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (unsigned w = 0; w < t; ++w) {
    pool.emplace_back([&, w]() {
      for (std::size_t i = w; i < n; i += t) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace horops
