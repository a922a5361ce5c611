#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <random>
#include <vector>

namespace concbounds {

/// Samples per independent RNG substream. Fixed so results do not depend on
/// how chunks are scheduled across workers.
inline constexpr std::size_t kChunkSize = 65536;

struct ExecutionOptions {
  unsigned workers = 0;  // 0: one per hardware thread
};

using Rng = std::mt19937_64;

/// Independent generator for a (seed, path...) coordinate, e.g.
/// substream(seed, {tag, direction, chunk}).
Rng substream(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

/// A 64-bit seed derived from (seed, path...), for handing to nested experiments.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

namespace detail {

/// Runs body(chunk) for chunk in [0, chunk_count) on up to `workers` threads.
/// If any chunk throws, the exception from the lowest chunk index is rethrown.
void run_chunks(std::size_t chunk_count, unsigned workers,
                const std::function<void(std::size_t)>& body);

inline std::size_t chunk_count(std::size_t total) {
  return (total + kChunkSize - 1) / kChunkSize;
}

/// Splits [0, total) into kChunkSize pieces and returns f(chunk, begin, end)
/// for each piece, in chunk order.
template <class T, class F>
std::vector<T> map_chunks(std::size_t total, const ExecutionOptions& exec, F&& f) {
  const std::size_t chunks = chunk_count(total);
  std::vector<T> out(chunks);
  run_chunks(chunks, exec.workers, [&](std::size_t c) {
    const std::size_t begin = c * kChunkSize;
    const std::size_t end = std::min(total, begin + kChunkSize);
    out[c] = f(c, begin, end);
  });
  return out;
}

/// Pairwise tree reduction in a fixed order: ((p0 p1) (p2 p3)) ...
template <class T, class Combine>
T tree_reduce(std::vector<T> parts, Combine combine) {
  if (parts.empty()) return T{};
  while (parts.size() > 1) {
    std::vector<T> next;
    next.reserve((parts.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < parts.size(); i += 2) {
      next.push_back(combine(parts[i], parts[i + 1]));
    }
    if (parts.size() % 2 == 1) next.push_back(parts.back());
    parts = std::move(next);
  }
  return parts.front();
}

} // namespace detail
} // namespace concbounds
