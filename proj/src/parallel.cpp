#include "concbounds/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

namespace concbounds {

namespace {

std::seed_seq make_seed_seq(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::vector<std::uint32_t> words;
  words.reserve(2 + 2 * path.size());
  auto push = [&words](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(seed);
  for (auto p : path) push(p);
  return std::seed_seq(words.begin(), words.end());
}

} // namespace

Rng substream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  auto seq = make_seed_seq(seed, path);
  return Rng(seq);
}

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  auto seq = make_seed_seq(seed, path);
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

namespace detail {

void run_chunks(std::size_t chunk_count, unsigned workers,
                const std::function<void(std::size_t)>& body) {
  if (chunk_count == 0) return;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, chunk_count));

  std::vector<std::exception_ptr> errors(chunk_count);
  if (workers == 1) {
    for (std::size_t c = 0; c < chunk_count; ++c) {
      try {
        body(c);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t c = next++; c < chunk_count; c = next++) {
          try {
            body(c);
          } catch (...) {
            errors[c] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

} // namespace detail
} // namespace concbounds
