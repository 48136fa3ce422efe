#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace pixi {

// Seeded, serializable random stream. Bounded draws use rejection sampling
// rather than std::uniform_int_distribution so that sequences are identical
// across standard library implementations.
class RandomStream {
public:
  explicit RandomStream(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);

  // Uniform real in [0, 1).
  double uniform01();

  std::string state() const;
  void restore(std::string_view state);

  friend bool operator==(const RandomStream& a, const RandomStream& b) {
    return a.engine_ == b.engine_;
  }

private:
  std::mt19937_64 engine_;
};

// SipHash-2-4 of `message` keyed by `key`. Used to derive per-user and
// per-session seeds from a server seed.
std::uint64_t keyed_hash(std::uint64_t key, std::string_view message);

// Fisher-Yates shuffle driven by a RandomStream.
template <typename It>
void shuffle(It first, It last, RandomStream& rng) {
  const auto n = static_cast<std::uint64_t>(last - first);
  for (std::uint64_t i = n; i > 1; --i) {
    const auto j = rng.uniform_index(i);
    using std::swap;
    swap(first[i - 1], first[j]);
  }
}

}  // namespace pixi
