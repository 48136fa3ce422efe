#include "pixi/common/random.hpp"

#include <array>
#include <sstream>

#include <sodium.h>

#include "pixi/common/error.hpp"

namespace pixi {

std::uint64_t RandomStream::uniform_index(std::uint64_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "uniform_index: empty range");
  // Values below `threshold` would bias the modulo; 2^64 mod n of them exist.
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = engine_();
    if (r >= threshold) return r % n;
  }
}

double RandomStream::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::string RandomStream::state() const {
  std::ostringstream out;
  out << engine_;
  return out.str();
}

void RandomStream::restore(std::string_view state) {
  std::istringstream in{std::string(state)};
  std::mt19937_64 engine;
  in >> engine;
  if (in.fail()) throw Error(ErrorCode::Parse, "corrupt random stream state");
  engine_ = engine;
}

std::uint64_t keyed_hash(std::uint64_t key, std::string_view message) {
  static_assert(crypto_shorthash_KEYBYTES == 16 && crypto_shorthash_BYTES == 8);
  std::array<unsigned char, crypto_shorthash_KEYBYTES> k{};
  for (int i = 0; i < 8; ++i) k[i] = static_cast<unsigned char>(key >> (8 * i));
  std::array<unsigned char, crypto_shorthash_BYTES> out{};
  crypto_shorthash(out.data(), reinterpret_cast<const unsigned char*>(message.data()),
                   message.size(), k.data());
  std::uint64_t h = 0;
  for (int i = 0; i < 8; ++i) h |= static_cast<std::uint64_t>(out[i]) << (8 * i);
  return h;
}

}  // namespace pixi
