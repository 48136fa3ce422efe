#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace pixi::auth {

struct PasswordPolicy {
  std::size_t min_length = 8;  // code points

  bool accepts(std::string_view password) const;
  // Throws PolicyViolation with a user-facing message.
  void check(std::string_view password) const;
};

// argon2id cost; the defaults are libsodium's "interactive" level.
struct HashCost {
  std::uint64_t opslimit = 2;
  std::size_t memlimit = 64u << 20;

  static HashCost minimum();  // for tests and bulk imports
};

class PasswordHasher {
public:
  explicit PasswordHasher(HashCost cost = {});

  // Self-describing encoded digest with a fresh random salt.
  std::string hash(std::string_view password) const;
  bool verify(std::string_view digest, std::string_view password) const;

  static constexpr std::string_view algorithm() { return "argon2id"; }

private:
  HashCost cost_;
};

}  // namespace pixi::auth
