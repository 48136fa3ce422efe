#include "pixi/auth/credentials.hpp"

#include <sodium.h>

#include "pixi/common/error.hpp"
#include "pixi/content/text.hpp"

namespace pixi::auth {

namespace {

void ensure_sodium() {
  static const bool ready = sodium_init() >= 0;
  if (!ready) throw Error(ErrorCode::Internal, "libsodium failed to initialize");
}

}  // namespace

bool PasswordPolicy::accepts(std::string_view password) const {
  return content::utf8_length(password) >= min_length;
}

void PasswordPolicy::check(std::string_view password) const {
  if (!accepts(password)) {
    throw Error(ErrorCode::PolicyViolation,
                "password must be at least " + std::to_string(min_length) + " characters");
  }
}

HashCost HashCost::minimum() {
  return {crypto_pwhash_argon2id_OPSLIMIT_MIN, crypto_pwhash_argon2id_MEMLIMIT_MIN};
}

PasswordHasher::PasswordHasher(HashCost cost) : cost_(cost) {
  ensure_sodium();
  if (cost_.opslimit < crypto_pwhash_argon2id_OPSLIMIT_MIN ||
      cost_.memlimit < crypto_pwhash_argon2id_MEMLIMIT_MIN) {
    throw Error(ErrorCode::InvalidArgument, "argon2id cost below the library minimum");
  }
}

std::string PasswordHasher::hash(std::string_view password) const {
  char out[crypto_pwhash_argon2id_STRBYTES];
  if (crypto_pwhash_argon2id_str(out, password.data(), password.size(), cost_.opslimit,
                                 cost_.memlimit) != 0) {
    throw Error(ErrorCode::Internal, "password hashing ran out of memory");
  }
  return out;
}

bool PasswordHasher::verify(std::string_view digest, std::string_view password) const {
  if (digest.empty() || digest.size() >= crypto_pwhash_argon2id_STRBYTES) return false;
  const std::string terminated(digest);
  return crypto_pwhash_argon2id_str_verify(terminated.c_str(), password.data(), password.size()) == 0;
}

}  // namespace pixi::auth
