#include "vt/accounts.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/rand.h>

#include <charconv>
#include <stdexcept>
#include <vector>

namespace vt {

std::string_view to_string(Role role) {
  return role == Role::Admin ? "admin" : "vt_staff";
}

std::optional<Role> parse_role(std::string_view text) {
  if (text == "admin") return Role::Admin;
  if (text == "vt_staff") return Role::VTStaff;
  return std::nullopt;
}

std::string_view to_string(SignInOutcome outcome) {
  return outcome == SignInOutcome::Success ? "success" : "failure";
}

std::optional<SignInOutcome> parse_signin_outcome(std::string_view text) {
  if (text == "success") return SignInOutcome::Success;
  if (text == "failure") return SignInOutcome::Failure;
  return std::nullopt;
}

namespace {

constexpr std::size_t kSaltBytes = 16;
constexpr std::size_t kHashBytes = 32;

std::string to_hex(const unsigned char* data, std::size_t n) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(n * 2, '0');
  for (std::size_t i = 0; i < n; ++i) {
    out[2 * i] = digits[data[i] >> 4];
    out[2 * i + 1] = digits[data[i] & 0x0f];
  }
  return out;
}

std::optional<std::vector<unsigned char>> from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) return std::nullopt;
  std::vector<unsigned char> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    unsigned value = 0;
    auto res = std::from_chars(hex.data() + 2 * i, hex.data() + 2 * i + 2, value, 16);
    if (res.ec != std::errc{} || res.ptr != hex.data() + 2 * i + 2) return std::nullopt;
    out[i] = static_cast<unsigned char>(value);
  }
  return out;
}

std::vector<unsigned char> derive(std::string_view password, const std::vector<unsigned char>& salt,
                                  int iterations) {
  std::vector<unsigned char> out(kHashBytes);
  if (PKCS5_PBKDF2_HMAC(password.data(), static_cast<int>(password.size()), salt.data(),
                        static_cast<int>(salt.size()), iterations, EVP_sha256(),
                        static_cast<int>(out.size()), out.data()) != 1) {
    throw std::runtime_error("PBKDF2 failed");
  }
  return out;
}

}  // namespace

std::string random_token(std::size_t bytes) {
  std::vector<unsigned char> buf(bytes);
  if (RAND_bytes(buf.data(), static_cast<int>(buf.size())) != 1) {
    throw std::runtime_error("RAND_bytes failed");
  }
  return to_hex(buf.data(), buf.size());
}

std::string hash_password(std::string_view password, int iterations) {
  std::vector<unsigned char> salt(kSaltBytes);
  if (RAND_bytes(salt.data(), static_cast<int>(salt.size())) != 1) {
    throw std::runtime_error("RAND_bytes failed");
  }
  const auto hash = derive(password, salt, iterations);
  return "pbkdf2-sha256$" + std::to_string(iterations) + "$" + to_hex(salt.data(), salt.size()) +
         "$" + to_hex(hash.data(), hash.size());
}

bool verify_password(std::string_view password, std::string_view stored) {
  constexpr std::string_view prefix = "pbkdf2-sha256$";
  if (stored.substr(0, prefix.size()) != prefix) return false;
  stored.remove_prefix(prefix.size());
  const auto p1 = stored.find('$');
  const auto p2 = stored.find('$', p1 == std::string_view::npos ? p1 : p1 + 1);
  if (p1 == std::string_view::npos || p2 == std::string_view::npos) return false;
  int iterations = 0;
  auto res = std::from_chars(stored.data(), stored.data() + p1, iterations);
  if (res.ec != std::errc{} || iterations <= 0) return false;
  auto salt = from_hex(stored.substr(p1 + 1, p2 - p1 - 1));
  auto expected = from_hex(stored.substr(p2 + 1));
  if (!salt || !expected || expected->size() != kHashBytes) return false;
  const auto actual = derive(password, *salt, iterations);
  return CRYPTO_memcmp(actual.data(), expected->data(), kHashBytes) == 0;
}

}  // namespace vt
