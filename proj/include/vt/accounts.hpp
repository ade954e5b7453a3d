#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "vt/time.hpp"

namespace vt {

enum class Role { Admin, VTStaff };
std::string_view to_string(Role role);
std::optional<Role> parse_role(std::string_view text);

struct UserAccount {
  std::string id;
  std::string display_name;
  Role role = Role::VTStaff;
  std::string credential_hash;  // "pbkdf2-sha256$<iterations>$<salt hex>$<hash hex>"
};

enum class SignInOutcome { Success, Failure };
std::string_view to_string(SignInOutcome outcome);
std::optional<SignInOutcome> parse_signin_outcome(std::string_view text);

struct SignInRecord {
  std::string user_id;
  Timestamp at{};
  SignInOutcome outcome = SignInOutcome::Failure;
  std::string client_note;

  friend bool operator==(const SignInRecord&, const SignInRecord&) = default;
};

/// Salted PBKDF2-HMAC-SHA256. The clear password is never stored.
std::string hash_password(std::string_view password, int iterations = 100000);
bool verify_password(std::string_view password, std::string_view credential_hash);

/// Hex-encoded bytes from the system CSPRNG.
std::string random_token(std::size_t bytes = 32);

}  // namespace vt
