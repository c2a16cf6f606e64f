#pragma once

#include <compare>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

namespace rbahp {

// Identifier tokens match [A-Za-z0-9_.-]+ and are case-sensitive.
inline constexpr bool is_token_char(char c) noexcept {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' ||
         c == '.' || c == '-';
}

inline constexpr bool is_valid_token(std::string_view text) noexcept {
  if (text.empty()) return false;
  for (char c : text) {
    if (!is_token_char(c)) return false;
  }
  return true;
}

/// Strongly typed identifier. The tag keeps role and permission names from
/// being mixed up at compile time; validation happens at the parse boundary.
template <typename Tag>
class Token {
 public:
  Token() = default;
  explicit Token(std::string value) : value_(std::move(value)) {}

  [[nodiscard]] const std::string& str() const noexcept { return value_; }
  [[nodiscard]] bool valid() const noexcept { return is_valid_token(value_); }

  friend auto operator<=>(const Token&, const Token&) = default;
  friend bool operator==(const Token&, const Token&) = default;

  friend std::ostream& operator<<(std::ostream& os, const Token& token) { return os << token.value_; }

 private:
  std::string value_;
};

using RoleId = Token<struct RoleTag>;
using PermissionId = Token<struct PermissionTag>;

}  // namespace rbahp

template <typename Tag>
struct std::hash<rbahp::Token<Tag>> {
  std::size_t operator()(const rbahp::Token<Tag>& token) const noexcept {
    return std::hash<std::string>{}(token.str());
  }
};
