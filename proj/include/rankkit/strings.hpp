#pragma once

// Binary strings under shortlex order, and the arithmetic that identifies
// them with the naturals: s_0 = eps, s_1 = 0, s_2 = 1, s_3 = 00, ...

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace rankkit {

using Natural = boost::multiprecision::cpp_int;

/// A finite string over {0,1}. Ordering is shortlex: shorter strings come
/// first, equal lengths compare as binary numerals.
class LexString {
 public:
  LexString() = default;

  /// Throws std::invalid_argument if `bits` contains anything but '0'/'1'.
  explicit LexString(std::string bits);

  /// Accepts a binary literal or the token "eps" for the empty string.
  static LexString parse(std::string_view token);

  const std::string& bits() const noexcept { return bits_; }
  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }

  char back() const { return bits_.back(); }
  LexString drop_last() const;
  LexString append(char bit) const;

  /// Serialized form used by the CLI and JSON reports.
  std::string token() const { return bits_.empty() ? "eps" : bits_; }

  friend bool operator==(const LexString&, const LexString&) = default;
  friend std::strong_ordering operator<=>(const LexString& a, const LexString& b) noexcept {
    if (a.bits_.size() != b.bits_.size()) return a.bits_.size() <=> b.bits_.size();
    return a.bits_.compare(b.bits_) <=> 0;
  }

 private:
  std::string bits_;
};

struct LexStringHash {
  std::size_t operator()(const LexString& s) const noexcept {
    return std::hash<std::string>{}(s.bits()) ^ (s.size() * 0x9e3779b97f4a7c15ULL);
  }
};

/// 0-based position of `s` in shortlex order.
Natural lex_rank(const LexString& s);

/// Inverse of lex_rank. Throws std::domain_error on negative input.
LexString lex_unrank(const Natural& n);

LexString successor(const LexString& s);

/// Throws std::domain_error on eps.
LexString predecessor(const LexString& s);

const LexString& shortlex_max(const LexString& a, const LexString& b);

/// Cantor pairing on naturals.
Natural cantor_pair(const Natural& a, const Natural& b);
std::pair<Natural, Natural> cantor_unpair(const Natural& z);

/// Pairing on strings, Cantor pairing transported along lex_rank.
LexString pair(const LexString& a, const LexString& b);
std::pair<LexString, LexString> unpair(const LexString& z);

/// Narrows a natural to 64 bits; throws std::overflow_error when it does
/// not fit. Used where a rank indexes into host memory.
std::uint64_t to_u64(const Natural& n);

/// All strings of length <= max_len, in shortlex order.
std::vector<LexString> universe_prefix(std::size_t max_len);

/// Number of strings of length <= max_len, i.e. 2^(max_len+1) - 1.
std::uint64_t universe_prefix_size(std::size_t max_len);

}  // namespace rankkit
