#include "rankkit/strings.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace rankkit {

namespace mp = boost::multiprecision;

LexString::LexString(std::string bits) : bits_(std::move(bits)) {
  if (std::any_of(bits_.begin(), bits_.end(), [](char c) { return c != '0' && c != '1'; })) {
    throw std::invalid_argument("not a binary string: '" + bits_ + "'");
  }
}

LexString LexString::parse(std::string_view token) {
  if (token == "eps" || token == "ε") return LexString{};
  return LexString(std::string(token));
}

LexString LexString::drop_last() const {
  LexString out;
  out.bits_ = bits_.substr(0, bits_.empty() ? 0 : bits_.size() - 1);
  return out;
}

LexString LexString::append(char bit) const {
  LexString out;
  out.bits_ = bits_;
  out.bits_.push_back(bit);
  if (bit != '0' && bit != '1') throw std::invalid_argument("append: bit must be '0' or '1'");
  return out;
}

// rank(s) = value("1" s) - 1, read as a binary numeral.
Natural lex_rank(const LexString& s) {
  if (s.size() < 63) {
    std::uint64_t v = 1;
    for (char c : s.bits()) v = (v << 1) | static_cast<std::uint64_t>(c - '0');
    return Natural(v - 1);
  }
  Natural v = 1;
  for (char c : s.bits()) {
    v <<= 1;
    if (c == '1') v |= 1;
  }
  return v - 1;
}

LexString lex_unrank(const Natural& n) {
  if (n < 0) throw std::domain_error("lex_unrank: negative index");
  const Natural m = n + 1;
  const auto top = mp::msb(m);
  std::string bits(top, '0');
  for (std::size_t i = 0; i < top; ++i) {
    if (mp::bit_test(m, static_cast<unsigned>(top - 1 - i))) bits[i] = '1';
  }
  return LexString(std::move(bits));
}

LexString successor(const LexString& s) {
  std::string bits = s.bits();
  auto it = bits.rbegin();
  for (; it != bits.rend() && *it == '1'; ++it) *it = '0';
  if (it == bits.rend()) {
    // 1^n rolls over to 0^(n+1)
    return LexString(std::string(bits.size() + 1, '0'));
  }
  *it = '1';
  return LexString(std::move(bits));
}

LexString predecessor(const LexString& s) {
  if (s.empty()) throw std::domain_error("predecessor of eps");
  std::string bits = s.bits();
  auto it = bits.rbegin();
  for (; it != bits.rend() && *it == '0'; ++it) *it = '1';
  if (it == bits.rend()) return LexString(std::string(bits.size() - 1, '1'));
  *it = '0';
  return LexString(std::move(bits));
}

const LexString& shortlex_max(const LexString& a, const LexString& b) { return a < b ? b : a; }

Natural cantor_pair(const Natural& a, const Natural& b) {
  const Natural w = a + b;
  return w * (w + 1) / 2 + b;
}

std::pair<Natural, Natural> cantor_unpair(const Natural& z) {
  if (z < 0) throw std::domain_error("cantor_unpair: negative code");
  Natural w = (mp::sqrt(Natural(8 * z + 1)) - 1) / 2;
  const Natural t = w * (w + 1) / 2;
  const Natural b = z - t;
  return {w - b, b};
}

LexString pair(const LexString& a, const LexString& b) {
  return lex_unrank(cantor_pair(lex_rank(a), lex_rank(b)));
}

std::pair<LexString, LexString> unpair(const LexString& z) {
  auto [a, b] = cantor_unpair(lex_rank(z));
  return {lex_unrank(a), lex_unrank(b)};
}

std::uint64_t to_u64(const Natural& n) {
  if (n < 0 || n > std::numeric_limits<std::uint64_t>::max()) {
    throw std::overflow_error("natural does not fit in 64 bits");
  }
  return n.convert_to<std::uint64_t>();
}

std::uint64_t universe_prefix_size(std::size_t max_len) {
  if (max_len >= 63) throw std::overflow_error("universe prefix too large");
  return (std::uint64_t{1} << (max_len + 1)) - 1;
}

std::vector<LexString> universe_prefix(std::size_t max_len) {
  std::vector<LexString> out;
  out.reserve(universe_prefix_size(max_len));
  LexString s;
  for (std::uint64_t i = 0, n = universe_prefix_size(max_len); i < n; ++i) {
    out.push_back(s);
    s = successor(s);
  }
  return out;
}

}  // namespace rankkit
