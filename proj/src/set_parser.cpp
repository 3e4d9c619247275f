#include <cctype>
#include <charconv>

#include "rankkit/sets.hpp"

namespace rankkit {

namespace {

struct Token {
  enum class Kind { Word, Number, Punct, End } kind;
  std::string text;
  std::size_t offset;
};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Token::Kind::Word, std::string(src.substr(i, j - i)), i});
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Token::Kind::Number, std::string(src.substr(i, j - i)), i});
      i = j;
    } else if (c == '(' || c == ')' || c == '{' || c == '}' || c == ',') {
      out.push_back({Token::Kind::Punct, std::string(1, c), i});
      ++i;
    } else {
      throw ParseError("unexpected character '" + std::string(1, c) + "' at offset " + std::to_string(i),
                       std::string(1, c));
    }
  }
  out.push_back({Token::Kind::End, "", src.size()});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : tokens_(tokenize(src)) {}

  SetSpec parse() {
    SetSpec s = expr();
    if (peek().kind != Token::Kind::End) fail("trailing input");
    return s;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& take() { return tokens_[pos_++]; }

  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    const std::string shown = t.kind == Token::Kind::End ? "<end>" : t.text;
    throw ParseError(what + ": unexpected token '" + shown + "' at offset " + std::to_string(t.offset), shown);
  }

  void expect(std::string_view punct) {
    if (peek().kind != Token::Kind::Punct || peek().text != punct) fail("expected '" + std::string(punct) + "'");
    ++pos_;
  }

  std::uint64_t number() {
    if (peek().kind != Token::Kind::Number) fail("expected a number");
    const std::string& text = peek().text;
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) fail("number out of range");
    ++pos_;
    return v;
  }

  LexString string_literal() {
    const Token& t = peek();
    if (t.kind == Token::Kind::Word && t.text == "eps") {
      ++pos_;
      return LexString{};
    }
    if (t.kind != Token::Kind::Number || t.text.find_first_not_of("01") != std::string::npos) {
      fail("expected a binary string or 'eps'");
    }
    ++pos_;
    return LexString(t.text);
  }

  SetSpec expr() {
    if (peek().kind != Token::Kind::Word) fail("expected a set expression");
    const std::string name = take().text;

    if (name == "finite") {
      expect("{");
      std::vector<LexString> members;
      if (!(peek().kind == Token::Kind::Punct && peek().text == "}")) {
        members.push_back(string_literal());
        while (peek().kind == Token::Kind::Punct && peek().text == ",") {
          ++pos_;
          members.push_back(string_literal());
        }
      }
      expect("}");
      return SetSpec::finite(std::move(members));
    }
    if (name == "sigma") return SetSpec::universe();
    if (name == "empty") return SetSpec::empty();
    if (name == "evens") {
      return SetSpec::predicate("evens", [](const LexString& x) { return lex_rank(x) % 2 == 0; });
    }
    if (name == "odds") {
      return SetSpec::predicate("odds", [](const LexString& x) { return lex_rank(x) % 2 == 1; });
    }
    if (name == "starts1") {
      return SetSpec::predicate("starts1", [](const LexString& x) { return !x.empty() && x.bits()[0] == '1'; });
    }
    if (name == "K_approx" || name == "coK_cyl") {
      expect("(");
      const Budget cap = number();
      expect(")");
      return name == "K_approx" ? k_approx(cap) : cok_cylinder_set(cap);
    }
    if (name == "random") {
      expect("(");
      const std::uint64_t seed = number();
      expect(",");
      const std::uint64_t len = number();
      expect(")");
      if (len > 20) {
        --pos_;
        fail("random(): max_len above 20");
      }
      return SetSpec::finite(random_finite_members(seed, len));
    }
    if (name == "joinhat") {
      expect("(");
      SetSpec a = expr();
      expect(",");
      SetSpec b = expr();
      expect(")");
      return join_hat(a, b);
    }
    if (name == "interleave4" || name == "complement" || name == "cylinder") {
      expect("(");
      SetSpec a = expr();
      expect(")");
      if (name == "interleave4") return interleave4(a);
      if (name == "complement") return complement(a);
      return cylinderize(a);
    }
    --pos_;
    fail("unknown set constructor");
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

SetSpec parse_set(std::string_view text) { return Parser(text).parse(); }

}  // namespace rankkit
