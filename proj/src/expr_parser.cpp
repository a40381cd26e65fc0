#include "expr_parser.hpp"

#include <cctype>
#include <limits>

namespace froblab::detail {

namespace {

void add_into(ShiftIntPoly& acc, const ShiftMonomial& m, const BigInt& c) {
  if (c == 0) return;
  auto [it, inserted] = acc.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) acc.erase(it);
  }
}

ShiftMonomial mul_monomial(const ShiftMonomial& a, const ShiftMonomial& b) {
  ShiftMonomial out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && std::tie(a[i].var, a[i].shift) < std::tie(b[j].var, b[j].shift))) {
      out.push_back(a[i++]);
    } else if (i == a.size() || std::tie(b[j].var, b[j].shift) < std::tie(a[i].var, a[i].shift)) {
      out.push_back(b[j++]);
    } else {
      if (a[i].exp > std::numeric_limits<std::uint64_t>::max() - b[j].exp)
        throw ValidationError("exponent overflow while expanding polynomial");
      out.push_back({a[i].var, a[i].shift, a[i].exp + b[j].exp});
      ++i;
      ++j;
    }
  }
  return out;
}

ShiftIntPoly mul_poly(const ShiftIntPoly& a, const ShiftIntPoly& b) {
  ShiftIntPoly out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) add_into(out, mul_monomial(ma, mb), ca * cb);
  return out;
}

// (expr)^e is expanded over the integers, so keep e modest.
constexpr std::uint64_t kMaxGroupPower = 256;

class Parser {
 public:
  Parser(std::string_view text, const std::map<std::string, unsigned, std::less<>>& names, ParseOptions opt)
      : text_(text), names_(names), opt_(opt) {}

  ShiftIntPoly parse() {
    skip_ws();
    if (pos_ == text_.size()) fail("empty expression");
    ShiftIntPoly r = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ValidationError("parse error at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "': " + msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  BigInt integer() {
    skip_ws();
    if (peek('-')) fail("negative exponent or shift");
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    return BigInt(std::string(text_.substr(start, pos_ - start)));
  }

  std::uint64_t small_integer(const char* what) {
    skip_ws();
    if (peek('-')) fail(std::string("negative ") + what);
    BigInt v = integer();
    if (v > std::numeric_limits<std::uint64_t>::max()) fail(std::string(what) + " too large");
    return static_cast<std::uint64_t>(v);
  }

  std::string identifier() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' || text_[pos_] == '\''))
        ++pos_;
    }
    if (start == pos_) fail("expected variable name");
    return std::string(text_.substr(start, pos_ - start));
  }

  unsigned lookup(const std::string& name) {
    auto it = names_.find(name);
    if (it == names_.end()) fail("unknown variable '" + name + "'");
    return it->second;
  }

  // 's' '^' INT '(' ... when followed by that shape.
  bool looks_like_shift() const {
    std::size_t i = pos_;
    if (i >= text_.size() || text_[i] != 's') return false;
    ++i;
    auto ws = [&] {
      while (i < text_.size() && std::isspace(static_cast<unsigned char>(text_[i]))) ++i;
    };
    ws();
    if (i < text_.size() && text_[i] == '(') return true;
    if (i >= text_.size() || text_[i] != '^') return false;
    ++i;
    ws();
    if (i < text_.size() && text_[i] == '-') return true;
    while (i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]))) ++i;
    ws();
    return i < text_.size() && text_[i] == '(';
  }

  std::uint64_t optional_power() {
    if (!accept('^')) return 1;
    return small_integer("exponent");
  }

  ShiftIntPoly power_of(unsigned var, unsigned shift, std::uint64_t e) {
    ShiftIntPoly r;
    if (e == 0) {
      r[{}] = 1;
    } else {
      r[{ShiftPower{var, shift, e}}] = 1;
    }
    return r;
  }

  ShiftIntPoly factor() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      ShiftIntPoly r = expr();
      expect(')');
      std::uint64_t e = optional_power();
      if (e > kMaxGroupPower) fail("exponent on a parenthesized group is limited to " + std::to_string(kMaxGroupPower));
      ShiftIntPoly out;
      out[{}] = 1;
      for (; e; e >>= 1) {
        if (e & 1) out = mul_poly(out, r);
        if (e > 1) r = mul_poly(r, r);
      }
      std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
      return out;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      ShiftIntPoly r;
      BigInt v = integer();
      if (v != 0) r[{}] = v;
      return r;
    }
    if (looks_like_shift()) {
      if (!opt_.allow_shifts) fail("shift operator s^j(.) is only valid in difference polynomials");
      ++pos_;  // 's'
      std::uint64_t shift = 1;
      if (accept('^')) shift = small_integer("shift");
      if (shift > std::numeric_limits<unsigned>::max()) fail("shift too large");
      expect('(');
      unsigned var = lookup(identifier());
      expect(')');
      return power_of(var, static_cast<unsigned>(shift), optional_power());
    }
    unsigned var = lookup(identifier());
    return power_of(var, 0, optional_power());
  }

  ShiftIntPoly term() {
    ShiftIntPoly r = factor();
    while (accept('*')) r = mul_poly(r, factor());
    return r;
  }

  ShiftIntPoly expr() {
    bool negate = false;
    if (accept('-')) {
      negate = true;
    } else {
      accept('+');
    }
    ShiftIntPoly acc;
    for (const auto& [m, c] : term()) add_into(acc, m, negate ? BigInt(-c) : c);
    while (true) {
      if (accept('+')) {
        for (const auto& [m, c] : term()) add_into(acc, m, c);
      } else if (accept('-')) {
        for (const auto& [m, c] : term()) add_into(acc, m, BigInt(-c));
      } else {
        break;
      }
    }
    return acc;
  }

  std::string_view text_;
  const std::map<std::string, unsigned, std::less<>>& names_;
  ParseOptions opt_;
  std::size_t pos_ = 0;
};

}  // namespace

ShiftIntPoly parse_expression(std::string_view text, const std::map<std::string, unsigned, std::less<>>& names,
                              ParseOptions options) {
  return Parser(text, names, options).parse();
}

}  // namespace froblab::detail
