// Copyright 2026 The provkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "provkit/options.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <system_error>

#include "provkit/error.hpp"

namespace provkit {

std::string_view to_string(ValueKind kind) noexcept {
  switch (kind) {
    case ValueKind::Integer: return "Integer";
    case ValueKind::Float: return "Float";
    case ValueKind::Boolean: return "Boolean";
    case ValueKind::Text: return "Text";
    case ValueKind::List: return "List";
  }
  return "?";
}

ValueKind scalar_kind(Scalar const& s) noexcept {
  return static_cast<ValueKind>(s.index());
}

bool scalar_equal(Scalar const& a, Scalar const& b) noexcept {
  if (a.index() != b.index()) return false;
  if (auto const* da = std::get_if<double>(&a)) {
    double const db = std::get<double>(b);
    return std::memcmp(da, &db, sizeof(double)) == 0;
  }
  return a == b;
}

ValueList::ValueList(std::vector<Scalar> items) : items_(std::move(items)) {
  for (auto const& item : items_) {
    if (item.index() != items_.front().index()) {
      throw Error(ErrorCode::HeterogeneousList,
                  "list mixes " + std::string(to_string(scalar_kind(items_.front()))) +
                      " and " + std::string(to_string(scalar_kind(item))));
    }
    if (auto const* d = std::get_if<double>(&item); d && !std::isfinite(*d)) {
      throw Error(ErrorCode::NonFiniteFloat, "list holds a non-finite float");
    }
  }
}

std::optional<ValueKind> ValueList::element_kind() const noexcept {
  if (items_.empty()) return std::nullopt;
  return scalar_kind(items_.front());
}

OptionValue::OptionValue(double v) : storage_(v) {
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::NonFiniteFloat, "float values must be finite");
  }
}

OptionValue OptionValue::from_scalar(Scalar s) {
  return std::visit([](auto&& v) { return OptionValue(std::move(v)); },
                    std::move(s));
}

ValueKind OptionValue::kind() const noexcept {
  return static_cast<ValueKind>(storage_.index());
}

bool operator==(OptionValue const& a, OptionValue const& b) noexcept {
  if (a.storage_.index() != b.storage_.index()) return false;
  if (a.is_list()) {
    auto const& la = a.as_list().items();
    auto const& lb = b.as_list().items();
    if (la.size() != lb.size()) return false;
    for (std::size_t i = 0; i < la.size(); ++i) {
      if (!scalar_equal(la[i], lb[i])) return false;
    }
    return true;
  }
  if (a.is_float()) {
    double const x = a.as_float(), y = b.as_float();
    return std::memcmp(&x, &y, sizeof(double)) == 0;
  }
  return a.storage_ == b.storage_;
}

// --- keys -----------------------------------------------------------------

namespace {

bool is_ident_start(char c) noexcept {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}
bool is_digit(char c) noexcept { return c >= '0' && c <= '9'; }
bool is_ident_char(char c) noexcept { return is_ident_start(c) || is_digit(c); }

bool is_index(std::string_view s) noexcept {
  if (s.empty()) return false;
  if (s.size() > 1 && s.front() == '0') return false;
  for (char c : s) {
    if (!is_digit(c)) return false;
  }
  return true;
}

}  // namespace

bool is_identifier(std::string_view s) noexcept {
  if (s.empty() || !is_ident_start(s.front())) return false;
  for (char c : s) {
    if (!is_ident_char(c)) return false;
  }
  return true;
}

bool OptionKey::is_valid(std::string_view dotted) noexcept {
  std::size_t segments = 0;
  std::size_t start = 0;
  while (true) {
    auto const dot = dotted.find('.', start);
    auto const seg = dotted.substr(start, dot == std::string_view::npos
                                              ? std::string_view::npos
                                              : dot - start);
    bool const ok = segments == 0 ? is_identifier(seg)
                                  : (is_identifier(seg) || is_index(seg));
    if (!ok) return false;
    ++segments;
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return segments >= 2;
}

OptionKey OptionKey::parse(std::string_view dotted) {
  if (!is_valid(dotted)) {
    throw Error(ErrorCode::MalformedKey,
                "'" + std::string(dotted) + "' is not Component.Property");
  }
  auto const dot = dotted.find('.');
  return OptionKey(std::string(dotted.substr(0, dot)),
                   std::string(dotted.substr(dot + 1)));
}

OptionKey::OptionKey(std::string component, std::string property)
    : component_(std::move(component)), property_(std::move(property)) {
  if (!is_valid(component_ + "." + property_)) {
    throw Error(ErrorCode::MalformedKey,
                "'" + component_ + "." + property_ + "' is not Component.Property");
  }
}

// --- sets -----------------------------------------------------------------

void OptionsSet::set(OptionKey const& key, OptionValue value) {
  auto full = key.full();
  entries_.insert_or_assign(std::move(full), std::pair{key, std::move(value)});
}

bool OptionsSet::erase(std::string_view dotted) {
  auto it = entries_.find(std::string(dotted));
  if (it == entries_.end()) return false;
  entries_.erase(it);
  return true;
}

OptionValue const* OptionsSet::find(std::string_view dotted) const {
  auto it = entries_.find(std::string(dotted));
  return it == entries_.end() ? nullptr : &it->second.second;
}

bool operator==(OptionsSet const& a, OptionsSet const& b) noexcept {
  if (a.entries_.size() != b.entries_.size()) return false;
  auto ia = a.entries_.begin();
  auto ib = b.entries_.begin();
  for (; ia != a.entries_.end(); ++ia, ++ib) {
    if (ia->first != ib->first || !(ia->second.second == ib->second.second)) {
      return false;
    }
  }
  return true;
}

OptionsSet merge(OptionsSet const& base, OptionsSet const& overlay) {
  OptionsSet out = base;
  for (auto const& [key, value] : overlay) out.set(key, value);
  return out;
}

// --- emission -------------------------------------------------------------

std::string format_float(double v) {
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::NonFiniteFloat, "cannot emit a non-finite float");
  }
  // Both forms carry the shortest round-tripping digits; keep whichever is
  // fewer characters once the fixed form has its ".0". Ties go to fixed.
  char buf[512];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed);
  std::string fixed(buf, res.ptr);
  if (fixed.find('.') == std::string::npos) fixed += ".0";
  res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::scientific);
  std::string scientific(buf, res.ptr);
  return fixed.size() <= scientific.size() ? fixed : scientific;
}

std::string quote_text(std::string_view s) {
  static constexpr char hex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(s.size() + 2);
  out += '"';
  for (char c : s) {
    auto const u = static_cast<unsigned char>(c);
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (u < 0x20 || u == 0x7F) {
          out += "\\u00";
          out += hex[u >> 4];
          out += hex[u & 0xF];
        } else {
          out += c;
        }
    }
  }
  out += '"';
  return out;
}

namespace {

std::string scalar_to_text(Scalar const& s) {
  return std::visit(
      [](auto const& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_float(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return quote_text(v);
        }
      },
      s);
}

}  // namespace

std::string value_to_text(OptionValue const& v) {
  if (v.is_list()) {
    std::string out = "[";
    bool first = true;
    for (auto const& item : v.as_list().items()) {
      if (!first) out += ", ";
      first = false;
      out += scalar_to_text(item);
    }
    out += ']';
    return out;
  }
  return std::visit(
      [](auto const& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ValueList>) {
          return {};
        } else {
          return scalar_to_text(Scalar(s));
        }
      },
      v.storage());
}

std::string emit_canonical(OptionsSet const& set) {
  std::string out;
  for (auto const& [key, value] : set) {
    out += key.full();
    out += " = ";
    out += value_to_text(value);
    out += '\n';
  }
  return out;
}

// --- parsing --------------------------------------------------------------

namespace {

// Returns the byte length of the UTF-8 sequence at `p`, or 0 if invalid.
std::size_t utf8_sequence_length(std::string_view s, std::size_t p) noexcept {
  auto const b0 = static_cast<unsigned char>(s[p]);
  if (b0 < 0x80) return 1;
  std::size_t len = 0;
  std::uint32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) { len = 2; cp = b0 & 0x1F; }
  else if ((b0 & 0xF0) == 0xE0) { len = 3; cp = b0 & 0x0F; }
  else if ((b0 & 0xF8) == 0xF0) { len = 4; cp = b0 & 0x07; }
  else return 0;
  if (p + len > s.size()) return 0;
  for (std::size_t i = 1; i < len; ++i) {
    auto const b = static_cast<unsigned char>(s[p + i]);
    if ((b & 0xC0) != 0x80) return 0;
    cp = (cp << 6) | (b & 0x3F);
  }
  if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
      (len == 4 && cp < 0x10000) || cp > 0x10FFFF ||
      (cp >= 0xD800 && cp <= 0xDFFF)) {
    return 0;
  }
  return len;
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  OptionsSet document() {
    validate_utf8();
    OptionsSet out;
    while (!at_end()) {
      skip_ws();
      if (at_end()) break;
      if (peek() == '\n') { advance(); continue; }
      if (peek() == '#') {
        while (!at_end() && peek() != '\n') advance();
        continue;
      }
      auto [key, value] = assignment();
      out.set(key, std::move(value));
      skip_ws();
      if (!at_end()) {
        if (peek() != '\n') fail(ErrorCode::SyntaxError, "expected end of line");
        advance();
      }
    }
    return out;
  }

  OptionValue single_value() {
    validate_utf8();
    skip_ws();
    auto v = value();
    skip_ws();
    if (!at_end()) fail(ErrorCode::SyntaxError, "trailing characters after value");
    return v;
  }

 private:
  [[noreturn]] void fail(ErrorCode code, std::string const& msg) const {
    throw ParseError(code, line_, pos_ - line_start_ + 1, msg);
  }

  void validate_utf8() {
    std::size_t p = 0;
    while (p < text_.size()) {
      auto const n = utf8_sequence_length(text_, p);
      if (n == 0) {
        while (pos_ < p) advance();
        fail(ErrorCode::InvalidUtf8, "invalid UTF-8 sequence");
      }
      p += n;
    }
  }

  bool at_end() const noexcept { return pos_ >= text_.size(); }
  char peek() const noexcept { return text_[pos_]; }
  void advance() noexcept {
    if (text_[pos_] == '\n') {
      ++line_;
      line_start_ = pos_ + 1;
    }
    ++pos_;
  }
  void skip_ws() noexcept {
    while (!at_end() && (peek() == ' ' || peek() == '\t')) advance();
  }
  void expect(char c, char const* what) {
    if (at_end() || peek() != c) fail(ErrorCode::SyntaxError, std::string("expected ") + what);
    advance();
  }

  std::pair<OptionKey, OptionValue> assignment() {
    auto const start = pos_;
    auto const key_line = line_;
    auto const key_col = pos_ - line_start_ + 1;
    while (!at_end() && (is_ident_char(peek()) || peek() == '.')) advance();
    auto const dotted = text_.substr(start, pos_ - start);
    if (dotted.empty()) fail(ErrorCode::SyntaxError, "expected a key");
    if (!OptionKey::is_valid(dotted)) {
      throw ParseError(ErrorCode::MalformedKey, key_line, key_col,
                       "'" + std::string(dotted) + "' is not Component.Property");
    }
    skip_ws();
    expect('=', "'='");
    skip_ws();
    auto v = value();
    return {OptionKey::parse(dotted), std::move(v)};
  }

  OptionValue value() {
    if (at_end()) fail(ErrorCode::SyntaxError, "expected a value");
    if (peek() == '[') return list();
    return OptionValue::from_scalar(scalar());
  }

  OptionValue list() {
    auto const line = line_;
    auto const col = pos_ - line_start_ + 1;
    expect('[', "'['");
    std::vector<Scalar> items;
    skip_ws();
    if (!at_end() && peek() == ']') {
      advance();
      return ValueList{};
    }
    while (true) {
      skip_ws();
      if (!at_end() && peek() == '[') fail(ErrorCode::SyntaxError, "nested lists are not allowed");
      items.push_back(scalar());
      skip_ws();
      if (!at_end() && peek() == ',') { advance(); continue; }
      expect(']', "',' or ']'");
      break;
    }
    try {
      return ValueList(std::move(items));
    } catch (Error const& e) {
      throw ParseError(e.code(), line, col, e.what());
    }
  }

  Scalar scalar() {
    if (at_end()) fail(ErrorCode::SyntaxError, "expected a value");
    char const c = peek();
    if (c == '"') return string();
    if (c == '-' || is_digit(c)) return number();
    if (is_ident_start(c)) {
      auto const start = pos_;
      while (!at_end() && is_ident_char(peek())) advance();
      auto const word = text_.substr(start, pos_ - start);
      if (word == "true") return true;
      if (word == "false") return false;
      pos_ = start;
      fail(ErrorCode::SyntaxError, "unknown literal '" + std::string(word) + "'");
    }
    fail(ErrorCode::SyntaxError, "expected a value");
  }

  Scalar number() {
    auto const start = pos_;
    auto const col = pos_ - line_start_ + 1;
    if (peek() == '-') advance();
    auto const int_start = pos_;
    while (!at_end() && is_digit(peek())) advance();
    auto const int_digits = pos_ - int_start;
    if (int_digits == 0) fail(ErrorCode::SyntaxError, "expected digits");
    if (int_digits > 1 && text_[int_start] == '0') {
      throw ParseError(ErrorCode::SyntaxError, line_, col, "leading zeros are not allowed");
    }
    bool is_float = false;
    if (!at_end() && peek() == '.') {
      is_float = true;
      advance();
      auto const frac_start = pos_;
      while (!at_end() && is_digit(peek())) advance();
      if (pos_ == frac_start) fail(ErrorCode::SyntaxError, "expected digits after '.'");
    }
    if (!at_end() && (peek() == 'e' || peek() == 'E')) {
      is_float = true;
      advance();
      if (!at_end() && (peek() == '+' || peek() == '-')) advance();
      auto const exp_start = pos_;
      while (!at_end() && is_digit(peek())) advance();
      if (pos_ == exp_start) fail(ErrorCode::SyntaxError, "expected exponent digits");
    }
    if (!at_end() && (is_ident_char(peek()) || peek() == '.')) {
      fail(ErrorCode::SyntaxError, "malformed number");
    }
    auto const token = text_.substr(start, pos_ - start);
    if (is_float) {
      double v = 0;
      auto const res = std::from_chars(token.data(), token.data() + token.size(), v);
      if (res.ec == std::errc::result_out_of_range) {
        // from_chars leaves `v` untouched here; strtod tells overflow
        // (HUGE_VAL) from underflow toward zero, which stays finite.
        std::string const copy(token);
        v = std::strtod(copy.c_str(), nullptr);
        if (std::isfinite(v)) return v;
      }
      if (res.ec != std::errc{} || !std::isfinite(v)) {
        throw ParseError(ErrorCode::NonFiniteFloat, line_, col,
                         "'" + std::string(token) + "' is not a finite float");
      }
      return v;
    }
    std::int64_t v = 0;
    auto const res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (res.ec != std::errc{}) {
      throw ParseError(ErrorCode::SyntaxError, line_, col,
                       "integer '" + std::string(token) + "' out of range");
    }
    return v;
  }

  std::string string() {
    expect('"', "'\"'");
    std::string out;
    while (true) {
      if (at_end() || peek() == '\n') fail(ErrorCode::SyntaxError, "unterminated string");
      char const c = peek();
      if (c == '"') { advance(); break; }
      if (c != '\\') {
        out += c;
        advance();
        continue;
      }
      advance();
      if (at_end()) fail(ErrorCode::SyntaxError, "unterminated escape");
      char const e = peek();
      switch (e) {
        case '"': out += '"'; advance(); break;
        case '\\': out += '\\'; advance(); break;
        case 'n': out += '\n'; advance(); break;
        case 't': out += '\t'; advance(); break;
        case 'r': out += '\r'; advance(); break;
        case 'u': {
          advance();
          std::uint32_t cp = 0;
          for (int i = 0; i < 4; ++i) {
            if (at_end()) fail(ErrorCode::SyntaxError, "short \\u escape");
            char const h = peek();
            std::uint32_t d = 0;
            if (is_digit(h)) d = h - '0';
            else if (h >= 'a' && h <= 'f') d = h - 'a' + 10;
            else if (h >= 'A' && h <= 'F') d = h - 'A' + 10;
            else fail(ErrorCode::SyntaxError, "bad hex digit in \\u escape");
            cp = (cp << 4) | d;
            advance();
          }
          if (cp >= 0xD800 && cp <= 0xDFFF) {
            fail(ErrorCode::SyntaxError, "surrogate code point in \\u escape");
          }
          append_utf8(out, cp);
          break;
        }
        default:
          fail(ErrorCode::SyntaxError, std::string("unknown escape '\\") + e + "'");
      }
    }
    return out;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t line_start_ = 0;
};

}  // namespace

OptionsSet parse_options(std::string_view text) { return Parser(text).document(); }

OptionValue text_to_value(std::string_view text) { return Parser(text).single_value(); }

}  // namespace provkit
