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

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "provkit/options.hpp"

namespace provkit::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(std::string const& tag = "provkit") {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            (tag + "-" + std::to_string(rd()) + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(TempDir const&) = delete;
  TempDir& operator=(TempDir const&) = delete;

  std::filesystem::path const& path() const noexcept { return path_; }
  std::filesystem::path operator/(std::string const& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(std::filesystem::path const& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(std::filesystem::path const& p, std::string const& data) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << data;
}

/// Smallest %.{p-1}e precision whose output strtod's back to `v`. Independent
/// of std::to_chars.
inline int shortest_digits_oracle(double v) {
  for (int p = 1; p <= 17; ++p) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*e", p - 1, v);
    double const back = std::strtod(buf, nullptr);
    if (std::bit_cast<std::uint64_t>(back) == std::bit_cast<std::uint64_t>(v)) return p;
  }
  return 17;
}

/// printf-based scientific rendering at the oracle precision, e.g. "1.5e+20".
inline std::string shortest_scientific_oracle(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*e", shortest_digits_oracle(v) - 1, v);
  return buf;
}

/// Significant digits carried by a decimal literal such as "1.25e-3" or "100.0".
inline int significant_digits(std::string const& literal) {
  std::string mantissa = literal.substr(0, literal.find_first_of("eE"));
  std::string digits;
  for (char c : mantissa) {
    if (c >= '0' && c <= '9') digits += c;
  }
  auto const first = digits.find_first_not_of('0');
  if (first == std::string::npos) return 1;
  digits = digits.substr(first);
  digits.erase(digits.find_last_not_of('0') + 1);
  return static_cast<int>(digits.size());
}

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& rng() noexcept { return rng_; }

  std::uint64_t bits() { return rng_(); }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  bool coin() { return (rng_() & 1u) != 0; }

  double finite_double() {
    switch (below(4)) {
      case 0: {
        while (true) {
          double d = std::bit_cast<double>(bits());
          if (std::isfinite(d)) return d;
        }
      }
      case 1: return std::uniform_real_distribution<double>(-1e6, 1e6)(rng_);
      case 2: return static_cast<double>(static_cast<std::int64_t>(bits() % 2001) - 1000) / 8.0;
      default: {
        static constexpr double specials[] = {0.0, -0.0, 0.5, 1.0, -1.0, 1e-300, 5e-324,
                                              1.7976931348623157e308, 0.1, 1e21, 123456789.0};
        return specials[below(std::size(specials))];
      }
    }
  }

  std::int64_t integer() {
    switch (below(3)) {
      case 0: return static_cast<std::int64_t>(bits());
      case 1: return static_cast<std::int64_t>(below(2001)) - 1000;
      default: return coin() ? INT64_MIN : INT64_MAX;
    }
  }

  std::string text() {
    static char const* const pieces[] = {"a", "Z", " ", "\"", "\\", "\n", "\t", "\r", "#",
                                         "=", "[", "]", ",", "\x01", "\x7f", "é", "€",
                                         "𝄞", "v42r3", "DaVinci", " "};
    std::string s;
    auto const n = below(12);
    for (std::size_t i = 0; i < n; ++i) s += pieces[below(std::size(pieces))];
    return s;
  }

  std::string identifier() {
    static constexpr char first[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz_";
    static constexpr char rest[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz_0123456789";
    std::string s(1, first[below(sizeof(first) - 1)]);
    auto const n = below(8);
    for (std::size_t i = 0; i < n; ++i) s += rest[below(sizeof(rest) - 1)];
    return s;
  }

  std::string key() {
    std::string k = identifier();
    auto const segments = 1 + below(3);
    for (std::size_t i = 0; i < segments; ++i) {
      k += '.';
      k += (i > 0 && below(4) == 0) ? std::to_string(below(20)) : identifier();
    }
    return k;
  }

  Scalar scalar(ValueKind kind) {
    switch (kind) {
      case ValueKind::Integer: return integer();
      case ValueKind::Float: return finite_double();
      case ValueKind::Boolean: return coin();
      default: return text();
    }
  }

  OptionValue value() {
    auto const kind = static_cast<ValueKind>(below(5));
    if (kind != ValueKind::List) return OptionValue::from_scalar(scalar(kind));
    auto const element = static_cast<ValueKind>(below(4));
    std::vector<Scalar> items;
    auto const n = below(6);
    for (std::size_t i = 0; i < n; ++i) items.push_back(scalar(element));
    return ValueList(std::move(items));
  }

  OptionsSet options_set(std::size_t max_keys = 50) {
    OptionsSet s;
    auto const n = below(max_keys + 1);
    for (std::size_t i = 0; i < n; ++i) s.set(key(), value());
    return s;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace provkit::testing
