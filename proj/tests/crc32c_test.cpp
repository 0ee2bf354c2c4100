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

#include <doctest.h>

#include <random>
#include <string>

#include "provkit/crc32c.hpp"

using namespace provkit;

namespace {

// Bit-at-a-time reference over the reflected Castagnoli polynomial.
std::uint32_t crc32c_bitwise(std::string_view data) {
  std::uint32_t c = 0xFFFFFFFFu;
  for (unsigned char b : data) {
    c ^= b;
    for (int k = 0; k < 8; ++k) c = (c >> 1) ^ ((c & 1u) ? 0x82F63B78u : 0u);
  }
  return ~c;
}

}  // namespace

TEST_CASE("crc32c check values") {
  CHECK(crc32c(std::string_view("123456789")) == 0xE3069283u);
  CHECK(crc32c(std::string_view("")) == 0x00000000u);
  CHECK(crc32c(std::string(32, '\0')) == 0x8A9136AAu);
  CHECK(crc32c(std::string(32, '\xff')) == 0x62A8AB43u);
}

TEST_CASE("crc32c matches the bitwise reference and is incremental") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    std::string data(rng() % 300, '\0');
    for (auto& c : data) c = static_cast<char>(rng());
    CHECK(crc32c(data) == crc32c_bitwise(data));
    auto const cut = data.empty() ? 0 : rng() % data.size();
    Crc32c inc;
    inc.update(std::string_view(data).substr(0, cut));
    inc.update(std::string_view(data).substr(cut));
    CHECK(inc.value() == crc32c_bitwise(data));
  }
}
