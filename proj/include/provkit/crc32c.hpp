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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace provkit {

/// Incremental CRC-32C (Castagnoli). `value()` may be read at any point.
class Crc32c {
 public:
  void update(std::span<std::byte const> data) noexcept;
  void update(std::string_view data) noexcept {
    update(std::as_bytes(std::span(data.data(), data.size())));
  }
  std::uint32_t value() const noexcept { return ~state_; }

 private:
  std::uint32_t state_ = 0xFFFFFFFFu;
};

inline std::uint32_t crc32c(std::span<std::byte const> data) noexcept {
  Crc32c c;
  c.update(data);
  return c.value();
}

inline std::uint32_t crc32c(std::string_view data) noexcept {
  Crc32c c;
  c.update(data);
  return c.value();
}

}  // namespace provkit
