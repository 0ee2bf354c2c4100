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

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "provkit/crc32c.hpp"
#include "provkit/metadata.hpp"

namespace provkit {

// On-disk layout, all integers little-endian:
//
//   magic[8] | format_version u32 | toc_offset u64 | payloads... | TOC | crc32c(TOC) u32
//
// TOC: entry_count u32, then per entry
//   name_len u16 | name | offset u64 | length u64 | crc32c u32
// Entries are stored in write order.

inline constexpr std::array<std::uint8_t, 8> kContainerMagic = {
    0x50, 0x44, 0x43, 0x31, 0x0D, 0x0A, 0x1A, 0x0A};
inline constexpr std::uint32_t kContainerVersion = 1;
inline constexpr std::uint64_t kHeaderSize = 20;

inline constexpr std::string_view kInfoBlock = "info";
inline constexpr std::string_view kEventsBlock = "events";
inline constexpr std::string_view kSummaryBlock = "summary";

/// Payloads are raw bytes held in a std::string.
struct Block {
  std::string name;
  std::string payload;
};

struct TocEntry {
  std::string name;
  std::uint64_t offset = 0;
  std::uint64_t length = 0;
  std::uint32_t crc32c = 0;

  friend bool operator==(TocEntry const&, TocEntry const&) = default;
};

/// Streams blocks into `<path>.tmp` and renames onto `path` on commit().
/// An uncommitted writer removes its temporary file on destruction.
class ContainerWriter {
 public:
  explicit ContainerWriter(std::filesystem::path path);
  ~ContainerWriter();
  ContainerWriter(ContainerWriter const&) = delete;
  ContainerWriter& operator=(ContainerWriter const&) = delete;

  void begin_block(std::string name);
  void append(std::string_view bytes);
  TocEntry const& end_block();
  TocEntry const& write_block(std::string name, std::string_view payload);

  bool in_block() const noexcept { return open_block_.has_value(); }
  std::vector<TocEntry> const& toc() const noexcept { return toc_; }
  std::filesystem::path const& path() const noexcept { return path_; }

  void commit();

 private:
  void write_raw(std::string_view bytes);
  void check_name(std::string const& name) const;

  std::filesystem::path path_;
  std::filesystem::path tmp_path_;
  std::ofstream out_;
  std::uint64_t position_ = 0;
  std::optional<TocEntry> open_block_;
  Crc32c running_crc_;
  std::vector<TocEntry> toc_;
  bool committed_ = false;
};

/// Writes all blocks in order. Returns the TOC, i.e. every payload checksum.
std::vector<TocEntry> write_container(std::filesystem::path const& path,
                                      std::span<Block const> blocks);

/// Random-access byte source with a running count of bytes read.
class ByteSource {
 public:
  virtual ~ByteSource() = default;
  virtual std::uint64_t size() const = 0;

  void read_at(std::uint64_t offset, std::span<char> out) {
    do_read_at(offset, out);
    bytes_read_ += out.size();
  }
  std::uint64_t bytes_read() const noexcept { return bytes_read_; }

 protected:
  virtual void do_read_at(std::uint64_t offset, std::span<char> out) = 0;

 private:
  std::uint64_t bytes_read_ = 0;
};

class FileSource final : public ByteSource {
 public:
  explicit FileSource(std::filesystem::path const& path);
  std::uint64_t size() const override { return size_; }

 protected:
  void do_read_at(std::uint64_t offset, std::span<char> out) override;

 private:
  std::ifstream in_;
  std::uint64_t size_ = 0;
};

/// Reads the header and TOC on construction; block reads seek directly to
/// the requested payload and verify its CRC.
class ContainerReader {
 public:
  explicit ContainerReader(std::filesystem::path const& path);
  explicit ContainerReader(std::unique_ptr<ByteSource> source);

  std::vector<TocEntry> const& toc() const noexcept { return toc_; }
  TocEntry const* find(std::string_view name) const noexcept;
  bool has_block(std::string_view name) const noexcept { return find(name) != nullptr; }

  std::string read_block(std::string_view name);
  std::vector<Block> read_all();

  ByteSource const& source() const noexcept { return *source_; }

 private:
  void load();

  std::unique_ptr<ByteSource> source_;
  std::vector<TocEntry> toc_;
};

std::string read_block(std::filesystem::path const& path, std::string_view name);

/// Throws Error{MissingInfo} when the container carries no `info` block.
MetadataDictionary extract_info(ContainerReader& reader);
MetadataDictionary extract_info(std::filesystem::path const& path);

// --- events payload -------------------------------------------------------
//
// field_count u32 | per field: name_len u16, name | per event: f64 per field

struct EventTable {
  std::vector<std::string> fields;
  std::vector<double> values;  // row-major

  std::size_t rows() const noexcept {
    return fields.empty() ? 0 : values.size() / fields.size();
  }
  std::span<double const> row(std::size_t i) const {
    return std::span(values).subspan(i * fields.size(), fields.size());
  }
};

std::string encode_events_header(std::span<std::string const> fields);
void append_event(std::string& out, std::span<double const> values);
EventTable decode_events(std::string_view payload);

}  // namespace provkit
