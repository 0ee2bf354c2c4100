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

#include "provkit/container.hpp"

#include <bit>
#include <cstring>
#include <unordered_set>

#include "provkit/error.hpp"

namespace provkit {

namespace fs = std::filesystem;

namespace {

template <typename T>
void put_le(std::string& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out += static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xFF);
  }
}

template <typename T>
T get_le(std::string_view in, std::size_t at) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    v |= std::uint64_t{static_cast<unsigned char>(in[at + i])} << (8 * i);
  }
  return static_cast<T>(v);
}

/// Bounds-checked little-endian cursor over an in-memory buffer.
class LeReader {
 public:
  LeReader(std::string_view data, ErrorCode on_short, char const* what)
      : data_(data), on_short_(on_short), what_(what) {}

  template <typename T>
  T get() {
    need(sizeof(T));
    auto v = get_le<T>(data_, pos_);
    pos_ += sizeof(T);
    return v;
  }
  std::string_view bytes(std::size_t n) {
    need(n);
    auto s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const noexcept { return data_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw Error(on_short_, std::string(what_) + " is truncated");
  }

  std::string_view data_;
  std::size_t pos_ = 0;
  ErrorCode on_short_;
  char const* what_;
};

std::string header_bytes(std::uint64_t toc_offset) {
  std::string h(reinterpret_cast<char const*>(kContainerMagic.data()), kContainerMagic.size());
  put_le<std::uint32_t>(h, kContainerVersion);
  put_le<std::uint64_t>(h, toc_offset);
  return h;
}

bool is_canonical_options(std::string_view payload) {
  try {
    return emit_canonical(parse_options(payload)) == payload;
  } catch (Error const&) {
    return false;
  }
}

}  // namespace

// --- writer ---------------------------------------------------------------

ContainerWriter::ContainerWriter(fs::path path)
    : path_(std::move(path)), tmp_path_(path_.string() + ".tmp") {
  out_.open(tmp_path_, std::ios::binary | std::ios::trunc);
  if (!out_) throw Error(ErrorCode::WriteFailure, "cannot open " + tmp_path_.string());
  write_raw(header_bytes(0));
}

ContainerWriter::~ContainerWriter() {
  if (!committed_) {
    out_.close();
    std::error_code ec;
    fs::remove(tmp_path_, ec);
  }
}

void ContainerWriter::write_raw(std::string_view bytes) {
  out_.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out_) throw Error(ErrorCode::WriteFailure, "write to " + tmp_path_.string() + " failed");
  position_ += bytes.size();
}

void ContainerWriter::check_name(std::string const& name) const {
  if (name.empty() || name.size() > 0xFFFF) {
    throw Error(ErrorCode::InvalidValue, "block name must be 1..65535 bytes");
  }
  for (auto const& e : toc_) {
    if (e.name == name) throw Error(ErrorCode::DuplicateBlock, "block '" + name + "' already written");
  }
}

void ContainerWriter::begin_block(std::string name) {
  if (open_block_) throw Error(ErrorCode::InvalidValue, "block '" + open_block_->name + "' still open");
  check_name(name);
  open_block_ = TocEntry{std::move(name), position_, 0, 0};
  running_crc_ = Crc32c{};
}

void ContainerWriter::append(std::string_view bytes) {
  if (!open_block_) throw Error(ErrorCode::InvalidValue, "no open block");
  write_raw(bytes);
  running_crc_.update(bytes);
  open_block_->length += bytes.size();
}

TocEntry const& ContainerWriter::end_block() {
  if (!open_block_) throw Error(ErrorCode::InvalidValue, "no open block");
  open_block_->crc32c = running_crc_.value();
  toc_.push_back(std::move(*open_block_));
  open_block_.reset();
  return toc_.back();
}

TocEntry const& ContainerWriter::write_block(std::string name, std::string_view payload) {
  if (name == kInfoBlock && !is_canonical_options(payload)) {
    throw Error(ErrorCode::ReservedNameMisuse,
                "'info' payload must be a canonical options document");
  }
  begin_block(std::move(name));
  append(payload);
  return end_block();
}

void ContainerWriter::commit() {
  if (committed_) return;
  if (open_block_) end_block();
  auto const toc_offset = position_;
  std::string toc;
  put_le<std::uint32_t>(toc, static_cast<std::uint32_t>(toc_.size()));
  for (auto const& e : toc_) {
    put_le<std::uint16_t>(toc, static_cast<std::uint16_t>(e.name.size()));
    toc += e.name;
    put_le<std::uint64_t>(toc, e.offset);
    put_le<std::uint64_t>(toc, e.length);
    put_le<std::uint32_t>(toc, e.crc32c);
  }
  put_le<std::uint32_t>(toc, crc32c(toc));
  write_raw(toc);
  out_.seekp(0);
  write_raw(header_bytes(toc_offset));
  out_.close();
  if (!out_) throw Error(ErrorCode::WriteFailure, "closing " + tmp_path_.string() + " failed");
  std::error_code ec;
  fs::rename(tmp_path_, path_, ec);
  if (ec) throw Error(ErrorCode::WriteFailure, "rename onto " + path_.string() + ": " + ec.message());
  committed_ = true;
}

std::vector<TocEntry> write_container(fs::path const& path, std::span<Block const> blocks) {
  ContainerWriter w(path);
  for (auto const& b : blocks) w.write_block(b.name, b.payload);
  w.commit();
  return w.toc();
}

// --- reader ---------------------------------------------------------------

FileSource::FileSource(fs::path const& path) : in_(path, std::ios::binary) {
  if (!in_) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  in_.seekg(0, std::ios::end);
  size_ = static_cast<std::uint64_t>(in_.tellg());
}

void FileSource::do_read_at(std::uint64_t offset, std::span<char> out) {
  if (offset > size_ || out.size() > size_ - offset) {
    throw Error(ErrorCode::CorruptFile, "read past end of file");
  }
  in_.clear();
  in_.seekg(static_cast<std::streamoff>(offset));
  in_.read(out.data(), static_cast<std::streamsize>(out.size()));
  if (!in_) throw Error(ErrorCode::IoFailure, "short read");
}

ContainerReader::ContainerReader(fs::path const& path)
    : ContainerReader(std::make_unique<FileSource>(path)) {}

ContainerReader::ContainerReader(std::unique_ptr<ByteSource> source)
    : source_(std::move(source)) {
  load();
}

void ContainerReader::load() {
  auto const size = source_->size();
  if (size < kContainerMagic.size()) throw Error(ErrorCode::BadMagic, "file too short for magic");
  std::string header(std::min<std::uint64_t>(size, kHeaderSize), '\0');
  source_->read_at(0, header);
  if (std::memcmp(header.data(), kContainerMagic.data(), kContainerMagic.size()) != 0) {
    throw Error(ErrorCode::BadMagic, "not a provkit container");
  }
  if (header.size() < kHeaderSize) throw Error(ErrorCode::CorruptFile, "header truncated");
  auto const version = get_le<std::uint32_t>(header, 8);
  if (version != kContainerVersion) {
    throw Error(ErrorCode::UnsupportedVersion, "format version " + std::to_string(version));
  }
  auto const toc_offset = get_le<std::uint64_t>(header, 12);
  if (toc_offset < kHeaderSize || toc_offset > size || size - toc_offset < 8) {
    throw Error(ErrorCode::CorruptFile, "TOC offset out of bounds");
  }

  std::string toc(size - toc_offset, '\0');
  source_->read_at(toc_offset, toc);
  std::string_view const body(toc.data(), toc.size() - 4);
  if (crc32c(body) != get_le<std::uint32_t>(toc, toc.size() - 4)) {
    throw Error(ErrorCode::ChecksumMismatch, "TOC checksum mismatch");
  }

  LeReader r(body, ErrorCode::CorruptFile, "TOC");
  auto const count = r.get<std::uint32_t>();
  std::uint64_t next_free = kHeaderSize;
  std::unordered_set<std::string> names;
  for (std::uint32_t i = 0; i < count; ++i) {
    TocEntry e;
    auto const len = r.get<std::uint16_t>();
    e.name = std::string(r.bytes(len));
    e.offset = r.get<std::uint64_t>();
    e.length = r.get<std::uint64_t>();
    e.crc32c = r.get<std::uint32_t>();
    if (e.offset < next_free || e.offset > toc_offset || e.length > toc_offset - e.offset) {
      throw Error(ErrorCode::CorruptFile, "block '" + e.name + "' lies outside the payload area");
    }
    if (!names.insert(e.name).second) {
      throw Error(ErrorCode::CorruptFile, "duplicate block '" + e.name + "'");
    }
    next_free = e.offset + e.length;
    toc_.push_back(std::move(e));
  }
  if (r.remaining() != 0) throw Error(ErrorCode::CorruptFile, "trailing bytes in TOC");
}

TocEntry const* ContainerReader::find(std::string_view name) const noexcept {
  for (auto const& e : toc_) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

std::string ContainerReader::read_block(std::string_view name) {
  auto const* e = find(name);
  if (e == nullptr) throw Error(ErrorCode::UnknownBlock, "no block named '" + std::string(name) + "'");
  std::string payload(e->length, '\0');
  source_->read_at(e->offset, payload);
  if (crc32c(payload) != e->crc32c) {
    throw Error(ErrorCode::ChecksumMismatch, "block '" + e->name + "' fails its CRC32C");
  }
  return payload;
}

std::vector<Block> ContainerReader::read_all() {
  std::vector<Block> out;
  for (auto const& e : toc_) out.push_back({e.name, read_block(e.name)});
  return out;
}

std::string read_block(fs::path const& path, std::string_view name) {
  ContainerReader r(path);
  return r.read_block(name);
}

MetadataDictionary extract_info(ContainerReader& reader) {
  if (!reader.has_block(kInfoBlock)) throw Error(ErrorCode::MissingInfo, "no provenance recorded");
  return MetadataDictionary::from_options(parse_options(reader.read_block(kInfoBlock)));
}

MetadataDictionary extract_info(fs::path const& path) {
  ContainerReader r(path);
  return extract_info(r);
}

// --- events payload -------------------------------------------------------

std::string encode_events_header(std::span<std::string const> fields) {
  std::string out;
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(fields.size()));
  for (auto const& f : fields) {
    if (f.size() > 0xFFFF) throw Error(ErrorCode::InvalidValue, "field name too long");
    put_le<std::uint16_t>(out, static_cast<std::uint16_t>(f.size()));
    out += f;
  }
  return out;
}

void append_event(std::string& out, std::span<double const> values) {
  for (double v : values) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
}

EventTable decode_events(std::string_view payload) {
  LeReader r(payload, ErrorCode::CorruptFile, "events payload");
  EventTable t;
  auto const count = r.get<std::uint32_t>();
  for (std::uint32_t i = 0; i < count; ++i) {
    auto const len = r.get<std::uint16_t>();
    t.fields.emplace_back(r.bytes(len));
  }
  auto const row_bytes = t.fields.size() * sizeof(double);
  if (row_bytes == 0) {
    if (r.remaining() != 0) throw Error(ErrorCode::CorruptFile, "values without fields");
    return t;
  }
  if (r.remaining() % row_bytes != 0) {
    throw Error(ErrorCode::CorruptFile, "events payload is not a whole number of rows");
  }
  t.values.reserve(r.remaining() / sizeof(double));
  while (r.remaining() > 0) t.values.push_back(std::bit_cast<double>(r.get<std::uint64_t>()));
  return t;
}

}  // namespace provkit
