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

#include <bit>
#include <cstring>
#include <random>

#include "provkit/container.hpp"
#include "provkit/error.hpp"
#include "test_support.hpp"

using namespace provkit;
using provkit::testing::TempDir;
using provkit::testing::slurp;
using provkit::testing::spit;

namespace {

ErrorCode read_error(std::filesystem::path const& p, std::string_view block) {
  try {
    read_block(p, block);
  } catch (Error const& e) {
    return e.code();
  }
  FAIL("read succeeded");
  return ErrorCode::IoFailure;
}

void le(std::string& out, std::uint64_t v, int n) {
  for (int i = 0; i < n; ++i) out += static_cast<char>((v >> (8 * i)) & 0xFF);
}

}  // namespace

TEST_CASE("layout is bit-exact for a hand-assembled file") {
  TempDir dir;
  std::vector<Block> blocks = {{"events", "abc"}, {"x", ""}};
  write_container(dir / "f.pdc", blocks);

  // Independent assembly of the documented layout.
  std::string expected = "PDC1\r\n\x1a\n";
  le(expected, 1, 4);
  le(expected, 20 + 3, 8);
  expected += "abc";
  std::string toc;
  le(toc, 2, 4);
  le(toc, 6, 2);
  toc += "events";
  le(toc, 20, 8);
  le(toc, 3, 8);
  le(toc, crc32c(std::string_view("abc")), 4);
  le(toc, 1, 2);
  toc += "x";
  le(toc, 23, 8);
  le(toc, 0, 8);
  le(toc, 0, 4);
  expected += toc;
  le(expected, crc32c(toc), 4);

  CHECK(slurp(dir / "f.pdc") == expected);
}

TEST_CASE("empty payload") {
  TempDir dir;
  std::vector<Block> blocks = {{"events", ""}};
  write_container(dir / "e.pdc", blocks);
  ContainerReader r(dir / "e.pdc");
  REQUIRE(r.toc().size() == 1);
  CHECK(r.read_block("events").empty());
}

TEST_CASE("rewriting the same blocks yields identical bytes") {
  TempDir dir;
  std::vector<Block> blocks = {{"events", "payload"}, {"info", "A.X = 1\n"}};
  write_container(dir / "a.pdc", blocks);
  write_container(dir / "b.pdc", blocks);
  CHECK(slurp(dir / "a.pdc") == slurp(dir / "b.pdc"));
}

TEST_CASE("round trip of pseudo-random blocks") {
  TempDir dir;
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Block> blocks;
    for (int i = 0; i < 3; ++i) {
      std::string payload(rng() % 4097, '\0');
      for (auto& c : payload) c = static_cast<char>(rng());
      blocks.push_back({"b" + std::to_string(i), payload});
    }
    auto const toc = write_container(dir / "r.pdc", blocks);
    ContainerReader r(dir / "r.pdc");
    CHECK(r.toc() == toc);
    auto const back = r.read_all();
    REQUIRE(back.size() == 3);
    for (int i = 0; i < 3; ++i) {
      CHECK(back[i].name == blocks[i].name);
      CHECK(back[i].payload == blocks[i].payload);
      CHECK(toc[i].crc32c == crc32c(blocks[i].payload));
    }
  }
}

TEST_CASE("writer rejects duplicates and non-canonical info") {
  TempDir dir;
  std::vector<Block> dup = {{"a", "1"}, {"a", "2"}};
  CHECK_THROWS_WITH_AS(write_container(dir / "d.pdc", dup), doctest::Contains("DuplicateBlock"), Error);
  CHECK_FALSE(std::filesystem::exists(dir / "d.pdc"));
  CHECK_FALSE(std::filesystem::exists(dir / "d.pdc.tmp"));

  std::vector<Block> bad_info = {{"info", "B.Y = 1\nA.X = 2\n"}};
  try {
    write_container(dir / "i.pdc", bad_info);
    FAIL("accepted unsorted info");
  } catch (Error const& e) {
    CHECK(e.code() == ErrorCode::ReservedNameMisuse);
  }
  std::vector<Block> junk_info = {{"info", "not options"}};
  CHECK_THROWS_AS(write_container(dir / "j.pdc", junk_info), Error);
}

TEST_CASE("unknown block, bad magic, unsupported version") {
  TempDir dir;
  std::vector<Block> blocks = {{"events", "xyz"}};
  write_container(dir / "ok.pdc", blocks);
  CHECK(read_error(dir / "ok.pdc", "ghost") == ErrorCode::UnknownBlock);

  auto bytes = slurp(dir / "ok.pdc");
  auto bad = bytes;
  bad[0] = 'X';
  spit(dir / "magic.pdc", bad);
  CHECK(read_error(dir / "magic.pdc", "events") == ErrorCode::BadMagic);

  spit(dir / "short.pdc", "PD");
  CHECK(read_error(dir / "short.pdc", "events") == ErrorCode::BadMagic);

  auto v2 = bytes;
  v2[8] = 2;
  spit(dir / "v2.pdc", v2);
  CHECK(read_error(dir / "v2.pdc", "events") == ErrorCode::UnsupportedVersion);

  auto truncated = bytes.substr(0, bytes.size() - 3);
  spit(dir / "trunc.pdc", truncated);
  auto const code = read_error(dir / "trunc.pdc", "events");
  CHECK((code == ErrorCode::ChecksumMismatch || code == ErrorCode::CorruptFile));

  CHECK(read_error(dir / "missing.pdc", "events") == ErrorCode::IoFailure);
}

TEST_CASE("every single payload byte flip is detected") {
  TempDir dir;
  std::vector<Block> blocks = {{"events", "0123456789abcdef"}, {"aux", "zz"}};
  auto const toc = write_container(dir / "s.pdc", blocks);
  auto const bytes = slurp(dir / "s.pdc");
  for (auto const& e : toc) {
    for (std::uint64_t pos = e.offset; pos < e.offset + e.length; ++pos) {
      auto mutated = bytes;
      mutated[pos] = static_cast<char>(mutated[pos] ^ 0x01);
      spit(dir / "m.pdc", mutated);
      CHECK(read_error(dir / "m.pdc", e.name) == ErrorCode::ChecksumMismatch);
    }
  }
}

TEST_CASE("TOC corruption is detected") {
  TempDir dir;
  std::vector<Block> blocks = {{"events", "abc"}};
  write_container(dir / "t.pdc", blocks);
  auto bytes = slurp(dir / "t.pdc");
  for (std::size_t pos = 23; pos < bytes.size(); ++pos) {
    auto mutated = bytes;
    mutated[pos] = static_cast<char>(mutated[pos] ^ 0x40);
    spit(dir / "m.pdc", mutated);
    CHECK(read_error(dir / "m.pdc", "events") == ErrorCode::ChecksumMismatch);
  }
}

TEST_CASE("extract_info reads only the header, TOC and info block") {
  TempDir dir;
  std::string big(1 << 20, 'x');
  std::vector<Block> blocks = {{"events", big}, {"info", "A.X = 1\nMetaDataSvc.Enabled = true\n"}};
  write_container(dir / "big.pdc", blocks);
  ContainerReader r(dir / "big.pdc");
  auto const info = extract_info(r);
  CHECK(info.size() == 2);
  CHECK(*info.find("A.X") == "1");
  CHECK(r.source().bytes_read() < 200);
}

TEST_CASE("extract_info without an info block") {
  TempDir dir;
  std::vector<Block> blocks = {{"events", ""}};
  write_container(dir / "n.pdc", blocks);
  try {
    extract_info(dir / "n.pdc");
    FAIL("no error");
  } catch (Error const& e) {
    CHECK(e.code() == ErrorCode::MissingInfo);
  }
}

TEST_CASE("extract, re-embed, extract again") {
  TempDir dir;
  std::vector<Block> blocks = {{"events", "e"}, {"info", "A.S = \"x\"\nA.X = [1, 2]\n"}};
  write_container(dir / "o.pdc", blocks);
  auto const first = extract_info(dir / "o.pdc");
  std::vector<Block> copy = {{"events", read_block(dir / "o.pdc", "events")}, {"info", first.emit()}};
  write_container(dir / "c.pdc", copy);
  CHECK(extract_info(dir / "c.pdc") == first);
}

TEST_CASE("streaming writer") {
  TempDir dir;
  {
    ContainerWriter w(dir / "s.pdc");
    w.begin_block("events");
    w.append("ab");
    w.append("cd");
    CHECK_THROWS_AS(w.begin_block("other"), Error);
    auto const& e = w.end_block();
    CHECK(e.length == 4);
    CHECK(e.crc32c == crc32c(std::string_view("abcd")));
    w.commit();
  }
  CHECK(read_block(dir / "s.pdc", "events") == "abcd");
  {
    ContainerWriter abandoned(dir / "gone.pdc");
    abandoned.write_block("events", "x");
  }
  CHECK_FALSE(std::filesystem::exists(dir / "gone.pdc"));
  CHECK_FALSE(std::filesystem::exists(dir / "gone.pdc.tmp"));
}

TEST_CASE("events payload codec") {
  std::vector<std::string> fields = {"f0", "f1"};
  auto payload = encode_events_header(fields);
  double const r0[] = {0.25, -1.0};
  double const r1[] = {1e300, 5e-324};
  append_event(payload, r0);
  append_event(payload, r1);
  CHECK(payload.size() == 4 + 2 * (2 + 2) + 4 * 8);
  // little-endian IEEE-754
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) {
    bits |= std::uint64_t{static_cast<unsigned char>(payload[12 + i])} << (8 * i);
  }
  CHECK(std::bit_cast<double>(bits) == 0.25);

  auto const t = decode_events(payload);
  CHECK(t.fields == fields);
  REQUIRE(t.rows() == 2);
  CHECK(t.row(1)[0] == 1e300);
  CHECK(t.row(1)[1] == 5e-324);

  CHECK_THROWS_AS(decode_events(payload.substr(0, payload.size() - 1)), Error);
  CHECK_THROWS_AS(decode_events("\x01"), Error);
  CHECK(decode_events(encode_events_header({})).rows() == 0);
}
