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

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace provkit {

enum class ValueKind : std::uint8_t { Integer, Float, Boolean, Text, List };

std::string_view to_string(ValueKind kind) noexcept;

using Scalar = std::variant<std::int64_t, double, bool, std::string>;

/// Homogeneous, non-nested sequence of scalars. An empty list has no
/// element kind.
class ValueList {
 public:
  ValueList() = default;
  /// Throws Error{HeterogeneousList} when the items differ in kind.
  explicit ValueList(std::vector<Scalar> items);

  std::vector<Scalar> const& items() const noexcept { return items_; }
  std::optional<ValueKind> element_kind() const noexcept;
  bool empty() const noexcept { return items_.empty(); }
  std::size_t size() const noexcept { return items_.size(); }

 private:
  std::vector<Scalar> items_;
};

/// Typed configuration value. Floats are always finite; equality on
/// floats is bitwise, so 0.0 and -0.0 are distinct values.
class OptionValue {
 public:
  using Storage =
      std::variant<std::int64_t, double, bool, std::string, ValueList>;

  OptionValue() : storage_(std::int64_t{0}) {}
  OptionValue(std::int64_t v) : storage_(v) {}  // NOLINT
  OptionValue(int v) : storage_(std::int64_t{v}) {}  // NOLINT
  /// Throws Error{NonFiniteFloat} for NaN or infinities.
  OptionValue(double v);  // NOLINT
  OptionValue(bool v) : storage_(v) {}  // NOLINT
  OptionValue(std::string v) : storage_(std::move(v)) {}  // NOLINT
  OptionValue(char const* v) : storage_(std::string(v)) {}  // NOLINT
  OptionValue(ValueList v) : storage_(std::move(v)) {}  // NOLINT
  /// Throws Error{NonFiniteFloat} if the scalar is a non-finite float.
  static OptionValue from_scalar(Scalar s);

  ValueKind kind() const noexcept;
  Storage const& storage() const noexcept { return storage_; }

  bool is_integer() const noexcept { return kind() == ValueKind::Integer; }
  bool is_float() const noexcept { return kind() == ValueKind::Float; }
  bool is_boolean() const noexcept { return kind() == ValueKind::Boolean; }
  bool is_text() const noexcept { return kind() == ValueKind::Text; }
  bool is_list() const noexcept { return kind() == ValueKind::List; }

  std::int64_t as_integer() const { return std::get<std::int64_t>(storage_); }
  double as_float() const { return std::get<double>(storage_); }
  bool as_boolean() const { return std::get<bool>(storage_); }
  std::string const& as_text() const { return std::get<std::string>(storage_); }
  ValueList const& as_list() const { return std::get<ValueList>(storage_); }

  friend bool operator==(OptionValue const& a, OptionValue const& b) noexcept;

 private:
  Storage storage_;
};

bool scalar_equal(Scalar const& a, Scalar const& b) noexcept;
ValueKind scalar_kind(Scalar const& s) noexcept;

/// `Component.Property[.Sub...]`. The component segment is an identifier;
/// later segments are identifiers or decimal indices.
class OptionKey {
 public:
  /// Throws Error{MalformedKey}.
  static OptionKey parse(std::string_view dotted);
  static bool is_valid(std::string_view dotted) noexcept;

  OptionKey(std::string component, std::string property);

  std::string const& component() const noexcept { return component_; }
  std::string const& property() const noexcept { return property_; }
  std::string full() const { return component_ + "." + property_; }

  friend bool operator==(OptionKey const& a, OptionKey const& b) = default;
  friend std::strong_ordering operator<=>(OptionKey const& a,
                                          OptionKey const& b) {
    return a.full() <=> b.full();
  }

 private:
  std::string component_;
  std::string property_;
};

bool is_identifier(std::string_view s) noexcept;

/// Keyed collection of assignments, iterated in byte order of the full
/// dotted key.
class OptionsSet {
 public:
  using Map = std::map<std::string, std::pair<OptionKey, OptionValue>>;

  class const_iterator {
   public:
    using value_type = std::pair<OptionKey, OptionValue>;
    using reference = value_type const&;
    using pointer = value_type const*;
    using difference_type = std::ptrdiff_t;
    using iterator_category = std::bidirectional_iterator_tag;

    const_iterator() = default;
    explicit const_iterator(Map::const_iterator it) : it_(it) {}
    reference operator*() const { return it_->second; }
    pointer operator->() const { return &it_->second; }
    const_iterator& operator++() { ++it_; return *this; }
    const_iterator operator++(int) { auto t = *this; ++it_; return t; }
    const_iterator& operator--() { --it_; return *this; }
    const_iterator operator--(int) { auto t = *this; --it_; return t; }
    friend bool operator==(const_iterator const&, const_iterator const&) = default;

   private:
    Map::const_iterator it_;
  };

  void set(OptionKey const& key, OptionValue value);
  void set(std::string_view dotted, OptionValue value) {
    set(OptionKey::parse(dotted), std::move(value));
  }
  bool erase(std::string_view dotted);

  OptionValue const* find(std::string_view dotted) const;
  bool contains(std::string_view dotted) const { return find(dotted) != nullptr; }

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const_iterator begin() const { return const_iterator(entries_.begin()); }
  const_iterator end() const { return const_iterator(entries_.end()); }

  friend bool operator==(OptionsSet const& a, OptionsSet const& b) noexcept;

 private:
  Map entries_;
};

/// Parses a job-options document. Later assignments to a key override
/// earlier ones. Throws ParseError.
OptionsSet parse_options(std::string_view text);

/// Union of keys; `overlay` wins on conflicts.
OptionsSet merge(OptionsSet const& base, OptionsSet const& overlay);

/// Canonical flat document: sorted keys, one `key = value` per line, LF.
std::string emit_canonical(OptionsSet const& set);

std::string value_to_text(OptionValue const& v);
/// Parses a single value token, e.g. `[1, 2]` or `"x"`. Throws ParseError.
OptionValue text_to_value(std::string_view text);

/// Shortest decimal that round-trips to the same double, always carrying
/// a '.' or an exponent.
std::string format_float(double v);
std::string quote_text(std::string_view s);

}  // namespace provkit
