// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// STAC1 binary array container.
//
// Layout (all integers little-endian):
//   magic    5 bytes  "STAC1"
//   count    uint32   number of arrays
//   count directory entries, each:
//     name_len uint16, name bytes (UTF-8, no terminator)
//     dtype    uint8  (see DType)
//     ndim     uint8
//     dims     ndim x uint64
//   array payloads, raw little-endian, in directory order, no padding.

#include "tacsim/core/error.hpp"

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace tacsim {

static_assert(std::endian::native == std::endian::little, "STAC1 I/O assumes a little-endian host");

enum class DType : std::uint8_t { u8 = 1, u16 = 2, i32 = 3, i64 = 4, u64 = 5, f32 = 6, f64 = 7 };

inline std::size_t dtype_size(DType t) {
  switch (t) {
  case DType::u8: return 1;
  case DType::u16: return 2;
  case DType::i32: return 4;
  case DType::f32: return 4;
  case DType::i64: return 8;
  case DType::u64: return 8;
  case DType::f64: return 8;
  }
  throw FormatError("STAC1: unknown dtype code " + std::to_string(static_cast<int>(t)));
}

template <typename T> constexpr DType dtype_of() {
  if constexpr (std::is_same_v<T, std::uint8_t>) return DType::u8;
  else if constexpr (std::is_same_v<T, std::uint16_t>) return DType::u16;
  else if constexpr (std::is_same_v<T, std::int32_t>) return DType::i32;
  else if constexpr (std::is_same_v<T, std::int64_t>) return DType::i64;
  else if constexpr (std::is_same_v<T, std::uint64_t>) return DType::u64;
  else if constexpr (std::is_same_v<T, float>) return DType::f32;
  else if constexpr (std::is_same_v<T, double>) return DType::f64;
  else static_assert(sizeof(T) == 0, "unsupported STAC1 element type");
}

struct ArrayEntry {
  std::string name;
  DType dtype = DType::u8;
  std::vector<std::uint64_t> shape;
  std::vector<std::byte> data;

  std::uint64_t element_count() const {
    return std::accumulate(shape.begin(), shape.end(), std::uint64_t{1}, std::multiplies<>());
  }
};

class Container {
public:
  static constexpr std::string_view kMagic = "STAC1";

  template <typename T>
  void add(std::string name, std::vector<std::uint64_t> shape, std::span<const T> values) {
    ArrayEntry e;
    e.name = std::move(name);
    e.dtype = dtype_of<T>();
    e.shape = std::move(shape);
    if (e.element_count() != values.size()) {
      throw ValidationError("STAC1: array '" + e.name + "' shape does not match element count");
    }
    if (e.name.empty() || e.name.size() > 0xffff) {
      throw ValidationError("STAC1: invalid array name");
    }
    if (e.shape.size() > 0xff) {
      throw ValidationError("STAC1: too many dimensions");
    }
    auto bytes = std::as_bytes(values);
    e.data.assign(bytes.begin(), bytes.end());
    put(std::move(e));
  }

  template <typename T>
  void add(std::string name, std::vector<std::uint64_t> shape, const std::vector<T>& values) {
    add<T>(std::move(name), std::move(shape), std::span<const T>(values));
  }

  template <typename T> void add_scalar(std::string name, T value) {
    add<T>(std::move(name), {1}, std::span<const T>(&value, 1));
  }

  bool has(std::string_view name) const { return find(name) != nullptr; }

  const ArrayEntry& entry(std::string_view name) const {
    const ArrayEntry* e = find(name);
    if (!e) {
      throw FormatError("STAC1: missing array '" + std::string(name) + "'");
    }
    return *e;
  }

  const std::vector<std::uint64_t>& shape(std::string_view name) const { return entry(name).shape; }

  template <typename T> std::vector<T> get(std::string_view name) const {
    const ArrayEntry& e = entry(name);
    if (e.dtype != dtype_of<T>()) {
      throw FormatError("STAC1: array '" + e.name + "' has unexpected dtype");
    }
    std::vector<T> out(e.element_count());
    std::memcpy(out.data(), e.data.data(), e.data.size());
    return out;
  }

  template <typename T> T scalar(std::string_view name) const {
    auto v = get<T>(name);
    if (v.size() != 1) {
      throw FormatError("STAC1: array '" + std::string(name) + "' is not a scalar");
    }
    return v.front();
  }

  const std::vector<ArrayEntry>& entries() const { return entries_; }

  std::vector<std::byte> to_bytes() const {
    std::vector<std::byte> out;
    auto put_raw = [&out](const void* p, std::size_t n) {
      const auto* b = static_cast<const std::byte*>(p);
      out.insert(out.end(), b, b + n);
    };
    put_raw(kMagic.data(), kMagic.size());
    const auto count = static_cast<std::uint32_t>(entries_.size());
    put_raw(&count, sizeof count);
    for (const auto& e : entries_) {
      const auto len = static_cast<std::uint16_t>(e.name.size());
      put_raw(&len, sizeof len);
      put_raw(e.name.data(), e.name.size());
      const auto code = static_cast<std::uint8_t>(e.dtype);
      const auto ndim = static_cast<std::uint8_t>(e.shape.size());
      put_raw(&code, 1);
      put_raw(&ndim, 1);
      put_raw(e.shape.data(), e.shape.size() * sizeof(std::uint64_t));
    }
    for (const auto& e : entries_) {
      put_raw(e.data.data(), e.data.size());
    }
    return out;
  }

  static Container from_bytes(std::span<const std::byte> bytes) {
    std::size_t pos = 0;
    auto take = [&](void* dst, std::size_t n) {
      if (pos + n > bytes.size()) {
        throw FormatError("STAC1: truncated data");
      }
      std::memcpy(dst, bytes.data() + pos, n);
      pos += n;
    };
    char magic[5];
    take(magic, 5);
    if (std::string_view(magic, 5) != kMagic) {
      throw FormatError("STAC1: bad magic bytes");
    }
    std::uint32_t count = 0;
    take(&count, sizeof count);
    Container c;
    std::vector<ArrayEntry> dir(count);
    for (auto& e : dir) {
      std::uint16_t len = 0;
      take(&len, sizeof len);
      e.name.resize(len);
      take(e.name.data(), len);
      std::uint8_t code = 0, ndim = 0;
      take(&code, 1);
      take(&ndim, 1);
      e.dtype = static_cast<DType>(code);
      dtype_size(e.dtype);
      e.shape.resize(ndim);
      take(e.shape.data(), ndim * sizeof(std::uint64_t));
    }
    for (auto& e : dir) {
      const std::uint64_t n = e.element_count() * dtype_size(e.dtype);
      if (pos + n > bytes.size()) {
        throw FormatError("STAC1: truncated payload for '" + e.name + "'");
      }
      e.data.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                    bytes.begin() + static_cast<std::ptrdiff_t>(pos + n));
      pos += n;
      c.put(std::move(e));
    }
    if (pos != bytes.size()) {
      throw FormatError("STAC1: trailing bytes after payload");
    }
    return c;
  }

  void write(const std::filesystem::path& path) const {
    const auto bytes = to_bytes();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
      throw IoError("write failed for '" + path.string() + "'");
    }
  }

  static Container read(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw IoError("cannot open '" + path.string() + "'");
    }
    std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_bytes(std::as_bytes(std::span<const char>(raw)));
  }

private:
  const ArrayEntry* find(std::string_view name) const {
    auto it = std::find_if(entries_.begin(), entries_.end(), [&](const ArrayEntry& e) { return e.name == name; });
    return it == entries_.end() ? nullptr : &*it;
  }

  void put(ArrayEntry e) {
    auto it = std::find_if(entries_.begin(), entries_.end(), [&](const ArrayEntry& x) { return x.name == e.name; });
    if (it != entries_.end()) {
      *it = std::move(e);
    } else {
      entries_.push_back(std::move(e));
    }
  }

  std::vector<ArrayEntry> entries_;
};

} // namespace tacsim
