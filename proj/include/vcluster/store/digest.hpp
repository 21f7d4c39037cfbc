// Copyright 2026 The vcluster Authors
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

#include <openssl/evp.h>

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "vcluster/core/error.hpp"

namespace vcluster::store {

/// A 32-byte content hash, rendered as 64 lowercase hex characters.
struct Digest {
  std::array<std::uint8_t, 32> bytes{};

  auto operator<=>(const Digest&) const = default;

  std::string hex() const {
    static constexpr char alphabet[] = "0123456789abcdef";
    std::string out(64, '0');
    for (std::size_t i = 0; i < bytes.size(); ++i) {
      out[2 * i] = alphabet[bytes[i] >> 4];
      out[2 * i + 1] = alphabet[bytes[i] & 0x0f];
    }
    return out;
  }

  static Digest from_hex(std::string_view hex) {
    if (hex.size() != 64) {
      throw Error("digest must be 64 hex characters, got " + std::to_string(hex.size()));
    }
    auto nibble = [](char c) -> int {
      if (c >= '0' && c <= '9') return c - '0';
      if (c >= 'a' && c <= 'f') return c - 'a' + 10;
      if (c >= 'A' && c <= 'F') return c - 'A' + 10;
      throw Error(std::string("invalid hex character '") + c + "' in digest");
    };
    Digest d;
    for (std::size_t i = 0; i < d.bytes.size(); ++i) {
      d.bytes[i] = static_cast<std::uint8_t>((nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]));
    }
    return d;
  }
};

/// SHA-256 of a byte string.
inline Digest sha256_digest(std::string_view data) {
  Digest d;
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), d.bytes.data(), &len, EVP_sha256(), nullptr) != 1 ||
      len != d.bytes.size()) {
    throw Error("sha256 computation failed");
  }
  return d;
}

}  // namespace vcluster::store
