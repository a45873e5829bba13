// Copyright 2026 The viewadj Authors.
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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace viewadj {

std::string sha256_hex(std::span<const std::uint8_t> bytes);
std::string sha256_hex(std::string_view text);

/// Git blob id: sha1("blob <size>\0" + content).
std::string git_blob_sha1(std::span<const std::uint8_t> bytes);
std::string git_blob_sha1_file(const std::filesystem::path& path);

/// Standard base64 with padding.
std::string base64_encode(std::span<const std::uint8_t> bytes);
/// Accepts padded input; ASCII whitespace is ignored. Throws DataError on
/// malformed input.
std::vector<std::uint8_t> base64_decode(std::string_view text);

}  // namespace viewadj
