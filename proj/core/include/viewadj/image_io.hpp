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
#include <vector>

#include "viewadj/errors.hpp"
#include "viewadj/image.hpp"

namespace viewadj {

/// Decodes PNG or JPEG bytes (detected by signature) to a 3-channel image.
ImageBuffer decode_image(std::span<const std::uint8_t> bytes);

ImageBuffer load_image(const std::filesystem::path& path);

/// 8-bit RGB (or gray) PNG encoding; values are rounded to the nearest level.
std::vector<std::uint8_t> encode_png(const ImageBuffer& image);

void save_png(const std::filesystem::path& path, const ImageBuffer& image);

/// Baseline JPEG encoding; lossy.
std::vector<std::uint8_t> encode_jpeg(const ImageBuffer& image, int quality = 92);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);

void write_file_bytes(const std::filesystem::path& path,
                      std::span<const std::uint8_t> bytes);

bool is_image_path(const std::filesystem::path& path);

/// Image files directly under a directory, sorted by path.
std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir);

}  // namespace viewadj
