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

#include <cstddef>
#include <span>
#include <vector>

#include "viewadj/geometry.hpp"

namespace viewadj {

/// Row-major, channel-interleaved image with values in [0,1].
class ImageBuffer {
 public:
  ImageBuffer() = default;
  ImageBuffer(int width, int height, int channels, float fill = 0.0f);
  ImageBuffer(int width, int height, int channels, std::vector<float> data);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  bool empty() const { return data_.empty(); }
  std::size_t size() const { return data_.size(); }

  float& at(int x, int y, int c) {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }
  float at(int x, int y, int c) const {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }

  std::span<float> data() { return data_; }
  std::span<const float> data() const { return data_; }

  bool same_shape(const ImageBuffer& o) const {
    return width_ == o.width_ && height_ == o.height_ && channels_ == o.channels_;
  }
  bool operator==(const ImageBuffer&) const = default;

  double mean() const;

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<float> data_;
};

/// Samples the source under an oriented box onto an out_w x out_h grid.
///
/// Output pixel centers map to box-local coordinates at half-pixel offsets.
/// A sample point outside [0,1]^2 yields zero; points inside are bilinearly
/// interpolated from the source with pixel centers at (i + 0.5) / size.
ImageBuffer extract_view(const ImageBuffer& image, const ViewBox& box,
                         int out_w, int out_h);

/// Bilinear resize of the whole image (extract_view with the full frame).
ImageBuffer resize(const ImageBuffer& image, int out_w, int out_h);

/// Replicates a single channel into three; returns 3-channel input unchanged.
ImageBuffer to_rgb(const ImageBuffer& image);

/// Fraction of pixels whose channels are all exactly zero.
double zero_fraction(const ImageBuffer& image);

/// True iff any pixel on the outermost ring is exactly zero in all channels.
bool has_zero_border(const ImageBuffer& image);

}  // namespace viewadj
