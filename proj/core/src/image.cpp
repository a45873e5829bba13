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

#include "viewadj/image.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace viewadj {

ImageBuffer::ImageBuffer(int width, int height, int channels, float fill)
    : width_(width), height_(height), channels_(channels) {
  if (width <= 0 || height <= 0 || (channels != 1 && channels != 3)) {
    throw std::invalid_argument("ImageBuffer: invalid dimensions");
  }
  data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

ImageBuffer::ImageBuffer(int width, int height, int channels,
                         std::vector<float> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
  if (width <= 0 || height <= 0 || (channels != 1 && channels != 3)) {
    throw std::invalid_argument("ImageBuffer: invalid dimensions");
  }
  if (data_.size() != static_cast<std::size_t>(width) * height * channels) {
    throw std::invalid_argument("ImageBuffer: data length mismatch");
  }
}

double ImageBuffer::mean() const {
  if (data_.empty()) return 0.0;
  return std::accumulate(data_.begin(), data_.end(), 0.0) /
         static_cast<double>(data_.size());
}

ImageBuffer extract_view(const ImageBuffer& image, const ViewBox& box,
                         int out_w, int out_h) {
  if (out_w <= 0 || out_h <= 0) {
    throw std::invalid_argument("extract_view: output size must be positive");
  }
  if (image.empty()) throw std::invalid_argument("extract_view: empty image");

  const int W = image.width();
  const int H = image.height();
  const int C = image.channels();
  ImageBuffer out(out_w, out_h, C, 0.0f);

  const double cs = std::cos(box.alpha);
  const double sn = std::sin(box.alpha);
  // Box-local step per output pixel.
  const double step_x = box.w / out_w;
  const double step_y = box.h / out_h;

  for (int j = 0; j < out_h; ++j) {
    const double ly = (j + 0.5) * step_y - 0.5 * box.h;
    for (int i = 0; i < out_w; ++i) {
      const double lx = (i + 0.5) * step_x - 0.5 * box.w;
      const double u = box.cx + cs * lx - sn * ly;
      const double v = box.cy + sn * lx + cs * ly;
      if (u < 0.0 || u > 1.0 || v < 0.0 || v > 1.0) continue;

      const double px = u * W - 0.5;
      const double py = v * H - 0.5;
      const double fx = std::floor(px);
      const double fy = std::floor(py);
      const double tx = px - fx;
      const double ty = py - fy;
      const int x0 = std::clamp(static_cast<int>(fx), 0, W - 1);
      const int y0 = std::clamp(static_cast<int>(fy), 0, H - 1);
      const int x1 = std::clamp(static_cast<int>(fx) + 1, 0, W - 1);
      const int y1 = std::clamp(static_cast<int>(fy) + 1, 0, H - 1);
      for (int c = 0; c < C; ++c) {
        const double top = (1.0 - tx) * image.at(x0, y0, c) + tx * image.at(x1, y0, c);
        const double bot = (1.0 - tx) * image.at(x0, y1, c) + tx * image.at(x1, y1, c);
        const double val = (1.0 - ty) * top + ty * bot;
        out.at(i, j, c) = static_cast<float>(std::clamp(val, 0.0, 1.0));
      }
    }
  }
  return out;
}

ImageBuffer resize(const ImageBuffer& image, int out_w, int out_h) {
  if (image.width() == out_w && image.height() == out_h) return image;
  return extract_view(image, ViewBox::full_frame(), out_w, out_h);
}

ImageBuffer to_rgb(const ImageBuffer& image) {
  if (image.channels() == 3) return image;
  ImageBuffer out(image.width(), image.height(), 3);
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      const float v = image.at(x, y, 0);
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = v;
    }
  }
  return out;
}

double zero_fraction(const ImageBuffer& image) {
  if (image.empty()) return 0.0;
  std::size_t zeros = 0;
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      bool all_zero = true;
      for (int c = 0; c < image.channels(); ++c) {
        all_zero = all_zero && image.at(x, y, c) == 0.0f;
      }
      zeros += all_zero;
    }
  }
  return static_cast<double>(zeros) /
         (static_cast<double>(image.width()) * image.height());
}

bool has_zero_border(const ImageBuffer& image) {
  if (image.empty()) return false;
  auto pixel_zero = [&](int x, int y) {
    for (int c = 0; c < image.channels(); ++c) {
      if (image.at(x, y, c) != 0.0f) return false;
    }
    return true;
  };
  const int W = image.width();
  const int H = image.height();
  for (int x = 0; x < W; ++x) {
    if (pixel_zero(x, 0) || pixel_zero(x, H - 1)) return true;
  }
  for (int y = 0; y < H; ++y) {
    if (pixel_zero(0, y) || pixel_zero(W - 1, y)) return true;
  }
  return false;
}

}  // namespace viewadj
