#pragma once

#include <cstdint>
#include <vector>

namespace partbp {

struct PinholeCamera {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 0;
  int height = 0;

  bool valid() const { return fx > 0.0 && fy > 0.0 && width > 0 && height > 0; }
};

// Depth in meters; 0 encodes no return.
struct DepthImage {
  int width = 0;
  int height = 0;
  std::vector<float> values;

  DepthImage() = default;
  DepthImage(int w, int h) : width(w), height(h), values(static_cast<size_t>(w) * h, 0.0f) {}

  float at(int x, int y) const { return values[static_cast<size_t>(y) * width + x]; }
  float& at(int x, int y) { return values[static_cast<size_t>(y) * width + x]; }
};

struct BinaryMask {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> values;

  BinaryMask() = default;
  BinaryMask(int w, int h) : width(w), height(h), values(static_cast<size_t>(w) * h, 0) {}

  uint8_t at(int x, int y) const { return values[static_cast<size_t>(y) * width + x]; }
  uint8_t& at(int x, int y) { return values[static_cast<size_t>(y) * width + x]; }

  size_t count() const;
};

// Per-pixel part-presence score in [0, 1].
struct Heatmap {
  int width = 0;
  int height = 0;
  std::vector<float> values;

  Heatmap() = default;
  Heatmap(int w, int h) : width(w), height(h), values(static_cast<size_t>(w) * h, 0.0f) {}

  float at(int x, int y) const { return values[static_cast<size_t>(y) * width + x]; }
  float& at(int x, int y) { return values[static_cast<size_t>(y) * width + x]; }

  double total() const;
  // True when no value reaches the threshold.
  bool empty_above(double threshold) const;
};

}  // namespace partbp
