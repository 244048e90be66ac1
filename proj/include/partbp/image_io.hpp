#pragma once

#include <string>

#include "partbp/image.hpp"

namespace partbp {

// Masks as 8-bit PGM (P5, 0/255); depth as 16-bit PGM in millimeters.
void save_pgm(const BinaryMask& mask, const std::string& path);
void save_pgm(const DepthImage& depth, const std::string& path);
BinaryMask load_mask_pgm(const std::string& path);
DepthImage load_depth_pgm(const std::string& path);

// Heatmap container: ASCII header "HMAP <width> <height>\n" followed by
// row-major little-endian 32-bit floats. Lossless round-trip; values must
// be finite and inside [0, 1].
void save_heatmap(const Heatmap& h, const std::string& path);
Heatmap load_heatmap(const std::string& path);

}  // namespace partbp
