#include "partbp/image_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "partbp/errors.hpp"

namespace partbp {

namespace {

void write_pgm_header(std::ofstream& f, int w, int h, int maxval) {
  f << "P5\n" << w << " " << h << "\n" << maxval << "\n";
}

struct PgmHeader {
  int width;
  int height;
  int maxval;
};

PgmHeader read_pgm_header(std::ifstream& f, const std::string& path) {
  std::string magic;
  f >> magic;
  if (magic != "P5") throw FormatError(path + ": not a P5 PGM file");
  int vals[3];
  for (int& v : vals) {
    // Skip whitespace and comment lines.
    int c = f.peek();
    while (c == ' ' || c == '\n' || c == '\r' || c == '\t' || c == '#') {
      if (c == '#') {
        std::string comment;
        std::getline(f, comment);
      } else {
        f.get();
      }
      c = f.peek();
    }
    if (!(f >> v)) throw FormatError(path + ": truncated PGM header");
  }
  f.get();  // single whitespace before payload
  if (vals[0] <= 0 || vals[1] <= 0) throw FormatError(path + ": bad PGM dimensions");
  return {vals[0], vals[1], vals[2]};
}

static_assert(std::endian::native == std::endian::little,
              "heatmap payload is little-endian float32");

}  // namespace

void save_pgm(const BinaryMask& mask, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path);
  write_pgm_header(f, mask.width, mask.height, 255);
  std::vector<uint8_t> row(mask.values.size());
  for (size_t i = 0; i < mask.values.size(); ++i) row[i] = mask.values[i] ? 255 : 0;
  f.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
}

void save_pgm(const DepthImage& depth, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path);
  write_pgm_header(f, depth.width, depth.height, 65535);
  std::vector<uint8_t> buf(depth.values.size() * 2);
  for (size_t i = 0; i < depth.values.size(); ++i) {
    double mm = std::round(depth.values[i] * 1000.0);
    uint16_t v = static_cast<uint16_t>(std::clamp(mm, 0.0, 65535.0));
    buf[2 * i] = static_cast<uint8_t>(v >> 8);  // PGM is big-endian
    buf[2 * i + 1] = static_cast<uint8_t>(v & 0xff);
  }
  f.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

BinaryMask load_mask_pgm(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  PgmHeader h = read_pgm_header(f, path);
  if (h.maxval != 255) throw FormatError(path + ": expected 8-bit mask PGM");
  BinaryMask mask(h.width, h.height);
  std::vector<uint8_t> buf(mask.values.size());
  f.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (f.gcount() != static_cast<std::streamsize>(buf.size())) {
    throw FormatError(path + ": truncated PGM payload");
  }
  for (size_t i = 0; i < buf.size(); ++i) mask.values[i] = buf[i] ? 1 : 0;
  return mask;
}

DepthImage load_depth_pgm(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  PgmHeader h = read_pgm_header(f, path);
  if (h.maxval != 65535) throw FormatError(path + ": expected 16-bit depth PGM");
  DepthImage depth(h.width, h.height);
  std::vector<uint8_t> buf(depth.values.size() * 2);
  f.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (f.gcount() != static_cast<std::streamsize>(buf.size())) {
    throw FormatError(path + ": truncated PGM payload");
  }
  for (size_t i = 0; i < depth.values.size(); ++i) {
    uint16_t v = static_cast<uint16_t>((buf[2 * i] << 8) | buf[2 * i + 1]);
    depth.values[i] = static_cast<float>(v) / 1000.0f;
  }
  return depth;
}

void save_heatmap(const Heatmap& h, const std::string& path) {
  for (float v : h.values) {
    if (!(v >= 0.0f && v <= 1.0f)) {
      throw FormatError(path + ": heatmap value outside [0,1]");
    }
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path);
  f << "HMAP " << h.width << " " << h.height << "\n";
  f.write(reinterpret_cast<const char*>(h.values.data()),
          static_cast<std::streamsize>(h.values.size() * sizeof(float)));
}

Heatmap load_heatmap(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  std::string magic;
  int w = 0, hgt = 0;
  f >> magic >> w >> hgt;
  if (magic != "HMAP") throw FormatError(path + ": bad heatmap magic");
  if (w <= 0 || hgt <= 0) throw FormatError(path + ": bad heatmap dimensions");
  f.get();
  Heatmap h(w, hgt);
  f.read(reinterpret_cast<char*>(h.values.data()),
         static_cast<std::streamsize>(h.values.size() * sizeof(float)));
  if (f.gcount() != static_cast<std::streamsize>(h.values.size() * sizeof(float))) {
    throw FormatError(path + ": truncated heatmap payload");
  }
  char extra;
  if (f.read(&extra, 1); f.gcount() != 0) {
    throw FormatError(path + ": trailing bytes after heatmap payload");
  }
  for (float v : h.values) {
    if (!(v >= 0.0f && v <= 1.0f)) {
      throw FormatError(path + ": heatmap value outside [0,1]");
    }
  }
  return h;
}

}  // namespace partbp
