#include "ofqr/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace ofqr::io {

namespace {

int clamp_level(double v, int maxval) {
  const double scaled = std::lround(std::clamp(v, 0.0, 1.0) * maxval);
  return static_cast<int>(std::clamp(scaled, 0.0, static_cast<double>(maxval)));
}

void write_header(std::ofstream& out, const Image& img, int maxval) {
  out << "P5\n" << img.cols << " " << img.rows << "\n" << maxval << "\n";
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  return out;
}

}  // namespace

void write_pgm8(const std::string& path, const Image& img) {
  auto out = open_out(path);
  write_header(out, img, 255);
  std::vector<std::uint8_t> row(img.cols);
  for (int r = 0; r < img.rows; ++r) {
    for (int c = 0; c < img.cols; ++c) row[c] = std::uint8_t(clamp_level(img.at(r, c), 255));
    out.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
  if (!out) throw IoError("short write: " + path);
}

void write_pgm16(const std::string& path, const Image& img) {
  auto out = open_out(path);
  write_header(out, img, 65535);
  std::vector<std::uint8_t> row(2 * img.cols);
  for (int r = 0; r < img.rows; ++r) {
    for (int c = 0; c < img.cols; ++c) {
      const int v = clamp_level(img.at(r, c), 65535);
      row[2 * c] = std::uint8_t(v >> 8);  // most significant byte first
      row[2 * c + 1] = std::uint8_t(v & 0xFF);
    }
    out.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
  if (!out) throw IoError("short write: " + path);
}

namespace {

int next_pgm_token(std::istream& in) {
  // skips whitespace and '#' comments
  for (;;) {
    int ch = in.peek();
    if (ch == '#') {
      std::string line;
      std::getline(in, line);
    } else if (std::isspace(ch)) {
      in.get();
    } else {
      break;
    }
  }
  int value = 0;
  if (!(in >> value)) throw IoError("malformed PGM header");
  return value;
}

}  // namespace

Image read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (magic[0] != 'P' || magic[1] != '5') throw IoError("not a P5 PGM: " + path);
  const int cols = next_pgm_token(in);
  const int rows = next_pgm_token(in);
  const int maxval = next_pgm_token(in);
  if (cols <= 0 || rows <= 0 || (maxval != 255 && maxval != 65535))
    throw IoError("unsupported PGM geometry/maxval: " + path);
  in.get();  // single whitespace after maxval
  Image img(rows, cols);
  const int bytes = maxval == 255 ? 1 : 2;
  std::vector<std::uint8_t> row(static_cast<std::size_t>(cols) * bytes);
  for (int r = 0; r < rows; ++r) {
    in.read(reinterpret_cast<char*>(row.data()), row.size());
    if (!in) throw IoError("truncated PGM: " + path);
    for (int c = 0; c < cols; ++c) {
      const int v = bytes == 1 ? row[c] : (row[2 * c] << 8) | row[2 * c + 1];
      img.at(r, c) = static_cast<double>(v) / maxval;
    }
  }
  return img;
}

namespace {

template <class T>
void write_le(std::ofstream& out, T v) {
  std::uint8_t buf[sizeof(T)];
  std::uint64_t bits = 0;
  std::memcpy(&bits, &v, sizeof(T));
  for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = std::uint8_t(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <class T>
T read_le(std::istream& in) {
  std::uint8_t buf[sizeof(T)];
  in.read(reinterpret_cast<char*>(buf), sizeof(T));
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) bits |= std::uint64_t(buf[i]) << (8 * i);
  T v;
  std::memcpy(&v, &bits, sizeof(T));
  return v;
}

}  // namespace

void write_oft(const std::string& path, const OftTensor& t) {
  if (t.dims.empty() || t.dims.size() > 255) throw IoError("OFT1: bad rank");
  std::size_t count = 1;
  for (auto d : t.dims) count *= d;
  if (count != t.data.size()) throw IoError("OFT1: dims do not match payload size");
  auto out = open_out(path);
  out.write("OFT1", 4);
  const std::uint8_t dtype = static_cast<std::uint8_t>(t.dtype);
  const std::uint8_t rank = static_cast<std::uint8_t>(t.dims.size());
  out.write(reinterpret_cast<const char*>(&dtype), 1);
  out.write(reinterpret_cast<const char*>(&rank), 1);
  for (auto d : t.dims) write_le<std::uint32_t>(out, d);
  if (t.dtype == OftDtype::f64) {
    for (double v : t.data) write_le<double>(out, v);
  } else {
    for (double v : t.data) write_le<float>(out, static_cast<float>(v));
  }
  if (!out) throw IoError("short write: " + path);
}

OftTensor read_oft(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "OFT1", 4) != 0) throw IoError("not an OFT1 file: " + path);
  std::uint8_t dtype = 0, rank = 0;
  in.read(reinterpret_cast<char*>(&dtype), 1);
  in.read(reinterpret_cast<char*>(&rank), 1);
  if (dtype != 1 && dtype != 2) throw IoError("OFT1: unknown dtype");
  if (rank == 0) throw IoError("OFT1: zero rank");
  OftTensor t;
  t.dtype = static_cast<OftDtype>(dtype);
  t.dims.resize(rank);
  std::size_t count = 1;
  for (int i = 0; i < rank; ++i) {
    t.dims[i] = read_le<std::uint32_t>(in);
    count *= t.dims[i];
  }
  t.data.resize(count);
  if (t.dtype == OftDtype::f64) {
    for (std::size_t i = 0; i < count; ++i) t.data[i] = read_le<double>(in);
  } else {
    for (std::size_t i = 0; i < count; ++i) t.data[i] = read_le<float>(in);
  }
  if (!in) throw IoError("truncated OFT1 file: " + path);
  return t;
}

OftTensor image_to_oft(const Image& img, OftDtype dtype) {
  OftTensor t;
  t.dtype = dtype;
  t.dims = {static_cast<std::uint32_t>(img.rows), static_cast<std::uint32_t>(img.cols)};
  t.data = img.data;
  return t;
}

Image oft_to_image(const OftTensor& t) {
  if (t.dims.size() != 2) throw IoError("OFT1 tensor is not rank-2");
  Image img(static_cast<int>(t.dims[0]), static_cast<int>(t.dims[1]));
  img.data = t.data;
  return img;
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  auto out = open_out(path);
  out.write(content.data(), content.size());
  if (!out) throw IoError("short write: " + path);
}

}  // namespace ofqr::io
