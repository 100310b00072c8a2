#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ofqr/image.hpp"

namespace ofqr::io {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- PGM (P5) ----
// 8-bit for grids and triptychs, 16-bit (big-endian samples, per netpbm)
// for sensor frames. Values are mapped linearly from [0,1].
void write_pgm8(const std::string& path, const Image& img);
void write_pgm16(const std::string& path, const Image& img);
/// Reads 8- or 16-bit P5, mapping samples back to [0,1].
Image read_pgm(const std::string& path);

// ---- OFT1 binary tensor container ----
// magic "OFT1", u8 dtype (f32=1, f64=2), u8 rank, little-endian u32 dims,
// then the payload in little-endian order.
enum class OftDtype : std::uint8_t { f32 = 1, f64 = 2 };

struct OftTensor {
  OftDtype dtype = OftDtype::f64;
  std::vector<std::uint32_t> dims;
  std::vector<double> data;  // held as f64 regardless of on-disk dtype
};

void write_oft(const std::string& path, const OftTensor& t);
OftTensor read_oft(const std::string& path);

OftTensor image_to_oft(const Image& img, OftDtype dtype = OftDtype::f64);
Image oft_to_image(const OftTensor& t);

/// Round-trip exact decimal formatting for CSV output ('.' decimal point,
/// no locale dependence).
std::string format_double(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace ofqr::io
