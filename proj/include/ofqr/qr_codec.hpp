#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "ofqr/image.hpp"

namespace ofqr::qr {

struct QrError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PayloadTooLong : QrError { using QrError::QrError; };
struct NonAsciiByte : QrError { using QrError::QrError; };
struct WrongLength : QrError { using QrError::QrError; };
struct Uncorrectable : QrError { using QrError::QrError; };
struct FormatInfoInvalid : QrError { using QrError::QrError; };
struct StructureInvalid : QrError { using QrError::QrError; };
struct DegenerateImage : QrError { using QrError::QrError; };

// Version 1 symbol, byte mode, ECC level M, single RS(26,16) block.
inline constexpr int kModules = 21;
inline constexpr int kQuietModules = 4;
inline constexpr int kQuietSize = kModules + 2 * kQuietModules;  // 29
inline constexpr int kDataCodewords = 16;
inline constexpr int kEccCodewords = 10;
inline constexpr int kTotalCodewords = 26;
inline constexpr int kMaxPayloadBytes = 14;
inline constexpr int kEccCapacity = 5;  // RS(26,16) corrects up to 5 byte errors

/// 1..14 printable-ASCII bytes.
struct Payload {
  std::string text;
  /// Validates length and character range.
  static Payload make(std::string text);
};

/// 21x21 module matrix, true = dark.
class ModuleGrid {
 public:
  bool get(int r, int c) const { return m_[r * kModules + c]; }
  void set(int r, int c, bool dark) { m_[r * kModules + c] = dark; }
  bool operator==(const ModuleGrid&) const = default;

 private:
  std::array<bool, kModules * kModules> m_{};
};

/// 29x29: a ModuleGrid surrounded by the 4-module light quiet zone.
class QuietGrid {
 public:
  bool get(int r, int c) const { return m_[r * kQuietSize + c]; }
  void set(int r, int c, bool dark) { m_[r * kQuietSize + c] = dark; }
  bool operator==(const QuietGrid&) const = default;

  ModuleGrid interior() const;
  static QuietGrid from_interior(const ModuleGrid& g);

 private:
  std::array<bool, kQuietSize * kQuietSize> m_{};
};

std::array<std::uint8_t, kEccCodewords> rs_encode(
    const std::array<std::uint8_t, kDataCodewords>& data);

struct RsDecodeResult {
  std::array<std::uint8_t, kDataCodewords> data;
  int corrections = 0;
};
/// Corrects up to kEccCapacity byte errors (Berlekamp-Massey, Chien search,
/// Forney). Throws Uncorrectable beyond the designed distance or on
/// inconsistent syndromes.
RsDecodeResult rs_decode(const std::array<std::uint8_t, kTotalCodewords>& codeword);

/// Standard four-rule mask penalty (N1=3, N2=3, N3=40, N4=10).
int penalty_score(const ModuleGrid& g);

/// Deterministic version-1/ECC-M byte-mode encoding. Mask chosen by minimum
/// penalty, ties broken toward the lowest mask id.
QuietGrid encode(const Payload& payload);

struct DecodeResult {
  Payload payload;
  int corrections = 0;
};
/// Reads format info (either copy), unmasks, error-corrects and strips the
/// byte-mode envelope.
DecodeResult decode(const QuietGrid& grid);

/// Resamples a reconstructed image in [0,1] covering the full 29x29 object
/// extent back to modules: per-cell pixel-center means, thresholded by Otsu
/// over all 841 cell means. Dark = below threshold.
QuietGrid sample_grid(const Image& image);

/// Rasterizes a grid to an image, light modules = 1.0, dark = 0.0,
/// area-weighted at non-integer scale factors.
Image grid_to_image(const QuietGrid& g, int rows, int cols);

/// 1 pixel per module, for the PGM passthrough (dark=0, light=255 on write).
Image grid_to_unit_image(const QuietGrid& g);
/// Inverse of grid_to_unit_image; expects an exact 29x29 raster.
QuietGrid unit_image_to_grid(const Image& img);

}  // namespace ofqr::qr
