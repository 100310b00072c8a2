#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ofqr/image.hpp"

namespace ofqr::optics {

struct OpticsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonpositiveGap : OpticsError { using OpticsError::OpticsError; };
struct ObjectIntersectsSensor : OpticsError { using OpticsError::OpticsError; };
struct BudgetExceeded : OpticsError { using OpticsError::OpticsError; };

/// Emissive object plane at gap_mm above a bare square sensor, both centered
/// on the optical axis. Default desk scale: 6x6 mm object rastered at 116x116
/// (29 modules x 4 samples), 6x6 mm sensor at 64x64 pixels.
struct Geometry {
  double object_extent_mm = 6.0;
  int object_rows = 116;
  int object_cols = 116;
  double sensor_extent_mm = 6.0;
  int sensor_pixels = 64;
  double gap_mm = 1.0;

  double object_pitch_mm() const { return object_extent_mm / object_rows; }
  double sensor_pitch_mm() const { return sensor_extent_mm / sensor_pixels; }
  void validate() const;
  bool operator==(const Geometry&) const = default;
};

/// Object pose perturbation: in-plane shift, tilts about the in-plane axes
/// and rotation about the optical axis, all through the object center.
struct Pose {
  double dx_mm = 0.0;
  double dy_mm = 0.0;
  double theta_x_deg = 0.0;
  double theta_y_deg = 0.0;
  double theta_z_deg = 0.0;

  bool is_identity() const {
    return dx_mm == 0 && dy_mm == 0 && theta_x_deg == 0 && theta_y_deg == 0 && theta_z_deg == 0;
  }
  void validate() const;
};

struct NoiseModel {
  double read_sigma = 0.01;              // Gaussian std, full-scale units
  double shot_fullscale_photons = 10000; // Poisson scale; 0 disables shot noise
  int quantize_bits = 8;                 // 0 (off), 8 or 16
  std::uint64_t seed = 0;
  void validate() const;
};

struct SensorFrame {
  Image irradiance;  // Ns x Ns in [0,1]
  Geometry geometry;
  Pose pose;
};

struct Emitter {
  double x = 0, y = 0, z = 0, area = 0;
};

/// Irradiance per unit sensor area from a Lambertian emitter patch at
/// perpendicular distance z and lateral offset r, receiving plane parallel:
/// area * z^2 / (pi * (z^2 + r^2)^2). Integrates to `area` over the plane.
double kernel_weight(double z_mm, double r_mm, double emitter_area_mm2);

/// Object-pixel emitter positions after applying the pose: rotation about the
/// optical axis, small-angle tilts (z = gap - x'*sin(ty) + y'*sin(tx)), then
/// translation. Row-major object order. Throws if the object touches the
/// sensor plane.
std::vector<Emitter> emitter_positions(const Geometry& g, const Pose& pose);

/// Raw (unnormalized) noiseless irradiance map.
Image render_raw(const Image& object, const Geometry& g, const Pose& pose, int jobs = 1);

/// Exposure constant: 99.9th-percentile raw irradiance of a uniform all-light
/// object rendered at identity pose for this geometry.
double calibration_exposure(const Geometry& g, int jobs = 1);

/// Noiseless frame normalized by the exposure constant. Unclamped, so the
/// forward model stays exactly linear.
Image render_noiseless(const Image& object, const Geometry& g, const Pose& pose,
                       double exposure, int jobs = 1);

/// Poisson shot noise, Gaussian read noise, clamp to [0,1], then uniform
/// quantization; fully determined by noise.seed.
Image apply_noise(const Image& frame, const NoiseModel& noise);

/// Full forward model: normalized render, clamp, then optional noise.
SensorFrame render(const Image& object, const Geometry& g, const Pose& pose,
                   const NoiseModel* noise, double exposure, int jobs = 1);

/// Dense forward operator: row = sensor pixel, column = object pixel, both
/// row-major. Column j is the vectorized noiseless render of one-hot e_j.
struct TransferMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;  // row-major
  Geometry geometry;
  Pose pose;
  double exposure = 1.0;

  double at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};

inline constexpr std::size_t kDefaultMatrixBudget = std::size_t(1) << 26;  // entries

TransferMatrix build_transfer_matrix(const Geometry& g, const Pose& pose, double exposure,
                                     std::size_t max_entries = kDefaultMatrixBudget,
                                     int jobs = 1);

// JSON (de)serialization with the exact field names of the structs above.
std::string geometry_to_json(const Geometry& g);
Geometry geometry_from_json(const std::string& json_text);
std::string pose_to_json(const Pose& p);
Pose pose_from_json(const std::string& json_text);
std::string noise_to_json(const NoiseModel& n);
NoiseModel noise_from_json(const std::string& json_text);

}  // namespace ofqr::optics
