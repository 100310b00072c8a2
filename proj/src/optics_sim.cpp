#include "ofqr/optics_sim.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "ofqr/parallel.hpp"
#include "ofqr/rng.hpp"

namespace ofqr::optics {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDegToRad = kPi / 180.0;

}  // namespace

void Geometry::validate() const {
  if (gap_mm <= 0) throw NonpositiveGap("gap_mm must be > 0");
  if (object_extent_mm <= 0 || sensor_extent_mm <= 0)
    throw OpticsError("extents must be > 0");
  if (object_rows < 1 || object_cols < 1 || sensor_pixels < 1)
    throw OpticsError("rasters must be at least 1x1");
}

void Pose::validate() const {
  if (std::fabs(theta_x_deg) >= 90.0 || std::fabs(theta_y_deg) >= 90.0)
    throw OpticsError("tilt angles must stay below 90 degrees");
}

void NoiseModel::validate() const {
  if (read_sigma < 0) throw OpticsError("read_sigma must be >= 0");
  if (quantize_bits != 0 && quantize_bits != 8 && quantize_bits != 16)
    throw OpticsError("quantize_bits must be 0, 8 or 16");
  if (shot_fullscale_photons < 0) throw OpticsError("shot_fullscale_photons must be >= 0");
}

double kernel_weight(double z_mm, double r_mm, double emitter_area_mm2) {
  if (z_mm <= 0) throw NonpositiveGap("kernel_weight: gap must be > 0");
  const double d2 = z_mm * z_mm + r_mm * r_mm;
  return emitter_area_mm2 * z_mm * z_mm / (kPi * d2 * d2);
}

std::vector<Emitter> emitter_positions(const Geometry& g, const Pose& pose) {
  g.validate();
  pose.validate();
  const double pitch_y = g.object_extent_mm / g.object_rows;
  const double pitch_x = g.object_extent_mm / g.object_cols;
  const double area = pitch_x * pitch_y;
  const double cz = std::cos(pose.theta_z_deg * kDegToRad);
  const double sz = std::sin(pose.theta_z_deg * kDegToRad);
  const double sx = std::sin(pose.theta_x_deg * kDegToRad);
  const double sy = std::sin(pose.theta_y_deg * kDegToRad);

  std::vector<Emitter> out;
  out.reserve(static_cast<std::size_t>(g.object_rows) * g.object_cols);
  for (int r = 0; r < g.object_rows; ++r) {
    const double y = (r + 0.5) * pitch_y - g.object_extent_mm / 2.0;
    for (int c = 0; c < g.object_cols; ++c) {
      const double x = (c + 0.5) * pitch_x - g.object_extent_mm / 2.0;
      const double xr = x * cz - y * sz;
      const double yr = x * sz + y * cz;
      const double z = g.gap_mm - xr * sy + yr * sx;
      if (z <= 0)
        throw ObjectIntersectsSensor("tilted object reaches the sensor plane (z_eff <= 0)");
      out.push_back({xr + pose.dx_mm, yr + pose.dy_mm, z, area});
    }
  }
  return out;
}

Image render_raw(const Image& object, const Geometry& g, const Pose& pose, int jobs) {
  g.validate();
  if (object.rows != g.object_rows || object.cols != g.object_cols)
    throw OpticsError("object raster does not match geometry");
  const auto emitters = emitter_positions(g, pose);

  const int ns = g.sensor_pixels;
  const double pitch = g.sensor_extent_mm / ns;
  std::vector<double> sensor_x(ns);
  for (int i = 0; i < ns; ++i) sensor_x[i] = (i + 0.5) * pitch - g.sensor_extent_mm / 2.0;

  Image frame(ns, ns);
  // Parallel over sensor rows: each row is written by exactly one worker, so
  // the result is independent of the job count.
  parallel_for(ns, jobs, [&](int sr) {
    const double py = sensor_x[sr];
    double* row = frame.row(sr);
    for (std::size_t j = 0; j < emitters.size(); ++j) {
      const double rad = object.data[j];
      if (rad == 0.0) continue;
      const Emitter& e = emitters[j];
      const double dy = py - e.y;
      const double c1 = dy * dy + e.z * e.z;
      const double k = rad * e.area * e.z * e.z / kPi;
      for (int sc = 0; sc < ns; ++sc) {
        const double t = sensor_x[sc] - e.x;
        const double q = t * t + c1;
        const double u = 1.0 / q;
        row[sc] += k * u * u;
      }
    }
  });
  return frame;
}

double calibration_exposure(const Geometry& g, int jobs) {
  const Image uniform(g.object_rows, g.object_cols, 1.0);
  Image frame = render_raw(uniform, g, Pose{}, jobs);
  std::vector<double> values = frame.data;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  std::size_t idx = static_cast<std::size_t>(std::ceil(0.999 * n));
  if (idx == 0) idx = 1;
  if (idx > n) idx = n;
  const double v = values[idx - 1];
  if (v <= 0) throw OpticsError("calibration render is identically zero");
  return v;
}

Image render_noiseless(const Image& object, const Geometry& g, const Pose& pose,
                       double exposure, int jobs) {
  if (exposure <= 0) throw OpticsError("exposure must be > 0");
  Image frame = render_raw(object, g, pose, jobs);
  for (double& v : frame.data) v /= exposure;
  return frame;
}

Image apply_noise(const Image& frame, const NoiseModel& noise) {
  noise.validate();
  Image out = frame;
  rng::SplitMix64 gen(noise.seed);
  const double photons = noise.shot_fullscale_photons;
  const double levels = noise.quantize_bits == 0 ? 0 : double((1u << noise.quantize_bits) - 1);
  for (double& v : out.data) {
    if (photons > 0) v = double(gen.poisson(v * photons)) / photons;
    if (noise.read_sigma > 0) v += noise.read_sigma * gen.normal();
    v = std::clamp(v, 0.0, 1.0);
    if (levels > 0) v = std::round(v * levels) / levels;
  }
  return out;
}

SensorFrame render(const Image& object, const Geometry& g, const Pose& pose,
                   const NoiseModel* noise, double exposure, int jobs) {
  Image frame = render_noiseless(object, g, pose, exposure, jobs);
  for (double& v : frame.data) v = std::clamp(v, 0.0, 1.0);
  if (noise != nullptr) frame = apply_noise(frame, *noise);
  return SensorFrame{std::move(frame), g, pose};
}

TransferMatrix build_transfer_matrix(const Geometry& g, const Pose& pose, double exposure,
                                     std::size_t max_entries, int jobs) {
  g.validate();
  if (exposure <= 0) throw OpticsError("exposure must be > 0");
  const std::size_t rows = static_cast<std::size_t>(g.sensor_pixels) * g.sensor_pixels;
  const std::size_t cols = static_cast<std::size_t>(g.object_rows) * g.object_cols;
  if (rows * cols > max_entries)
    throw BudgetExceeded("transfer matrix of " + std::to_string(rows * cols) +
                         " entries exceeds the budget of " + std::to_string(max_entries));
  const auto emitters = emitter_positions(g, pose);

  const int ns = g.sensor_pixels;
  const double pitch = g.sensor_extent_mm / ns;
  std::vector<double> sensor_x(ns);
  for (int i = 0; i < ns; ++i) sensor_x[i] = (i + 0.5) * pitch - g.sensor_extent_mm / 2.0;

  TransferMatrix tm;
  tm.rows = int(rows);
  tm.cols = int(cols);
  tm.geometry = g;
  tm.pose = pose;
  tm.exposure = exposure;
  tm.a.assign(rows * cols, 0.0);
  // One sensor row of the matrix per worker slot.
  parallel_for(ns, jobs, [&](int sr) {
    const double py = sensor_x[sr];
    for (int sc = 0; sc < ns; ++sc) {
      double* row = tm.a.data() + (static_cast<std::size_t>(sr) * ns + sc) * cols;
      const double px = sensor_x[sc];
      for (std::size_t j = 0; j < cols; ++j) {
        const Emitter& e = emitters[j];
        const double dx = px - e.x;
        const double dy = py - e.y;
        const double q = dx * dx + dy * dy + e.z * e.z;
        const double u = 1.0 / q;
        row[j] = e.area * e.z * e.z / kPi * u * u / exposure;
      }
    }
  });
  return tm;
}

// ---- JSON ----

std::string geometry_to_json(const Geometry& g) {
  nlohmann::json j;
  j["object_extent_mm"] = g.object_extent_mm;
  j["object_raster"] = {g.object_rows, g.object_cols};
  j["sensor_extent_mm"] = g.sensor_extent_mm;
  j["sensor_pixels"] = g.sensor_pixels;
  j["gap_mm"] = g.gap_mm;
  return j.dump(2);
}

Geometry geometry_from_json(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text);
  Geometry g;
  g.object_extent_mm = j.at("object_extent_mm").get<double>();
  g.object_rows = j.at("object_raster").at(0).get<int>();
  g.object_cols = j.at("object_raster").at(1).get<int>();
  g.sensor_extent_mm = j.at("sensor_extent_mm").get<double>();
  g.sensor_pixels = j.at("sensor_pixels").get<int>();
  g.gap_mm = j.at("gap_mm").get<double>();
  g.validate();
  return g;
}

std::string pose_to_json(const Pose& p) {
  nlohmann::json j;
  j["dx_mm"] = p.dx_mm;
  j["dy_mm"] = p.dy_mm;
  j["theta_x_deg"] = p.theta_x_deg;
  j["theta_y_deg"] = p.theta_y_deg;
  j["theta_z_deg"] = p.theta_z_deg;
  return j.dump(2);
}

Pose pose_from_json(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text);
  Pose p;
  p.dx_mm = j.at("dx_mm").get<double>();
  p.dy_mm = j.at("dy_mm").get<double>();
  p.theta_x_deg = j.at("theta_x_deg").get<double>();
  p.theta_y_deg = j.at("theta_y_deg").get<double>();
  p.theta_z_deg = j.at("theta_z_deg").get<double>();
  p.validate();
  return p;
}

std::string noise_to_json(const NoiseModel& n) {
  nlohmann::json j;
  j["read_sigma"] = n.read_sigma;
  j["shot_fullscale_photons"] = n.shot_fullscale_photons;
  j["quantize_bits"] = n.quantize_bits;
  j["seed"] = n.seed;
  return j.dump(2);
}

NoiseModel noise_from_json(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text);
  NoiseModel n;
  n.read_sigma = j.at("read_sigma").get<double>();
  n.shot_fullscale_photons = j.at("shot_fullscale_photons").get<double>();
  n.quantize_bits = j.at("quantize_bits").get<int>();
  n.seed = j.at("seed").get<std::uint64_t>();
  n.validate();
  return n;
}

}  // namespace ofqr::optics
