#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sensorforge/clock.hpp"
#include "sensorforge/rng.hpp"
#include "sensorforge/scene.hpp"

namespace sensorforge::lidar {

// Datasheet-style detection curve: maximum detection range as a function of
// effective Lambertian target reflectance. Piecewise linear between knots,
// clamped to the end knots outside their span.
struct ReflectanceLimitCurve {
  struct Knot {
    double reflectance = 0.0;     // [0, 1], strictly increasing
    double max_detect_range_m = 0.0;
  };
  std::vector<Knot> knots;

  void validate() const;
  double range_limit_for(double rho_eff) const;
};

struct LidarConfig {
  int channels = 0;
  std::vector<double> elevation_angles_rad;  // one per channel, sorted ascending
  int points_per_rotation = 0;
  double rotation_rate_hz = 0.0;
  double max_range_m = 0.0;
  std::string band;  // material reflectance band, e.g. "905nm"
  ReflectanceLimitCurve limit_curve;
  // Rain power-law coefficients (alpha = a * R^b). Empirical, sensor-specific,
  // and deliberately without defaults: validation rejects NaN.
  double rain_a = std::numeric_limits<double>::quiet_NaN();
  double rain_b = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t seed = 0;

  void validate() const;
};

struct LidarReturn {
  double x = 0.0, y = 0.0, z = 0.0;  // sensor frame, meters
  double intensity = 0.0;            // [0, 1]
  LabelId label_id = 0;
  double timestamp_s = 0.0;
};

// Lambertian cosine model: rho_eff = rho * cos(theta).
double effective_reflectance(double rho, double theta_rad);

struct RainEffect {
  double noisy_distance_m = 0.0;
  double intensity = 0.0;
};

// Goodin-style rain degradation: intensity is scaled by exp(-2 alpha d) with
// alpha = a * R^b, and the reported range is drawn from a normal with
// sigma = 0.02 d (1 - exp(-R))^2, truncated at 6 sigma. R = 0 returns the
// inputs untouched and consumes no randomness.
RainEffect apply_rain(double distance_m, double intensity_dry, double rain_rate_mmh, double a,
                      double b, Rng& rng);

// Spinning LiDAR. The azimuth sweep is proportional to elapsed simulation
// time; the column cursor persists across frames so fractional columns carry
// over instead of being dropped. Each beam derives its own RNG stream from
// (seed, global beam index), which makes output independent of thread count.
class LidarSensor {
 public:
  explicit LidarSensor(LidarConfig cfg, SensorId sensor_id = 0);

  const LidarConfig& config() const { return cfg_; }
  SensorId sensor_id() const { return id_; }

  // OpenMP-parallel scan of one frame. `frame_end_time` is the simulation
  // time after the clock advanced by `sim_dt`.
  std::vector<LidarReturn> scan_frame(const Scene& scene, const Pose& pose, double sim_dt,
                                      const Weather& weather, double frame_end_time);

  // Serial reference implementation; bit-identical output to scan_frame.
  std::vector<LidarReturn> scan_frame_serial(const Scene& scene, const Pose& pose, double sim_dt,
                                             const Weather& weather, double frame_end_time);

  double swept_azimuth_rad() const { return phase_; }
  std::uint64_t emitted_columns() const { return next_column_; }

 private:
  struct Column {
    std::uint64_t index = 0;
    double azimuth = 0.0;
    double timestamp = 0.0;
  };
  struct BeamResult {
    std::optional<LidarReturn> point;
    MaterialId missing_band = 0;
  };

  std::vector<Column> advance_sweep(double sim_dt, double frame_end_time);
  BeamResult evaluate_beam(const Scene& scene, const Pose& pose, const Column& column, int channel,
                           double rain_rate) const;
  std::vector<LidarReturn> scan_frame_impl(const Scene& scene, const Pose& pose, double sim_dt,
                                           const Weather& weather, double frame_end_time,
                                           bool parallel);

  LidarConfig cfg_;
  SensorId id_ = 0;
  double phase_ = 0.0;            // total azimuth swept since construction
  std::uint64_t next_column_ = 0;
  std::set<MaterialId> warned_materials_;
};

}  // namespace sensorforge::lidar
