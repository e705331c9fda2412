#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sensorforge/clock.hpp"
#include "sensorforge/scene.hpp"

namespace sensorforge::echo {

enum class Mode { k2D, k3D };

struct EchoConfig {
  int n_rays = 0;
  double fov_azimuth_rad = 0.0;    // full angle, 0 collapses to boresight
  double fov_elevation_rad = 0.0;  // full angle (ignored in 2D mode)
  double attenuation_limit_db = 0.0;
  double spreading_ref_m = 1.0;
  double atmospheric_db_per_m = 0.0;
  double rain_db_per_m_per_mmh = 0.0;  // extra atmospheric loss per mm/h of rain
  int max_bounces = 1;
  double receiver_opening_angle_rad = 0.0;  // half-angle acceptance about boresight
  double capture_radius_m = 0.05;           // aperture sphere around the sensor origin
  Mode mode = Mode::k3D;

  void validate() const;
};

struct Echo {
  Vec3 arrival_direction;       // unit, sensor frame, points toward the echo source
  double total_path_m = 0.0;    // emission -> bounces -> receiver
  double power_db = 0.0;        // <= 0 relative to emission
  int bounce_count = 0;
  Vec3 point;                   // arrival_direction * total_path / 2, sensor frame
};

// Deterministic equal-solid-angle ray lattice over the field of view.
// A golden-ratio azimuth sequence against an equal-area elevation ladder;
// n = 1 or a zero span degenerates to the boresight (+x).
std::vector<Vec3> sample_directions(double fov_azimuth_rad, double fov_elevation_rad, int n);

// 2D variant: zero elevation, azimuths on a uniform grid over the wedge.
std::vector<Vec3> sample_directions_2d(double fov_azimuth_rad, int n);

// Free-space spreading on the folded path: 20 log10(d / ref), clamped to 0
// below the reference distance.
double spreading_loss(double d_m, double ref_m);

// Pulse-echo sensor (sonar/radar): rays bounce specularly until the
// attenuation budget, bounce limit, or an escape ends them; an echo is
// recorded whenever a post-bounce segment re-enters the receiver aperture
// inside the opening angle.
class EchoSensor {
 public:
  explicit EchoSensor(EchoConfig cfg, SensorId sensor_id = 0);

  const EchoConfig& config() const { return cfg_; }
  SensorId sensor_id() const { return id_; }

  // OpenMP-parallel trace; echoes ordered by emitted ray index.
  std::vector<Echo> trace(const Scene& scene, const Pose& pose, const Weather& weather) const;

  // Serial reference implementation; identical output to trace().
  std::vector<Echo> trace_serial(const Scene& scene, const Pose& pose,
                                 const Weather& weather) const;

 private:
  std::vector<Echo> trace_impl(const Scene& scene, const Pose& pose, const Weather& weather,
                               bool parallel) const;
  void trace_ray(const Scene& scene, const Pose& pose, const Vec3& dir_sensor, double beta,
                 std::vector<Echo>& out) const;

  EchoConfig cfg_;
  SensorId id_ = 0;
};

}  // namespace sensorforge::echo
