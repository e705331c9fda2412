#include "sensorforge/lidar.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "sensorforge/threading.hpp"

namespace sensorforge::lidar {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void ReflectanceLimitCurve::validate() const {
  if (knots.empty()) throw std::invalid_argument("reflectance limit curve needs at least one knot");
  double prev_rho = -1.0;
  double prev_range = -1.0;
  for (const Knot& k : knots) {
    if (!(k.reflectance >= 0.0 && k.reflectance <= 1.0)) {
      throw std::invalid_argument("limit curve reflectance outside [0,1]");
    }
    if (k.reflectance <= prev_rho) {
      throw std::invalid_argument("limit curve reflectances must be strictly increasing");
    }
    if (k.max_detect_range_m < 0.0 || k.max_detect_range_m < prev_range) {
      throw std::invalid_argument("limit curve ranges must be >= 0 and non-decreasing");
    }
    prev_rho = k.reflectance;
    prev_range = k.max_detect_range_m;
  }
}

double ReflectanceLimitCurve::range_limit_for(double rho_eff) const {
  if (rho_eff <= knots.front().reflectance) return knots.front().max_detect_range_m;
  if (rho_eff >= knots.back().reflectance) return knots.back().max_detect_range_m;
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (rho_eff <= knots[i].reflectance) {
      const Knot& lo = knots[i - 1];
      const Knot& hi = knots[i];
      const double u = (rho_eff - lo.reflectance) / (hi.reflectance - lo.reflectance);
      return lo.max_detect_range_m + u * (hi.max_detect_range_m - lo.max_detect_range_m);
    }
  }
  return knots.back().max_detect_range_m;
}

void LidarConfig::validate() const {
  if (channels < 1) throw std::invalid_argument("lidar.channels must be >= 1");
  if (static_cast<int>(elevation_angles_rad.size()) != channels) {
    throw std::invalid_argument("lidar.elevation_angles must have one entry per channel");
  }
  if (!std::is_sorted(elevation_angles_rad.begin(), elevation_angles_rad.end())) {
    throw std::invalid_argument("lidar.elevation_angles must be sorted ascending");
  }
  if (points_per_rotation < 1) throw std::invalid_argument("lidar.points_per_rotation must be >= 1");
  if (!(rotation_rate_hz > 0.0)) throw std::invalid_argument("lidar.rotation_rate must be > 0");
  if (!(max_range_m > 0.0)) throw std::invalid_argument("lidar.max_range must be > 0");
  if (band.empty()) throw std::invalid_argument("lidar.band must be set");
  limit_curve.validate();
  if (!std::isfinite(rain_a) || rain_a < 0.0) {
    throw std::invalid_argument("lidar.rain_a is required (>= 0) and has no default");
  }
  if (!std::isfinite(rain_b)) {
    throw std::invalid_argument("lidar.rain_b is required and has no default");
  }
}

double effective_reflectance(double rho, double theta_rad) {
  return rho * std::max(0.0, std::cos(theta_rad));
}

RainEffect apply_rain(double distance_m, double intensity_dry, double rain_rate_mmh, double a,
                      double b, Rng& rng) {
  if (rain_rate_mmh <= 0.0) return {distance_m, intensity_dry};
  const double alpha = a * std::pow(rain_rate_mmh, b);
  const double attenuation = std::exp(-2.0 * alpha * distance_m);
  const double wet = 1.0 - std::exp(-rain_rate_mmh);
  const double sigma = 0.02 * distance_m * wet * wet;
  double noisy = rng.next_normal(distance_m, sigma);
  noisy = std::clamp(noisy, distance_m - 6.0 * sigma, distance_m + 6.0 * sigma);
  return {noisy, intensity_dry * attenuation};
}

LidarSensor::LidarSensor(LidarConfig cfg, SensorId sensor_id) : cfg_(std::move(cfg)), id_(sensor_id) {
  cfg_.validate();
}

std::vector<LidarSensor::Column> LidarSensor::advance_sweep(double sim_dt, double frame_end_time) {
  if (sim_dt < 0.0) throw std::invalid_argument("scan_frame: sim_dt must be >= 0");
  const double dcol = kTwoPi / cfg_.points_per_rotation;
  const double dphase = kTwoPi * cfg_.rotation_rate_hz * sim_dt;
  const double phase_start = phase_;
  const double phase_end = phase_ + dphase;
  const double frame_start_time = frame_end_time - sim_dt;

  std::vector<Column> columns;
  // Column k fires when the sweep passes strictly beyond k * dcol; the
  // fractional remainder stays in phase_ for the next frame.
  while (static_cast<double>(next_column_) * dcol < phase_end) {
    const double col_phase = static_cast<double>(next_column_) * dcol;
    const double frac = dphase > 0.0 ? (col_phase - phase_start) / dphase : 0.0;
    Column c;
    c.index = next_column_;
    c.azimuth = static_cast<double>(next_column_ % cfg_.points_per_rotation) * dcol;
    c.timestamp = frame_start_time + frac * sim_dt;
    columns.push_back(c);
    ++next_column_;
  }
  phase_ = phase_end;
  return columns;
}

LidarSensor::BeamResult LidarSensor::evaluate_beam(const Scene& scene, const Pose& pose,
                                                   const Column& column, int channel,
                                                   double rain_rate) const {
  BeamResult result;
  const double el = cfg_.elevation_angles_rad[channel];
  const double cos_el = std::cos(el);
  const Vec3 dir_sensor{cos_el * std::cos(column.azimuth), cos_el * std::sin(column.azimuth),
                        std::sin(el)};
  const Vec3 dir_world = pose.rotate(dir_sensor);

  const auto hit = scene.raycast(pose.position, dir_world, cfg_.max_range_m, {id_, 0});
  if (!hit) return result;

  const auto rho = scene.material(hit->material_id).reflectance(cfg_.band);
  if (!rho) {
    result.missing_band = hit->material_id;
    return result;
  }
  const double rho_eff = effective_reflectance(*rho, hit->incidence_angle);

  const std::uint64_t beam_index =
      column.index * static_cast<std::uint64_t>(cfg_.channels) + static_cast<std::uint64_t>(channel);
  Rng rng(derive_seed(cfg_.seed, beam_index));
  const RainEffect rain = apply_rain(hit->distance, rho_eff, rain_rate, cfg_.rain_a, cfg_.rain_b, rng);

  // Detection happens on the true optical path: the rain-attenuated return
  // must clear the datasheet curve at the actual target distance. Range noise
  // only perturbs the reported measurement.
  if (hit->distance > cfg_.limit_curve.range_limit_for(rain.intensity)) return result;

  LidarReturn point;
  point.x = dir_sensor.x * rain.noisy_distance_m;
  point.y = dir_sensor.y * rain.noisy_distance_m;
  point.z = dir_sensor.z * rain.noisy_distance_m;
  point.intensity = rain.intensity;
  point.label_id = hit->label_id;
  point.timestamp_s = column.timestamp;
  result.point = point;
  return result;
}

std::vector<LidarReturn> LidarSensor::scan_frame_impl(const Scene& scene, const Pose& pose,
                                                      double sim_dt, const Weather& weather,
                                                      double frame_end_time, bool parallel) {
  const std::vector<Column> columns = advance_sweep(sim_dt, frame_end_time);
  const std::int64_t n_beams =
      static_cast<std::int64_t>(columns.size()) * static_cast<std::int64_t>(cfg_.channels);
  std::vector<BeamResult> results(static_cast<std::size_t>(n_beams));
  const double rain = weather.rain_rate_mmh;

#ifdef _OPENMP
  if (parallel) {
#pragma omp parallel for schedule(static) num_threads(worker_count())
    for (std::int64_t i = 0; i < n_beams; ++i) {
      results[i] = evaluate_beam(scene, pose, columns[i / cfg_.channels],
                                 static_cast<int>(i % cfg_.channels), rain);
    }
  }
#else
  parallel = false;
#endif
  if (!parallel) {
    for (std::int64_t i = 0; i < n_beams; ++i) {
      results[i] = evaluate_beam(scene, pose, columns[i / cfg_.channels],
                                 static_cast<int>(i % cfg_.channels), rain);
    }
  }

  std::vector<LidarReturn> points;
  points.reserve(results.size());
  for (const BeamResult& r : results) {
    if (r.missing_band != 0 && warned_materials_.insert(r.missing_band).second) {
      std::fprintf(stderr, "lidar %u: material '%s' has no reflectance for band '%s'; returns culled\n",
                   id_, scene.material(r.missing_band).name.c_str(), cfg_.band.c_str());
    }
    if (r.point) points.push_back(*r.point);
  }
  return points;
}

std::vector<LidarReturn> LidarSensor::scan_frame(const Scene& scene, const Pose& pose, double sim_dt,
                                                 const Weather& weather, double frame_end_time) {
  return scan_frame_impl(scene, pose, sim_dt, weather, frame_end_time, true);
}

std::vector<LidarReturn> LidarSensor::scan_frame_serial(const Scene& scene, const Pose& pose,
                                                        double sim_dt, const Weather& weather,
                                                        double frame_end_time) {
  return scan_frame_impl(scene, pose, sim_dt, weather, frame_end_time, false);
}

}  // namespace sensorforge::lidar
