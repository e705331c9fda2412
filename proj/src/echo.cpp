#include "sensorforge/echo.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sensorforge/threading.hpp"

namespace sensorforge::echo {

namespace {
constexpr double kGoldenFrac = 0.6180339887498949;  // 1/phi
}

void EchoConfig::validate() const {
  if (n_rays < 1) throw std::invalid_argument("echo.n_rays must be >= 1");
  if (fov_azimuth_rad < 0.0 || fov_azimuth_rad > 2.0 * std::numbers::pi) {
    throw std::invalid_argument("echo.fov_azimuth must be in [0, 2pi]");
  }
  if (fov_elevation_rad < 0.0 || fov_elevation_rad > std::numbers::pi) {
    throw std::invalid_argument("echo.fov_elevation must be in [0, pi]");
  }
  if (!(attenuation_limit_db > 0.0)) throw std::invalid_argument("echo.attenuation_limit must be > 0");
  if (!(spreading_ref_m > 0.0)) throw std::invalid_argument("echo.spreading_ref must be > 0");
  if (atmospheric_db_per_m < 0.0 || rain_db_per_m_per_mmh < 0.0) {
    throw std::invalid_argument("echo atmospheric coefficients must be >= 0");
  }
  if (max_bounces < 1) throw std::invalid_argument("echo.max_bounces must be >= 1");
  if (!(receiver_opening_angle_rad > 0.0 && receiver_opening_angle_rad <= std::numbers::pi)) {
    throw std::invalid_argument("echo.receiver_opening_angle must be in (0, pi]");
  }
  if (!(capture_radius_m > 0.0)) throw std::invalid_argument("echo.capture_radius must be > 0");
}

std::vector<Vec3> sample_directions(double fov_azimuth_rad, double fov_elevation_rad, int n) {
  if (n < 1) throw std::invalid_argument("sample_directions: n must be >= 1");
  std::vector<Vec3> dirs;
  dirs.reserve(static_cast<std::size_t>(n));
  if (n == 1) {
    dirs.push_back({1.0, 0.0, 0.0});
    return dirs;
  }
  const double sin_lo = std::sin(-0.5 * fov_elevation_rad);
  const double sin_hi = std::sin(0.5 * fov_elevation_rad);
  for (int i = 0; i < n; ++i) {
    const double u = (i + 0.5) / n;
    const double sin_el = fov_elevation_rad > 0.0 ? sin_lo + u * (sin_hi - sin_lo) : 0.0;
    double az = 0.0;
    if (fov_azimuth_rad > 0.0) {
      const double frac = std::fmod(i * kGoldenFrac, 1.0);
      az = (frac - 0.5) * fov_azimuth_rad;
    }
    const double cos_el = std::sqrt(std::max(0.0, 1.0 - sin_el * sin_el));
    dirs.push_back({cos_el * std::cos(az), cos_el * std::sin(az), sin_el});
  }
  return dirs;
}

std::vector<Vec3> sample_directions_2d(double fov_azimuth_rad, int n) {
  if (n < 1) throw std::invalid_argument("sample_directions_2d: n must be >= 1");
  std::vector<Vec3> dirs;
  dirs.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double az = fov_azimuth_rad > 0.0 ? ((i + 0.5) / n - 0.5) * fov_azimuth_rad : 0.0;
    dirs.push_back({std::cos(az), std::sin(az), 0.0});
  }
  return dirs;
}

double spreading_loss(double d_m, double ref_m) {
  if (!(ref_m > 0.0)) throw std::invalid_argument("spreading_loss: ref must be > 0");
  if (d_m <= ref_m) return 0.0;
  return 20.0 * std::log10(d_m / ref_m);
}

EchoSensor::EchoSensor(EchoConfig cfg, SensorId sensor_id) : cfg_(cfg), id_(sensor_id) {
  cfg_.validate();
}

namespace {

// Largest total path length whose spreading + atmospheric loss stays within
// `budget_db`. Monotone in length, solved by doubling + bisection.
double max_travel(double budget_db, double ref_m, double beta_db_per_m) {
  if (budget_db <= 0.0) return 0.0;
  auto loss_at = [&](double len) { return spreading_loss(len, ref_m) + beta_db_per_m * len; };
  double hi = std::max(ref_m, 1.0);
  while (loss_at(hi) < budget_db && hi < 1e9) hi *= 2.0;
  if (loss_at(hi) < budget_db) return hi;
  double lo = 0.0;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (loss_at(mid) <= budget_db ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

void EchoSensor::trace_ray(const Scene& scene, const Pose& pose, const Vec3& dir_sensor,
                           double beta, std::vector<Echo>& out) const {
  const Vec3 sensor_origin = pose.position;
  const Pose inv_pose = pose.inverse();

  Vec3 pos = sensor_origin;
  Vec3 dir = pose.rotate(dir_sensor);
  double path_len = 0.0;
  double bounce_loss = 0.0;
  int bounces = 0;

  while (true) {
    const double travel_limit = max_travel(cfg_.attenuation_limit_db - bounce_loss,
                                           cfg_.spreading_ref_m, beta) - path_len;
    if (travel_limit <= 0.0) return;

    const auto hit = scene.raycast(pos, dir, travel_limit, {id_, 0});
    const double seg_len = hit ? hit->distance : travel_limit;

    if (bounces >= 1) {
      // Does this return segment pass through the receiver aperture?
      const double t_closest = std::clamp(dot(sensor_origin - pos, dir), 0.0, seg_len);
      const Vec3 closest = pos + dir * t_closest;
      if (norm(closest - sensor_origin) <= cfg_.capture_radius_m) {
        const Vec3 arrival_world = -dir;
        const Vec3 arrival_sensor = inv_pose.rotate(arrival_world);
        const double off_axis = std::acos(std::clamp(arrival_sensor.x, -1.0, 1.0));
        if (off_axis <= cfg_.receiver_opening_angle_rad) {
          const double total = path_len + t_closest;
          const double loss = spreading_loss(total, cfg_.spreading_ref_m) + beta * total + bounce_loss;
          if (loss <= cfg_.attenuation_limit_db) {
            Echo e;
            e.arrival_direction = arrival_sensor;
            e.total_path_m = total;
            e.power_db = -loss;
            e.bounce_count = bounces;
            e.point = arrival_sensor * (total * 0.5);
            out.push_back(e);
          }
        }
      }
    }

    if (!hit) return;
    if (bounces + 1 > cfg_.max_bounces) return;

    bounce_loss += scene.material(hit->material_id).acoustic_reflection_loss_db;
    if (bounce_loss >= cfg_.attenuation_limit_db) return;

    path_len += hit->distance;
    dir = normalized(reflect(dir, hit->normal));  // renormalized: FP drift accumulates over bounces
    pos = hit->point + hit->normal * kSurfaceEpsilon;
    ++bounces;
  }
}

std::vector<Echo> EchoSensor::trace_impl(const Scene& scene, const Pose& pose,
                                         const Weather& weather, bool parallel) const {
  const std::vector<Vec3> dirs =
      cfg_.mode == Mode::k2D ? sample_directions_2d(cfg_.fov_azimuth_rad, cfg_.n_rays)
                             : sample_directions(cfg_.fov_azimuth_rad, cfg_.fov_elevation_rad,
                                                 cfg_.n_rays);
  const double beta = cfg_.atmospheric_db_per_m + cfg_.rain_db_per_m_per_mmh * weather.rain_rate_mmh;

  std::vector<std::vector<Echo>> per_ray(dirs.size());
#ifdef _OPENMP
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 64) num_threads(worker_count())
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(dirs.size()); ++i) {
      trace_ray(scene, pose, dirs[i], beta, per_ray[i]);
    }
  }
#else
  parallel = false;
#endif
  if (!parallel) {
    for (std::size_t i = 0; i < dirs.size(); ++i) trace_ray(scene, pose, dirs[i], beta, per_ray[i]);
  }

  std::vector<Echo> echoes;
  for (const auto& rays : per_ray) echoes.insert(echoes.end(), rays.begin(), rays.end());
  return echoes;
}

std::vector<Echo> EchoSensor::trace(const Scene& scene, const Pose& pose,
                                    const Weather& weather) const {
  return trace_impl(scene, pose, weather, true);
}

std::vector<Echo> EchoSensor::trace_serial(const Scene& scene, const Pose& pose,
                                           const Weather& weather) const {
  return trace_impl(scene, pose, weather, false);
}

}  // namespace sensorforge::echo
