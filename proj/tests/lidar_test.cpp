#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "sensorforge/lidar.hpp"
#include "sensorforge/rng.hpp"

using namespace sensorforge;
using namespace sensorforge::lidar;

namespace {

constexpr double kPi = std::numbers::pi;

LidarConfig basic_config() {
  LidarConfig cfg;
  cfg.channels = 1;
  cfg.elevation_angles_rad = {0.0};
  cfg.points_per_rotation = 1024;
  cfg.rotation_rate_hz = 10.0;
  cfg.max_range_m = 100.0;
  cfg.band = "*";
  cfg.limit_curve.knots = {{0.0, 100.0}};
  cfg.rain_a = 0.01;
  cfg.rain_b = 0.6;
  cfg.seed = 99;
  return cfg;
}

Scene closed_box_room(double half) {
  Scene scene;
  Material m;
  m.name = "paint";
  m.optical_reflectance["*"] = 0.8;
  const MaterialId paint = scene.add_material(std::move(m));
  // Six inward-facing planes.
  const Vec3 normals[6] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  for (int i = 0; i < 6; ++i) {
    ObjectInstance wall;
    wall.name = "wall_" + std::to_string(i);
    wall.geometry = PlaneShape{normals[i], -half};
    wall.material_id = paint;
    scene.add_object(std::move(wall));
  }
  return scene;
}

}  // namespace

TEST_SUITE_BEGIN("lidar");

TEST_CASE("effective reflectance follows the cosine law") {
  CHECK(effective_reflectance(1.0, 0.0) == doctest::Approx(1.0));
  CHECK(effective_reflectance(0.37, kPi / 2) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(effective_reflectance(0.8, kPi / 3) == doctest::Approx(0.4));
}

TEST_CASE("limit curve interpolates and clamps") {
  ReflectanceLimitCurve curve;
  curve.knots = {{0.1, 30.0}, {1.0, 100.0}};
  curve.validate();
  CHECK(curve.range_limit_for(1.0) == doctest::Approx(100.0));
  CHECK(curve.range_limit_for(0.55) == doctest::Approx(65.0));
  CHECK(curve.range_limit_for(0.05) == doctest::Approx(30.0));

  ReflectanceLimitCurve empty;
  CHECK_THROWS_AS(empty.validate(), std::invalid_argument);
}

TEST_CASE("config requires rain coefficients") {
  LidarConfig cfg = basic_config();
  cfg.rain_a = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = basic_config();
  cfg.rain_b = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("apply_rain closed forms") {
  Rng rng(1);
  // R = 0 is the identity and consumes no randomness.
  const auto dry = apply_rain(12.0, 0.7, 0.0, 0.02, 0.7, rng);
  CHECK(dry.noisy_distance_m == 12.0);
  CHECK(dry.intensity == 0.7);

  // alpha = 0.1, d = 10 -> intensity factor e^-2.
  const auto wet = apply_rain(10.0, 1.0, 1.0, 0.1, 1.0, rng);
  CHECK(wet.intensity == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));

  // sigma at d = 10, R = 1.
  const double sigma = 0.02 * 10.0 * std::pow(1.0 - std::exp(-1.0), 2.0);
  CHECK(sigma == doctest::Approx(0.0799152801).epsilon(1e-6));
}

TEST_CASE("rain noise statistics match the closed-form sigma") {
  Rng rng(7);
  const double d = 10.0, R = 1.0;
  std::vector<double> samples;
  samples.reserve(100000);
  for (int i = 0; i < 100000; ++i) {
    samples.push_back(apply_rain(d, 1.0, R, 0.01, 0.6, rng).noisy_distance_m);
  }
  const double sigma = 0.02 * d * std::pow(1.0 - std::exp(-R), 2.0);
  CHECK(std::abs(oracles::mean(samples) - d) < 3.0 * sigma / std::sqrt(100000.0));
  CHECK(oracles::sample_stddev(samples) == doctest::Approx(sigma).epsilon(0.02));
}

TEST_CASE("sweep proportionality: quarter rotation emits a quarter of the columns") {
  Scene room = closed_box_room(10.0);
  LidarSensor sensor(basic_config());
  const auto points = sensor.scan_frame_serial(room, Pose{}, 0.025, Weather{}, 0.025);
  CHECK(sensor.emitted_columns() == 1024 / 4);
  CHECK(points.size() == 1024 / 4);  // closed room: every beam returns
}

TEST_CASE("limit culling: wall beyond the reflectance limit vanishes") {
  Scene scene;
  Material m;
  m.name = "dark";
  m.optical_reflectance["*"] = 0.5;
  const MaterialId dark = scene.add_material(std::move(m));
  ObjectInstance wall;
  wall.name = "wall";
  wall.geometry = PlaneShape{{-1, 0, 0}, -45.0};  // x = 45, normal facing the sensor
  wall.material_id = dark;
  scene.add_object(std::move(wall));

  LidarConfig cfg = basic_config();
  cfg.limit_curve.knots = {{0.25, 20.0}, {0.5, 40.0}, {1.0, 100.0}};  // rho_eff 0.5 -> 40 m
  LidarSensor sensor(cfg);
  const auto points = sensor.scan_frame_serial(scene, Pose{}, 0.1, Weather{}, 0.1);
  CHECK(points.empty());

  // The same wall at 35 m is detectable.
  Scene near_scene;
  Material m2;
  m2.name = "dark";
  m2.optical_reflectance["*"] = 0.5;
  const MaterialId dark2 = near_scene.add_material(std::move(m2));
  ObjectInstance near_wall;
  near_wall.name = "wall";
  near_wall.geometry = PlaneShape{{-1, 0, 0}, -35.0};
  near_wall.material_id = dark2;
  near_scene.add_object(std::move(near_wall));
  LidarSensor sensor2(cfg);
  CHECK(!sensor2.scan_frame_serial(near_scene, Pose{}, 0.1, Weather{}, 0.1).empty());
}

TEST_CASE("full rotation covers [0, 2pi) once and matches the per-ray oracle") {
  Scene room = closed_box_room(8.0);
  LidarConfig cfg = basic_config();
  cfg.channels = 4;
  cfg.elevation_angles_rad = {-0.2, -0.05, 0.05, 0.2};
  cfg.points_per_rotation = 512;
  LidarSensor sensor(cfg);
  const auto points = sensor.scan_frame_serial(room, Pose{}, 0.1, Weather{}, 0.1);

  CHECK(sensor.emitted_columns() == 512);
  CHECK(points.size() == 512 * 4);

  // Azimuths cover [0, 2pi) exactly once per channel.
  const double dcol = 2.0 * kPi / 512;
  for (int k = 0; k < 512; ++k) {
    for (int c = 0; c < 4; ++c) {
      const auto& p = points[k * 4 + c];
      const double az = std::atan2(p.y, p.x);
      const double expected = normalize_angle(k * dcol);
      CHECK(normalize_angle(az - expected) == doctest::Approx(0.0).epsilon(1e-9));
    }
  }

  // Spot-check returns against an independent brute-force raycast.
  for (int k = 0; k < 512; k += 37) {
    for (int c = 0; c < 4; ++c) {
      const auto& p = points[k * 4 + c];
      const double el = cfg.elevation_angles_rad[c];
      const Vec3 dir{std::cos(el) * std::cos(k * dcol), std::cos(el) * std::sin(k * dcol),
                     std::sin(el)};
      const auto oracle = oracles::brute_force_raycast(room, {0, 0, 0}, dir, cfg.max_range_m);
      REQUIRE(oracle.has_value());
      const double reported = std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z);
      CHECK(reported == doctest::Approx(oracle->distance).epsilon(1e-9));
      const double rho_eff = 0.8 * std::cos(oracle->incidence_angle);
      CHECK(p.intensity == doctest::Approx(rho_eff).epsilon(1e-9));
    }
  }
}

TEST_CASE("intensity is monotone non-increasing in incidence angle and rain rate") {
  for (double rho : {0.3, 0.9}) {
    double last = 2.0;
    for (double theta = 0.0; theta <= kPi / 2 + 1e-9; theta += kPi / 40) {
      const double val = effective_reflectance(rho, theta);
      CHECK(val <= last + 1e-15);
      last = val;
    }
  }
  Rng rng(5);
  double last = 2.0;
  for (double R : {0.0, 0.5, 1.0, 2.0, 5.0, 10.0}) {
    const auto e = apply_rain(15.0, 0.9, R, 0.01, 0.6, rng);
    CHECK(e.intensity <= last + 1e-15);
    last = e.intensity;
  }
}

TEST_CASE("sweep conservation over random frame partitions") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    LidarSensor sensor(basic_config());
    Scene empty_scene = build_scene({});
    double total = 0.0;
    double t = 0.0;
    while (total < 1.0) {
      double dt = rng.next_double(0.001, 0.07);
      if (total + dt > 1.0) dt = 1.0 - total;
      total += dt;
      t += dt;
      sensor.scan_frame_serial(empty_scene, Pose{}, dt, Weather{}, t);
    }
    const double swept = 2.0 * kPi * 10.0 * 1.0;
    const double column_spacing = 2.0 * kPi / 1024;
    CHECK(std::abs(static_cast<double>(sensor.emitted_columns()) * column_spacing - swept) <=
          column_spacing + 1e-9);
    CHECK(sensor.swept_azimuth_rad() == doctest::Approx(swept).epsilon(1e-9));
  }
}

TEST_CASE("determinism: same seed gives identical clouds; parallel equals serial") {
  Scene scene = oracles::random_mixed_scene(60, 77);
  LidarConfig cfg = basic_config();
  cfg.channels = 8;
  cfg.elevation_angles_rad = {-0.3, -0.2, -0.1, 0.0, 0.1, 0.2, 0.3, 0.4};
  Weather rain{2.0};

  LidarSensor a(cfg), b(cfg), c(cfg);
  const auto pa = a.scan_frame(scene, Pose{}, 0.05, rain, 0.05);
  const auto pb = b.scan_frame(scene, Pose{}, 0.05, rain, 0.05);
  const auto pc = c.scan_frame_serial(scene, Pose{}, 0.05, rain, 0.05);
  REQUIRE(pa.size() == pb.size());
  REQUIRE(pa.size() == pc.size());
  for (std::size_t i = 0; i < pa.size(); ++i) {
    CHECK(pa[i].x == pb[i].x);
    CHECK(pa[i].x == pc[i].x);
    CHECK(pa[i].intensity == pc[i].intensity);
    CHECK(pa[i].timestamp_s == pc[i].timestamp_s);
    CHECK(pa[i].label_id == pc[i].label_id);
  }
}

TEST_CASE("unknown band culls the point") {
  Scene scene;
  Material m;
  m.name = "narrowband";
  m.optical_reflectance["1550nm"] = 0.9;  // no "*" fallback
  const MaterialId narrow = scene.add_material(std::move(m));
  ObjectInstance wall;
  wall.name = "wall";
  wall.geometry = PlaneShape{{-1, 0, 0}, -5.0};
  wall.material_id = narrow;
  scene.add_object(std::move(wall));

  LidarConfig cfg = basic_config();
  cfg.band = "905nm";
  LidarSensor sensor(cfg);
  CHECK(sensor.scan_frame_serial(scene, Pose{}, 0.1, Weather{}, 0.1).empty());
}

TEST_SUITE_END();
