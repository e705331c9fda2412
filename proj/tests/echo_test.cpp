#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "oracles.hpp"
#include "sensorforge/echo.hpp"

using namespace sensorforge;
using namespace sensorforge::echo;

namespace {

constexpr double kPi = std::numbers::pi;

EchoConfig plate_config() {
  EchoConfig cfg;
  cfg.n_rays = 1;
  cfg.fov_azimuth_rad = 0.0;
  cfg.fov_elevation_rad = 0.0;
  cfg.attenuation_limit_db = 60.0;
  cfg.max_bounces = 2;
  cfg.receiver_opening_angle_rad = 0.2;
  return cfg;
}

// Thin plate whose front face sits exactly at `distance` along +x.
Scene plate_scene(double distance, double yaw) {
  Scene scene;
  ObjectInstance plate;
  plate.name = "plate";
  plate.geometry = BoxShape{{0.05, 2.0, 2.0}};
  plate.pose.position = {distance + 0.05, 0.0, 0.0};
  plate.pose.orientation = Quat::from_yaw(yaw);
  scene.add_object(std::move(plate));
  return scene;
}

}  // namespace

TEST_SUITE_BEGIN("echo");

TEST_CASE("spreading loss closed forms") {
  CHECK(spreading_loss(1.0, 1.0) == 0.0);
  CHECK(spreading_loss(10.0, 1.0) == doctest::Approx(20.0));
  CHECK(spreading_loss(100.0, 1.0) == doctest::Approx(40.0));
  CHECK(spreading_loss(0.5, 1.0) == 0.0);  // clamped below the reference
}

TEST_CASE("direction sampling degenerate cases") {
  const auto one = sample_directions(1.0, 0.5, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].x == doctest::Approx(1.0));

  // Zero field of view collapses every ray onto the boresight.
  for (const Vec3& d : sample_directions(0.0, 0.0, 50)) {
    CHECK(d.x == doctest::Approx(1.0));
    CHECK(std::abs(d.y) < 1e-12);
    CHECK(std::abs(d.z) < 1e-12);
  }

  for (const Vec3& d : sample_directions_2d(1.2, 33)) CHECK(d.z == 0.0);
  const auto single_2d = sample_directions_2d(1.2, 1);
  CHECK(single_2d[0].x == doctest::Approx(1.0));
}

TEST_CASE("full-sphere lattice is uniform per solid angle (chi-square)") {
  const int n = 100000;
  const auto dirs = sample_directions(2.0 * kPi, kPi, n);
  REQUIRE(static_cast<int>(dirs.size()) == n);

  // 10 equal-area z bands x 10 azimuth sectors = 100 equal-solid-angle bins.
  int counts[100] = {};
  for (const Vec3& d : dirs) {
    CHECK(norm(d) == doctest::Approx(1.0));
    int zi = static_cast<int>((d.z + 1.0) / 2.0 * 10.0);
    int ai = static_cast<int>((std::atan2(d.y, d.x) + kPi) / (2.0 * kPi) * 10.0);
    zi = std::clamp(zi, 0, 9);
    ai = std::clamp(ai, 0, 9);
    counts[zi * 10 + ai]++;
  }
  const double expected = n / 100.0;
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  CHECK(oracles::chi2_pvalue(chi2, 99) > 0.01);
}

TEST_CASE("normal plate: one echo family at twice the distance") {
  const Scene scene = plate_scene(3.0, 0.0);
  const EchoSensor sensor(plate_config());
  const auto echoes = sensor.trace_serial(scene, Pose{}, Weather{});
  REQUIRE(echoes.size() == 1);
  CHECK(echoes[0].total_path_m == doctest::Approx(6.0).epsilon(1e-9));
  CHECK(echoes[0].bounce_count == 1);
  CHECK(echoes[0].arrival_direction.x == doctest::Approx(1.0));
  CHECK(echoes[0].point.x == doctest::Approx(3.0).epsilon(1e-9));
  // Spreading over the folded 6 m path minus nothing else.
  CHECK(echoes[0].power_db == doctest::Approx(-20.0 * std::log10(6.0)).epsilon(1e-9));
}

TEST_CASE("tilted plate reflects away: zero echoes") {
  const Scene scene = plate_scene(3.0, kPi / 4);
  EchoConfig cfg = plate_config();
  cfg.n_rays = 5000;
  cfg.fov_azimuth_rad = 0.8;
  cfg.fov_elevation_rad = 0.4;
  const EchoSensor sensor(cfg);
  CHECK(sensor.trace_serial(scene, Pose{}, Weather{}).empty());
}

TEST_CASE("corner reflector: two-bounce echoes at the image-method distance") {
  // Two thin perpendicular walls meeting along a vertical corner line at
  // (6, 0), each tilted 45 degrees to the boresight, so rays bounce
  // wall-to-wall and return antiparallel.
  const double half_thickness = 0.005;
  Scene scene;
  ObjectInstance wall_a;
  wall_a.name = "wall_a";
  wall_a.geometry = BoxShape{{half_thickness, 3.0, 2.0}};
  wall_a.pose.orientation = Quat::from_yaw(kPi / 4);
  wall_a.pose.position = Vec3{6.0, 0.0, 0.0} + wall_a.pose.orientation.rotate(Vec3{0.0, 3.0, 0.0});
  scene.add_object(std::move(wall_a));

  ObjectInstance wall_b;
  wall_b.name = "wall_b";
  wall_b.geometry = BoxShape{{half_thickness, 3.0, 2.0}};
  wall_b.pose.orientation = Quat::from_yaw(-kPi / 4);
  wall_b.pose.position = Vec3{6.0, 0.0, 0.0} + wall_b.pose.orientation.rotate(Vec3{0.0, -3.0, 0.0});
  scene.add_object(std::move(wall_b));

  EchoConfig cfg;
  cfg.n_rays = 100000;
  cfg.fov_azimuth_rad = 0.6;
  cfg.fov_elevation_rad = 0.0;  // keep rays in the corner plane
  cfg.attenuation_limit_db = 80.0;
  cfg.max_bounces = 3;
  cfg.receiver_opening_angle_rad = kPi / 2;
  const EchoSensor sensor(cfg);
  const auto echoes = sensor.trace(scene, Pose{}, Weather{});

  // Image method: double reflection through the corner line returns the ray
  // antiparallel with total path 2 * (perpendicular distance to the corner
  // formed by the reflecting front faces).
  const double expected = 2.0 * (6.0 - half_thickness * std::sqrt(2.0));
  int two_bounce = 0;
  for (const auto& e : echoes) {
    if (e.bounce_count == 2) {
      ++two_bounce;
      CHECK(e.total_path_m == doctest::Approx(expected).epsilon(0.01));
    }
  }
  CHECK(two_bounce > 0);
}

TEST_CASE("echo power decreases with total path and respects the budget") {
  Scene scene;
  for (double d : {3.0, 6.0, 12.0}) {
    ObjectInstance plate;
    plate.name = "plate_" + std::to_string(d);
    plate.geometry = BoxShape{{0.05, 1.0, 1.0}};
    plate.pose.position = {d, 0.0, 0.0};
    scene.add_object(std::move(plate));
  }
  EchoConfig cfg = plate_config();
  cfg.max_bounces = 1;
  const EchoSensor sensor(cfg);
  const auto echoes = sensor.trace_serial(scene, Pose{}, Weather{});
  REQUIRE(echoes.size() == 1);  // nearest plate shadows the others on boresight

  // Separate sensors at different standoffs: power strictly decreasing in path.
  double last_power = 1.0;
  for (double standoff : {0.0, 1.0, 2.0}) {
    const Scene s = plate_scene(5.0 + standoff, 0.0);
    const auto e = EchoSensor(plate_config()).trace_serial(s, Pose{}, Weather{});
    REQUIRE(e.size() == 1);
    CHECK(e[0].power_db < last_power);
    CHECK(-e[0].power_db <= plate_config().attenuation_limit_db);
    last_power = e[0].power_db;
  }
}

TEST_CASE("attenuation budget kills far returns") {
  EchoConfig cfg = plate_config();
  cfg.attenuation_limit_db = 15.0;  // spreading over 6 m is ~15.56 dB
  const EchoSensor sensor(cfg);
  CHECK(sensor.trace_serial(plate_scene(3.0, 0.0), Pose{}, Weather{}).empty());
  CHECK(!sensor.trace_serial(plate_scene(2.0, 0.0), Pose{}, Weather{}).empty());
}

TEST_CASE("material acoustic loss is charged per bounce") {
  Scene scene;
  Material absorber;
  absorber.name = "foam";
  absorber.acoustic_reflection_loss_db = 50.0;
  const MaterialId foam = scene.add_material(std::move(absorber));
  ObjectInstance plate;
  plate.name = "plate";
  plate.geometry = BoxShape{{0.05, 2.0, 2.0}};
  plate.pose.position = {3.05, 0.0, 0.0};  // front face at x = 3
  plate.material_id = foam;
  scene.add_object(std::move(plate));

  EchoConfig cfg = plate_config();
  cfg.attenuation_limit_db = 40.0;  // 50 dB bounce loss exceeds it
  CHECK(EchoSensor(cfg).trace_serial(scene, Pose{}, Weather{}).empty());
  cfg.attenuation_limit_db = 80.0;
  const auto echoes = EchoSensor(cfg).trace_serial(scene, Pose{}, Weather{});
  REQUIRE(echoes.size() == 1);
  CHECK(-echoes[0].power_db == doctest::Approx(20.0 * std::log10(6.0) + 50.0).epsilon(1e-9));
}

TEST_CASE("2D mode keeps rays and echoes at zero elevation") {
  Scene scene;
  ObjectInstance wall;
  wall.name = "wall";
  wall.geometry = BoxShape{{0.1, 10.0, 3.0}};
  wall.pose.position = {4.0, 0.0, 0.0};
  scene.add_object(std::move(wall));

  EchoConfig cfg;
  cfg.n_rays = 501;
  cfg.fov_azimuth_rad = 1.0;
  cfg.attenuation_limit_db = 60.0;
  cfg.max_bounces = 2;
  cfg.receiver_opening_angle_rad = kPi;
  cfg.mode = Mode::k2D;
  const auto echoes = EchoSensor(cfg).trace_serial(scene, Pose{}, Weather{});
  CHECK(!echoes.empty());
  for (const auto& e : echoes) {
    CHECK(std::abs(e.arrival_direction.z) < 1e-12);
    CHECK(std::abs(e.point.z) < 1e-12);
  }
}

TEST_CASE("doubling n_rays never removes an echo family (2D)") {
  Scene scene;
  ObjectInstance wall;
  wall.name = "wall";
  wall.geometry = BoxShape{{0.1, 8.0, 3.0}};
  wall.pose.position = {5.0, 0.0, 0.0};
  scene.add_object(std::move(wall));
  ObjectInstance side;
  side.name = "side";
  side.geometry = BoxShape{{8.0, 0.1, 3.0}};
  side.pose.position = {0.0, 4.0, 0.0};
  scene.add_object(std::move(side));

  auto families = [&](int n_rays) {
    EchoConfig cfg;
    cfg.n_rays = n_rays;
    cfg.fov_azimuth_rad = 2.0 * kPi;
    cfg.attenuation_limit_db = 80.0;
    cfg.max_bounces = 3;
    cfg.receiver_opening_angle_rad = kPi;
    cfg.mode = Mode::k2D;
    std::map<long, int> buckets;  // path length quantized to 0.5 m
    for (const auto& e : EchoSensor(cfg).trace_serial(scene, Pose{}, Weather{})) {
      buckets[std::lround(e.total_path_m * 2.0)]++;
    }
    return buckets;
  };

  const auto coarse = families(2000);
  const auto fine = families(4000);
  const auto finest = families(8000);
  CHECK(!coarse.empty());
  for (const auto& [bucket, count] : coarse) {
    CHECK(fine.contains(bucket));
    CHECK(finest.contains(bucket));
  }
}

TEST_SUITE_END();
