// Serial-vs-parallel timing for the sensor kernels on a 10k-triangle scene:
// one 32 x 1024 LiDAR frame (the 10 Hz real-time budget is 100 ms) and one
// pulse-echo sweep. Outputs one row per kernel with the speedup.

#include <chrono>
#include <cstdio>
#include <numbers>

#include "sensorforge/echo.hpp"
#include "sensorforge/lidar.hpp"
#include "sensorforge/rng.hpp"
#include "sensorforge/scene.hpp"
#include "sensorforge/threading.hpp"

using namespace sensorforge;

namespace {

// Triangle soup in a shell around the origin so most beams hit something.
Scene make_mesh_scene(int triangle_count, std::uint64_t seed) {
  Rng rng(seed);
  TriangleMesh mesh;
  for (int t = 0; t < triangle_count; ++t) {
    const double az = rng.next_double(0.0, 2.0 * std::numbers::pi);
    const double r = rng.next_double(8.0, 60.0);
    const Vec3 center{r * std::cos(az), r * std::sin(az), rng.next_double(-3.0, 6.0)};
    const std::uint32_t base = static_cast<std::uint32_t>(mesh.vertices.size());
    for (int v = 0; v < 3; ++v) {
      mesh.vertices.push_back(center + Vec3{rng.next_double(-0.6, 0.6), rng.next_double(-0.6, 0.6),
                                            rng.next_double(-0.6, 0.6)});
    }
    mesh.triangles.push_back({base, base + 1, base + 2});
  }
  ObjectInstance obj;
  obj.name = "soup";
  obj.geometry = std::move(mesh);
  Scene scene;
  scene.add_object(std::move(obj));
  return scene;
}

lidar::LidarConfig bench_lidar_config() {
  lidar::LidarConfig cfg;
  cfg.channels = 32;
  for (int c = 0; c < 32; ++c) {
    cfg.elevation_angles_rad.push_back(-0.3 + 0.6 * c / 31.0);
  }
  cfg.points_per_rotation = 1024;
  cfg.rotation_rate_hz = 10.0;
  cfg.max_range_m = 100.0;
  cfg.band = "*";
  cfg.limit_curve.knots = {{0.1, 50.0}, {1.0, 100.0}};
  cfg.rain_a = 0.01;
  cfg.rain_b = 0.6;
  cfg.seed = 7;
  return cfg;
}

template <typename F>
double time_ms(F&& fn, int reps) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main() {
  const Scene scene = make_mesh_scene(10000, 42);
  scene.raycast({0, 0, 0}, {1, 0, 0}, 100.0);  // warm the BVH build
  const Weather dry{};

  std::printf("%-28s %12s %12s %8s\n", "kernel", "serial ms", "parallel ms", "speedup");

  {
    lidar::LidarSensor serial(bench_lidar_config());
    lidar::LidarSensor parallel(bench_lidar_config());
    const double t_serial = time_ms(
        [&] { serial.scan_frame_serial(scene, Pose{}, 0.1, dry, serial.swept_azimuth_rad()); }, 5);
    const double t_parallel = time_ms(
        [&] { parallel.scan_frame(scene, Pose{}, 0.1, dry, parallel.swept_azimuth_rad()); }, 5);
    std::printf("%-28s %12.2f %12.2f %7.2fx\n", "lidar 32x1024 frame", t_serial, t_parallel,
                t_serial / t_parallel);
  }

  {
    echo::EchoConfig cfg;
    cfg.n_rays = 100000;
    cfg.fov_azimuth_rad = 2.0 * std::numbers::pi;
    cfg.fov_elevation_rad = 0.6;
    cfg.attenuation_limit_db = 60.0;
    cfg.max_bounces = 3;
    cfg.receiver_opening_angle_rad = std::numbers::pi;
    const echo::EchoSensor sensor(cfg);
    const double t_serial = time_ms([&] { sensor.trace_serial(scene, Pose{}, dry); }, 3);
    const double t_parallel = time_ms([&] { sensor.trace(scene, Pose{}, dry); }, 3);
    std::printf("%-28s %12.2f %12.2f %7.2fx\n", "echo 100k rays", t_serial, t_parallel,
                t_serial / t_parallel);
  }

  std::printf("workers: %d\n", worker_count());
  return 0;
}
