#include "sensorforge/run.hpp"

#include <chrono>
#include <filesystem>
#include <stdexcept>

#include <json.hpp>

#include "sensorforge/io.hpp"

namespace sensorforge {

using nlohmann::json;

namespace {

Vec3 vec3_at(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_array() || v.size() != 3) {
    throw std::runtime_error("config key '" + key + "' must be an array of 3 numbers");
  }
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

Pose pose_at(const json& j) {
  Pose pose;
  if (j.contains("position")) pose.position = vec3_at(j, "position");
  if (j.contains("yaw")) {
    pose.orientation = Quat::from_yaw(j.at("yaw").get<double>());
  } else if (j.contains("orientation")) {
    const json& q = j.at("orientation");
    if (!q.is_array() || q.size() != 4) {
      throw std::runtime_error("config key 'orientation' must be [w, x, y, z]");
    }
    pose.orientation =
        Quat{q[0].get<double>(), q[1].get<double>(), q[2].get<double>(), q[3].get<double>()}
            .normalized();
  }
  return pose;
}

Mount mount_at(const json& j, const std::string& sensor) {
  Mount mount;
  if (!j.contains("mount")) return mount;  // identity static mount
  const json& m = j.at("mount");
  const std::string frame = m.value("frame", "world");
  if (frame == "vehicle") {
    mount.vehicle_relative = true;
  } else if (frame != "world") {
    throw std::runtime_error("sensor '" + sensor + "': mount.frame must be 'world' or 'vehicle'");
  }
  if (m.contains("pose")) mount.pose = pose_at(m.at("pose"));
  return mount;
}

std::string resolve(const std::string& base_dir, const std::string& path) {
  const std::filesystem::path p(path);
  if (p.is_absolute() || base_dir.empty()) return path;
  return (std::filesystem::path(base_dir) / p).string();
}

double require_number(const json& j, const std::string& key, const std::string& context) {
  if (!j.contains(key)) throw std::runtime_error(context + ": missing required key '" + key + "'");
  if (!j.at(key).is_number()) throw std::runtime_error(context + ": key '" + key + "' must be a number");
  return j.at(key).get<double>();
}

}  // namespace

RunConfig parse_run_config(const std::string& text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("run config is not valid JSON: ") + e.what());
  }

  RunConfig config;

  if (!j.contains("scene")) throw std::runtime_error("run config: missing required key 'scene'");
  config.scene = io::load_scene(resolve(base_dir, j.at("scene").get<std::string>()));

  config.duration_s = require_number(j, "duration_s", "run config");
  if (!(config.duration_s > 0.0)) throw std::runtime_error("run config: 'duration_s' must be > 0");
  config.seed = j.value("seed", std::uint64_t{0});

  if (j.contains("clock")) {
    const json& c = j.at("clock");
    const std::string mode = c.value("mode", "fixed");
    if (mode == "fixed") {
      config.clock_mode = SimClock::Mode::kFixed;
      config.clock_fixed_dt = require_number(c, "fixed_dt", "clock");
      if (!(config.clock_fixed_dt > 0.0)) throw std::runtime_error("clock.fixed_dt must be > 0");
    } else if (mode == "realtime") {
      config.clock_mode = SimClock::Mode::kRealtime;
      config.clock_scale = c.value("scale", 1.0);
      if (!(config.clock_scale > 0.0)) throw std::runtime_error("clock.scale must be > 0");
    } else {
      throw std::runtime_error("clock.mode must be 'fixed' or 'realtime'");
    }
  }
  if (j.contains("weather")) {
    config.rain_rate = j.at("weather").value("rain_rate", 0.0);
    if (config.rain_rate < 0.0) throw std::runtime_error("weather.rain_rate must be >= 0");
  }

  if (j.contains("placement")) {
    config.placement = io::load_placement(resolve(base_dir, j.at("placement").get<std::string>()));
  }

  if (j.contains("vehicle")) {
    const json& v = j.at("vehicle");
    if (v.contains("replay")) {
      config.vehicle.mode = RunConfig::VehicleSpec::Mode::kReplay;
      config.vehicle.replay = io::load_trajectory(resolve(base_dir, v.at("replay").get<std::string>()));
    } else {
      config.vehicle.mode = RunConfig::VehicleSpec::Mode::kWaypoints;
      if (v.contains("pose")) config.vehicle.pose = pose_at(v.at("pose"));
      if (!v.contains("waypoints")) {
        throw std::runtime_error("vehicle: needs either 'waypoints' or 'replay'");
      }
      for (const json& w : v.at("waypoints")) {
        if (!w.is_array() || w.size() != 3) {
          throw std::runtime_error("vehicle.waypoints entries must be arrays of 3 numbers");
        }
        config.vehicle.waypoints.push_back({w[0].get<double>(), w[1].get<double>(), w[2].get<double>()});
      }
      config.vehicle.speed_mps = require_number(v, "speed", "vehicle");
      config.vehicle.avoidance_radius_m = v.value("avoidance_radius", 0.0);
    }
  }

  std::uint64_t sensor_index = 0;
  for (const json& l : j.value("lidars", json::array())) {
    RunConfig::LidarSpec spec;
    spec.name = l.value("name", "lidar" + std::to_string(config.lidars.size()));
    const std::string ctx = "lidar '" + spec.name + "'";
    spec.cfg.channels = static_cast<int>(require_number(l, "channels", ctx));
    if (l.contains("elevation_angles_rad")) {
      for (const json& e : l.at("elevation_angles_rad")) {
        spec.cfg.elevation_angles_rad.push_back(e.get<double>());
      }
    } else {
      const double lo = require_number(l, "elevation_min_rad", ctx);
      const double hi = require_number(l, "elevation_max_rad", ctx);
      for (int c = 0; c < spec.cfg.channels; ++c) {
        spec.cfg.elevation_angles_rad.push_back(
            spec.cfg.channels == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * c / (spec.cfg.channels - 1));
      }
    }
    spec.cfg.points_per_rotation = static_cast<int>(require_number(l, "points_per_rotation", ctx));
    spec.cfg.rotation_rate_hz = require_number(l, "rotation_rate_hz", ctx);
    spec.cfg.max_range_m = require_number(l, "max_range_m", ctx);
    if (!l.contains("band")) throw std::runtime_error(ctx + ": missing required key 'band'");
    spec.cfg.band = l.at("band").get<std::string>();
    if (!l.contains("limit_curve")) throw std::runtime_error(ctx + ": missing required key 'limit_curve'");
    for (const json& knot : l.at("limit_curve")) {
      if (!knot.is_array() || knot.size() != 2) {
        throw std::runtime_error(ctx + ": limit_curve knots must be [reflectance, range] pairs");
      }
      spec.cfg.limit_curve.knots.push_back({knot[0].get<double>(), knot[1].get<double>()});
    }
    // No defaults on the rain coefficients, so missing keys fail here.
    spec.cfg.rain_a = require_number(l, "rain_a", ctx);
    spec.cfg.rain_b = require_number(l, "rain_b", ctx);
    spec.cfg.seed = l.value("seed", derive_seed(config.seed, sensor_index));
    spec.cfg.validate();
    spec.mount = mount_at(l, spec.name);
    config.lidars.push_back(std::move(spec));
    ++sensor_index;
  }

  for (const json& e : j.value("echoes", json::array())) {
    RunConfig::EchoSpec spec;
    spec.name = e.value("name", "echo" + std::to_string(config.echoes.size()));
    const std::string ctx = "echo '" + spec.name + "'";
    spec.cfg.n_rays = static_cast<int>(require_number(e, "n_rays", ctx));
    spec.cfg.fov_azimuth_rad = require_number(e, "fov_azimuth_rad", ctx);
    spec.cfg.fov_elevation_rad = e.value("fov_elevation_rad", 0.0);
    spec.cfg.attenuation_limit_db = require_number(e, "attenuation_limit_db", ctx);
    spec.cfg.spreading_ref_m = e.value("spreading_ref_m", 1.0);
    spec.cfg.atmospheric_db_per_m = e.value("atmospheric_db_per_m", 0.0);
    spec.cfg.rain_db_per_m_per_mmh = e.value("rain_db_per_m_per_mmh", 0.0);
    spec.cfg.max_bounces = static_cast<int>(e.value("max_bounces", 1.0));
    spec.cfg.receiver_opening_angle_rad = require_number(e, "receiver_opening_angle_rad", ctx);
    spec.cfg.capture_radius_m = e.value("capture_radius_m", 0.05);
    const std::string mode = e.value("mode", "3d");
    if (mode == "2d") {
      spec.cfg.mode = echo::Mode::k2D;
    } else if (mode == "3d") {
      spec.cfg.mode = echo::Mode::k3D;
    } else {
      throw std::runtime_error(ctx + ": mode must be '2d' or '3d'");
    }
    spec.cfg.validate();
    spec.mount = mount_at(e, spec.name);
    config.echoes.push_back(std::move(spec));
  }

  for (const json& r : j.value("rf_tags", json::array())) {
    RunConfig::RfSpec spec;
    spec.name = r.value("name", "rf" + std::to_string(config.rf_tags.size()));
    const std::string ctx = "rf tag '" + spec.name + "'";
    spec.cfg.wavelength_m = require_number(r, "wavelength_m", ctx);
    if (r.contains("speed_mps")) spec.cfg.speed_mps = r.at("speed_mps").get<double>();
    spec.cfg.max_interactions = static_cast<int>(r.value("max_interactions", 3.0));
    spec.cfg.attenuation_floor_db = require_number(r, "attenuation_floor_db", ctx);
    spec.cfg.spreading_ref_m = r.value("spreading_ref_m", 1.0);
    spec.cfg.validate();
    spec.mount = mount_at(r, spec.name);
    if (r.contains("anchors")) {
      spec.anchors = io::load_anchors(resolve(base_dir, r.at("anchors").get<std::string>()));
    }
    config.rf_tags.push_back(std::move(spec));
  }

  return config;
}

RunConfig load_run_config(const std::string& path) {
  return parse_run_config(io::read_file(path),
                          std::filesystem::path(path).parent_path().string());
}

Simulation build_simulation(RunConfig config) {
  SimClock clock = config.clock_mode == SimClock::Mode::kFixed
                       ? SimClock::fixed_step(config.clock_fixed_dt)
                       : SimClock::realtime(config.clock_scale);
  Simulation sim(std::move(config.scene), clock);
  sim.request_rain(config.rain_rate);
  if (config.placement) sim.queue_placement(std::move(*config.placement));
  if (config.vehicle.mode == RunConfig::VehicleSpec::Mode::kWaypoints) {
    sim.set_vehicle_waypoints(config.vehicle.pose, config.vehicle.waypoints,
                              config.vehicle.speed_mps, config.vehicle.avoidance_radius_m);
  } else if (config.vehicle.mode == RunConfig::VehicleSpec::Mode::kReplay) {
    sim.set_vehicle_replay(std::move(config.vehicle.replay));
  }
  for (auto& spec : config.lidars) sim.add_lidar(spec.name, std::move(spec.cfg), spec.mount);
  for (auto& spec : config.echoes) sim.add_echo(spec.name, spec.cfg, spec.mount);
  for (auto& spec : config.rf_tags) {
    sim.add_rf_tag(spec.name, spec.cfg, spec.mount);
    for (const rf::Anchor& anchor : spec.anchors) sim.add_anchor(anchor);
  }
  return sim;
}

std::uint64_t run_simulation(RunConfig config, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const double duration = config.duration_s;
  const bool fixed = config.clock_mode == SimClock::Mode::kFixed;
  Simulation sim = build_simulation(std::move(config));

  std::vector<std::vector<lidar::LidarReturn>> lidar_acc(sim.lidar_names().size());
  std::vector<std::vector<echo::Echo>> echo_acc(sim.echo_names().size());
  std::vector<std::vector<io::RfPathRow>> rf_acc(sim.rf_names().size());
  std::vector<std::string> range_rows(sim.rf_names().size(), "t,anchor_id,range_m\n");

  auto wall_before = std::chrono::steady_clock::now();
  std::uint64_t frames = 0;
  while (sim.clock().sim_time() < duration - 1e-12) {
    double wall_dt = 0.0;
    if (!fixed) {
      const auto now = std::chrono::steady_clock::now();
      wall_dt = std::chrono::duration<double>(now - wall_before).count();
      wall_before = now;
    }
    const Simulation::FrameResult frame = sim.step(wall_dt);
    ++frames;

    for (std::size_t i = 0; i < frame.lidar_points.size(); ++i) {
      lidar_acc[i].insert(lidar_acc[i].end(), frame.lidar_points[i].begin(),
                          frame.lidar_points[i].end());
    }
    for (std::size_t i = 0; i < frame.echoes.size(); ++i) {
      echo_acc[i].insert(echo_acc[i].end(), frame.echoes[i].begin(), frame.echoes[i].end());
    }
    for (std::size_t i = 0; i < frame.rf.size(); ++i) {
      for (const Simulation::RfObservation& obs : frame.rf[i]) {
        const auto rows = io::rf_path_rows(obs.anchor_id, obs.paths);
        rf_acc[i].insert(rf_acc[i].end(), rows.begin(), rows.end());
        range_rows[i] += io::format_double(frame.sim_time) + "," + std::to_string(obs.anchor_id) +
                         "," + (obs.range_m ? io::format_double(*obs.range_m) : "no-signal") + "\n";
      }
    }
  }

  const fs::path out(out_dir);
  for (std::size_t i = 0; i < lidar_acc.size(); ++i) {
    io::save_point_cloud_ascii(lidar_acc[i], (out / (sim.lidar_names()[i] + ".txt")).string());
    io::save_point_cloud_pcd(lidar_acc[i], (out / (sim.lidar_names()[i] + ".pcd")).string());
  }
  for (std::size_t i = 0; i < echo_acc.size(); ++i) {
    io::save_echoes(echo_acc[i], (out / (sim.echo_names()[i] + ".csv")).string());
  }
  for (std::size_t i = 0; i < rf_acc.size(); ++i) {
    io::write_file((out / (sim.rf_names()[i] + "_paths.csv")).string(),
                   io::rf_paths_to_csv(rf_acc[i]));
    io::write_file((out / (sim.rf_names()[i] + "_ranges.csv")).string(), range_rows[i]);
  }
  io::save_label_table(sim.scene().labels(), (out / "labels.csv").string());
  if (sim.has_vehicle()) {
    io::save_trajectory(sim.recorded_trajectory(), (out / "trajectory.csv").string());
  }
  return frames;
}

}  // namespace sensorforge
