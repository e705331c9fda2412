#include "sensorforge/sim.hpp"

#include <algorithm>
#include <stdexcept>

namespace sensorforge {

Simulation::Simulation(Scene scene, SimClock clock)
    : scene_(std::move(scene)), clock_(clock) {}

void Simulation::request_rain(double rain_rate_mmh) {
  if (rain_rate_mmh < 0.0) throw std::invalid_argument("rain rate must be >= 0");
  pending_rain_ = rain_rate_mmh;
}

std::size_t Simulation::add_lidar(const std::string& name, lidar::LidarConfig cfg,
                                  const Mount& mount) {
  const SensorId id = scene_.sensor_id(name);
  lidars_.emplace_back(std::move(cfg), id);
  lidar_mounts_.push_back(mount);
  lidar_names_.push_back(name);
  return lidars_.size() - 1;
}

std::size_t Simulation::add_echo(const std::string& name, echo::EchoConfig cfg, const Mount& mount) {
  const SensorId id = scene_.sensor_id(name);
  echoes_.emplace_back(cfg, id);
  echo_mounts_.push_back(mount);
  echo_names_.push_back(name);
  return echoes_.size() - 1;
}

std::size_t Simulation::add_rf_tag(const std::string& name, rf::RfConfig cfg, const Mount& mount) {
  cfg.validate();
  scene_.sensor_id(name);  // reserve the name; rf paths ignore visibility masks
  rf_configs_.push_back(cfg);
  rf_mounts_.push_back(mount);
  rf_names_.push_back(name);
  return rf_configs_.size() - 1;
}

void Simulation::add_anchor(const rf::Anchor& anchor) {
  for (const auto& a : anchors_) {
    if (a.anchor_id == anchor.anchor_id) {
      throw std::invalid_argument("duplicate anchor id " + std::to_string(anchor.anchor_id));
    }
  }
  anchors_.push_back(anchor);
}

void Simulation::move_anchor(std::uint32_t anchor_id, const Vec3& position) {
  for (auto& a : anchors_) {
    if (a.anchor_id == anchor_id) {
      a.position = position;
      return;
    }
  }
  throw std::invalid_argument("unknown anchor id " + std::to_string(anchor_id));
}

void Simulation::add_actor(WaypointActor actor) {
  if (actor.object_id != 0 && scene_.find_object(actor.object_id) == nullptr) {
    throw std::invalid_argument("actor references unknown object id " +
                                std::to_string(actor.object_id));
  }
  if (actor.object_id != 0) actor.pose = scene_.find_object(actor.object_id)->pose;
  actors_.push_back(std::move(actor));
}

void Simulation::queue_placement(procgen::PlacementList list) {
  queued_placements_.push_back(std::move(list));
}

void Simulation::set_vehicle_waypoints(const Pose& initial, std::vector<Vec3> waypoints,
                                       double speed_mps, double avoidance_radius_m) {
  vehicle_mode_ = VehicleMode::kWaypoints;
  vehicle_actor_ = WaypointActor{};
  vehicle_actor_.waypoints = std::move(waypoints);
  vehicle_actor_.speed_mps = speed_mps;
  vehicle_actor_.avoidance_radius_m = avoidance_radius_m;
  vehicle_actor_.pose = initial;
  vehicle_pose_ = initial;
}

void Simulation::set_vehicle_replay(Trajectory trajectory) {
  if (trajectory.empty()) throw std::invalid_argument("replay trajectory is empty");
  vehicle_mode_ = VehicleMode::kReplay;
  vehicle_replay_ = std::move(trajectory);
  vehicle_pose_ = vehicle_replay_.replay(vehicle_replay_.t_first());
}

Pose Simulation::sensor_pose(const Mount& mount) const {
  return mount.vehicle_relative ? vehicle_pose_.compose(mount.pose) : mount.pose;
}

Simulation::FrameResult Simulation::step(double wall_dt) {
  FrameResult result;
  result.sim_dt = clock_.advance(wall_dt);
  result.sim_time = clock_.sim_time();

  // Frame barrier: everything that mutates shared state happens here.
  if (pending_rain_) {
    set_rain(weather_, *pending_rain_);
    pending_rain_.reset();
  }

  if (vehicle_mode_ == VehicleMode::kWaypoints) {
    actor_step(vehicle_actor_, scene_, result.sim_dt);
    vehicle_pose_ = vehicle_actor_.pose;
  } else if (vehicle_mode_ == VehicleMode::kReplay) {
    const double t = std::clamp(result.sim_time, vehicle_replay_.t_first(), vehicle_replay_.t_last());
    vehicle_pose_ = vehicle_replay_.replay(t);
  }
  if (vehicle_mode_ != VehicleMode::kNone) recorded_.record(result.sim_time, vehicle_pose_);

  for (WaypointActor& actor : actors_) actor_step(actor, scene_, result.sim_dt);

  for (const procgen::PlacementList& list : queued_placements_) {
    const auto added = procgen::instantiate(scene_, list);
    for (const rf::Anchor& anchor : added.anchors) {
      std::uint32_t id = anchor.anchor_id;
      while (std::any_of(anchors_.begin(), anchors_.end(),
                         [&](const rf::Anchor& a) { return a.anchor_id == id; })) {
        ++id;  // placements number anchors from 1; keep ids unique across lists
      }
      anchors_.push_back({id, anchor.position});
    }
  }
  queued_placements_.clear();

  // Scene is frozen from here on; sensors only read.
  for (std::size_t i = 0; i < lidars_.size(); ++i) {
    result.lidar_points.push_back(lidars_[i].scan_frame(scene_, sensor_pose(lidar_mounts_[i]),
                                                        result.sim_dt, weather_, result.sim_time));
  }
  for (std::size_t i = 0; i < echoes_.size(); ++i) {
    result.echoes.push_back(echoes_[i].trace(scene_, sensor_pose(echo_mounts_[i]), weather_));
  }
  for (std::size_t i = 0; i < rf_configs_.size(); ++i) {
    const rf::RfTracer tracer(scene_, rf_configs_[i]);
    const Vec3 tag = sensor_pose(rf_mounts_[i]).position;
    std::vector<RfObservation> observations;
    observations.reserve(anchors_.size());
    for (const rf::Anchor& anchor : anchors_) {
      RfObservation obs;
      obs.anchor_id = anchor.anchor_id;
      obs.paths = tracer.trace(tag, anchor.position);
      obs.range_m = rf::measure_range(obs.paths);
      observations.push_back(std::move(obs));
    }
    result.rf.push_back(std::move(observations));
  }
  return result;
}

}  // namespace sensorforge
