#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sensorforge/clock.hpp"
#include "sensorforge/echo.hpp"
#include "sensorforge/lidar.hpp"
#include "sensorforge/motion.hpp"
#include "sensorforge/procgen.hpp"
#include "sensorforge/rf.hpp"
#include "sensorforge/scene.hpp"

namespace sensorforge {

struct Mount {
  bool vehicle_relative = false;  // false = static world pose
  Pose pose;
};

// One frame of the simulation. Barrier order inside step():
//   1. clock advance
//   2. deferred weather change
//   3. motion (vehicle, actors)
//   4. queued procedural placements
//   5. sensor evaluations against the now-frozen scene
class Simulation {
 public:
  struct RfObservation {
    std::uint32_t anchor_id = 0;
    std::vector<rf::RfPath> paths;
    std::optional<double> range_m;
  };
  struct FrameResult {
    double sim_dt = 0.0;
    double sim_time = 0.0;
    std::vector<std::vector<lidar::LidarReturn>> lidar_points;  // one per lidar
    std::vector<std::vector<echo::Echo>> echoes;                // one per echo sensor
    std::vector<std::vector<RfObservation>> rf;                 // one per rf tag
  };

  Simulation(Scene scene, SimClock clock);

  Scene& scene() { return scene_; }  // mutate only at the frame barrier
  const Scene& scene() const { return scene_; }
  const SimClock& clock() const { return clock_; }
  const Weather& weather() const { return weather_; }

  // Takes effect at the next frame barrier, never mid-frame.
  void request_rain(double rain_rate_mmh);

  std::size_t add_lidar(const std::string& name, lidar::LidarConfig cfg, const Mount& mount);
  std::size_t add_echo(const std::string& name, echo::EchoConfig cfg, const Mount& mount);
  std::size_t add_rf_tag(const std::string& name, rf::RfConfig cfg, const Mount& mount);

  const std::vector<std::string>& lidar_names() const { return lidar_names_; }
  const std::vector<std::string>& echo_names() const { return echo_names_; }
  const std::vector<std::string>& rf_names() const { return rf_names_; }

  // Runtime anchors; moving one touches no scene state.
  void add_anchor(const rf::Anchor& anchor);
  void move_anchor(std::uint32_t anchor_id, const Vec3& position);
  const std::vector<rf::Anchor>& anchors() const { return anchors_; }

  void add_actor(WaypointActor actor);
  void queue_placement(procgen::PlacementList list);

  void set_vehicle_waypoints(const Pose& initial, std::vector<Vec3> waypoints, double speed_mps,
                             double avoidance_radius_m);
  void set_vehicle_replay(Trajectory trajectory);
  const Pose& vehicle_pose() const { return vehicle_pose_; }
  bool has_vehicle() const { return vehicle_mode_ != VehicleMode::kNone; }
  const Trajectory& recorded_trajectory() const { return recorded_; }

  FrameResult step(double wall_dt);

 private:
  enum class VehicleMode { kNone, kWaypoints, kReplay };

  Pose sensor_pose(const Mount& mount) const;

  Scene scene_;
  SimClock clock_;
  Weather weather_;
  std::optional<double> pending_rain_;

  std::vector<lidar::LidarSensor> lidars_;
  std::vector<Mount> lidar_mounts_;
  std::vector<std::string> lidar_names_;
  std::vector<echo::EchoSensor> echoes_;
  std::vector<Mount> echo_mounts_;
  std::vector<std::string> echo_names_;
  std::vector<rf::RfConfig> rf_configs_;
  std::vector<Mount> rf_mounts_;
  std::vector<std::string> rf_names_;

  std::vector<rf::Anchor> anchors_;
  std::vector<WaypointActor> actors_;
  std::vector<procgen::PlacementList> queued_placements_;

  VehicleMode vehicle_mode_ = VehicleMode::kNone;
  WaypointActor vehicle_actor_;  // waypoint mode, no scene object
  Trajectory vehicle_replay_;
  Pose vehicle_pose_;
  Trajectory recorded_;
};

}  // namespace sensorforge
