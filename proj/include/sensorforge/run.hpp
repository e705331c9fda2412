#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sensorforge/sim.hpp"

namespace sensorforge {

// Parsed `simulate` run configuration. Loading validates the schema and
// resolves every referenced file; violations throw with the offending key.
struct RunConfig {
  Scene scene;
  SimClock::Mode clock_mode = SimClock::Mode::kFixed;
  double clock_scale = 1.0;
  double clock_fixed_dt = 0.1;
  double rain_rate = 0.0;
  double duration_s = 0.0;
  std::uint64_t seed = 0;

  struct LidarSpec {
    std::string name;
    lidar::LidarConfig cfg;
    Mount mount;
  };
  struct EchoSpec {
    std::string name;
    echo::EchoConfig cfg;
    Mount mount;
  };
  struct RfSpec {
    std::string name;
    rf::RfConfig cfg;
    Mount mount;
    std::vector<rf::Anchor> anchors;
  };
  struct VehicleSpec {
    enum class Mode { kNone, kWaypoints, kReplay };
    Mode mode = Mode::kNone;
    Pose pose;
    std::vector<Vec3> waypoints;
    double speed_mps = 0.0;
    double avoidance_radius_m = 0.0;
    Trajectory replay;
  };

  std::vector<LidarSpec> lidars;
  std::vector<EchoSpec> echoes;
  std::vector<RfSpec> rf_tags;
  VehicleSpec vehicle;
  std::optional<procgen::PlacementList> placement;  // instantiated at the first barrier
};

RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& text, const std::string& base_dir);

Simulation build_simulation(RunConfig config);

// Runs the frame loop for config.duration_s simulation seconds and writes all
// sensor outputs, the label table, and the vehicle trajectory into out_dir.
// Returns the number of frames executed.
std::uint64_t run_simulation(RunConfig config, const std::string& out_dir);

}  // namespace sensorforge
