#pragma once

#include <cstddef>
#include <vector>

#include "sensorforge/scene.hpp"

namespace sensorforge {

struct DiffDriveState {
  double x = 0.0, y = 0.0;
  double heading_rad = 0.0;  // normalized to (-pi, pi]
  double track_width_m = 0.0;
  double v_left_mps = 0.0, v_right_mps = 0.0;
};

// Exact arc integration of the differential-drive (unicycle) model:
// v = (vl + vr) / 2, omega = (vr - vl) / track. Splitting dt into substeps
// reproduces the single step exactly, which the tests rely on.
DiffDriveState diffdrive_step(const DiffDriveState& state, double dt);

// Rigid actor that walks a waypoint list with stop-and-wait avoidance: when a
// raycast along the travel direction hits a non-self object within
// avoidance_radius, the actor holds position for the frame.
struct WaypointActor {
  ObjectId object_id = 0;  // 0 = virtual actor with no scene geometry
  std::vector<Vec3> waypoints;
  double speed_mps = 0.0;
  double avoidance_radius_m = 0.0;
  std::size_t cursor = 0;
  Pose pose;
};

void actor_step(WaypointActor& actor, Scene& scene, double dt);

// Timestamped pose samples with strictly increasing time. Replay
// interpolates linearly in position and along the shortest arc in
// orientation; querying outside the recorded span is an error.
class Trajectory {
 public:
  struct Sample {
    double t = 0.0;
    Pose pose;
  };

  void record(double t, const Pose& pose);
  Pose replay(double t) const;

  bool empty() const { return samples_.empty(); }
  std::size_t size() const { return samples_.size(); }
  const std::vector<Sample>& samples() const { return samples_; }
  double t_first() const;
  double t_last() const;

 private:
  std::vector<Sample> samples_;
};

}  // namespace sensorforge
