#include "sensorforge/motion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sensorforge {

DiffDriveState diffdrive_step(const DiffDriveState& state, double dt) {
  if (dt < 0.0) throw std::invalid_argument("diffdrive_step: dt must be >= 0");
  if (!(state.track_width_m > 0.0)) {
    throw std::invalid_argument("diffdrive_step: track width must be > 0");
  }
  DiffDriveState next = state;
  const double v = 0.5 * (state.v_left_mps + state.v_right_mps);
  const double omega = (state.v_right_mps - state.v_left_mps) / state.track_width_m;
  if (std::abs(omega) < 1e-12) {
    next.x += v * std::cos(state.heading_rad) * dt;
    next.y += v * std::sin(state.heading_rad) * dt;
    return next;
  }
  const double radius = v / omega;
  const double theta1 = state.heading_rad + omega * dt;
  next.x += radius * (std::sin(theta1) - std::sin(state.heading_rad));
  next.y += radius * (-std::cos(theta1) + std::cos(state.heading_rad));
  next.heading_rad = normalize_angle(theta1);
  return next;
}

void actor_step(WaypointActor& actor, Scene& scene, double dt) {
  if (dt < 0.0) throw std::invalid_argument("actor_step: dt must be >= 0");
  if (actor.cursor >= actor.waypoints.size()) return;

  const Vec3 to_target = actor.waypoints[actor.cursor] - actor.pose.position;
  const double dist = norm(to_target);
  const double step = actor.speed_mps * dt;
  if (dist <= 1e-12) {
    ++actor.cursor;
    return;
  }
  if (step <= 0.0) return;

  const Vec3 dir = to_target / dist;
  const auto ahead = scene.raycast(actor.pose.position, dir,
                                   std::max(actor.avoidance_radius_m, 1e-9),
                                   {0, actor.object_id});
  if (ahead) return;  // stop and wait until the path clears

  if (dist <= step) {
    actor.pose.position = actor.waypoints[actor.cursor];
    ++actor.cursor;
  } else {
    actor.pose.position += dir * step;
  }
  if (std::abs(dir.x) > 1e-12 || std::abs(dir.y) > 1e-12) {
    actor.pose.orientation = Quat::from_yaw(std::atan2(dir.y, dir.x));
  }
  if (actor.object_id != 0) scene.set_object_pose(actor.object_id, actor.pose);
}

void Trajectory::record(double t, const Pose& pose) {
  if (!samples_.empty() && t <= samples_.back().t) {
    throw std::invalid_argument("trajectory timestamps must be strictly increasing");
  }
  samples_.push_back({t, pose});
}

double Trajectory::t_first() const {
  if (samples_.empty()) throw std::out_of_range("trajectory is empty");
  return samples_.front().t;
}

double Trajectory::t_last() const {
  if (samples_.empty()) throw std::out_of_range("trajectory is empty");
  return samples_.back().t;
}

Pose Trajectory::replay(double t) const {
  if (samples_.empty() || t < t_first() || t > t_last()) {
    throw std::out_of_range("replay time " + std::to_string(t) + " outside recorded range [" +
                            (samples_.empty() ? "empty" : std::to_string(t_first()) + ", " +
                                                              std::to_string(t_last())) +
                            "]");
  }
  // First sample with time >= t.
  const auto it = std::lower_bound(samples_.begin(), samples_.end(), t,
                                   [](const Sample& s, double time) { return s.t < time; });
  if (it->t == t || it == samples_.begin()) return it->pose;
  const Sample& a = *(it - 1);
  const Sample& b = *it;
  const double u = (t - a.t) / (b.t - a.t);
  Pose out;
  out.position = a.pose.position + (b.pose.position - a.pose.position) * u;
  out.orientation = slerp(a.pose.orientation, b.pose.orientation, u);
  return out;
}

}  // namespace sensorforge
