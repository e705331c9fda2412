#pragma once

#include <cstdint>

namespace sensorforge {

// Simulation clock. Realtime mode scales wall time; fixed mode ignores wall
// time and advances by the same dt every frame. Fixed-mode time is kept as an
// integer step count so n steps land on exactly n * dt.
class SimClock {
 public:
  enum class Mode { kRealtime, kFixed };

  static SimClock realtime(double scale);
  static SimClock fixed_step(double dt);

  // Advances the clock by one frame and returns the elapsed simulation time.
  double advance(double wall_dt);

  double sim_time() const;
  Mode mode() const { return mode_; }
  double scale() const { return scale_; }
  double fixed_dt() const { return dt_; }
  std::uint64_t frame_count() const { return frames_; }

 private:
  SimClock(Mode mode, double scale, double dt) : mode_(mode), scale_(scale), dt_(dt) {}

  Mode mode_;
  double scale_;
  double dt_;
  double realtime_accum_ = 0.0;
  std::uint64_t frames_ = 0;
};

struct Weather {
  double rain_rate_mmh = 0.0;
};

// Sets the rain rate; rejects negative values.
void set_rain(Weather& weather, double rate_mmh);

}  // namespace sensorforge
