#include "sensorforge/clock.hpp"

#include <stdexcept>
#include <string>

namespace sensorforge {

SimClock SimClock::realtime(double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("clock.scale must be > 0");
  return SimClock(Mode::kRealtime, scale, 0.0);
}

SimClock SimClock::fixed_step(double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("clock.fixed_dt must be > 0");
  return SimClock(Mode::kFixed, 1.0, dt);
}

double SimClock::advance(double wall_dt) {
  if (wall_dt < 0.0) {
    throw std::invalid_argument("clock cannot advance by negative wall time " +
                                std::to_string(wall_dt));
  }
  ++frames_;
  if (mode_ == Mode::kFixed) return dt_;
  const double sim_dt = wall_dt * scale_;
  realtime_accum_ += sim_dt;
  return sim_dt;
}

double SimClock::sim_time() const {
  return mode_ == Mode::kFixed ? static_cast<double>(frames_) * dt_ : realtime_accum_;
}

void set_rain(Weather& weather, double rate_mmh) {
  if (rate_mmh < 0.0) {
    throw std::invalid_argument("weather.rain_rate must be >= 0 mm/h, got " +
                                std::to_string(rate_mmh));
  }
  weather.rain_rate_mmh = rate_mmh;
}

}  // namespace sensorforge
