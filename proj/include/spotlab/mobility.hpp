#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "spotlab/geom.hpp"
#include "spotlab/rng.hpp"

namespace spotlab {

enum class MobilityModel { random_waypoint, random_direction_reflect };

inline std::string mobility_model_name(MobilityModel m) {
  return m == MobilityModel::random_waypoint ? "waypoint" : "direction_reflect";
}

struct MobilityConfig {
  MobilityModel model = MobilityModel::random_direction_reflect;
  double v_max = 0.1;            // domain units per second
  double dt = 0.01;              // reserved step granularity; motion advances exactly
  double warmup_per_user = 1.0;  // user i moves for i * warmup_per_user seconds

  void validate() const {
    if (!(v_max >= 0.0)) throw std::invalid_argument("MobilityConfig: v_max must be >= 0");
    if (!(dt > 0.0)) throw std::invalid_argument("MobilityConfig: dt must be > 0");
    if (!(warmup_per_user >= 0.0)) {
      throw std::invalid_argument("MobilityConfig: warmup_per_user must be >= 0");
    }
  }
};

namespace detail {

// Reflects a coordinate into [0, 1]: unbounded motion folded by the walls.
inline double reflect01(double z) {
  z = std::fmod(z, 2.0);
  if (z < 0.0) z += 2.0;
  return z > 1.0 ? 2.0 - z : z;
}

}  // namespace detail

// Position after `duration` seconds of motion. Both models draw speeds
// uniformly from (0, v_max]; the reflecting model keeps a constant heading
// and bounces off the walls, the waypoint model walks from waypoint to
// waypoint. Kinematics are advanced in closed form.
inline Point evolve_position(Point p, const MobilityConfig& cfg, double duration, Rng& rng) {
  cfg.validate();
  if (duration < 0.0) throw std::invalid_argument("evolve_position: negative duration");
  if (cfg.v_max == 0.0 || duration == 0.0) return p;

  if (cfg.model == MobilityModel::random_direction_reflect) {
    const double heading = rng.uniform01() * 2.0 * M_PI;
    const double speed = cfg.v_max * (1.0 - rng.uniform01());  // (0, v_max]
    return {detail::reflect01(p.x + std::cos(heading) * speed * duration),
            detail::reflect01(p.y + std::sin(heading) * speed * duration)};
  }

  // Random waypoint: travel leg by leg until the time budget runs out.
  double remaining = duration;
  Point pos = p;
  while (remaining > 0.0) {
    const double wx = rng.uniform01();
    const double wy = rng.uniform01();
    const double speed = cfg.v_max * (1.0 - rng.uniform01());
    const double dx = wx - pos.x;
    const double dy = wy - pos.y;
    const double dist = std::sqrt(dx * dx + dy * dy);
    if (dist == 0.0) continue;
    const double leg_time = dist / speed;
    if (leg_time >= remaining) {
      const double f = remaining * speed / dist;
      pos = {pos.x + dx * f, pos.y + dy * f};
      break;
    }
    pos = {wx, wy};
    remaining -= leg_time;
  }
  return pos;
}

}  // namespace spotlab
