#include "fieldnav/mission/pid.hpp"

#include <algorithm>
#include <cmath>

namespace fieldnav {

double pid_step(PidState& state, double measured, double dt) {
  const PidGains& g = state.gains;
  const double error = state.setpoint - measured;
  state.integral = std::clamp(state.integral + error * dt, -g.i_max, g.i_max);
  const double derivative = (error - state.prev_error) / dt;
  state.prev_error = error;
  const double output = g.kp * error + g.ki * state.integral + g.kd * derivative;
  return std::clamp(output, -g.vz_max, g.vz_max);
}

void AltitudePlant::step(double commanded_rate, double dt) {
  if (time_constant <= 0.0) {
    rate = commanded_rate;
    z += rate * dt;
  } else {
    const double decay = std::exp(-dt / time_constant);
    // z gains the commanded part plus the exponentially vanishing share of the old rate.
    z += commanded_rate * dt + (rate - commanded_rate) * time_constant * (1.0 - decay);
    rate = commanded_rate + (rate - commanded_rate) * decay;
  }
  z = std::max(z, 0.0);
}

}  // namespace fieldnav
