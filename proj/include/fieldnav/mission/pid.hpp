#pragma once

namespace fieldnav {

struct PidGains {
  double kp{1.5};
  double ki{0.2};
  double kd{0.4};
  double i_max{0.5};   ///< anti-windup bound on the integral state
  double vz_max{1.0};  ///< output saturation
};

struct PidState {
  PidGains gains{};
  double setpoint{0.0};
  double integral{0.0};
  double prev_error{0.0};
};

/// One controller update; returns the saturated vertical velocity command.
double pid_step(PidState& state, double measured, double dt);

/// Vertical axis of the vehicle: the commanded climb rate reaches the airframe through a first-order
/// lag. Integrated exactly for piecewise-constant commands.
struct AltitudePlant {
  double time_constant{0.2};
  double z{0.0};
  double rate{0.0};  ///< actual climb rate

  void step(double commanded_rate, double dt);
};

}  // namespace fieldnav
