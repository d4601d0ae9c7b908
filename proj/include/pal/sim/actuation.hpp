#pragma once

#include <deque>

#include "pal/types.hpp"

namespace pal::sim {

// tau = clamp(Kp (q_des - q) - Kd qdot, +-tau_max), elementwise.
VecX pd_torque(double kp, double kd, const VecX& q_des, const VecX& q,
               const VecX& qdot, double tau_max);

enum class ActuatorMode { IdealPd, Nonlinear };

// Stand-in for hardware actuator dynamics: linear torque-speed derating above
// a knee speed, continuous in the joint rate.
//   sat(qd) = 1                                   for |qd| <= knee
//           = max(0, 1 - slope (|qd|/knee - 1))   above
struct NonlinearActuatorParams {
  double knee_speed = 8.0;        // rad/s
  double derating_slope = 0.7;
};

double torque_speed_derating(double qdot, const NonlinearActuatorParams& p);

VecX nonlinear_torque(double kp, double kd, const VecX& q_des, const VecX& q,
                      const VecX& qdot, double tau_max,
                      const NonlinearActuatorParams& p);

// Zero-order-hold command delay line. Initialized with the nominal command at
// t = 0; queries before the delay elapsed return that entry.
class LatencyBuffer {
 public:
  void reset(const VecX& initial, double t0 = 0.0);
  void push(const VecX& cmd, double now);
  const VecX& query(double now) const;
  VecX apply(const VecX& cmd, double now);  // push + query
  void set_delay(double delay) { delay_ = delay; }
  double delay() const { return delay_; }
  size_t depth() const { return entries_.size(); }

  struct Entry {
    double t;
    VecX cmd;
  };
  const std::deque<Entry>& entries() const { return entries_; }

 private:
  void prune(double now);
  std::deque<Entry> entries_;
  double delay_ = 0.0;
};

struct ActuationState {
  LatencyBuffer buffer;
  double kp = 50.0;
  double kd = 1.0;
  double tau_max = 30.0;
  ActuatorMode mode = ActuatorMode::IdealPd;
  NonlinearActuatorParams nonlinear;

  VecX torque(const VecX& q_cmd, const VecX& q, const VecX& qdot) const;
};

}  // namespace pal::sim
