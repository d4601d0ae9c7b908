#include "pal/sim/actuation.hpp"

#include <algorithm>

namespace pal::sim {

VecX pd_torque(double kp, double kd, const VecX& q_des, const VecX& q,
               const VecX& qdot, double tau_max) {
  VecX tau = kp * (q_des - q) - kd * qdot;
  return tau.cwiseMax(-tau_max).cwiseMin(tau_max);
}

double torque_speed_derating(double qdot, const NonlinearActuatorParams& p) {
  const double speed = std::abs(qdot);
  if (speed <= p.knee_speed) return 1.0;
  return std::max(0.0, 1.0 - p.derating_slope * (speed / p.knee_speed - 1.0));
}

VecX nonlinear_torque(double kp, double kd, const VecX& q_des, const VecX& q,
                      const VecX& qdot, double tau_max,
                      const NonlinearActuatorParams& p) {
  VecX tau = pd_torque(kp, kd, q_des, q, qdot, tau_max);
  for (Eigen::Index j = 0; j < tau.size(); ++j)
    tau[j] *= torque_speed_derating(qdot[j], p);
  return tau;
}

void LatencyBuffer::reset(const VecX& initial, double t0) {
  entries_.clear();
  entries_.push_back({t0, initial});
}

void LatencyBuffer::push(const VecX& cmd, double now) {
  entries_.push_back({now, cmd});
}

namespace {
// slack so that delays landing exactly on a step boundary are not lost to
// rounding in the time accumulation
constexpr double kTimeSlack = 1e-9;
}  // namespace

const VecX& LatencyBuffer::query(double now) const {
  const double cutoff = now - delay_ + kTimeSlack;
  const Entry* selected = &entries_.front();
  for (const Entry& e : entries_) {
    if (e.t <= cutoff) selected = &e;  // later entries win on ties
  }
  return selected->cmd;
}

VecX LatencyBuffer::apply(const VecX& cmd, double now) {
  push(cmd, now);
  prune(now);
  return query(now);
}

void LatencyBuffer::prune(double now) {
  const double cutoff = now - delay_ + kTimeSlack;
  // keep the newest entry at or before the cutoff plus everything after it
  size_t keep_from = 0;
  for (size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i].t <= cutoff) keep_from = i;
  entries_.erase(entries_.begin(),
                 entries_.begin() + static_cast<std::ptrdiff_t>(keep_from));
}

VecX ActuationState::torque(const VecX& q_cmd, const VecX& q,
                            const VecX& qdot) const {
  if (mode == ActuatorMode::Nonlinear)
    return nonlinear_torque(kp, kd, q_cmd, q, qdot, tau_max, nonlinear);
  return pd_torque(kp, kd, q_cmd, q, qdot, tau_max);
}

}  // namespace pal::sim
