#include "pal/sim/simulator.hpp"

#include <cmath>

namespace pal::sim {

namespace {

Quat integrate_orientation(const Quat& q, const Vec3& omega_world, double dt) {
  const double angle = omega_world.norm() * dt;
  if (angle < 1e-12) return q.normalized();
  const Vec3 axis = omega_world.normalized();
  Quat delta(Eigen::AngleAxisd(angle, axis));
  return (delta * q).normalized();
}

}  // namespace

Simulator::Simulator(ArticulatedModel model, SimulatorConfig config,
                     ActuationState actuation)
    : model_(std::move(model)),
      config_(config),
      actuation_(std::move(actuation)),
      state_(SimState::zero(model_)) {
  substeps_ = static_cast<int>(std::round(config_.dt_control / config_.dt_sim));
  if (substeps_ < 1) substeps_ = 1;
}

void Simulator::reset(const SimState& state) {
  state_ = state;
  actuation_.buffer.reset(state.q_joint, state.time);
  push_force_ = Vec3::Zero();
  push_until_ = -1.0;
  cache_.valid = false;
}

void Simulator::schedule_push(const Vec3& force_world, double duration) {
  push_force_ = force_world;
  push_until_ = state_.time + duration;
}

Simulator::EvalResult Simulator::evaluate(double impulse_dt) {
  if (!cache_.valid) {
    cache_.kin = compute_kinematics(model_, state_);
    cache_.mass = mass_matrix(model_, cache_.kin);
    cache_.ldlt.compute(cache_.mass);
    if (cache_.ldlt.info() != Eigen::Success)
      throw SimulationError("singular mass matrix");
    cache_.valid = true;
  } else {
    update_velocity_kinematics(model_, state_, cache_.kin);
  }
  const Kinematics& kin = cache_.kin;
  const VecX bias = bias_forces(model_, kin, config_.gravity);

  EvalResult out;
  const VecX& q_cmd = actuation_.buffer.query(state_.time);
  out.torque = actuation_.torque(q_cmd, state_.q_joint, state_.qd_joint);
  out.contacts =
      contact_forces(model_, kin, config_.contact, &cache_.ldlt, impulse_dt);

  VecX applied = joint_torque_to_generalized(model_, out.torque);
  applied += out.contacts.generalized_force;
  if (model_.floating && state_.time < push_until_)
    applied.head<3>() += push_force_;

  out.udot = cache_.ldlt.solve(applied - bias);
  if (!out.udot.allFinite()) throw SimulationError("non-finite accelerations");
  return out;
}

StepInfo Simulator::step(const VecX& q_des) {
  if (q_des.size() != model_.num_joints())
    throw SimulationError("q_des dimension mismatch");
  actuation_.buffer.push(q_des, state_.time);

  StepInfo info;
  info.mean_torque = VecX::Zero(model_.num_joints());

  // kick-drift-kick: exact for constant acceleration, second-order energy
  // behaviour on passive swings
  for (int k = 0; k < substeps_; ++k) {
    const double dt = config_.dt_sim;

    const EvalResult e1 = evaluate(0.5 * dt);
    const VecX u_half = state_.velocity(model_) + 0.5 * dt * e1.udot;

    if (model_.floating) {
      state_.r_base += dt * u_half.head<3>();
      state_.q_base =
          integrate_orientation(state_.q_base, u_half.segment<3>(3), dt);
      state_.q_joint += dt * u_half.tail(model_.num_joints());
    } else {
      state_.q_joint += dt * u_half;
    }
    state_.set_velocity(model_, u_half);
    cache_.valid = false;  // positions moved

    const EvalResult e2 = evaluate(0.5 * dt);
    state_.set_velocity(model_, u_half + 0.5 * dt * e2.udot);
    state_.time += dt;

    if (!state_.finite()) throw SimulationError("non-finite state");
    info.mean_torque += 0.5 * (e1.torque + e2.torque);
    if (k == substeps_ - 1) info.contacts = e2.contacts;
  }

  info.mean_torque /= static_cast<double>(substeps_);
  info.collisions = current_collisions();
  return info;
}

ContactInfo Simulator::current_contacts() const {
  const Kinematics kin = compute_kinematics(model_, state_);
  return contact_forces(model_, kin, config_.contact);
}

CollisionEvents Simulator::current_collisions() const {
  const Kinematics kin = compute_kinematics(model_, state_);
  return collision_query(model_, kin);
}

}  // namespace pal::sim
