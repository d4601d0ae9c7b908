#pragma once

#include "pal/sim/actuation.hpp"
#include "pal/sim/contact.hpp"
#include "pal/sim/dynamics.hpp"

namespace pal::sim {

struct SimulatorConfig {
  double dt_control = 0.01;  // 100 Hz policy rate
  double dt_sim = 0.001;
  double gravity = kGravity;
  ContactParams contact;
};

struct StepInfo {
  ContactInfo contacts;      // snapshot at the final substep
  CollisionEvents collisions;
  VecX mean_torque;          // average applied torque over the control period
};

// Owns one robot's state and integrates it. Single-threaded; run one instance
// per environment. Kick-drift-kick substeps (exact for constant acceleration),
// quaternion renormalized every substep.
class Simulator {
 public:
  Simulator(ArticulatedModel model, SimulatorConfig config, ActuationState actuation);

  void reset(const SimState& state);

  // One control period under a desired joint position command.
  StepInfo step(const VecX& q_des);

  // Horizontal (or any) force on the base over [now, now + duration);
  // rescheduling replaces the pending window.
  void schedule_push(const Vec3& force_world, double duration);

  const SimState& state() const { return state_; }
  SimState& mutable_state() { return state_; }
  const ArticulatedModel& model() const { return model_; }
  const SimulatorConfig& config() const { return config_; }
  ActuationState& actuation() { return actuation_; }
  const ActuationState& actuation() const { return actuation_; }

  ContactInfo current_contacts() const;
  CollisionEvents current_collisions() const;

  int substeps_per_control() const { return substeps_; }

 private:
  struct EvalResult {
    VecX udot;
    VecX torque;
    ContactInfo contacts;
  };
  // Position-dependent quantities shared between the second kick of one
  // substep and the first kick of the next.
  struct PositionCache {
    Kinematics kin;
    MatX mass;
    Eigen::LDLT<MatX> ldlt;
    bool valid = false;
  };
  EvalResult evaluate(double impulse_dt);

  ArticulatedModel model_;
  SimulatorConfig config_;
  ActuationState actuation_;
  SimState state_;
  int substeps_ = 10;
  PositionCache cache_;

  Vec3 push_force_ = Vec3::Zero();
  double push_until_ = -1.0;
};

}  // namespace pal::sim
