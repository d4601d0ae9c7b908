#pragma once

#include "pal/morphology.hpp"
#include "pal/sim/simulator.hpp"

namespace pal::testing {

// Free point mass on a floating base, no joints.
inline sim::ArticulatedModel point_mass_model(double mass = 1.0) {
  sim::ArticulatedModel m;
  m.floating = true;
  m.base_mass = mass;
  m.base_inertia = Mat3::Identity() * 0.01;
  return m;
}

// Fixed-base single revolute joint about y with a point mass at distance
// `length` below the joint: qddot = -(g / length) sin(q).
inline sim::ArticulatedModel pendulum_model(double mass = 1.0,
                                            double length = 0.5) {
  sim::ArticulatedModel m;
  m.floating = false;
  sim::Body link;
  link.parent = -1;
  link.joint_offset = Vec3::Zero();
  link.axis = Vec3::UnitY();
  link.mass = mass;
  link.com = Vec3(0.0, 0.0, -length);
  link.inertia = Mat3::Zero();  // point mass
  link.name = "link";
  m.bodies.push_back(link);
  return m;
}

// Fixed-base two-link chain with capsule-like inertias for energy audits.
inline sim::ArticulatedModel double_pendulum_model() {
  sim::ArticulatedModel m;
  m.floating = false;
  sim::Body upper;
  upper.parent = -1;
  upper.axis = Vec3::UnitY();
  upper.mass = 1.2;
  upper.com = Vec3(0.0, 0.0, -0.15);
  upper.inertia = Mat3::Identity() * 0.01;
  upper.name = "upper";
  m.bodies.push_back(upper);

  sim::Body lower;
  lower.parent = 0;
  lower.joint_offset = Vec3(0.0, 0.0, -0.3);
  lower.axis = Vec3::UnitY();
  lower.mass = 0.7;
  lower.com = Vec3(0.0, 0.0, -0.12);
  lower.inertia = Mat3::Identity() * 0.004;
  lower.name = "lower";
  m.bodies.push_back(lower);
  return m;
}

inline morph::RobotModel a1_default() { return morph::reference_default_robot(1); }

// Standing start at the nominal configuration.
inline sim::SimState nominal_state(const morph::RobotModel& robot,
                                   double extra_height = 0.0) {
  sim::SimState s = sim::SimState::zero(robot.model);
  s.q_joint = robot.params.nominal_joint_config;
  s.r_base = Vec3(0.0, 0.0, robot.nominal_base_height + extra_height);
  return s;
}

}  // namespace pal::testing
