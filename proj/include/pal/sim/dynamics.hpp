#pragma once

#include "pal/sim/articulated.hpp"

namespace pal::sim {

// Joint-space dynamics of the tree:  M(q) udot + b(q, u) = Q.
// The bias term b contains Coriolis, centrifugal and gravity loads.
// Built from world-frame body Jacobians; O(bodies * n^2) which is cheap at
// n = 18.
MatX mass_matrix(const ArticulatedModel& model, const Kinematics& kin);

VecX bias_forces(const ArticulatedModel& model, const Kinematics& kin,
                 double gravity = kGravity);

// 3 x ndof Jacobian of a world point rigidly attached to `body_index`
// (-1 = base).
MatX point_jacobian(const ArticulatedModel& model, const Kinematics& kin,
                    int body_index, const Vec3& point_w);

// Maps joint torques (one per revolute joint) into the generalized force
// vector (zero rows for the floating base).
VecX joint_torque_to_generalized(const ArticulatedModel& model, const VecX& tau);

// Solves M udot = applied - bias. Throws SimulationError on a singular mass
// matrix or non-finite input.
VecX forward_dynamics(const ArticulatedModel& model, const SimState& state,
                      const VecX& applied_generalized_force,
                      double gravity = kGravity);

double kinetic_energy(const ArticulatedModel& model, const Kinematics& kin,
                      const VecX& u);
double potential_energy(const ArticulatedModel& model, const Kinematics& kin,
                        double gravity = kGravity);
double total_mass(const ArticulatedModel& model);

}  // namespace pal::sim
