#pragma once

#include <array>
#include <string>
#include <vector>

#include "pal/sim/articulated.hpp"
#include "pal/sim/dynamics.hpp"

namespace pal::sim {

struct ContactParams {
  double k_normal = 1e5;    // N/m
  double d_normal = 1e3;    // N s/m
  double k_tangent = 1e3;   // N s/m, viscous demand inside the friction cone
  double slip_eps = 1e-6;   // m/s, below this tangential force is zero
};

struct FootContact {
  bool in_contact = false;
  double normal_force = 0.0;     // N, >= 0
  Vec3 force = Vec3::Zero();     // world force on the foot
  Vec3 point = Vec3::Zero();     // sphere center, world
  Vec3 velocity = Vec3::Zero();  // sphere center velocity, world
  double friction = 0.0;
};

struct ContactInfo {
  std::array<FootContact, kNumLegs> feet;
  VecX generalized_force;  // contribution of all foot forces

  bool foot_in_contact(int leg) const { return feet[leg].in_contact; }
};

// Penalty contact between the foot spheres and the ground plane z = 0.
//   F_n = max(0, k delta - d vz)   along world z, delta = penetration
//   F_t opposes the tangential velocity, clamped to the friction cone
//   |F_t| <= mu F_n (regularized: viscous demand k_tangent |v_t|).
// When `mass_solver` is given, damping and tangential forces are additionally
// capped by the impulse that would stop the point within one step of `dt`
// (keeps stiff damping stable on light legs); without it the raw formulas
// apply.
ContactInfo contact_forces(const ArticulatedModel& model, const Kinematics& kin,
                           const ContactParams& params,
                           const Eigen::LDLT<MatX>* mass_solver = nullptr,
                           double dt = 0.0);

struct CollisionEvents {
  bool nonfoot_ground = false;
  bool self_collision = false;
  std::vector<std::string> details;

  bool any() const { return nonfoot_ground || self_collision; }
};

// Termination-relevant collisions: ground contact of any non-foot geometry
// and coarse sphere/sphere + sphere/base-box self-collision between legs.
CollisionEvents collision_query(const ArticulatedModel& model,
                                const Kinematics& kin);

}  // namespace pal::sim
