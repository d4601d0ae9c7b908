#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pal/types.hpp"

namespace pal::sim {

struct SimulationError : std::runtime_error {
  explicit SimulationError(const std::string& what) : std::runtime_error(what) {}
};

// One moving link. The body frame is anchored at the parent joint; `com` and
// `inertia` (about the COM) are expressed in that frame. `joint_offset` places
// the joint in the parent body frame (or the base frame for parent == -1).
struct Body {
  int parent = -1;
  Vec3 joint_offset = Vec3::Zero();
  Vec3 axis = Vec3::UnitY();
  double mass = 0.0;
  Vec3 com = Vec3::Zero();
  Mat3 inertia = Mat3::Zero();
  std::string name;
};

// Point of interest rigidly attached to a body (foot contact points).
// body == -1 attaches to the base.
struct PointFrame {
  int body = -1;
  Vec3 offset = Vec3::Zero();
  std::string name;
  int leg = -1;
};

struct CollisionSphere {
  int body = -1;  // -1 = base
  Vec3 offset = Vec3::Zero();
  double radius = 0.0;
  int leg = -1;      // -1 for base-attached geometry
  bool is_foot = false;
  bool check_base = true;  // thigh spheres skip the base-box test
  double friction = 0.8;   // used by foot spheres only
  std::string name;
};

// Floating- or fixed-base kinematic tree of revolute joints. Bodies are in
// topological order (parents precede children); each body contributes one
// degree of freedom.
struct ArticulatedModel {
  bool floating = true;
  double base_mass = 0.0;
  Vec3 base_com = Vec3::Zero();
  Mat3 base_inertia = Mat3::Zero();
  Vec3 base_box_half = Vec3::Zero();  // base collision box, zero = none

  std::vector<Body> bodies;
  std::vector<PointFrame> feet;
  std::vector<CollisionSphere> spheres;

  int num_joints() const { return static_cast<int>(bodies.size()); }
  int num_dof() const { return (floating ? 6 : 0) + num_joints(); }

  // Velocity layout: [v_base(world); omega_base(world); qdot] when floating.
  int joint_dof(int body_index) const {
    return (floating ? 6 : 0) + body_index;
  }
};

// Generalized coordinates and velocities.
struct SimState {
  Vec3 r_base = Vec3::Zero();
  Quat q_base = Quat::Identity();
  VecX q_joint;
  Vec3 v_base = Vec3::Zero();
  Vec3 omega_base = Vec3::Zero();
  VecX qd_joint;
  double time = 0.0;

  static SimState zero(const ArticulatedModel& model) {
    SimState s;
    s.q_joint = VecX::Zero(model.num_joints());
    s.qd_joint = VecX::Zero(model.num_joints());
    return s;
  }

  VecX velocity(const ArticulatedModel& model) const;
  void set_velocity(const ArticulatedModel& model, const VecX& u);
  bool finite() const;
};

// World-frame quantities per body.
struct BodyKinematics {
  Mat3 R;
  Vec3 origin;   // joint frame origin
  Vec3 axis_w;   // joint axis
  Vec3 com_w;
  Vec3 omega;
  Vec3 v_origin;
  Vec3 v_com;
};

struct Kinematics {
  Mat3 R_base;
  Vec3 p_base;
  Vec3 v_base;
  Vec3 omega_base;
  std::vector<BodyKinematics> body;

  Vec3 point_on_body(const ArticulatedModel& m, int body_index,
                     const Vec3& offset) const;
  Vec3 point_velocity(const ArticulatedModel& m, int body_index,
                      const Vec3& offset) const;
};

Kinematics compute_kinematics(const ArticulatedModel& model, const SimState& state);

// Refreshes only the velocity-dependent fields; valid when the positions in
// `state` match those `kin` was built from.
void update_velocity_kinematics(const ArticulatedModel& model,
                                const SimState& state, Kinematics& kin);

}  // namespace pal::sim
