#include "pal/sim/articulated.hpp"

namespace pal::sim {

VecX SimState::velocity(const ArticulatedModel& model) const {
  VecX u(model.num_dof());
  if (model.floating) {
    u.head<3>() = v_base;
    u.segment<3>(3) = omega_base;
    u.tail(model.num_joints()) = qd_joint;
  } else {
    u = qd_joint;
  }
  return u;
}

void SimState::set_velocity(const ArticulatedModel& model, const VecX& u) {
  if (model.floating) {
    v_base = u.head<3>();
    omega_base = u.segment<3>(3);
    qd_joint = u.tail(model.num_joints());
  } else {
    qd_joint = u;
  }
}

bool SimState::finite() const {
  return r_base.allFinite() && q_base.coeffs().allFinite() &&
         q_joint.allFinite() && v_base.allFinite() && omega_base.allFinite() &&
         qd_joint.allFinite();
}

Vec3 Kinematics::point_on_body(const ArticulatedModel&, int body_index,
                               const Vec3& offset) const {
  if (body_index < 0) return p_base + R_base * offset;
  const BodyKinematics& b = body[body_index];
  return b.origin + b.R * offset;
}

Vec3 Kinematics::point_velocity(const ArticulatedModel& m, int body_index,
                                const Vec3& offset) const {
  const Vec3 p = point_on_body(m, body_index, offset);
  if (body_index < 0) return v_base + omega_base.cross(p - p_base);
  const BodyKinematics& b = body[body_index];
  return b.v_origin + b.omega.cross(p - b.origin);
}

Kinematics compute_kinematics(const ArticulatedModel& model, const SimState& state) {
  Kinematics kin;
  kin.R_base = state.q_base.toRotationMatrix();
  kin.p_base = state.r_base;
  kin.body.resize(model.bodies.size());

  for (size_t i = 0; i < model.bodies.size(); ++i) {
    const Body& b = model.bodies[i];
    const double q = state.q_joint[static_cast<Eigen::Index>(i)];

    Mat3 R_parent;
    Vec3 p_parent_origin;
    if (b.parent < 0) {
      R_parent = kin.R_base;
      p_parent_origin = kin.p_base;
    } else {
      const BodyKinematics& pk = kin.body[b.parent];
      R_parent = pk.R;
      p_parent_origin = pk.origin;
    }

    BodyKinematics& out = kin.body[i];
    out.origin = p_parent_origin + R_parent * b.joint_offset;
    out.R = R_parent * Eigen::AngleAxisd(q, b.axis).toRotationMatrix();
    out.axis_w = R_parent * b.axis;
    out.com_w = out.origin + out.R * b.com;
  }
  update_velocity_kinematics(model, state, kin);
  return kin;
}

void update_velocity_kinematics(const ArticulatedModel& model,
                                const SimState& state, Kinematics& kin) {
  kin.v_base = state.v_base;
  kin.omega_base = state.omega_base;
  for (size_t i = 0; i < model.bodies.size(); ++i) {
    const Body& b = model.bodies[i];
    const double qd = state.qd_joint[static_cast<Eigen::Index>(i)];

    Vec3 p_parent_origin, omega_parent, v_parent_origin;
    if (b.parent < 0) {
      p_parent_origin = kin.p_base;
      omega_parent = kin.omega_base;
      v_parent_origin = kin.v_base;
    } else {
      const BodyKinematics& pk = kin.body[b.parent];
      p_parent_origin = pk.origin;
      omega_parent = pk.omega;
      v_parent_origin = pk.v_origin;
    }

    BodyKinematics& out = kin.body[i];
    out.v_origin =
        v_parent_origin + omega_parent.cross(out.origin - p_parent_origin);
    out.omega = omega_parent + out.axis_w * qd;
    out.v_com = out.v_origin + out.omega.cross(out.com_w - out.origin);
  }
}

}  // namespace pal::sim
