#include "pal/sim/dynamics.hpp"

namespace pal::sim {

namespace {

inline Mat3 skew(const Vec3& v) {
  Mat3 m;
  m <<     0, -v.z(),  v.y(),
       v.z(),      0, -v.x(),
      -v.y(),  v.x(),      0;
  return m;
}

constexpr int kMaxSupport = 16;

// Active generalized-velocity columns of one body: the floating-base six plus
// its ancestor chain.
int support_dofs(const ArticulatedModel& model, int body_index,
                 int (&cols)[kMaxSupport]) {
  int n = 0;
  if (model.floating)
    for (int k = 0; k < 6; ++k) cols[n++] = k;
  int chain[kMaxSupport];
  int depth = 0;
  for (int b = body_index; b >= 0; b = model.bodies[b].parent)
    chain[depth++] = b;
  for (int d = depth - 1; d >= 0; --d)
    cols[n++] = model.joint_dof(chain[d]);
  return n;
}

}  // namespace

MatX mass_matrix(const ArticulatedModel& model, const Kinematics& kin) {
  const int n = model.num_dof();
  MatX M = MatX::Zero(n, n);

  Vec3 jv[kMaxSupport], jw[kMaxSupport];
  int cols[kMaxSupport];

  auto accumulate = [&](int body_index, double mass, const Vec3& com_w,
                        const Mat3& inertia_w) {
    const int na = support_dofs(model, body_index, cols);
    int k = 0;
    if (model.floating) {
      const Vec3 r = com_w - kin.p_base;
      for (int axis = 0; axis < 3; ++axis, ++k) {
        jv[k] = Vec3::Unit(axis);
        jw[k] = Vec3::Zero();
      }
      for (int axis = 0; axis < 3; ++axis, ++k) {
        jw[k] = Vec3::Unit(axis);
        jv[k] = jw[k].cross(r);
      }
    }
    for (; k < na; ++k) {
      const int body = cols[k] - (model.floating ? 6 : 0);
      jw[k] = kin.body[body].axis_w;
      jv[k] = jw[k].cross(com_w - kin.body[body].origin);
    }

    Vec3 mjv[kMaxSupport], iw_jw[kMaxSupport];
    for (int a = 0; a < na; ++a) {
      mjv[a] = mass * jv[a];
      iw_jw[a] = inertia_w * jw[a];
    }
    for (int a = 0; a < na; ++a) {
      for (int b = a; b < na; ++b) {
        const double val = jv[a].dot(mjv[b]) + jw[a].dot(iw_jw[b]);
        M(cols[a], cols[b]) += val;
        if (a != b) M(cols[b], cols[a]) += val;
      }
    }
  };

  if (model.floating && model.base_mass > 0.0) {
    const Vec3 com_w = kin.p_base + kin.R_base * model.base_com;
    accumulate(-1, model.base_mass,
               com_w, kin.R_base * model.base_inertia * kin.R_base.transpose());
  }
  for (size_t i = 0; i < model.bodies.size(); ++i) {
    const Body& b = model.bodies[i];
    if (b.mass <= 0.0 && b.inertia.isZero()) continue;
    const BodyKinematics& bk = kin.body[i];
    accumulate(static_cast<int>(i), b.mass, bk.com_w,
               bk.R * b.inertia * bk.R.transpose());
  }
  return M;
}

VecX bias_forces(const ArticulatedModel& model, const Kinematics& kin,
                 double gravity) {
  const int n = model.num_dof();
  const int nb = static_cast<int>(model.bodies.size());
  const Vec3 g(0.0, 0.0, -gravity);
  VecX bias = VecX::Zero(n);

  // forward pass: accelerations with udot = 0, then Newton-Euler wrenches
  // about each body origin
  std::vector<Vec3> alpha(nb), a_origin(nb);
  std::vector<Vec3> force(nb), torque(nb);

  for (int i = 0; i < nb; ++i) {
    const Body& b = model.bodies[i];
    const BodyKinematics& bk = kin.body[i];

    Vec3 alpha_parent, a_parent_origin, omega_parent, p_parent_origin;
    if (b.parent < 0) {
      alpha_parent = Vec3::Zero();
      a_parent_origin = Vec3::Zero();
      omega_parent = kin.omega_base;
      p_parent_origin = kin.p_base;
    } else {
      alpha_parent = alpha[b.parent];
      a_parent_origin = a_origin[b.parent];
      omega_parent = kin.body[b.parent].omega;
      p_parent_origin = kin.body[b.parent].origin;
    }

    const Vec3 r = bk.origin - p_parent_origin;
    a_origin[i] = a_parent_origin + alpha_parent.cross(r) +
                  omega_parent.cross(omega_parent.cross(r));
    const double rate = (bk.omega - omega_parent).dot(bk.axis_w);
    alpha[i] = alpha_parent + omega_parent.cross(bk.axis_w * rate);

    const Vec3 rc = bk.com_w - bk.origin;
    const Vec3 a_com =
        a_origin[i] + alpha[i].cross(rc) + bk.omega.cross(bk.omega.cross(rc));

    const Mat3 I_w = bk.R * b.inertia * bk.R.transpose();
    const Vec3 f = b.mass * (a_com - g);
    force[i] = f;
    torque[i] = I_w * alpha[i] + bk.omega.cross(I_w * bk.omega) + rc.cross(f);
  }

  // backward pass: fold child wrenches into parents, projecting each body's
  // accumulated torque onto its joint axis
  Vec3 base_force = Vec3::Zero();
  Vec3 base_torque = Vec3::Zero();  // about the base origin
  for (int i = nb - 1; i >= 0; --i) {
    const Body& b = model.bodies[i];
    const BodyKinematics& bk = kin.body[i];
    bias[model.joint_dof(i)] = bk.axis_w.dot(torque[i]);
    if (b.parent < 0) {
      base_force += force[i];
      base_torque += torque[i] + (bk.origin - kin.p_base).cross(force[i]);
    } else {
      force[b.parent] += force[i];
      torque[b.parent] +=
          torque[i] + (bk.origin - kin.body[b.parent].origin).cross(force[i]);
    }
  }

  if (model.floating) {
    if (model.base_mass > 0.0) {
      const Vec3 com_w = kin.p_base + kin.R_base * model.base_com;
      const Vec3 rc = com_w - kin.p_base;
      const Vec3 a_com = kin.omega_base.cross(kin.omega_base.cross(rc));
      const Mat3 I_w = kin.R_base * model.base_inertia * kin.R_base.transpose();
      const Vec3 f = model.base_mass * (a_com - g);
      base_force += f;
      base_torque += kin.omega_base.cross(I_w * kin.omega_base) + rc.cross(f);
    }
    bias.head<3>() = base_force;
    bias.segment<3>(3) = base_torque;
  }
  return bias;
}

MatX point_jacobian(const ArticulatedModel& model, const Kinematics& kin,
                    int body_index, const Vec3& point_w) {
  const int n = model.num_dof();
  MatX jac = MatX::Zero(3, n);
  if (model.floating) {
    jac.block<3, 3>(0, 0).setIdentity();
    jac.block<3, 3>(0, 3) = -skew(point_w - kin.p_base);
  }
  for (int b = body_index; b >= 0; b = model.bodies[b].parent) {
    const Vec3& axis = kin.body[b].axis_w;
    jac.col(model.joint_dof(b)) = axis.cross(point_w - kin.body[b].origin);
  }
  return jac;
}

VecX joint_torque_to_generalized(const ArticulatedModel& model, const VecX& tau) {
  VecX q = VecX::Zero(model.num_dof());
  q.tail(model.num_joints()) = tau;
  return q;
}

VecX forward_dynamics(const ArticulatedModel& model, const SimState& state,
                      const VecX& applied_generalized_force, double gravity) {
  if (!state.finite()) throw SimulationError("non-finite state");
  const Kinematics kin = compute_kinematics(model, state);
  const MatX M = mass_matrix(model, kin);
  const VecX b = bias_forces(model, kin, gravity);
  Eigen::LDLT<MatX> ldlt(M);
  if (ldlt.info() != Eigen::Success)
    throw SimulationError("singular mass matrix");
  VecX udot = ldlt.solve(applied_generalized_force - b);
  if (!udot.allFinite()) throw SimulationError("non-finite accelerations");
  return udot;
}

double kinetic_energy(const ArticulatedModel& model, const Kinematics& kin,
                      const VecX& u) {
  const MatX M = mass_matrix(model, kin);
  return 0.5 * u.dot(M * u);
}

double potential_energy(const ArticulatedModel& model, const Kinematics& kin,
                        double gravity) {
  double e = 0.0;
  if (model.floating && model.base_mass > 0.0)
    e += model.base_mass * gravity *
         (kin.p_base + kin.R_base * model.base_com).z();
  for (size_t i = 0; i < model.bodies.size(); ++i)
    e += model.bodies[i].mass * gravity * kin.body[i].com_w.z();
  return e;
}

double total_mass(const ArticulatedModel& model) {
  double m = model.base_mass;
  for (const Body& b : model.bodies) m += b.mass;
  return m;
}

}  // namespace pal::sim
