#include "pal/sim/contact.hpp"

namespace pal::sim {

ContactInfo contact_forces(const ArticulatedModel& model, const Kinematics& kin,
                           const ContactParams& params,
                           const Eigen::LDLT<MatX>* mass_solver, double dt) {
  ContactInfo info;
  info.generalized_force = VecX::Zero(model.num_dof());

  for (const CollisionSphere& s : model.spheres) {
    if (!s.is_foot) continue;
    const Vec3 center = kin.point_on_body(model, s.body, s.offset);
    const Vec3 velocity = kin.point_velocity(model, s.body, s.offset);
    FootContact& foot = info.feet[s.leg];
    foot.point = center;
    foot.velocity = velocity;
    foot.friction = s.friction;

    const double penetration = s.radius - center.z();
    if (penetration <= 0.0) continue;
    foot.in_contact = true;

    MatX jac;
    Vec3 inv_eff = Vec3::Zero();  // directional inverse effective masses
    if (mass_solver && dt > 0.0) {
      jac = point_jacobian(model, kin, s.body, center);
      const MatX minv_jt = mass_solver->solve(jac.transpose());
      const Mat3 delassus = jac * minv_jt;
      inv_eff = delassus.diagonal();
    }

    // normal: spring plus damping, damping capped by the stopping impulse
    double damping = -params.d_normal * velocity.z();
    if (mass_solver && dt > 0.0 && inv_eff.z() > 0.0) {
      const double cap = std::abs(velocity.z()) / (inv_eff.z() * dt);
      damping = std::clamp(damping, -cap, cap);
    }
    const double fn = std::max(0.0, params.k_normal * penetration + damping);
    foot.normal_force = fn;

    // tangential: viscous demand clamped to the cone (and stopping impulse)
    Vec3 ft = Vec3::Zero();
    const Vec3 vt(velocity.x(), velocity.y(), 0.0);
    const double speed = vt.norm();
    if (speed > params.slip_eps && fn > 0.0) {
      double magnitude = std::min(params.k_tangent * speed, s.friction * fn);
      if (mass_solver && dt > 0.0) {
        const Vec3 dir = vt / speed;
        const double inv_m_t = dir.x() * dir.x() * inv_eff.x() +
                               dir.y() * dir.y() * inv_eff.y();
        if (inv_m_t > 0.0)
          magnitude = std::min(magnitude, speed / (inv_m_t * dt));
      }
      ft = -magnitude * vt / speed;
    }

    foot.force = ft + Vec3(0.0, 0.0, fn);
    if (jac.size() == 0) jac = point_jacobian(model, kin, s.body, center);
    info.generalized_force.noalias() += jac.transpose() * foot.force;
  }
  return info;
}

namespace {

// lowest world z of the oriented base box
double base_box_min_z(const ArticulatedModel& model, const Kinematics& kin) {
  double extent = 0.0;
  for (int k = 0; k < 3; ++k)
    extent += model.base_box_half[k] * std::abs(kin.R_base(2, k));
  return kin.p_base.z() - extent;
}

bool sphere_hits_base_box(const ArticulatedModel& model, const Kinematics& kin,
                          const Vec3& center, double radius) {
  const Vec3 local = kin.R_base.transpose() * (center - kin.p_base);
  return std::abs(local.x()) <= model.base_box_half.x() + radius &&
         std::abs(local.y()) <= model.base_box_half.y() + radius &&
         std::abs(local.z()) <= model.base_box_half.z() + radius;
}

}  // namespace

CollisionEvents collision_query(const ArticulatedModel& model,
                                const Kinematics& kin) {
  CollisionEvents events;

  if (model.base_box_half != Vec3::Zero() &&
      base_box_min_z(model, kin) < 0.0) {
    events.nonfoot_ground = true;
    events.details.push_back("base/ground");
  }

  std::vector<Vec3> centers(model.spheres.size());
  for (size_t i = 0; i < model.spheres.size(); ++i)
    centers[i] =
        kin.point_on_body(model, model.spheres[i].body, model.spheres[i].offset);

  for (size_t i = 0; i < model.spheres.size(); ++i) {
    const CollisionSphere& a = model.spheres[i];
    if (!a.is_foot && centers[i].z() < a.radius) {
      events.nonfoot_ground = true;
      events.details.push_back(a.name + "/ground");
    }
    // legged geometry against the base box (feet included)
    if (a.leg >= 0 && a.check_base && model.base_box_half != Vec3::Zero() &&
        sphere_hits_base_box(model, kin, centers[i], a.radius)) {
      events.self_collision = true;
      events.details.push_back(a.name + "/base");
    }
    for (size_t j = i + 1; j < model.spheres.size(); ++j) {
      const CollisionSphere& b = model.spheres[j];
      if (a.leg < 0 || b.leg < 0 || a.leg == b.leg) continue;
      const double gap = (centers[i] - centers[j]).norm() - a.radius - b.radius;
      if (gap < 0.0) {
        events.self_collision = true;
        events.details.push_back(a.name + "/" + b.name);
      }
    }
  }
  return events;
}

}  // namespace pal::sim
