#include "pal/morphology.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pal::morph {

namespace {

// Ranges from the published generation table. Rows shared by all references
// are repeated verbatim.
SamplingTable a1_table() {
  SamplingTable t;
  t.hip_x = {0.15, 0.4};
  t.hip_y = {0.0, 0.25};
  t.hip_z = {-0.1, 0.12};
  t.thigh_x = {-0.1, 0.1};
  t.thigh_y = {-0.04, 0.13};
  t.thigh_z = {-0.1, 0.1};
  t.shank_x = {-0.05, 0.18};
  t.shank_y = {-0.05, 0.1};
  t.shank_z = {-0.24, -0.12};
  t.foot_z = {-0.025, 0.12};
  t.m_base = {2.0, 28.0};
  t.m_hip = {0.25, 1.0};
  t.m_thigh = {0.5, 4.0};
  t.m_shank = {0.08, 0.9};
  t.qn_haa = {-0.15, 0.15};
  t.qn_hfe_front = {0.3, 0.9};
  t.qn_hfe_hind = {0.3, 0.9};
  t.qn_knee_a = {-1.8, -0.7};
  t.qn_knee_x = {-1.2, -0.6};
  t.kp = {15.0, 80.0};
  t.kd = {0.2, 3.0};
  t.tau_max = {15.0, 120.0};
  t.mu = {0.2, 1.1};
  return t;
}

SamplingTable aliengo_table() {
  SamplingTable t = a1_table();
  t.hip_x = {0.15, 0.45};
  t.hip_y = {0.0, 0.25};
  t.hip_z = {-0.1, 0.12};
  t.thigh_x = {-0.1, 0.1};
  t.thigh_y = {0.04, 0.12};
  t.thigh_z = {-0.06, 0.1};
  t.shank_x = {-0.05, 0.15};
  t.shank_y = {-0.05, 0.1};
  t.shank_z = {-0.28, -0.1};
  t.m_base = {4.0, 30.0};
  t.m_hip = {0.25, 2.6};
  t.m_thigh = {0.4, 3.0};
  t.m_shank = {0.1, 0.5};
  t.kp = {15.0, 80.0};
  t.tau_max = {15.0, 50.0};
  return t;
}

SamplingTable anymal_b_table() {
  SamplingTable t = a1_table();
  t.hip_x = {0.225, 0.45};
  t.hip_y = {0.05, 0.23};
  t.hip_z = {-0.18, 0.18};
  t.thigh_x = {-0.1, 0.15};
  t.thigh_y = {0.015, 0.12};
  t.thigh_z = {-0.07, 0.07};
  t.shank_x = {-0.1, 0.1};
  t.shank_y = {-0.05, 0.16};
  t.shank_z = {-0.35, -0.18};
  t.m_base = {6.0, 40.0};
  t.m_hip = {0.5, 3.0};
  t.m_thigh = {0.6, 4.5};
  t.m_shank = {0.15, 0.6};
  t.kp = {30.0, 120.0};
  t.tau_max = {40.0, 80.0};
  return t;
}

SamplingTable anymal_c_table() {
  SamplingTable t = a1_table();
  t.hip_x = {0.18, 0.5};
  t.hip_y = {0.05, 0.27};
  t.hip_z = {-0.22, 0.15};
  t.thigh_x = {-0.1, 0.2};
  t.thigh_y = {-0.15, -0.05};
  t.thigh_z = {-0.1, 0.06};
  t.shank_x = {-0.1, 0.2};
  t.shank_y = {-0.2, 0.15};
  t.shank_z = {-0.35, -0.18};
  t.m_base = {18.0, 50.0};
  t.m_hip = {1.4, 4.0};
  t.m_thigh = {1.8, 5.0};
  t.m_shank = {0.25, 1.0};
  t.kp = {35.0, 120.0};
  t.tau_max = {40.0, 140.0};
  return t;
}

std::vector<ReferenceModel> make_references() {
  return {
      {1, "a1", a1_table()},
      {2, "aliengo", aliengo_table()},
      {4, "anymal_b", anymal_b_table()},
      {5, "anymal_c", anymal_c_table()},
  };
}

const std::vector<ReferenceModel>& references() {
  static const std::vector<ReferenceModel> refs = make_references();
  return refs;
}

constexpr int kHip = 0, kThigh = 1, kShank = 2;

bool leg_is_front(int leg) { return leg < 2; }
double sign_x(int leg) { return leg_is_front(leg) ? 1.0 : -1.0; }
double sign_y(int leg) { return (leg % 2 == 0) ? 1.0 : -1.0; }

// Solid capsule about its COM, axis aligned with `direction`, then rotated
// into the body frame. Degenerates to a sphere for short segments.
Mat3 capsule_inertia(double mass, double radius, const Vec3& direction) {
  const double length = direction.norm();
  const double r2 = radius * radius;

  double axial, perp;
  if (length < 1e-9) {
    axial = perp = 0.4 * mass * r2;
  } else {
    const double v_cyl = M_PI * r2 * length;
    const double v_sph = 4.0 / 3.0 * M_PI * r2 * radius;
    const double m_cyl = mass * v_cyl / (v_cyl + v_sph);
    const double m_sph = mass - m_cyl;
    axial = 0.5 * m_cyl * r2 + 0.4 * m_sph * r2;
    perp = m_cyl * (length * length / 12.0 + 0.25 * r2) +
           m_sph * (0.4 * r2 + 0.25 * length * length +
                    0.375 * length * radius);
  }

  Mat3 local = Mat3::Zero();
  local(0, 0) = perp;
  local(1, 1) = perp;
  local(2, 2) = axial;
  if (length < 1e-9) return local;

  const Vec3 axis = direction / length;
  const Quat align = Quat::FromTwoVectors(Vec3::UnitZ(), axis);
  const Mat3 rot = align.toRotationMatrix();
  return rot * local * rot.transpose();
}

Mat3 box_inertia(double mass, const Vec3& half) {
  Mat3 inertia = Mat3::Zero();
  inertia(0, 0) = mass / 3.0 * (half.y() * half.y() + half.z() * half.z());
  inertia(1, 1) = mass / 3.0 * (half.x() * half.x() + half.z() * half.z());
  inertia(2, 2) = mass / 3.0 * (half.x() * half.x() + half.y() * half.y());
  return inertia;
}

const char* leg_name(int leg) {
  static const char* names[] = {"fl", "fr", "hl", "hr"};
  return names[leg];
}

}  // namespace

const ReferenceModel& reference_model(int id) {
  for (const ReferenceModel& ref : references())
    if (ref.id == id) return ref;
  throw UnsupportedReference("reference id " + std::to_string(id) +
                             " has no published sampling parameters");
}

const std::vector<int>& supported_reference_ids() {
  static const std::vector<int> ids = {1, 2, 4, 5};
  return ids;
}

MorphologyParams sample_morphology(const ReferenceModel& ref, Rng& rng,
                                   const GlobalRanges& global) {
  if (ref.id != 1 && ref.id != 2 && ref.id != 4 && ref.id != 5)
    throw UnsupportedReference("reference id " + std::to_string(ref.id));
  const SamplingTable& t = ref.table;

  MorphologyParams p;
  p.ref_id = ref.id;
  for (int leg = 0; leg < kNumLegs; ++leg) {
    p.joint_offsets[3 * leg + kHip] =
        Vec3(t.hip_x.sample(rng), t.hip_y.sample(rng), t.hip_z.sample(rng));
    p.joint_offsets[3 * leg + kThigh] = Vec3(
        t.thigh_x.sample(rng), t.thigh_y.sample(rng), t.thigh_z.sample(rng));
    p.joint_offsets[3 * leg + kShank] = Vec3(
        t.shank_x.sample(rng), t.shank_y.sample(rng), t.shank_z.sample(rng));
  }
  p.m_base = t.m_base.sample(rng);
  for (int leg = 0; leg < kNumLegs; ++leg) {
    p.link_masses[3 * leg + kHip] = t.m_hip.sample(rng);
    p.link_masses[3 * leg + kThigh] = t.m_thigh.sample(rng);
    p.link_masses[3 * leg + kShank] = t.m_shank.sample(rng);
  }
  for (int leg = 0; leg < kNumLegs; ++leg) p.foot_offsets[leg] = t.foot_z.sample(rng);

  p.leg_configuration = rng.uniform() < 0.5 ? LegConfig::A : LegConfig::X;
  const Bounds& knee =
      p.leg_configuration == LegConfig::A ? t.qn_knee_a : t.qn_knee_x;
  for (int leg = 0; leg < kNumLegs; ++leg) {
    p.nominal_joint_config[3 * leg + kHip] = t.qn_haa.sample(rng);
    p.nominal_joint_config[3 * leg + kThigh] =
        leg_is_front(leg) ? t.qn_hfe_front.sample(rng) : t.qn_hfe_hind.sample(rng);
    p.nominal_joint_config[3 * leg + kShank] = knee.sample(rng);
  }

  p.kp = t.kp.sample(rng);
  p.kd = t.kd.sample(rng);
  p.tau_max = t.tau_max.sample(rng);
  for (int leg = 0; leg < kNumLegs; ++leg) p.mu_f[leg] = t.mu.sample(rng);
  p.latency = global.latency.sample(rng);

  p.actuator_mode = rng.uniform() < global.nonlinear_actuator_prob
                        ? sim::ActuatorMode::Nonlinear
                        : sim::ActuatorMode::IdealPd;
  p.actuator.knee_speed = global.actuator_knee_speed.sample(rng);
  p.actuator.derating_slope = global.actuator_derating_slope.sample(rng);
  return p;
}

bool MorphologyParams::within_bounds(const ReferenceModel& ref,
                                     const GlobalRanges& global) const {
  const SamplingTable& t = ref.table;
  for (int leg = 0; leg < kNumLegs; ++leg) {
    if (!t.qn_haa.contains(nominal_joint_config[3 * leg + kHip])) return false;
    const Bounds& hfe = leg_is_front(leg) ? t.qn_hfe_front : t.qn_hfe_hind;
    if (!hfe.contains(nominal_joint_config[3 * leg + kThigh])) return false;
    const Bounds& knee =
        leg_configuration == LegConfig::A ? t.qn_knee_a : t.qn_knee_x;
    if (!knee.contains(nominal_joint_config[3 * leg + kShank])) return false;
  }
  if (!global.latency.contains(latency)) return false;

  MorphologyParams probe = *this;  // geometry rows share the builder's check
  try {
    build_kinematic_tree(probe, ref);
  } catch (const DegenerateMorphology&) {
    return false;
  }
  return true;
}

namespace {

// Geometry and actuation fields against the table; the nominal configuration
// is not structural (it only moves r_n) and is checked by the sampling path.
bool geometry_within_bounds(const MorphologyParams& p, const ReferenceModel& ref) {
  const SamplingTable& t = ref.table;
  for (int leg = 0; leg < kNumLegs; ++leg) {
    const Vec3& hip = p.joint_offsets[3 * leg + kHip];
    const Vec3& thigh = p.joint_offsets[3 * leg + kThigh];
    const Vec3& shank = p.joint_offsets[3 * leg + kShank];
    if (!t.hip_x.contains(hip.x()) || !t.hip_y.contains(hip.y()) ||
        !t.hip_z.contains(hip.z()))
      return false;
    if (!t.thigh_x.contains(thigh.x()) || !t.thigh_y.contains(thigh.y()) ||
        !t.thigh_z.contains(thigh.z()))
      return false;
    if (!t.shank_x.contains(shank.x()) || !t.shank_y.contains(shank.y()) ||
        !t.shank_z.contains(shank.z()))
      return false;
    if (!t.foot_z.contains(p.foot_offsets[leg])) return false;
    if (!t.m_hip.contains(p.link_masses[3 * leg + kHip])) return false;
    if (!t.m_thigh.contains(p.link_masses[3 * leg + kThigh])) return false;
    if (!t.m_shank.contains(p.link_masses[3 * leg + kShank])) return false;
    if (!t.mu.contains(p.mu_f[leg])) return false;
  }
  if (p.m_base <= 0.0 || !t.m_base.contains(p.m_base)) return false;
  if (!t.kp.contains(p.kp) || !t.kd.contains(p.kd) ||
      !t.tau_max.contains(p.tau_max))
    return false;
  return true;
}

}  // namespace

RobotModel build_kinematic_tree(const MorphologyParams& params,
                                const ReferenceModel& ref,
                                const BuildConstants& constants) {
  if (params.ref_id != ref.id)
    throw DegenerateMorphology("params/reference id mismatch");
  if (!geometry_within_bounds(params, ref))
    throw DegenerateMorphology("parameters outside the reference table bounds");
  for (int leg = 0; leg < kNumLegs; ++leg)
    if (std::abs(params.joint_offsets[3 * leg + kShank].z()) <
        constants.min_shank_drop)
      throw DegenerateMorphology("near-zero knee drop on leg " +
                                 std::to_string(leg));

  RobotModel robot;
  robot.ref_id = params.ref_id;
  robot.params = params;

  sim::ArticulatedModel& m = robot.model;
  m.floating = true;
  m.base_mass = params.m_base;

  double max_hip_x = 0.0, max_hip_y = 0.0;
  for (int leg = 0; leg < kNumLegs; ++leg) {
    max_hip_x = std::max(max_hip_x, std::abs(params.joint_offsets[3 * leg].x()));
    max_hip_y = std::max(max_hip_y, std::abs(params.joint_offsets[3 * leg].y()));
  }
  m.base_box_half = Vec3(max_hip_x + constants.base_pad,
                         max_hip_y + constants.base_pad,
                         constants.base_half_height);
  m.base_inertia = box_inertia(params.m_base, m.base_box_half);

  for (int leg = 0; leg < kNumLegs; ++leg) {
    const double sx = sign_x(leg);
    const double sy = sign_y(leg);
    const Vec3 hip_raw = params.joint_offsets[3 * leg + kHip];
    const Vec3 thigh_raw = params.joint_offsets[3 * leg + kThigh];
    const Vec3 shank_raw = params.joint_offsets[3 * leg + kShank];

    const Vec3 hip_offset(sx * hip_raw.x(), sy * hip_raw.y(), hip_raw.z());
    const Vec3 thigh_offset(thigh_raw.x(), sy * thigh_raw.y(), thigh_raw.z());
    const Vec3 shank_offset(shank_raw.x(), sy * shank_raw.y(), shank_raw.z());
    const Vec3 foot_offset(0.0, 0.0, -std::abs(params.foot_offsets[leg]));

    const std::string prefix = leg_name(leg);
    const int hip_index = static_cast<int>(m.bodies.size());

    sim::Body hip;
    hip.parent = -1;
    hip.joint_offset = hip_offset;
    hip.axis = Vec3::UnitX();
    hip.mass = params.link_masses[3 * leg + kHip];
    hip.com = 0.5 * thigh_offset;
    hip.inertia = capsule_inertia(hip.mass, constants.link_radius, thigh_offset);
    hip.name = prefix + "_hip";
    m.bodies.push_back(hip);

    sim::Body thigh;
    thigh.parent = hip_index;
    thigh.joint_offset = thigh_offset;
    thigh.axis = Vec3::UnitY();
    thigh.mass = params.link_masses[3 * leg + kThigh];
    thigh.com = 0.5 * shank_offset;
    thigh.inertia =
        capsule_inertia(thigh.mass, constants.link_radius, shank_offset);
    thigh.name = prefix + "_thigh";
    m.bodies.push_back(thigh);

    sim::Body shank;
    shank.parent = hip_index + 1;
    shank.joint_offset = shank_offset;
    shank.axis = Vec3::UnitY();
    shank.mass = params.link_masses[3 * leg + kShank];
    shank.com = 0.5 * foot_offset;
    shank.inertia =
        capsule_inertia(shank.mass, constants.link_radius, foot_offset);
    shank.name = prefix + "_shank";
    m.bodies.push_back(shank);

    const int shank_index = hip_index + 2;
    m.feet.push_back({shank_index, foot_offset, prefix + "_foot", leg});

    sim::CollisionSphere foot_sphere;
    foot_sphere.body = shank_index;
    foot_sphere.offset = foot_offset;
    foot_sphere.radius = constants.foot_radius;
    foot_sphere.leg = leg;
    foot_sphere.is_foot = true;
    foot_sphere.friction = params.mu_f[leg];
    foot_sphere.name = prefix + "_foot";
    m.spheres.push_back(foot_sphere);

    sim::CollisionSphere knee_sphere;
    knee_sphere.body = shank_index;
    knee_sphere.offset = Vec3::Zero();
    knee_sphere.radius = constants.link_radius;
    knee_sphere.leg = leg;
    knee_sphere.name = prefix + "_knee";
    m.spheres.push_back(knee_sphere);

    // midpoint spheres only where the segment extends beyond the spheres
    // already sitting at its ends
    if (shank_offset.norm() > 2.0 * constants.link_radius) {
      sim::CollisionSphere thigh_sphere;
      thigh_sphere.body = hip_index + 1;
      thigh_sphere.offset = 0.5 * shank_offset;
      thigh_sphere.radius = constants.link_radius;
      thigh_sphere.leg = leg;
      thigh_sphere.check_base = false;  // thighs run alongside the base
      thigh_sphere.name = prefix + "_thigh";
      m.spheres.push_back(thigh_sphere);
    }
    if (foot_offset.norm() > 2.0 * (constants.link_radius + constants.foot_radius)) {
      sim::CollisionSphere shank_sphere;
      shank_sphere.body = shank_index;
      shank_sphere.offset = 0.5 * foot_offset;
      shank_sphere.radius = constants.link_radius;
      shank_sphere.leg = leg;
      shank_sphere.name = prefix + "_shank";
      m.spheres.push_back(shank_sphere);
    }
  }

  // r_n: base height with the lowest foot sphere touching the plane
  sim::SimState nominal = sim::SimState::zero(m);
  nominal.q_joint = params.nominal_joint_config;
  const sim::Kinematics kin = sim::compute_kinematics(m, nominal);
  double lowest = 0.0;
  for (const sim::PointFrame& foot : m.feet)
    lowest = std::min(lowest, kin.point_on_body(m, foot.body, foot.offset).z());
  robot.nominal_base_height = -lowest + constants.foot_radius;
  return robot;
}

sim::ActuationState RobotModel::make_actuation() const {
  sim::ActuationState act;
  act.kp = params.kp;
  act.kd = params.kd;
  act.tau_max = params.tau_max;
  act.mode = params.actuator_mode;
  act.nonlinear = params.actuator;
  act.buffer.set_delay(params.latency);
  act.buffer.reset(params.nominal_joint_config, 0.0);
  return act;
}

namespace {

struct DefaultSpec {
  Vec3 hip, thigh, shank;
  double foot;
  double m_base, m_hip, m_thigh, m_shank;
  double haa, hfe, knee;  // haa is applied outward per leg
  double kp, kd, tau_max;
};

// Stand-ins shaped after the physical robots, kept inside the table ranges.
DefaultSpec default_spec(int ref_id) {
  switch (ref_id) {
    case 1:  // A1 class, ~14 kg
      return {{0.18, 0.05, 0.0}, {0.0, 0.08, 0.0},  {0.0, 0.0, -0.20}, 0.12,
              6.0, 0.7, 1.0, 0.25, 0.0, 0.75, -1.5, 60.0, 2.0, 33.5};
    case 2:  // Aliengo class, ~21 kg
      return {{0.24, 0.05, 0.0}, {0.0, 0.083, 0.0}, {0.0, 0.0, -0.25}, 0.12,
              9.0, 1.0, 1.5, 0.30, 0.0, 0.40, -1.35, 60.0, 2.0, 44.0};
    case 4:  // ANYmal B class, ~33 kg
      return {{0.28, 0.116, 0.0}, {0.06, 0.08, 0.0}, {0.0, 0.10, -0.25}, 0.12,
              16.0, 1.8, 2.2, 0.40, 0.0, 0.40, -1.35, 90.0, 2.5, 60.0};
    case 5:  // ANYmal C class, ~56 kg
      return {{0.30, 0.13, 0.0}, {0.06, -0.05, 0.0}, {0.06, 0.0, -0.285}, 0.12,
              29.0, 2.7, 3.4, 0.60, 0.12, 0.40, -0.88, 85.0, 2.5, 90.0};
    default:
      throw UnsupportedReference("reference id " + std::to_string(ref_id));
  }
}

}  // namespace

RobotModel reference_default_robot(int ref_id, const GlobalRanges& global) {
  const ReferenceModel& ref = reference_model(ref_id);
  const DefaultSpec d = default_spec(ref_id);

  MorphologyParams p;
  p.ref_id = ref_id;
  for (int leg = 0; leg < kNumLegs; ++leg) {
    p.joint_offsets[3 * leg + kHip] = d.hip;
    p.joint_offsets[3 * leg + kThigh] = d.thigh;
    p.joint_offsets[3 * leg + kShank] = d.shank;
    p.foot_offsets[leg] = d.foot;
    p.link_masses[3 * leg + kHip] = d.m_hip;
    p.link_masses[3 * leg + kThigh] = d.m_thigh;
    p.link_masses[3 * leg + kShank] = d.m_shank;
    p.mu_f[leg] = ref.table.mu.mid();
    p.nominal_joint_config[3 * leg + kHip] = sign_y(leg) * d.haa;
    p.nominal_joint_config[3 * leg + kThigh] = d.hfe;
    p.nominal_joint_config[3 * leg + kShank] = d.knee;
  }
  p.m_base = d.m_base;
  p.leg_configuration = LegConfig::A;
  p.kp = d.kp;
  p.kd = d.kd;
  p.tau_max = d.tau_max;
  p.latency = 0.005;
  (void)global;
  p.actuator_mode = sim::ActuatorMode::IdealPd;
  return build_kinematic_tree(p, ref);
}

bool viability_check(const RobotModel& robot,
                     const sim::SimulatorConfig& sim_config,
                     const ViabilityConfig& viability) {
  sim::Simulator simulator(robot.model, sim_config, robot.make_actuation());

  sim::SimState start = sim::SimState::zero(robot.model);
  start.q_joint = robot.params.nominal_joint_config;
  start.r_base = Vec3(0.0, 0.0, robot.nominal_base_height + viability.drop_height);
  simulator.reset(start);

  if (simulator.current_collisions().any()) return false;

  const int settle_steps = static_cast<int>(
      std::round(viability.settle_duration / sim_config.dt_control));
  const int stand_steps = static_cast<int>(
      std::round(viability.duration / sim_config.dt_control));
  const double min_height = viability.min_height_ratio * robot.nominal_base_height;
  const double min_cos_tilt = std::cos(viability.max_tilt);

  try {
    for (int i = 0; i < settle_steps + stand_steps; ++i) {
      const sim::StepInfo info =
          simulator.step(robot.params.nominal_joint_config);
      if (i >= settle_steps && info.collisions.any()) return false;
      const sim::SimState& s = simulator.state();
      if (s.r_base.z() < min_height) return false;
      if (s.q_base.toRotationMatrix()(2, 2) < min_cos_tilt) return false;
    }
  } catch (const sim::SimulationError&) {
    return false;  // diverged
  }
  return true;
}

namespace {

RobotModel generate_one(int ref_id, Rng& rng, const GenerationConfig& config,
                        int64_t& attempts, int64_t max_attempts) {
  const ReferenceModel& ref = reference_model(ref_id);
  while (true) {
    if (++attempts > max_attempts)
      throw GenerationExhausted("viability filter rejected " +
                                std::to_string(max_attempts) +
                                " consecutive candidates");
    MorphologyParams params;
    try {
      params = sample_morphology(ref, rng, config.global);
      RobotModel robot = build_kinematic_tree(params, ref, config.constants);
      if (viability_check(robot, config.sim, config.viability)) {
        attempts = 0;
        return robot;
      }
    } catch (const DegenerateMorphology&) {
      continue;
    }
  }
}

}  // namespace

RobotSet generate_robot_set(const std::vector<int>& ref_ids, int count,
                            Rng& rng, const GenerationConfig& config) {
  if (count < 1) throw std::invalid_argument("count must be >= 1");
  for (int id : ref_ids) reference_model(id);  // validate before any work

  RobotSet set;
  set.per_reference_count = count;
  const int64_t max_attempts =
      static_cast<int64_t>(config.max_attempts_per_robot) * count;

  for (int id : ref_ids) {
    int64_t attempts = 0;
    for (int i = 0; i < count; ++i) {
      Rng robot_rng(rng.raw());
      set.robots.push_back(
          generate_one(id, robot_rng, config, attempts, max_attempts));
    }
  }
  return set;
}

RobotSet resample_fraction(const RobotSet& set, double fraction, Rng& rng,
                           const GenerationConfig& config) {
  if (set.robots.empty()) throw std::invalid_argument("empty robot set");
  const int n = static_cast<int>(set.robots.size());
  const int k = static_cast<int>(std::floor(fraction * n));

  RobotSet out = set;
  if (k == 0) return out;

  // uniform k-subset without replacement (partial Fisher-Yates)
  std::vector<int> indices(n);
  for (int i = 0; i < n; ++i) indices[i] = i;
  for (int i = 0; i < k; ++i)
    std::swap(indices[i], indices[rng.uniform_int(i, n - 1)]);

  const int64_t max_attempts = config.max_attempts_per_robot;
  for (int i = 0; i < k; ++i) {
    const int slot = indices[i];
    Rng robot_rng(rng.raw());
    int64_t attempts = 0;
    out.robots[slot] = generate_one(set.robots[slot].ref_id, robot_rng, config,
                                    attempts, max_attempts);
  }
  return out;
}

namespace {

nlohmann::json vec3_to_json(const Vec3& v) { return {v.x(), v.y(), v.z()}; }

Vec3 vec3_from_json(const nlohmann::json& j) {
  return Vec3(j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>());
}

}  // namespace

std::string robot_set_to_json(const RobotSet& set) {
  nlohmann::json root;
  root["schema_version"] = 1;
  root["seed"] = set.seed;
  root["per_reference_count"] = set.per_reference_count;
  nlohmann::json robots = nlohmann::json::array();
  for (const RobotModel& robot : set.robots) {
    const MorphologyParams& p = robot.params;
    nlohmann::json jp;
    nlohmann::json offsets = nlohmann::json::array();
    for (const Vec3& o : p.joint_offsets) offsets.push_back(vec3_to_json(o));
    jp["joint_offsets"] = offsets;
    jp["foot_offsets"] = p.foot_offsets;
    jp["m_base"] = p.m_base;
    jp["link_masses"] = p.link_masses;
    std::vector<double> qn(p.nominal_joint_config.data(),
                           p.nominal_joint_config.data() + kNumJoints);
    jp["nominal_joint_config"] = qn;
    jp["leg_configuration"] = p.leg_configuration == LegConfig::A ? "A" : "X";
    jp["kp"] = p.kp;
    jp["kd"] = p.kd;
    jp["tau_max"] = p.tau_max;
    jp["mu_f"] = p.mu_f;
    jp["latency"] = p.latency;
    jp["actuator"] = {
        {"mode", p.actuator_mode == sim::ActuatorMode::Nonlinear ? "nonlinear"
                                                                 : "ideal_pd"},
        {"knee_speed", p.actuator.knee_speed},
        {"derating_slope", p.actuator.derating_slope}};
    robots.push_back({{"ref_id", robot.ref_id},
                      {"r_n", robot.nominal_base_height},
                      {"params", jp}});
  }
  root["robots"] = robots;
  return root.dump(2);
}

RobotSet robot_set_from_json(const std::string& text,
                             const BuildConstants& constants) {
  const nlohmann::json root = nlohmann::json::parse(text);
  if (root.at("schema_version").get<int>() != 1)
    throw std::runtime_error("unsupported robots.json schema version");

  RobotSet set;
  set.seed = root.at("seed").get<uint64_t>();
  set.per_reference_count = root.at("per_reference_count").get<int>();
  for (const nlohmann::json& jrobot : root.at("robots")) {
    const nlohmann::json& jp = jrobot.at("params");
    MorphologyParams p;
    p.ref_id = jrobot.at("ref_id").get<int>();
    for (int i = 0; i < kNumJoints; ++i)
      p.joint_offsets[i] = vec3_from_json(jp.at("joint_offsets").at(i));
    p.foot_offsets = jp.at("foot_offsets").get<std::array<double, kNumLegs>>();
    p.m_base = jp.at("m_base").get<double>();
    p.link_masses = jp.at("link_masses").get<std::array<double, kNumJoints>>();
    const auto qn = jp.at("nominal_joint_config").get<std::vector<double>>();
    for (int i = 0; i < kNumJoints; ++i) p.nominal_joint_config[i] = qn.at(i);
    p.leg_configuration =
        jp.at("leg_configuration").get<std::string>() == "A" ? LegConfig::A
                                                             : LegConfig::X;
    p.kp = jp.at("kp").get<double>();
    p.kd = jp.at("kd").get<double>();
    p.tau_max = jp.at("tau_max").get<double>();
    p.mu_f = jp.at("mu_f").get<std::array<double, kNumLegs>>();
    p.latency = jp.at("latency").get<double>();
    const nlohmann::json& ja = jp.at("actuator");
    p.actuator_mode = ja.at("mode").get<std::string>() == "nonlinear"
                          ? sim::ActuatorMode::Nonlinear
                          : sim::ActuatorMode::IdealPd;
    p.actuator.knee_speed = ja.at("knee_speed").get<double>();
    p.actuator.derating_slope = ja.at("derating_slope").get<double>();

    set.robots.push_back(
        build_kinematic_tree(p, reference_model(p.ref_id), constants));
  }
  return set;
}

void save_robot_set(const RobotSet& set, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << robot_set_to_json(set) << '\n';
}

RobotSet load_robot_set(const std::string& path, const BuildConstants& constants) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return robot_set_from_json(buffer.str(), constants);
}

}  // namespace pal::morph
