#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "pal/rng.hpp"
#include "pal/sim/articulated.hpp"
#include "pal/sim/actuation.hpp"
#include "pal/sim/simulator.hpp"
#include "pal/types.hpp"

namespace pal::morph {

struct UnsupportedReference : std::runtime_error {
  explicit UnsupportedReference(const std::string& what)
      : std::runtime_error(what) {}
};
struct DegenerateMorphology : std::runtime_error {
  explicit DegenerateMorphology(const std::string& what)
      : std::runtime_error(what) {}
};
struct GenerationExhausted : std::runtime_error {
  explicit GenerationExhausted(const std::string& what)
      : std::runtime_error(what) {}
};

struct Bounds {
  double lo = 0.0, hi = 0.0;
  double sample(Rng& rng) const { return rng.uniform(lo, hi); }
  bool contains(double v) const { return v >= lo && v <= hi; }
  double mid() const { return 0.5 * (lo + hi); }
};

// A = knees pointing backwards, X = knees toward the base centre; the two
// differ in the nominal knee angle range.
enum class LegConfig { A, X };

// Per-reference uniform sampling ranges. Offsets are stored in a leg-local
// convention (hip x positive forward, lateral components positive outward);
// the sign pattern of each leg is applied when the tree is built.
struct SamplingTable {
  Bounds hip_x, hip_y, hip_z;        // base -> hip-abduction joint
  Bounds thigh_x, thigh_y, thigh_z;  // hip -> hip-flexion joint
  Bounds shank_x, shank_y, shank_z;  // hip-flexion -> knee joint
  Bounds foot_z;                     // knee -> foot frame, applied downward
  Bounds m_base, m_hip, m_thigh, m_shank;
  Bounds qn_haa, qn_hfe_front, qn_hfe_hind;
  Bounds qn_knee_a, qn_knee_x;
  Bounds kp, kd, tau_max, mu;
};

struct ReferenceModel {
  int id = 0;
  std::string name;
  SamplingTable table;
};

// Supported ids: 1 (A1), 2 (Aliengo), 4 (ANYmal B), 5 (ANYmal C). Id 3 has no
// published ranges and is rejected.
const ReferenceModel& reference_model(int id);
const std::vector<int>& supported_reference_ids();

struct GlobalRanges {
  Bounds latency{0.0, 0.020};  // s
  double nonlinear_actuator_prob = 0.5;
  Bounds actuator_knee_speed{6.0, 12.0};   // rad/s
  Bounds actuator_derating_slope{0.3, 1.0};
};

struct MorphologyParams {
  int ref_id = 0;
  std::array<Vec3, kNumJoints> joint_offsets;  // leg-local convention
  std::array<double, kNumLegs> foot_offsets;   // c_f,z samples
  double m_base = 0.0;
  std::array<double, kNumJoints> link_masses;  // [3*leg + {hip,thigh,shank}]
  Vec12 nominal_joint_config = Vec12::Zero();
  LegConfig leg_configuration = LegConfig::A;
  double kp = 0.0, kd = 0.0, tau_max = 0.0;
  std::array<double, kNumLegs> mu_f{};
  double latency = 0.0;
  sim::ActuatorMode actuator_mode = sim::ActuatorMode::IdealPd;
  sim::NonlinearActuatorParams actuator;

  bool within_bounds(const ReferenceModel& ref, const GlobalRanges& global) const;
};

MorphologyParams sample_morphology(const ReferenceModel& ref, Rng& rng,
                                   const GlobalRanges& global = {});

// Geometry constants used to synthesize inertia and collision primitives.
struct BuildConstants {
  double link_radius = 0.015;  // capsule radius for all leg links
  double foot_radius = 0.02;   // contact sphere
  double base_pad = 0.05;      // base box margin beyond the hips
  double base_half_height = 0.06;
  double min_shank_drop = 0.01;  // |c_q3,z| below this is degenerate
};

struct RobotModel {
  int ref_id = 0;
  MorphologyParams params;
  double nominal_base_height = 0.0;  // r_n
  sim::ArticulatedModel model;

  sim::ActuationState make_actuation() const;
};

// Fig-2 topology: base -> 4x (hip, thigh, shank) chains with a foot frame on
// each shank. Inertias are solid capsules along the parent->child offsets;
// the base is a solid box sized from the hip offsets. r_n comes from forward
// kinematics at the nominal configuration with the lowest foot touching.
RobotModel build_kinematic_tree(const MorphologyParams& params,
                                const ReferenceModel& ref,
                                const BuildConstants& constants = {});

// Reference stand-in: every sampled field at the midpoint of its range,
// configuration A.
RobotModel reference_default_robot(int ref_id, const GlobalRanges& global = {});

struct ViabilityConfig {
  double duration = 2.0;          // collision-free stand window, s
  double settle_duration = 0.5;   // drop transient before the window starts
  double max_tilt = 60.0 * M_PI / 180.0;
  double min_height_ratio = 0.5;  // of r_n
  double drop_height = 0.001;     // spawn margin above r_n
};

// Drop at nominal with the joint PD holding q^n. During the settle window
// only falls (tilt, height, divergence) reject; the robot must then stand
// `duration` seconds with no non-foot or self collision and no fall.
bool viability_check(const RobotModel& robot, const sim::SimulatorConfig& sim_config,
                     const ViabilityConfig& viability = {});

struct RobotSet {
  std::vector<RobotModel> robots;
  int per_reference_count = 0;
  uint64_t seed = 0;
};

struct GenerationConfig {
  sim::SimulatorConfig sim;
  ViabilityConfig viability;
  GlobalRanges global;
  BuildConstants constants;
  int max_attempts_per_robot = 1000;
};

RobotSet generate_robot_set(const std::vector<int>& ref_ids, int count,
                            Rng& rng, const GenerationConfig& config = {});

// Replaces floor(fraction * |set|) uniformly chosen members with freshly
// generated viable robots of the same reference id.
RobotSet resample_fraction(const RobotSet& set, double fraction, Rng& rng,
                           const GenerationConfig& config = {});

// robots.json, versioned
std::string robot_set_to_json(const RobotSet& set);
RobotSet robot_set_from_json(const std::string& text,
                             const BuildConstants& constants = {});
void save_robot_set(const RobotSet& set, const std::string& path);
RobotSet load_robot_set(const std::string& path,
                        const BuildConstants& constants = {});

}  // namespace pal::morph
