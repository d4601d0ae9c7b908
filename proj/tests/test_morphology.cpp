#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "pal/morphology.hpp"
#include "pal/sim/dynamics.hpp"
#include "support/fixtures.hpp"

using namespace pal;
using namespace pal::morph;

TEST_CASE("reference table: id 3 rejected, supported ids load") {
  CHECK_THROWS_AS(reference_model(3), UnsupportedReference);
  CHECK_THROWS_AS(reference_model(0), UnsupportedReference);
  for (int id : {1, 2, 4, 5}) CHECK(reference_model(id).id == id);
}

TEST_CASE("sampling: published bounds spot checks") {
  CHECK(reference_model(1).table.m_base.lo == 2.0);
  CHECK(reference_model(1).table.m_base.hi == 28.0);
  CHECK(reference_model(5).table.kp.lo == 35.0);
  CHECK(reference_model(5).table.kp.hi == 120.0);
  CHECK(reference_model(2).table.tau_max.hi == 50.0);
  CHECK(reference_model(4).table.shank_z.lo == -0.35);
}

TEST_CASE("sampling: 10000 draws per reference stay within bounds") {
  GlobalRanges global;
  for (int id : {1, 2, 4, 5}) {
    const ReferenceModel& ref = reference_model(id);
    Rng rng(1000 + id);
    for (int i = 0; i < 10000; ++i) {
      const MorphologyParams p = sample_morphology(ref, rng, global);
      REQUIRE(p.within_bounds(ref, global));
    }
  }
}

TEST_CASE("sampling: deterministic under a fixed seed") {
  const ReferenceModel& ref = reference_model(1);
  auto draw = [&] {
    Rng rng(42);
    return sample_morphology(ref, rng);
  };
  const MorphologyParams a = draw();
  const MorphologyParams b = draw();
  CHECK(a.m_base == b.m_base);
  CHECK(a.kp == b.kp);
  CHECK((a.nominal_joint_config - b.nominal_joint_config).norm() == 0.0);
  for (int i = 0; i < kNumJoints; ++i)
    CHECK((a.joint_offsets[i] - b.joint_offsets[i]).norm() == 0.0);
}

TEST_CASE("build: topology has 12 joints, 4 feet, correct total mass") {
  RobotModel robot = pal::testing::a1_default();
  CHECK(robot.model.num_joints() == 12);
  CHECK(robot.model.feet.size() == 4);
  CHECK(robot.model.floating);

  double expected = robot.params.m_base;
  for (double m : robot.params.link_masses) expected += m;
  CHECK(sim::total_mass(robot.model) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("build: forward kinematics of the straight-leg chain pins r_n") {
  // hip and thigh z offsets zero, knee drop 0.24, all joint angles zero:
  // the foot frame hangs 0.24 + |c_f,z| below the base.
  const ReferenceModel& ref = reference_model(1);
  BuildConstants constants;
  MorphologyParams p = reference_default_robot(1).params;
  for (int leg = 0; leg < 4; ++leg) {
    p.joint_offsets[3 * leg + 0].z() = 0.0;
    p.joint_offsets[3 * leg + 1].z() = 0.0;
    p.joint_offsets[3 * leg + 2].z() = -0.24;
    p.foot_offsets[leg] = 0.08;
  }
  p.nominal_joint_config.setZero();
  RobotModel robot = build_kinematic_tree(p, ref, constants);
  CHECK(robot.nominal_base_height ==
        doctest::Approx(0.24 + 0.08 + constants.foot_radius).epsilon(1e-12));
}

TEST_CASE("build: foot frames land where hand kinematics says") {
  RobotModel robot = pal::testing::a1_default();
  sim::SimState s = sim::SimState::zero(robot.model);
  s.q_joint = robot.params.nominal_joint_config;
  const sim::Kinematics kin = sim::compute_kinematics(robot.model, s);
  // all four feet at the same height for the symmetric default
  std::vector<double> heights;
  for (const auto& foot : robot.model.feet)
    heights.push_back(kin.point_on_body(robot.model, foot.body, foot.offset).z());
  for (double h : heights) CHECK(h == doctest::Approx(heights[0]).epsilon(1e-12));
  // r_n positioned so that feet kiss the plane
  CHECK(-heights[0] + 0.02 == doctest::Approx(robot.nominal_base_height));
}

TEST_CASE("build: degenerate knee drop rejected") {
  const ReferenceModel& ref = reference_model(1);
  MorphologyParams p = reference_default_robot(1).params;
  p.joint_offsets[2].z() = -0.005;  // below the 1 cm floor
  CHECK_THROWS_AS(build_kinematic_tree(p, ref), DegenerateMorphology);
}

TEST_CASE("build: out-of-table geometry rejected") {
  const ReferenceModel& ref = reference_model(1);
  MorphologyParams p = reference_default_robot(1).params;
  p.m_base = 100.0;  // above U(2, 28)
  CHECK_THROWS_AS(build_kinematic_tree(p, ref), DegenerateMorphology);
}

TEST_CASE("viability: all four reference defaults stand") {
  sim::SimulatorConfig cfg;
  for (int id : {1, 2, 4, 5}) {
    RobotModel robot = reference_default_robot(id);
    CHECK(viability_check(robot, cfg));
  }
}

TEST_CASE("viability: self-intersecting nominal pose fails at t=0") {
  RobotModel robot = pal::testing::a1_default();
  // fold the front legs inward so the knee spheres cross
  robot.params.nominal_joint_config[0] = -0.9;
  robot.params.nominal_joint_config[3] = 0.9;
  RobotModel rebuilt =
      build_kinematic_tree(robot.params, reference_model(1));
  sim::SimulatorConfig cfg;
  CHECK_FALSE(viability_check(rebuilt, cfg));
}

TEST_CASE("viability: deterministic verdict on a stressed sample") {
  // heavy legs, weakest actuation the table allows
  const ReferenceModel& ref = reference_model(1);
  MorphologyParams p = reference_default_robot(1).params;
  for (int leg = 0; leg < 4; ++leg) {
    p.link_masses[3 * leg + 0] = ref.table.m_hip.hi;
    p.link_masses[3 * leg + 1] = ref.table.m_thigh.hi;
    p.link_masses[3 * leg + 2] = ref.table.m_shank.hi;
  }
  p.kp = ref.table.kp.lo;
  p.tau_max = ref.table.tau_max.lo;
  RobotModel robot = build_kinematic_tree(p, ref);
  sim::SimulatorConfig cfg;
  const bool verdict = viability_check(robot, cfg);
  CHECK(viability_check(robot, cfg) == verdict);
}

TEST_CASE("generation: exact count of viable robots, deterministic bytes") {
  GenerationConfig config;
  auto make = [&] {
    Rng rng(7);
    RobotSet set = generate_robot_set({1}, 5, rng, config);
    set.seed = 7;
    return set;
  };
  RobotSet set = make();
  CHECK(set.robots.size() == 5);
  for (const RobotModel& robot : set.robots) {
    CHECK(robot.ref_id == 1);
    CHECK(viability_check(robot, config.sim, config.viability));
  }
  CHECK(robot_set_to_json(set) == robot_set_to_json(make()));
}

TEST_CASE("generation: multiple references multiply the count") {
  GenerationConfig config;
  Rng rng(11);
  RobotSet set = generate_robot_set({1, 4}, 2, rng, config);
  CHECK(set.robots.size() == 4);
  CHECK(set.robots[0].ref_id == 1);
  CHECK(set.robots[2].ref_id == 4);
}

TEST_CASE("generation: unsupported reference fails before any work") {
  GenerationConfig config;
  Rng rng(12);
  CHECK_THROWS_AS(generate_robot_set({3}, 2, rng, config), UnsupportedReference);
}

TEST_CASE("resample: replaces the floor fraction, keeps the rest identical") {
  GenerationConfig config;
  Rng rng(13);
  RobotSet set = generate_robot_set({1}, 10, rng, config);

  Rng resample_rng(99);
  RobotSet resampled = resample_fraction(set, 0.2, resample_rng, config);
  REQUIRE(resampled.robots.size() == set.robots.size());

  int changed = 0;
  for (size_t i = 0; i < set.robots.size(); ++i) {
    const bool same =
        set.robots[i].params.m_base == resampled.robots[i].params.m_base &&
        set.robots[i].params.kp == resampled.robots[i].params.kp;
    if (!same) ++changed;
    CHECK(resampled.robots[i].ref_id == set.robots[i].ref_id);
  }
  CHECK(changed == 2);

  // fraction 0 is the identity
  Rng rng0(5);
  RobotSet unchanged = resample_fraction(set, 0.0, rng0, config);
  for (size_t i = 0; i < set.robots.size(); ++i)
    CHECK(unchanged.robots[i].params.m_base == set.robots[i].params.m_base);

  // seeded determinism
  Rng r1(99), r2(99);
  RobotSet a = resample_fraction(set, 0.2, r1, config);
  RobotSet b = resample_fraction(set, 0.2, r2, config);
  for (size_t i = 0; i < a.robots.size(); ++i)
    CHECK(a.robots[i].params.m_base == b.robots[i].params.m_base);
}

TEST_CASE("serialization: robots.json round trip preserves every field") {
  GenerationConfig config;
  Rng rng(21);
  RobotSet set = generate_robot_set({1, 5}, 2, rng, config);
  set.seed = 21;
  const std::string text = robot_set_to_json(set);
  RobotSet loaded = robot_set_from_json(text);
  REQUIRE(loaded.robots.size() == set.robots.size());
  CHECK(loaded.seed == 21);
  for (size_t i = 0; i < set.robots.size(); ++i) {
    const MorphologyParams& a = set.robots[i].params;
    const MorphologyParams& b = loaded.robots[i].params;
    CHECK(a.m_base == b.m_base);
    CHECK(a.kp == b.kp);
    CHECK(a.kd == b.kd);
    CHECK(a.tau_max == b.tau_max);
    CHECK(a.latency == b.latency);
    CHECK((a.nominal_joint_config - b.nominal_joint_config).norm() == 0.0);
    for (int j = 0; j < kNumJoints; ++j)
      CHECK((a.joint_offsets[j] - b.joint_offsets[j]).norm() == 0.0);
    CHECK(set.robots[i].nominal_base_height ==
          doctest::Approx(loaded.robots[i].nominal_base_height).epsilon(1e-15));
  }
  CHECK(robot_set_to_json(loaded) == text);
}
