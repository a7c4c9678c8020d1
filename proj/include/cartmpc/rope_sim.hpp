#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cartmpc/geometry.hpp"
#include "cartmpc/linking.hpp"
#include "cartmpc/rng.hpp"

namespace cartmpc {

struct SimDiverged : std::runtime_error {
    explicit SimDiverged(const std::string& what) : std::runtime_error(what) {}
};

struct Material {
    std::string id = "M1";
    double stretch_compliance = 1e-4;  // m/N
    double bend_compliance = 1e-1;
    double damping = 4.0;  // 1/s
};

// M1 compliant, M2 medium, M3 stiff. Bending scales with stretch.
Material material_preset(const std::string& id);
std::vector<std::string> material_preset_ids();

// Robot delta pose (translation + intrinsic XYZ Euler rotation) and bar joint
// delta. Zero-initialized members are the no-change actions.
struct ActionPair {
    Vec3 d_translation;  // m, per-step |.| <= kMaxTranslation
    Vec3 d_rotation;     // rad, per-axis |.| <= kMaxRotation
    double d_bar = 0.0;  // rad, |.| <= kMaxBarDelta

    static constexpr double kMaxTranslation = 0.01;
    static constexpr double kMaxRotation = 0.05;
    static constexpr double kMaxBarDelta = 0.05;

    static ActionPair none() { return ActionPair{}; }
    bool within_bounds() const;
    ActionPair clamped() const;
};

struct SimParams {
    int particle_count = 24;
    double rope_length = 0.30;       // m, before slack
    double rope_radius = 0.004;      // m
    double hook_tube_radius = 0.006; // m
    double particle_mass = 0.01;     // kg
    double dt = 0.02;                // s
    int substeps = 4;
    int iterations = 20;             // constraint iterations per substep
    double gravity = 9.81;
    Vec3 bar_mount{0.0, 0.0, 0.22};  // bar axis runs along x through this point
    double bar_half_length = 0.12;   // collision capsule extent of the bar rod
    Vec3 anchor{0.0, 0.10, 0.0};     // sheet-anchor pin (strap far end)
    Vec3 grip_offset{0.0, 0.0, -0.02};  // pin point in the gripper frame
    double stretch_tol = 1e-3;       // m, post-step constraint check
    bool coulomb_friction = false;
    double friction = 0.3;
    // Passive (uncontrolled baseline) bar joint.
    double bar_inertia = 2e-4;   // kg m^2
    double bar_joint_damping = 2e-3;
};

struct RopeState {
    std::vector<Vec3> positions;
    std::vector<Vec3> velocities;
    double rest_segment = 0.0;  // m
};

enum class BarMode { Kinematic, Passive, Fixed };

struct WorldState {
    SimParams params;
    RopeState rope;
    double bar_angle = 0.0;  // rad, wrapped to [0, 2*pi)
    double bar_omega = 0.0;  // rad/s, used by the passive joint
    Pose6 gripper;
    HookShape hook;
    Material material;
    double slack = 0.0;  // m of extra rope length
    bool gripper_pinned = true;
    BarMode bar_mode = BarMode::Kinematic;

    Vec3 grip_point() const { return gripper.apply(params.grip_offset); }
    int particle_count() const { return static_cast<int>(rope.positions.size()); }
};

// Builds a world with the rope stretched in a straight line from the anchor
// to the gripper pin. Call settle() before use.
WorldState make_world(const SimParams& params, const HookShape& hook, const Material& material,
                      double slack, const Pose6& gripper, double bar_angle);

// Hook polyline in world coordinates at the world's current bar angle.
Polyline3 hook_world_polyline(const WorldState& world);
Polyline3 hook_world_polyline(const SimParams& params, const HookShape& hook, double bar_angle);

// Advances one control step (params.dt): gripper by a_rob, bar by a_bar
// (kinematic; ignored when the bar is passive or fixed), then the XPBD
// substep cycle with hook/bar collision. Throws SimDiverged on NaN/inf.
void step(WorldState& world, const ActionPair& action);

struct SettleResult {
    int steps = 0;
    bool settled = false;
};

// Steps with zero actions until max kinetic energy per particle drops below
// 1e-6 J or max_steps is reached.
SettleResult settle(WorldState& world, int max_steps = 500);

double max_particle_kinetic_energy(const WorldState& world);
double total_mechanical_energy(const WorldState& world);

// Exact linking magnitude between the virtually-closed strap and the hook at
// the world's current configuration. Jitters internally on singular contact.
double world_link_value(const WorldState& world);

struct GoalParams {
    double theta_g = 0.5;        // linking magnitude threshold
    double window_seconds = 2.0; // settling window after releasing the grip
    double perturb = 0.02;       // rad, random bar perturbation per step
    uint64_t seed = 0;
};

// True iff after releasing the gripper pin and simulating the perturbed
// settling window, |link| stays above theta_g throughout and the strap rests
// against the bottom third of the hook arc. Divergence counts as failure.
// Operates on a copy; the input world is not mutated.
bool goal_reached(const WorldState& world, const GoalParams& goal);

// Max deviation |‖p_i − p_{i+1}‖ − rest| over all stretch constraints.
double max_stretch_violation(const WorldState& world);

}  // namespace cartmpc
