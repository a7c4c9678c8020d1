#pragma once

#include "cartmpc/geometry.hpp"
#include "cartmpc/rng.hpp"
#include "cartmpc/rope_sim.hpp"

namespace cartmpc {

// Posed hook landmarks used by the scripted controller and by scenario
// construction.
struct HookFrame {
    Vec3 center;        // arc center, world
    Vec3 normal;        // unit normal of the hook plane, world
    Vec3 bottom_inner;  // resting point on the inner bottom surface, world
    double gap_angle;   // world angle of the mouth-gap center in the plane
                        // perpendicular to the bar axis (0 = +y, pi/2 = +z)
};

HookFrame compute_hook_frame(const SimParams& params, const HookShape& shape, double bar_angle);

// Bar angle that would place the mouth gap at world angle `target` (radians,
// same convention as HookFrame::gap_angle).
double bar_angle_for_gap(const HookShape& shape, double target);

// Waypoint-following proportional controller that carries the strap's free
// end through the hook interior and feeds a hanging tail, while turning the
// bar so the mouth gap points upward. Used as the exploration bias during
// data generation and to script successful-tie trajectories.
class TieController {
public:
    TieController(uint64_t seed, double noise_scale = 0.0)
        : rng_(seed), noise_(noise_scale) {}

    ActionPair act(const WorldState& world);

    int phase() const { return phase_; }
    bool done() const { return phase_ >= 4; }

private:
    Rng rng_;
    double noise_ = 0.0;
    int phase_ = 0;
    int side_ = 0;  // +-1, which side of the hook plane the approach starts on
};

// Builds a world whose rope is already threaded through the hook and resting
// on its inner bottom, with a hanging tail. Used by goal-classifier tests and
// amortizer sanity checks. The world is constructed kinematically; run a few
// steps or settle() to relax it.
WorldState make_threaded_world(const SimParams& params, const HookShape& hook,
                               const Material& material, double slack, double bar_angle);

// Initial world for trials and data generation: gripper start pose and bar
// angle drawn from seeded ranges, rope settled before handing over control.
struct InitRanges {
    Vec3 pin_lo{-0.03, 0.03, 0.08};
    Vec3 pin_hi{0.03, 0.08, 0.16};
    double bar_lo = 0.0;
    double bar_hi = 6.283185307179586;
};

WorldState make_initial_world(const SimParams& params, const HookShape& hook,
                              const Material& material, double slack, uint64_t seed,
                              const InitRanges& ranges = {});

}  // namespace cartmpc
