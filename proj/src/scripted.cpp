#include "cartmpc/scripted.hpp"

#include <algorithm>
#include <cmath>

namespace cartmpc {

HookFrame compute_hook_frame(const SimParams& params, const HookShape& shape, double bar_angle) {
    const double two_pi = 6.283185307179586476925286766559;
    const Mat3 R = Mat3::rot_x(bar_angle) * Mat3::rot_y(shape.tilt);
    HookFrame f;
    const Vec3 center_local{0.0, 0.0, -shape.throat - shape.arc_radius};
    const Vec3 bottom_local{0.0, 0.0, -shape.throat - 2.0 * shape.arc_radius};
    const double rest_off = params.hook_tube_radius + params.rope_radius;
    f.center = params.bar_mount + R * center_local;
    f.normal = R * Vec3{1.0, 0.0, 0.0};
    f.bottom_inner = params.bar_mount + R * (bottom_local + Vec3{0.0, 0.0, rest_off});
    // Arc spans [pi/2, pi/2 + sweep] in the local y-z plane; the gap center
    // sits half an opening past the arc end. Bar rotation shifts it directly.
    const double sweep = two_pi - shape.opening_angle;
    const double gap_local = 0.25 * two_pi + sweep + 0.5 * shape.opening_angle;
    f.gap_angle = wrap_angle_2pi(gap_local + bar_angle);
    return f;
}

double bar_angle_for_gap(const HookShape& shape, double target) {
    const double two_pi = 6.283185307179586476925286766559;
    const double sweep = two_pi - shape.opening_angle;
    const double gap_local = 0.25 * two_pi + sweep + 0.5 * shape.opening_angle;
    return wrap_angle_2pi(target - gap_local);
}

namespace {

double wrap_pi(double a) {
    const double two_pi = 6.283185307179586476925286766559;
    a = std::fmod(a + 0.5 * two_pi, two_pi);
    if (a < 0) a += two_pi;
    return a - 0.5 * two_pi;
}

}  // namespace

ActionPair TieController::act(const WorldState& world) {
    const HookFrame f = compute_hook_frame(world.params, world.hook, world.bar_angle);
    const Vec3 pin = world.grip_point();

    if (side_ == 0) side_ = (pin - f.center).dot(f.normal) >= 0.0 ? 1 : -1;
    const Vec3 n = f.normal * static_cast<double>(side_);

    // Resting point: the world-lowest point of the hook ring.
    const double rest_off = world.params.hook_tube_radius + world.params.rope_radius;
    const Vec3 wrap = f.center + Vec3{0.0, 0.0, -world.hook.arc_radius + rest_off};
    const double free_radius = world.hook.arc_radius - rest_off;

    // The rope is slack, so merely poking the tip through lets the bight fall
    // back out under the ring. Cross low (just above the inner bottom tube),
    // then pull down-and-away on the far side so the rope presses onto the
    // tube at once, and finally feed the tail until the rope is near taut.
    const double cross_dz = std::clamp(0.4 * free_radius, 0.004, 0.012);
    const double rope_total = world.params.rope_length + world.slack;
    const double anchored = (wrap - world.params.anchor).norm();
    const double tail = std::max(0.06, rope_total - anchored - 0.01);
    const double z_floor = 0.015;

    Vec3 feed = wrap + n * -0.02;
    feed.z = std::max(z_floor, wrap.z - tail);

    const Vec3 waypoints[4] = {
        f.center + n * 0.05,
        wrap + Vec3{0.0, 0.0, cross_dz} + n * -0.028,
        wrap + n * -0.045 + Vec3{0.0, 0.0, -0.025},
        feed,
    };
    const double tol = std::min(0.012, std::max(0.005, 0.6 * free_radius));

    const double quarter = 1.5707963267948966;
    const double gap_err = wrap_pi(quarter - f.gap_angle);

    ActionPair a;
    if (phase_ < 4) {
        const Vec3 target = waypoints[phase_];
        const Vec3 err = target - pin;
        if (err.norm() < tol) {
            // Do not carry the strap through until the mouth gap points
            // away from where it will rest.
            if (phase_ != 0 || std::abs(gap_err) < 0.5) ++phase_;
        }
        Vec3 stepv = err * 0.6;
        const double lim = ActionPair::kMaxTranslation * 0.9;
        if (stepv.norm() > lim) stepv = stepv.normalized() * lim;
        a.d_translation = stepv;
    }

    // Keep the mouth gap pointing up so the resting strap cannot escape
    // through it.
    a.d_bar = std::clamp(wrap_pi(quarter - f.gap_angle), -ActionPair::kMaxBarDelta,
                         ActionPair::kMaxBarDelta);

    if (noise_ > 0.0) {
        a.d_translation.x += rng_.normal(0.0, noise_ * 0.002);
        a.d_translation.y += rng_.normal(0.0, noise_ * 0.002);
        a.d_translation.z += rng_.normal(0.0, noise_ * 0.002);
        a.d_bar += rng_.normal(0.0, noise_ * 0.01);
    }
    return a.clamped();
}

WorldState make_threaded_world(const SimParams& params, const HookShape& hook,
                               const Material& material, double slack, double bar_angle) {
    const HookFrame f = compute_hook_frame(params, hook, bar_angle);
    const Vec3 n = f.normal;

    // Piecewise-linear path from the anchor, behind the hook plane, across
    // the inner bottom, down the far side.
    std::vector<Vec3> path;
    path.push_back(params.anchor);
    path.push_back(f.center + n * -0.02 + Vec3{0.0, 0.03, -0.01});
    path.push_back(f.bottom_inner + n * -0.012);
    path.push_back(f.bottom_inner);
    path.push_back(f.bottom_inner + n * 0.012);
    path.push_back(f.bottom_inner + n * 0.02 + Vec3{0.0, 0.0, -0.3});  // long drop; truncated

    // Walk the polyline from the anchored end placing particles at the rest
    // spacing; the leftover length hangs down the far side.
    const int count = params.particle_count;
    const double rest = (params.rope_length + slack) / (count - 1);
    std::vector<Vec3> pts(static_cast<size_t>(count));
    size_t seg = 0;
    Vec3 cur = path[0];
    pts[static_cast<size_t>(count - 1)] = cur;  // particle N-1 = anchor
    for (int i = count - 2; i >= 0; --i) {
        double need = rest;
        while (need > 0.0 && seg + 1 < path.size()) {
            const Vec3 dir = path[seg + 1] - cur;
            const double avail = dir.norm();
            if (avail > need) {
                cur += dir * (need / avail);
                need = 0.0;
            } else {
                cur = path[seg + 1];
                need -= avail;
                ++seg;
            }
        }
        if (need > 0.0) cur += Vec3{0.0, 0.0, -need};  // ran off the path: straight down
        pts[static_cast<size_t>(i)] = cur;
    }

    Pose6 gripper;
    gripper.t = pts[0] - params.grip_offset;
    WorldState w = make_world(params, hook, material, slack, gripper, bar_angle);
    w.rope.positions = pts;
    return w;
}

WorldState make_initial_world(const SimParams& params, const HookShape& hook,
                              const Material& material, double slack, uint64_t seed,
                              const InitRanges& ranges) {
    Rng rng(seed);
    const Vec3 pin{rng.uniform(ranges.pin_lo.x, ranges.pin_hi.x),
                   rng.uniform(ranges.pin_lo.y, ranges.pin_hi.y),
                   rng.uniform(ranges.pin_lo.z, ranges.pin_hi.z)};
    const double bar_angle = rng.uniform(ranges.bar_lo, ranges.bar_hi);
    Pose6 gripper;
    gripper.t = pin - params.grip_offset;
    WorldState w = make_world(params, hook, material, slack, gripper, bar_angle);
    // Let the rope fall into a natural drape before control starts.
    for (int k = 0; k < 10; ++k) step(w, ActionPair::none());
    settle(w, 300);
    return w;
}

}  // namespace cartmpc
