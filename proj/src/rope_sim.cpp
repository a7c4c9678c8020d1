#include "cartmpc/rope_sim.hpp"

#include <algorithm>
#include <cmath>

namespace cartmpc {

Material material_preset(const std::string& id) {
    Material m;
    m.id = id;
    if (id == "M1") {
        m.stretch_compliance = 1e-4;
    } else if (id == "M2") {
        m.stretch_compliance = 1e-5;
    } else if (id == "M3") {
        m.stretch_compliance = 1e-6;
    } else {
        throw std::invalid_argument("unknown material preset: " + id);
    }
    m.bend_compliance = 1e3 * m.stretch_compliance;
    m.damping = 4.0;
    return m;
}

std::vector<std::string> material_preset_ids() { return {"M1", "M2", "M3"}; }

bool ActionPair::within_bounds() const {
    return d_translation.norm() <= kMaxTranslation + 1e-12 &&
           std::abs(d_rotation.x) <= kMaxRotation + 1e-12 &&
           std::abs(d_rotation.y) <= kMaxRotation + 1e-12 &&
           std::abs(d_rotation.z) <= kMaxRotation + 1e-12 &&
           std::abs(d_bar) <= kMaxBarDelta + 1e-12;
}

ActionPair ActionPair::clamped() const {
    ActionPair a = *this;
    const double tn = a.d_translation.norm();
    if (tn > kMaxTranslation) a.d_translation *= kMaxTranslation / tn;
    a.d_rotation.x = std::clamp(a.d_rotation.x, -kMaxRotation, kMaxRotation);
    a.d_rotation.y = std::clamp(a.d_rotation.y, -kMaxRotation, kMaxRotation);
    a.d_rotation.z = std::clamp(a.d_rotation.z, -kMaxRotation, kMaxRotation);
    a.d_bar = std::clamp(a.d_bar, -kMaxBarDelta, kMaxBarDelta);
    return a;
}

WorldState make_world(const SimParams& params, const HookShape& hook, const Material& material,
                      double slack, const Pose6& gripper, double bar_angle) {
    if (params.particle_count < 8) throw std::invalid_argument("rope needs >= 8 particles");
    if (slack < 0.0) throw std::invalid_argument("slack must be >= 0");

    WorldState w;
    w.params = params;
    w.hook = hook;
    w.material = material;
    w.slack = slack;
    w.gripper = gripper;
    w.bar_angle = wrap_angle_2pi(bar_angle);

    const int n = params.particle_count;
    w.rope.rest_segment = (params.rope_length + slack) / (n - 1);
    w.rope.positions.resize(n);
    w.rope.velocities.assign(n, Vec3{});
    const Vec3 a = gripper.apply(params.grip_offset);  // particle 0 = gripper end
    const Vec3 b = params.anchor;                      // particle n-1 = sheet anchor
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / (n - 1);
        w.rope.positions[i] = a + (b - a) * t;
    }
    return w;
}

Polyline3 hook_world_polyline(const SimParams& params, const HookShape& hook, double bar_angle) {
    Polyline3 pl = make_hook(hook, bar_angle);
    for (auto& v : pl.vertices) v += params.bar_mount;
    return pl;
}

Polyline3 hook_world_polyline(const WorldState& world) {
    return hook_world_polyline(world.params, world.hook, world.bar_angle);
}

namespace {

struct Capsule {
    Vec3 a, b;
    double r;
};

Vec3 closest_on_segment(const Vec3& p, const Vec3& a, const Vec3& b) {
    const Vec3 ab = b - a;
    const double len2 = ab.norm2();
    if (len2 <= 0.0) return a;
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return a + ab * t;
}

double capsule_distance(const Vec3& p, const Capsule& c) {
    return (p - closest_on_segment(p, c.a, c.b)).norm() - c.r;
}

struct SweepHit {
    bool hit = false;
    Vec3 position;  // corrected end position
    Vec3 normal;
};

// Distance from a point moving on [x0, x1] to a convex capsule is convex in
// the path parameter, so a ternary search finds its minimum reliably.
SweepHit sweep_capsule(const Vec3& x0, const Vec3& x1, const Capsule& c) {
    SweepHit out;
    const double d0 = capsule_distance(x0, c);
    const double d1 = capsule_distance(x1, c);
    const double path = (x1 - x0).norm();

    auto place_on_surface = [&](const Vec3& x) {
        const Vec3 q = closest_on_segment(x, c.a, c.b);
        Vec3 n = x - q;
        const double nn = n.norm();
        // Degenerate: point on the capsule axis. Push along any perpendicular.
        if (nn < 1e-12) {
            Vec3 axis = (c.b - c.a).normalized();
            n = axis.cross(Vec3{0, 0, 1});
            if (n.norm() < 1e-6) n = axis.cross(Vec3{0, 1, 0});
            n = n.normalized();
        } else {
            n = n / nn;
        }
        out.hit = true;
        out.normal = n;
        out.position = q + n * c.r;
    };

    if (d1 < 0.0) {
        if (d0 >= 0.0 && path > 0.0) {
            // Entered this substep: bisect the earliest crossing so the
            // particle resolves on the side it came from.
            double lo = 0.0, hi = 1.0;
            for (int it = 0; it < 24; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (capsule_distance(x0 + (x1 - x0) * mid, c) >= 0.0) lo = mid;
                else hi = mid;
            }
            place_on_surface(x0 + (x1 - x0) * lo);
        } else {
            place_on_surface(x1);
        }
        return out;
    }

    // Both endpoints outside: the path can still tunnel through. Distance
    // along the path cannot drop faster than arc length, so skip when the
    // endpoints are too far away to reach the surface.
    if (std::min(d0, d1) >= path) return out;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 40; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (capsule_distance(x0 + (x1 - x0) * m1, c) <
            capsule_distance(x0 + (x1 - x0) * m2, c))
            hi = m2;
        else
            lo = m1;
    }
    const double tmin = 0.5 * (lo + hi);
    if (capsule_distance(x0 + (x1 - x0) * tmin, c) >= 0.0) return out;
    // Tunneled: clamp to the earliest contact on [0, tmin].
    double blo = 0.0, bhi = tmin;
    for (int it = 0; it < 24; ++it) {
        const double mid = 0.5 * (blo + bhi);
        if (capsule_distance(x0 + (x1 - x0) * mid, c) >= 0.0) blo = mid;
        else bhi = mid;
    }
    place_on_surface(x0 + (x1 - x0) * blo);
    return out;
}

struct CollisionScene {
    std::vector<Capsule> capsules;
    Vec3 aabb_lo, aabb_hi;
    double reach = 0.0;  // capsule radius + AABB padding

    bool near(const Vec3& x0, const Vec3& x1) const {
        const double pad = reach + (x1 - x0).norm();
        auto lo = [&](double a, double b) { return std::min(a, b) - pad; };
        auto hi = [&](double a, double b) { return std::max(a, b) + pad; };
        return !(hi(x0.x, x1.x) < aabb_lo.x || lo(x0.x, x1.x) > aabb_hi.x ||
                 hi(x0.y, x1.y) < aabb_lo.y || lo(x0.y, x1.y) > aabb_hi.y ||
                 hi(x0.z, x1.z) < aabb_lo.z || lo(x0.z, x1.z) > aabb_hi.z);
    }
};

CollisionScene build_scene(const WorldState& w, double bar_angle) {
    CollisionScene s;
    const double R = w.params.hook_tube_radius + w.params.rope_radius;
    const Polyline3 hook = hook_world_polyline(w.params, w.hook, bar_angle);
    s.capsules.reserve(hook.segment_count() + 1);
    for (size_t k = 0; k < hook.segment_count(); ++k)
        s.capsules.push_back({hook.seg_a(k), hook.seg_b(k), R});
    // The bar rod itself.
    const Vec3 m = w.params.bar_mount;
    const double hl = w.params.bar_half_length;
    s.capsules.push_back({m - Vec3{hl, 0, 0}, m + Vec3{hl, 0, 0}, R});

    s.aabb_lo = s.aabb_hi = s.capsules.front().a;
    for (const auto& c : s.capsules) {
        for (const Vec3& p : {c.a, c.b}) {
            s.aabb_lo.x = std::min(s.aabb_lo.x, p.x);
            s.aabb_lo.y = std::min(s.aabb_lo.y, p.y);
            s.aabb_lo.z = std::min(s.aabb_lo.z, p.z);
            s.aabb_hi.x = std::max(s.aabb_hi.x, p.x);
            s.aabb_hi.y = std::max(s.aabb_hi.y, p.y);
            s.aabb_hi.z = std::max(s.aabb_hi.z, p.z);
        }
    }
    s.reach = R + 1e-3;
    return s;
}

void check_finite(const WorldState& w) {
    for (const auto& p : w.rope.positions) {
        if (!p.finite() || p.norm() > 100.0)
            throw SimDiverged("rope particle position diverged");
    }
    for (const auto& v : w.rope.velocities) {
        if (!v.finite()) throw SimDiverged("rope particle velocity diverged");
    }
}

}  // namespace

void step(WorldState& world, const ActionPair& action) {
    if (!action.within_bounds())
        throw std::invalid_argument("action outside per-step bounds");

    const SimParams& prm = world.params;
    const int n = world.particle_count();
    const double dt_s = prm.dt / prm.substeps;

    // Gripper pose: translation delta in world frame, rotation in body frame.
    const Vec3 pin_from = world.grip_point();
    world.gripper.t += action.d_translation;
    world.gripper.R = world.gripper.R * euler_to_matrix(action.d_rotation);
    const Vec3 pin_to = world.grip_point();

    // Bar joint: kinematic update is exact; passive integrates contact
    // torques in the substep loop; fixed never moves.
    if (world.bar_mode == BarMode::Kinematic)
        world.bar_angle = wrap_angle_2pi(world.bar_angle + action.d_bar);

    auto& pos = world.rope.positions;
    auto& vel = world.rope.velocities;
    const double rest = world.rope.rest_segment;
    const double inv_mass = 1.0 / prm.particle_mass;
    const double damp = std::max(0.0, 1.0 - world.material.damping * dt_s);
    const double alpha_stretch = world.material.stretch_compliance / (dt_s * dt_s);
    const double alpha_bend = world.material.bend_compliance / (dt_s * dt_s);

    std::vector<Vec3> prev(pos.size());
    std::vector<double> lambda_stretch(static_cast<size_t>(n - 1));
    std::vector<double> lambda_bend(static_cast<size_t>(std::max(0, n - 2)));

    auto w_of = [&](int i) -> double {
        if (i == n - 1) return 0.0;                          // anchor pin
        if (i == 0 && world.gripper_pinned) return 0.0;      // gripper pin
        return inv_mass;
    };

    auto solve_distance = [&](int i, int j, double target, double alpha, double& lambda) {
        const double wi = w_of(i), wj = w_of(j);
        const double wsum = wi + wj;
        if (wsum <= 0.0) return;
        Vec3 d = pos[i] - pos[j];
        const double len = d.norm();
        if (len < 1e-12) return;
        const double C = len - target;
        const Vec3 nrm = d / len;
        const double dl = (-C - alpha * lambda) / (wsum + alpha);
        lambda += dl;
        pos[i] += nrm * (dl * wi);
        pos[j] -= nrm * (dl * wj);
    };

    for (int ss = 0; ss < prm.substeps; ++ss) {
        const double frac = static_cast<double>(ss + 1) / prm.substeps;
        const Vec3 pin_target = pin_from + (pin_to - pin_from) * frac;

        const CollisionScene scene = build_scene(world, world.bar_angle);

        for (int i = 0; i < n; ++i) prev[i] = pos[i];

        // Predict.
        for (int i = 0; i < n; ++i) {
            if (w_of(i) == 0.0) continue;
            vel[i].z -= prm.gravity * dt_s;
            vel[i] *= damp;
            pos[i] += vel[i] * dt_s;
        }
        if (world.gripper_pinned) pos[0] = pin_target;
        pos[n - 1] = prm.anchor;

        std::fill(lambda_stretch.begin(), lambda_stretch.end(), 0.0);
        std::fill(lambda_bend.begin(), lambda_bend.end(), 0.0);

        auto constraint_pass = [&](int iters, bool with_bend) {
            for (int it = 0; it < iters; ++it) {
                for (int i = 0; i + 1 < n; ++i)
                    solve_distance(i, i + 1, rest, alpha_stretch, lambda_stretch[i]);
                if (with_bend) {
                    for (int i = 0; i + 2 < n; ++i)
                        solve_distance(i, i + 2, 2.0 * rest, alpha_bend, lambda_bend[i]);
                }
            }
        };

        Vec3 torque_impulse{};  // about the bar axis point, for the passive joint
        auto collision_pass = [&]() {
            for (int i = 0; i < n; ++i) {
                if (w_of(i) == 0.0) continue;
                if (!scene.near(prev[i], pos[i])) continue;
                for (const auto& c : scene.capsules) {
                    const SweepHit hit = sweep_capsule(prev[i], pos[i], c);
                    if (hit.hit) {
                        const Vec3 impulse = (hit.position - pos[i]) * (prm.particle_mass / dt_s);
                        torque_impulse += (hit.position - prm.bar_mount).cross(impulse);
                        pos[i] = hit.position;
                        if (prm.coulomb_friction) {
                            // Tangential damping applied through the velocity
                            // update below by dragging prev toward the contact.
                            const Vec3 slide = pos[i] - prev[i];
                            const Vec3 tangential = slide - hit.normal * slide.dot(hit.normal);
                            prev[i] += tangential * prm.friction;
                        }
                    }
                }
            }
        };

        constraint_pass(prm.iterations, true);
        collision_pass();
        constraint_pass(2, false);
        collision_pass();

        // Velocity update from positions.
        for (int i = 0; i < n; ++i) vel[i] = (pos[i] - prev[i]) / dt_s;

        if (world.bar_mode == BarMode::Passive) {
            const double tau = torque_impulse.x;  // bar axis = +x
            world.bar_omega += tau / prm.bar_inertia;
            world.bar_omega -= (prm.bar_joint_damping / prm.bar_inertia) * world.bar_omega * dt_s;
            world.bar_angle = wrap_angle_2pi(world.bar_angle + world.bar_omega * dt_s);
        }
    }

    check_finite(world);
}

SettleResult settle(WorldState& world, int max_steps) {
    SettleResult res;
    for (int k = 0; k < max_steps; ++k) {
        if (max_particle_kinetic_energy(world) < 1e-6) {
            res.settled = true;
            return res;
        }
        step(world, ActionPair::none());
        ++res.steps;
    }
    res.settled = max_particle_kinetic_energy(world) < 1e-6;
    return res;
}

double max_particle_kinetic_energy(const WorldState& world) {
    double ke = 0.0;
    for (const auto& v : world.rope.velocities)
        ke = std::max(ke, 0.5 * world.params.particle_mass * v.norm2());
    return ke;
}

double total_mechanical_energy(const WorldState& world) {
    double e = 0.0;
    for (int i = 0; i < world.particle_count(); ++i) {
        e += 0.5 * world.params.particle_mass * world.rope.velocities[i].norm2();
        e += world.params.particle_mass * world.params.gravity * world.rope.positions[i].z;
    }
    return e;
}

double world_link_value(const WorldState& world) {
    const Polyline3 hook = hook_world_polyline(world);
    std::vector<Vec3> pts = world.rope.positions;
    for (int attempt = 0; attempt < 4; ++attempt) {
        try {
            return gauss_link(make_strap_loop(pts), hook).value;
        } catch (const SingularConfiguration&) {
            // Deterministic jitter keyed on the positions themselves.
            Rng jitter(fnv1a(pts.data(), pts.size() * sizeof(Vec3)));
            for (auto& p : pts) {
                p.x += jitter.uniform(-1e-5, 1e-5);
                p.y += jitter.uniform(-1e-5, 1e-5);
                p.z += jitter.uniform(-1e-5, 1e-5);
            }
        }
    }
    return gauss_link(make_strap_loop(pts), hook).value;
}

double max_stretch_violation(const WorldState& world) {
    double worst = 0.0;
    const auto& pos = world.rope.positions;
    for (size_t i = 0; i + 1 < pos.size(); ++i)
        worst = std::max(worst,
                         std::abs((pos[i] - pos[i + 1]).norm() - world.rope.rest_segment));
    return worst;
}

bool goal_reached(const WorldState& world, const GoalParams& goal) {
    WorldState w = world;
    w.gripper_pinned = false;
    w.bar_mode = BarMode::Kinematic;
    Rng rng(goal.seed);

    const int steps = std::max(1, static_cast<int>(goal.window_seconds / w.params.dt));
    try {
        for (int k = 0; k < steps; ++k) {
            ActionPair a;
            a.d_bar = rng.uniform(-goal.perturb, goal.perturb);
            step(w, a);
            if (std::abs(world_link_value(w)) < goal.theta_g) return false;
        }
    } catch (const SimDiverged&) {
        return false;
    }

    // Strap must rest against the bottom third of the hook arc.
    const Polyline3 hook = hook_world_polyline(w);
    double zmin = hook.vertices.front().z, zmax = zmin;
    for (const auto& v : hook.vertices) {
        zmin = std::min(zmin, v.z);
        zmax = std::max(zmax, v.z);
    }
    double best = 1e9;
    Vec3 best_hook_pt{};
    for (const auto& p : w.rope.positions) {
        for (size_t k = 0; k < hook.segment_count(); ++k) {
            const Vec3 q = closest_on_segment(p, hook.seg_a(k), hook.seg_b(k));
            const double d = (p - q).norm();
            if (d < best) {
                best = d;
                best_hook_pt = q;
            }
        }
    }
    const double contact_reach =
        2.0 * (w.params.hook_tube_radius + w.params.rope_radius) + 1e-3;
    if (best > contact_reach) return false;
    return best_hook_pt.z <= zmin + (zmax - zmin) / 3.0;
}

}  // namespace cartmpc
