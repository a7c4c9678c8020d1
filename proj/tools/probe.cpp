// Scratch diagnostics used during development; not part of the shipped CLI.
#include <cstdio>

#include "cartmpc/linking.hpp"
#include "cartmpc/rope_sim.hpp"
#include "cartmpc/scripted.hpp"
#include "../tests/support/crossing_oracle.hpp"

using namespace cartmpc;
using namespace cartmpc::testsupport;

int main() {
    // 1. Sign convention: linked circle pair, dense Gauss sum vs crossing oracle.
    {
        const Polyline3 c1 = sample_circle({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, 1.0, 512);
        const Polyline3 c2 = sample_circle({1, 0, 0}, {1, 0, 0}, {0, 0, 1}, 1.0, 512);
        const auto g = gauss_link(c1, c2);
        const int lk = crossing_linking(c1, c2);
        std::printf("linked circles: gauss=%.6f crossing=%d\n", g.value, lk);
        const Polyline3 c2r = sample_circle({1, 0, 0}, {1, 0, 0}, {0, 0, -1}, 1.0, 512);
        std::printf("reversed:      gauss=%.6f crossing=%d\n", gauss_link(c1, c2r).value,
                    crossing_linking(c1, c2r));
        const Polyline3 c2d = sample_circle({1, 0, 0}, {1, 0, 0}, {0, 0, 1}, 1.0, 513, 2);
        std::printf("double wind:   gauss=%.6f crossing=%d\n", gauss_link(c1, c2d).value,
                    crossing_linking(c1, c2d));
    }

    // 2. Threaded world: linking value, settle behavior, goal check.
    {
        SimParams prm;
        const HookShape hook = hook_preset("H1");
        const Material mat = material_preset("M1");
        WorldState w = make_threaded_world(prm, hook, mat, 0.0, 0.0);
        std::printf("threaded (raw):      link=%.4f\n", world_link_value(w));
        for (int k = 0; k < 25; ++k) step(w, ActionPair::none());
        std::printf("threaded (25 steps): link=%.4f stretch=%.5f\n", world_link_value(w),
                    max_stretch_violation(w));
        const SettleResult s = settle(w, 600);
        std::printf("settled %d steps, settled=%d, link=%.4f maxKE=%.3e\n", s.steps,
                    s.settled ? 1 : 0, world_link_value(w), max_particle_kinetic_energy(w));
        // Positions of interest
        const auto& p = w.rope.positions;
        std::printf("free end: (%.3f %.3f %.3f)  anchor: (%.3f %.3f %.3f)\n", p[0].x, p[0].y,
                    p[0].z, p.back().x, p.back().y, p.back().z);
        GoalParams gp;
        gp.theta_g = 0.5;
        gp.seed = 11;
        std::printf("goal_reached(0.5) = %d\n", goal_reached(w, gp) ? 1 : 0);

        // Release and watch the link value over 2 s.
        WorldState rel = w;
        rel.gripper_pinned = false;
        double mn = 1e9, mx = -1e9;
        for (int k = 0; k < 100; ++k) {
            step(rel, ActionPair::none());
            const double lv = std::abs(world_link_value(rel));
            mn = std::min(mn, lv);
            mx = std::max(mx, lv);
        }
        std::printf("released window: |link| in [%.4f, %.4f]\n", mn, mx);
    }

    // 3. Unlinked world baseline.
    {
        SimParams prm;
        WorldState w =
            make_initial_world(prm, hook_preset("H1"), material_preset("M1"), 0.0, 42);
        std::printf("initial world: link=%.4f settledKE=%.3e\n", world_link_value(w),
                    max_particle_kinetic_energy(w));
        GoalParams gp;
        gp.theta_g = 0.5;
        std::printf("goal_reached(initial) = %d\n", goal_reached(w, gp) ? 1 : 0);
    }

    // 4. Scripted tie from a random initial world.
    {
        SimParams prm;
        for (uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
            WorldState w =
                make_initial_world(prm, hook_preset("H1"), material_preset("M1"), 0.0, seed);
            TieController ctl(seed, 0.5);
            int steps = 0;
            for (; steps < 400; ++steps) {
                step(w, ctl.act(w));
                if (ctl.done()) break;
            }
            for (int k = 0; k < 30; ++k) step(w, ActionPair::none());
            GoalParams gp;
            gp.theta_g = 0.5;
            gp.seed = seed;
            std::printf("scripted seed=%llu: steps=%d link=%.4f goal=%d\n",
                        static_cast<unsigned long long>(seed), steps, world_link_value(w),
                        goal_reached(w, gp) ? 1 : 0);
        }
    }
    return 0;
}
