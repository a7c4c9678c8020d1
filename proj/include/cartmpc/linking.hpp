#pragma once

#include <stdexcept>
#include <vector>

#include "cartmpc/geometry.hpp"

namespace cartmpc {

// Two sample points closer than eps_link make the 1/|r|^3 kernel blow up.
// Callers may jitter and retry.
struct SingularConfiguration : std::runtime_error {
    explicit SingularConfiguration(const std::string& what) : std::runtime_error(what) {}
};

struct LinkingResult {
    double value = 0.0;
    int m1 = 0;  // point count on the first curve
    int m2 = 0;  // point count on the second curve
};

struct CostBounds {
    double beta0 = 0.0;  // min linking value seen in training
    double beta1 = 1.0;  // max linking value seen in training
};

constexpr double kEpsLink = 1e-6;  // m, singularity guard

// Discrete Gauss linking sum over all segment pairs:
//   1/(4*pi) * sum_i sum_j (g1_i - g2_j) . ((g1_{i+1}-g1_i) x (g2_{j+1}-g2_j))
//                          / |g1_i - g2_j|^3
// Closed polylines include the wrap-around segment. Deterministic,
// fixed-order accumulation. Throws SingularConfiguration when any sample
// pair is closer than eps.
LinkingResult gauss_link(const Polyline3& a, const Polyline3& b, double eps = kEpsLink);

// Normalized strap-tying cost on the exact linking value, clamped to [0,1].
// value = beta1 -> 0 (fully fastened), value = beta0 -> 1.
double c_link_exact(const Polyline3& strap, const Polyline3& hook, const CostBounds& bounds,
                    double eps = kEpsLink);

inline double normalized_link_cost(double link_value, const CostBounds& b) {
    if (b.beta1 <= b.beta0) throw std::invalid_argument("cost bounds require beta0 < beta1");
    const double c = 1.0 - (link_value - b.beta0) / (b.beta1 - b.beta0);
    return c < 0.0 ? 0.0 : (c > 1.0 ? 1.0 : c);
}

// Each level doubles the per-segment subdivision of both curves, starting at
// the curves as given. Successive differences expose the discretization error
// of the linking sum.
std::vector<LinkingResult> refine_convergence(const Polyline3& a, const Polyline3& b,
                                              int levels, double eps = kEpsLink);

// Subdivides every segment of the polyline into `factor` equal pieces.
Polyline3 subdivide(const Polyline3& pl, int factor);

// Closes the open strap chain into a loop: rope particles plus segment
// midpoints, then a virtual return path through a fixed waypoint far below
// the workspace. Keeps the closed-vs-open linking theory applicable and makes
// threaded states separable from merely-near states.
Polyline3 make_strap_loop(const std::vector<Vec3>& particles,
                          const Vec3& closure_waypoint = Vec3{0.0, 0.0, -5.0});

}  // namespace cartmpc
