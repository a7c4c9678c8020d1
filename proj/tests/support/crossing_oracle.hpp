#pragma once

// Planar crossing-sign linking oracle. Projects both closed polylines along a
// generic direction, enumerates inter-curve crossings, and sums orientation
// signs over the crossings where curve A passes over curve B. For closed
// curves this equals the linking number. Entirely independent of the Gauss
// double-sum implementation it is used to check.

#include <cstdlib>
#include <optional>

#include "cartmpc/geometry.hpp"
#include "cartmpc/rng.hpp"

namespace cartmpc::testsupport {

inline std::optional<int> crossing_linking_once(const Polyline3& A, const Polyline3& B,
                                                const Mat3& R) {
    const double eps = 1e-9;
    double sum = 0.0;
    for (size_t i = 0; i < A.segment_count(); ++i) {
        const Vec3 a0 = R * A.seg_a(i);
        const Vec3 a1 = R * A.seg_b(i);
        const double d1x = a1.x - a0.x, d1y = a1.y - a0.y;
        for (size_t j = 0; j < B.segment_count(); ++j) {
            const Vec3 b0 = R * B.seg_a(j);
            const Vec3 b1 = R * B.seg_b(j);
            const double d2x = b1.x - b0.x, d2y = b1.y - b0.y;
            const double den = d1x * d2y - d1y * d2x;
            if (std::abs(den) < 1e-15) continue;  // parallel in projection
            const double ex = b0.x - a0.x, ey = b0.y - a0.y;
            const double t = (ex * d2y - ey * d2x) / den;
            const double s = (ex * d1y - ey * d1x) / den;
            if (t <= -eps || t >= 1.0 + eps || s <= -eps || s >= 1.0 + eps) continue;
            if (t < eps || t > 1.0 - eps || s < eps || s > 1.0 - eps)
                return std::nullopt;  // crossing at a vertex: not generic
            const double za = a0.z + t * (a1.z - a0.z);
            const double zb = b0.z + s * (b1.z - b0.z);
            if (std::abs(za - zb) < 1e-12) return std::nullopt;  // touching in 3D
            if (za > zb) sum += den > 0.0 ? 1.0 : -1.0;
        }
    }
    const int lk = static_cast<int>(std::lround(sum));
    return lk;
}

// Retries with rotated projections until one is generic.
inline int crossing_linking(const Polyline3& A, const Polyline3& B, uint64_t seed = 7) {
    Rng rng(seed);
    // First attempt: a fixed, deliberately non-axis-aligned rotation.
    Mat3 R = Mat3::rot_x(0.4217) * Mat3::rot_y(0.7313) * Mat3::rot_z(0.1531);
    for (int attempt = 0; attempt < 32; ++attempt) {
        if (auto lk = crossing_linking_once(A, B, R)) return *lk;
        R = Mat3::rot_x(rng.uniform(0.0, 6.2832)) * Mat3::rot_y(rng.uniform(0.0, 6.2832)) *
            Mat3::rot_z(rng.uniform(0.0, 6.2832));
    }
    throw std::runtime_error("crossing oracle: no generic projection found");
}

// Closed polyline sampling of a circle given center, two in-plane unit axes
// and radius; `turns` > 1 traverses the circle multiple times.
inline Polyline3 sample_circle(const Vec3& center, const Vec3& ax, const Vec3& ay, double radius,
                               int points, int turns = 1) {
    Polyline3 pl;
    pl.closed = true;
    pl.vertices.reserve(static_cast<size_t>(points));
    const double two_pi = 6.283185307179586476925286766559;
    for (int k = 0; k < points; ++k) {
        const double a = two_pi * turns * static_cast<double>(k) / points;
        pl.vertices.push_back(center + ax * (radius * std::cos(a)) + ay * (radius * std::sin(a)));
    }
    return pl;
}

}  // namespace cartmpc::testsupport
