#include "cartmpc/geometry.hpp"

#include <algorithm>

namespace cartmpc {

Mat3 euler_to_matrix(const Vec3& e) {
    return Mat3::rot_x(e.x) * Mat3::rot_y(e.y) * Mat3::rot_z(e.z);
}

Vec3 matrix_to_euler(const Mat3& R) {
    // R = Rx * Ry * Rz, row-major. R[0][2] = sin(ry).
    const auto& m = R.m;
    Vec3 e;
    e.y = std::asin(std::clamp(m[2], -1.0, 1.0));
    if (std::abs(m[2]) < 1.0 - 1e-12) {
        e.x = std::atan2(-m[5], m[8]);
        e.z = std::atan2(-m[1], m[0]);
    } else {
        // Gimbal lock: ry = +-pi/2, rz folded into rx.
        e.x = std::atan2(m[3], m[4]);
        e.z = 0.0;
    }
    return e;
}

double rotation_angle(const Mat3& R) {
    const double tr = R.m[0] + R.m[4] + R.m[8];
    return std::acos(std::clamp(0.5 * (tr - 1.0), -1.0, 1.0));
}

double Polyline3::length() const {
    double L = 0.0;
    for (size_t k = 0; k < segment_count(); ++k) L += (seg_b(k) - seg_a(k)).norm();
    return L;
}

void validate_polyline(const Polyline3& pl) {
    if (pl.vertices.size() < 2)
        throw std::invalid_argument("polyline needs at least 2 vertices");
    if (pl.closed && pl.vertices.size() < 3)
        throw std::invalid_argument("closed polyline needs at least 3 vertices");
    for (size_t k = 0; k < pl.segment_count(); ++k) {
        if ((pl.seg_b(k) - pl.seg_a(k)).norm() <= 1e-9)
            throw std::invalid_argument("degenerate polyline segment");
    }
}

HookShape hook_preset(const std::string& id) {
    const double deg = 0.017453292519943295;
    HookShape s;
    s.id = id;
    if (id == "H1") {
        s.arc_radius = 0.035; s.opening_angle = 120 * deg; s.tilt = 0 * deg;  s.throat = 0.020;
    } else if (id == "H2") {
        s.arc_radius = 0.020; s.opening_angle = 150 * deg; s.tilt = 5 * deg;  s.throat = 0.020;
    } else if (id == "H3") {
        s.arc_radius = 0.050; s.opening_angle = 60 * deg;  s.tilt = 20 * deg; s.throat = 0.015;
    } else if (id == "H4") {
        s.arc_radius = 0.040; s.opening_angle = 135 * deg; s.tilt = 10 * deg; s.throat = 0.025;
    } else if (id == "H5") {
        s.arc_radius = 0.030; s.opening_angle = 90 * deg;  s.tilt = 15 * deg; s.throat = 0.020;
    } else {
        throw std::invalid_argument("unknown hook preset: " + id);
    }
    return s;
}

std::vector<std::string> hook_preset_ids() { return {"H1", "H2", "H3", "H4", "H5"}; }

Polyline3 make_hook(const HookShape& shape, double bar_angle) {
    const double two_pi = 6.283185307179586476925286766559;
    if (shape.arc_radius <= 0.0)
        throw std::invalid_argument("hook arc radius must be positive");
    if (shape.opening_angle <= 0.0 || shape.opening_angle >= two_pi)
        throw std::invalid_argument("hook opening angle must be in (0, 2*pi)");
    if (shape.throat < 0.0)
        throw std::invalid_argument("hook throat depth must be >= 0");
    if (shape.samples < 8)
        throw std::invalid_argument("hook sample count must be >= 8");

    const double sweep = two_pi - shape.opening_angle;
    const double arc_len = shape.arc_radius * sweep;
    const double total = shape.throat + arc_len;

    // Arc center sits below the shank end; the arc starts at its top
    // (phi = pi/2) so the curve is continuous.
    const Vec3 center{0.0, 0.0, -shape.throat - shape.arc_radius};

    const Mat3 tilt = Mat3::rot_y(shape.tilt);
    const Mat3 bar = Mat3::rot_x(bar_angle);

    Polyline3 pl;
    pl.closed = false;
    pl.vertices.reserve(static_cast<size_t>(shape.samples));
    for (int k = 0; k < shape.samples; ++k) {
        const double s = total * static_cast<double>(k) / (shape.samples - 1);
        Vec3 p;
        if (s <= shape.throat) {
            p = Vec3{0.0, 0.0, -s};
        } else {
            const double phi = 0.25 * two_pi + (s - shape.throat) / shape.arc_radius;
            p = center + Vec3{0.0, shape.arc_radius * std::cos(phi),
                              shape.arc_radius * std::sin(phi)};
        }
        pl.vertices.push_back(bar * (tilt * p));
    }
    return pl;
}

std::optional<Vec2> project(const Camera& cam, const Vec3& p) {
    const Vec3 pc = cam.pose.R.transposed() * (p - cam.pose.t);
    if (pc.z <= 0.0) return std::nullopt;
    return Vec2{cam.focal * pc.x / pc.z + cam.cx, cam.focal * pc.y / pc.z + cam.cy};
}

Camera make_lookat_camera(const Vec3& eye, const Vec3& target, const Vec3& up,
                          double focal, int width, int height) {
    const Vec3 fwd = (target - eye).normalized();
    Vec3 right = fwd.cross(up).normalized();
    if (right.norm() < 1e-9) right = Vec3{1, 0, 0};
    const Vec3 down = fwd.cross(right);

    Camera cam;
    cam.pose.t = eye;
    // Columns of R are the camera axes expressed in world coordinates.
    cam.pose.R = Mat3{{right.x, down.x, fwd.x,
                       right.y, down.y, fwd.y,
                       right.z, down.z, fwd.z}};
    cam.focal = focal;
    cam.width = width;
    cam.height = height;
    cam.cx = 0.5 * width;
    cam.cy = 0.5 * height;
    return cam;
}

}  // namespace cartmpc
