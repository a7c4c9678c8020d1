#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cartmpc {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm2() const { return x * x + y * y + z * z; }
    double norm() const { return std::sqrt(norm2()); }
    Vec3 normalized() const {
        const double n = norm();
        return n > 0.0 ? Vec3{x / n, y / n, z / n} : Vec3{};
    }
    bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

struct Vec2 {
    double x = 0.0, y = 0.0;
};

// Row-major 3x3 rotation matrix.
struct Mat3 {
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    static Mat3 identity() { return Mat3{}; }

    static Mat3 rot_x(double a) {
        const double c = std::cos(a), s = std::sin(a);
        return Mat3{{1, 0, 0, 0, c, -s, 0, s, c}};
    }
    static Mat3 rot_y(double a) {
        const double c = std::cos(a), s = std::sin(a);
        return Mat3{{c, 0, s, 0, 1, 0, -s, 0, c}};
    }
    static Mat3 rot_z(double a) {
        const double c = std::cos(a), s = std::sin(a);
        return Mat3{{c, -s, 0, s, c, 0, 0, 0, 1}};
    }

    Vec3 operator*(const Vec3& v) const {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
                m[3] * v.x + m[4] * v.y + m[5] * v.z,
                m[6] * v.x + m[7] * v.y + m[8] * v.z};
    }
    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) s += m[i * 3 + k] * o.m[k * 3 + j];
                r.m[i * 3 + j] = s;
            }
        return r;
    }
    Mat3 transposed() const {
        return Mat3{{m[0], m[3], m[6], m[1], m[4], m[7], m[2], m[5], m[8]}};
    }
};

// Intrinsic XYZ Euler angles: R = Rx(rx) * Ry(ry) * Rz(rz).
Mat3 euler_to_matrix(const Vec3& euler);
Vec3 matrix_to_euler(const Mat3& R);

// Rotation angle of R (for round-trip checks).
double rotation_angle(const Mat3& R);

// Rigid pose: translation + rotation. External I/O uses intrinsic XYZ Euler
// angles; internally the rotation is a matrix.
struct Pose6 {
    Vec3 t;
    Mat3 R;

    static Pose6 from_euler(const Vec3& t, const Vec3& euler) {
        return Pose6{t, euler_to_matrix(euler)};
    }
    Vec3 euler() const { return matrix_to_euler(R); }

    Vec3 apply(const Vec3& p) const { return R * p + t; }
    Pose6 compose(const Pose6& o) const { return Pose6{R * o.t + t, R * o.R}; }
};

struct Polyline3 {
    std::vector<Vec3> vertices;
    bool closed = false;

    size_t segment_count() const {
        if (vertices.size() < 2) return 0;
        return closed ? vertices.size() : vertices.size() - 1;
    }
    // Endpoints of segment k, wrapping for closed polylines.
    Vec3 seg_a(size_t k) const { return vertices[k]; }
    Vec3 seg_b(size_t k) const { return vertices[(k + 1) % vertices.size()]; }

    double length() const;
};

// Checks the Polyline3 invariants (>=2 vertices, distinct consecutive
// vertices, closed implies >=3). Throws std::invalid_argument on violation.
void validate_polyline(const Polyline3& pl);

// Parametric C-shaped hook: a straight shank of length `throat` dropping from
// the bar axis, followed by a circular arc of radius `arc_radius` sweeping
// (2*pi - opening_angle) radians. `tilt` rotates the whole curve about the
// local y axis. Vertices are spaced uniformly in arc length.
struct HookShape {
    std::string id = "H1";
    double arc_radius = 0.035;     // m
    double opening_angle = 2.0944; // rad, the angular gap of the C
    double tilt = 0.0;             // rad
    double throat = 0.02;          // m, shank length from bar axis to arc
    int samples = 128;             // vertex count M2
};

// Five presets spanning mild to hard topological difficulty.
// H1 is the training shape.
HookShape hook_preset(const std::string& id);
std::vector<std::string> hook_preset_ids();

// Generates the hook polyline in the bar frame: bar axis = x axis through the
// origin, rotated about it by bar_angle. Open polyline with shape.samples
// vertices. Throws std::invalid_argument for degenerate parameters.
Polyline3 make_hook(const HookShape& shape, double bar_angle);

struct Camera {
    Pose6 pose;            // camera-to-world
    double focal = 500.0;  // px
    double cx = 320.0, cy = 240.0;
    int width = 640, height = 480;
};

// Pinhole projection. Returns nullopt when the point is at non-positive depth
// in the camera frame (behind the camera).
std::optional<Vec2> project(const Camera& cam, const Vec3& p);

// Camera looking from `eye` toward `target` with `up` hint; +z is the viewing
// direction, +x right, +y down (image convention).
Camera make_lookat_camera(const Vec3& eye, const Vec3& target, const Vec3& up,
                          double focal, int width, int height);

inline double wrap_angle_2pi(double a) {
    const double two_pi = 6.283185307179586476925286766559;
    a = std::fmod(a, two_pi);
    if (a < 0) a += two_pi;
    return a;
}

}  // namespace cartmpc
