#include "cartmpc/linking.hpp"

#include <cmath>
#include <string>

namespace cartmpc {

LinkingResult gauss_link(const Polyline3& a, const Polyline3& b, double eps) {
    validate_polyline(a);
    validate_polyline(b);

    const size_t na = a.segment_count();
    const size_t nb = b.segment_count();
    const double eps2 = eps * eps;

    double sum = 0.0;
    for (size_t i = 0; i < na; ++i) {
        const Vec3 p1 = a.seg_a(i);
        const Vec3 d1 = a.seg_b(i) - p1;
        for (size_t j = 0; j < nb; ++j) {
            const Vec3 p2 = b.seg_a(j);
            const Vec3 r = p1 - p2;
            const double r2 = r.norm2();
            if (r2 <= eps2)
                throw SingularConfiguration("sample points closer than eps: " +
                                            std::to_string(std::sqrt(r2)));
            const Vec3 d2 = b.seg_b(j) - p2;
            sum += r.dot(d1.cross(d2)) / (r2 * std::sqrt(r2));
        }
    }

    LinkingResult res;
    res.value = sum / (4.0 * 3.14159265358979323846);
    res.m1 = static_cast<int>(a.vertices.size());
    res.m2 = static_cast<int>(b.vertices.size());
    return res;
}

double c_link_exact(const Polyline3& strap, const Polyline3& hook, const CostBounds& bounds,
                    double eps) {
    return normalized_link_cost(gauss_link(strap, hook, eps).value, bounds);
}

Polyline3 subdivide(const Polyline3& pl, int factor) {
    if (factor <= 1) return pl;
    Polyline3 out;
    out.closed = pl.closed;
    out.vertices.reserve(pl.segment_count() * factor + (pl.closed ? 0 : 1));
    for (size_t k = 0; k < pl.segment_count(); ++k) {
        const Vec3 a = pl.seg_a(k);
        const Vec3 b = pl.seg_b(k);
        for (int s = 0; s < factor; ++s)
            out.vertices.push_back(a + (b - a) * (static_cast<double>(s) / factor));
    }
    if (!pl.closed) out.vertices.push_back(pl.vertices.back());
    return out;
}

std::vector<LinkingResult> refine_convergence(const Polyline3& a, const Polyline3& b,
                                              int levels, double eps) {
    std::vector<LinkingResult> out;
    out.reserve(static_cast<size_t>(levels));
    for (int lvl = 0; lvl < levels; ++lvl) {
        const int factor = 1 << lvl;
        out.push_back(gauss_link(subdivide(a, factor), subdivide(b, factor), eps));
    }
    return out;
}

Polyline3 make_strap_loop(const std::vector<Vec3>& particles, const Vec3& closure_waypoint) {
    if (particles.size() < 2)
        throw std::invalid_argument("strap loop needs at least 2 particles");
    Polyline3 pl;
    pl.closed = true;
    pl.vertices.reserve(2 * particles.size());
    for (size_t i = 0; i + 1 < particles.size(); ++i) {
        pl.vertices.push_back(particles[i]);
        pl.vertices.push_back((particles[i] + particles[i + 1]) * 0.5);
    }
    pl.vertices.push_back(particles.back());
    pl.vertices.push_back(closure_waypoint);
    return pl;
}

}  // namespace cartmpc
