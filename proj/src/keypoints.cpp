#include "cartmpc/keypoints.hpp"

#include <algorithm>
#include <cmath>

namespace cartmpc {

CameraRig default_camera_rig(const SimParams& params) {
    const Vec3 hook_center = params.bar_mount + Vec3{0.0, 0.0, -0.06};
    CameraRig rig;
    // Bar cam: above and slightly behind the bar, looking down at the hook.
    rig.bar_cam = make_lookat_camera(params.bar_mount + Vec3{0.0, -0.18, 0.16},
                                     hook_center, Vec3{0, 0, 1}, 500.0, 640, 480);
    // Wrist cam: off to the side at mid height, looking across the workspace.
    rig.wrist_cam = make_lookat_camera(Vec3{0.35, 0.05, 0.18},
                                       hook_center + Vec3{0.0, 0.0, -0.02},
                                       Vec3{0, 0, 1}, 500.0, 640, 480);
    return rig;
}

std::vector<int> keypoint_source_indices(int particle_count) {
    std::vector<int> idx(kKeypointsPerCamera);
    for (int i = 0; i < kKeypointsPerCamera; ++i) {
        idx[i] = static_cast<int>(std::lround(
            static_cast<double>(i) * (particle_count - 1) / (kKeypointsPerCamera - 1)));
    }
    return idx;
}

namespace {

Keypoint project_clamped(const Camera& cam, const Vec3& p) {
    Keypoint kp;
    const auto px = project(cam, p);
    if (!px) {
        // Behind the camera: clamp to the border nearest the principal point.
        kp.u = 0.0;
        kp.v = 0.0;
        kp.off_screen = true;
        return kp;
    }
    kp.u = px->x;
    kp.v = px->y;
    if (kp.u < 0.0 || kp.u > cam.width - 1 || kp.v < 0.0 || kp.v > cam.height - 1) {
        kp.u = std::clamp(kp.u, 0.0, static_cast<double>(cam.width - 1));
        kp.v = std::clamp(kp.v, 0.0, static_cast<double>(cam.height - 1));
        kp.off_screen = true;
    }
    return kp;
}

}  // namespace

KeypointObservation extract(const WorldState& world, const CameraRig& rig, int64_t t) {
    KeypointObservation obs;
    obs.bar_angle = world.bar_angle;
    obs.t = t;
    const std::vector<int> src = keypoint_source_indices(world.particle_count());
    const Camera* cams[kCameraCount] = {&rig.bar_cam, &rig.wrist_cam};
    for (int c = 0; c < kCameraCount; ++c) {
        for (int i = 0; i < kKeypointsPerCamera; ++i) {
            obs.points[static_cast<size_t>(c)][static_cast<size_t>(i)] =
                project_clamped(*cams[c], world.rope.positions[static_cast<size_t>(src[i])]);
        }
    }
    return obs;
}

void History::push(const KeypointObservation& obs, const ActionPair& action) {
    if (entries_.empty()) {
        // Front-pad so the buffer is always full. Padding repeats the first
        // real observation with zero actions.
        HistoryEntry pad{obs, ActionPair::none(), true};
        entries_.assign(kHistoryLength, pad);
    } else {
        entries_.erase(entries_.begin());
    }
    entries_.push_back(HistoryEntry{obs, action, false});
    ++pushes_;
}

int History::real_size() const {
    int n = 0;
    for (const auto& e : entries_)
        if (!e.padding) ++n;
    return n;
}

void encode_keypoints(const KeypointObservation& o, double* out) {
    int k = 0;
    for (int c = 0; c < kCameraCount; ++c) {
        for (int i = 0; i < kKeypointsPerCamera; ++i) {
            out[k++] = o.points[static_cast<size_t>(c)][static_cast<size_t>(i)].u;
            out[k++] = o.points[static_cast<size_t>(c)][static_cast<size_t>(i)].v;
        }
    }
}

void encode_action(const ActionPair& a, double* out) {
    out[0] = a.d_translation.x;
    out[1] = a.d_translation.y;
    out[2] = a.d_translation.z;
    out[3] = a.d_rotation.x;
    out[4] = a.d_rotation.y;
    out[5] = a.d_rotation.z;
    out[6] = a.d_bar;
}

void encode_entry(const HistoryEntry& e, double* out) {
    encode_keypoints(e.obs, out);
    out[kKeypointDim] = e.obs.bar_angle;
    encode_action(e.action, out + kObsDim);
}

std::vector<double> History::features() const {
    std::vector<double> f(static_cast<size_t>(kHistoryFeatureDim), 0.0);
    for (int i = 0; i < size(); ++i)
        encode_entry(entries_[static_cast<size_t>(i)], f.data() + i * kEntryDim);
    return f;
}

}  // namespace cartmpc
