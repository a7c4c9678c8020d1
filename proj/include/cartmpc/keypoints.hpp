#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cartmpc/geometry.hpp"
#include "cartmpc/rope_sim.hpp"

namespace cartmpc {

constexpr int kKeypointsPerCamera = 8;
constexpr int kCameraCount = 2;  // camera order: bar cam, then wrist cam
constexpr int kHistoryLength = 20;
constexpr int kActionDim = 7;  // 3 translation + 3 rotation + 1 bar

// Per-entry feature width: 2 cameras x n keypoints x (u,v) + bar angle + action.
constexpr int kObsDim = kCameraCount * kKeypointsPerCamera * 2 + 1;
constexpr int kEntryDim = kObsDim + kActionDim;
constexpr int kHistoryFeatureDim = kHistoryLength * kEntryDim;
constexpr int kKeypointDim = kCameraCount * kKeypointsPerCamera * 2;

struct Keypoint {
    double u = 0.0, v = 0.0;
    bool off_screen = false;  // clamped to the image border
};

struct KeypointObservation {
    // [camera][point], camera order (bar, wrist), ascending particle index.
    std::array<std::array<Keypoint, kKeypointsPerCamera>, kCameraCount> points;
    double bar_angle = 0.0;
    int64_t t = 0;
};

struct CameraRig {
    Camera bar_cam;    // above the hook, looking down at it
    Camera wrist_cam;  // behind the gripper start, looking at the workspace
};

// Default rig used across data generation, planning and evaluation.
CameraRig default_camera_rig(const SimParams& params);

// Rope particle indices used as keypoint sources, uniformly spaced along the
// chain.
std::vector<int> keypoint_source_indices(int particle_count);

// Projects the keypoint source particles through both cameras. Behind-camera
// or out-of-frame points are clamped to the border and flagged.
KeypointObservation extract(const WorldState& world, const CameraRig& rig, int64_t t);

struct HistoryEntry {
    KeypointObservation obs;
    ActionPair action;  // the action that produced obs (zero for the first)
    bool padding = false;
};

// Ring buffer of the last kHistoryLength entries. Until enough real entries
// arrive, the buffer is front-padded with copies of the earliest real
// observation and zero actions, flagged as padding.
class History {
public:
    History() = default;

    void push(const KeypointObservation& obs, const ActionPair& action);

    const HistoryEntry& entry(int i) const { return entries_[static_cast<size_t>(i)]; }
    int size() const { return static_cast<int>(entries_.size()); }
    // Entries that are real observations rather than front padding.
    int real_size() const;
    bool empty() const { return entries_.empty(); }
    const HistoryEntry& newest() const { return entries_.back(); }
    int64_t pushes() const { return pushes_; }

    // Flattened feature vector, oldest entry first:
    // [bar-cam kps, wrist-cam kps, bar angle, action] x kHistoryLength.
    std::vector<double> features() const;

private:
    std::vector<HistoryEntry> entries_;
    int64_t pushes_ = 0;
};

// Feature encoding shared by the dynamics model and the amortizer.
void encode_entry(const HistoryEntry& e, double* out);      // kEntryDim values
void encode_action(const ActionPair& a, double* out);       // kActionDim values
void encode_keypoints(const KeypointObservation& o, double* out);  // kKeypointDim values

}  // namespace cartmpc
