#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rsslab/dataio.hpp"
#include "rsslab/geometry.hpp"
#include "rsslab/rng.hpp"
#include "rsslab/uncertainty.hpp"

namespace rsslab {

struct AccessPoint {
    std::string id;
    GroundPoint position;
    double tx_power_dbm = -30.0;
    std::uint64_t multipath_seed = 0;

    void validate() const;
};

/// Log-distance path loss plus a frozen spatially-correlated field per AP
/// (multipath, site-static) and per-sample Gaussian measurement noise.
/// shadowing_sigma_db scales a second frozen field whose seed the caller
/// controls, so it can vary between recordings.
struct SignalModel {
    double path_loss_exponent = 2.0;
    double ref_distance_m = 1.0;
    double shadowing_sigma_db = 0.0;
    double multipath_field_scale_db = 6.0;
    double multipath_corr_length_m = 0.5;
    double noise_sigma_db = 2.0;

    void validate() const;
};

struct Rect {
    double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
};

enum class TrajectoryPattern { lawnmower_y_major, lawnmower_x_major, random_waypoint };

std::string to_string(TrajectoryPattern p);
TrajectoryPattern trajectory_pattern_from_string(const std::string& s);

struct TrajectorySpec {
    Rect region;
    TrajectoryPattern pattern = TrajectoryPattern::lawnmower_y_major;
    double speed_mps = 0.5;
    double duration_s = 60.0;
    double sample_rate_hz = 10.0;

    void validate() const;
};

struct ReceiverProfile {
    std::string id;
    double gain_offset_db = 0.0;
    std::map<std::string, double> per_ap_offset_db;
    double dropout_prob = 0.0;

    void validate() const;
};

/// Frozen random field built from random Fourier features: smooth,
/// stationary (variance = scale^2 exactly), and a pure function of
/// (seed, point).
class FrozenField {
public:
    FrozenField(std::uint64_t seed, double corr_length_m, double scale_db);
    double value(GroundPoint p) const;

private:
    std::vector<double> omega_x_, omega_y_, phase_;
    double amplitude_ = 0.0;
};

/// One RSS observation. The multipath field is frozen per AP
/// (ap.multipath_seed); extra_field, when given, adds a second frozen
/// component (recording-level shadowing). noise_rng supplies the per-sample
/// measurement noise.
double rss_at(const AccessPoint& ap, const SignalModel& model, GroundPoint pos,
              const ReceiverProfile& rx, Rng& noise_rng, const FrozenField* extra_field = nullptr);

struct TimedPoint {
    double t_s = 0.0;
    GroundPoint pos;
};

/// Timestamped positions at sample_rate_hz; per-step speed never exceeds
/// speed_mps; positions stay inside the region. Lawnmower patterns sweep
/// the major axis fully and ping-pong along the strip polyline.
std::vector<TimedPoint> generate_trajectory(const TrajectorySpec& spec, std::uint64_t seed);

struct SynthRecording {
    Recording recording;                // x,y carry the corrupted labels
    std::vector<GroundPoint> truth;     // true positions, row-aligned
};

/// Full synthetic recording: trajectory, per-AP RSS with dropout as missing
/// entries, labels corrupted per the uncertainty budget. Bit-reproducible
/// per seed.
SynthRecording generate_recording(const std::vector<AccessPoint>& aps, const SignalModel& model,
                                  const TrajectorySpec& spec, const ReceiverProfile& rx,
                                  const UncertaintyBudget& budget, std::uint64_t seed,
                                  const std::string& name);

/// A generatable benchmark scene: APs, signal model, and per-recording
/// plans (receiver, sample count, trajectory).
struct RecordingPlan {
    std::string name;
    std::string receiver_id;
    long rows = 600;
    TrajectorySpec trajectory;
};

struct ScenePreset {
    std::string name;
    std::vector<AccessPoint> aps;
    SignalModel model;
    std::vector<ReceiverProfile> receivers;
    std::vector<RecordingPlan> recordings;
};

/// Default benchmark scenes. lab_scene_a: three APs on the x=0 wall,
/// receiver gain spread across recordings; data-efficiency and method
/// comparison runs use it. lab_scene_b: APs on the calibration band's
/// centerline, so RSS depends on x only through |x - 2| and the x axis is
/// under-identified; the generalization run uses it.
ScenePreset lab_scene_a();
ScenePreset lab_scene_b();

std::vector<SynthRecording> generate_scene(const ScenePreset& scene,
                                           const UncertaintyBudget& budget, std::uint64_t seed);

}  // namespace rsslab
