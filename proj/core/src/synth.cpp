#include "rsslab/synth.hpp"

#include <algorithm>
#include <cmath>

#include "rsslab/errors.hpp"

namespace rsslab {

namespace {

constexpr int kFourierFeatures = 64;
constexpr double kTwoPi = 2.0 * 3.14159265358979323846;
constexpr double kStripSpacing = 0.4;  // lawnmower strip pitch, meters

}  // namespace

void AccessPoint::validate() const {
    if (!std::isfinite(position.x) || !std::isfinite(position.y)) {
        throw ValidationError("AccessPoint " + id + ": non-finite position");
    }
    if (tx_power_dbm < -30.0 || tx_power_dbm > 30.0) {
        throw ValidationError("AccessPoint " + id + ": tx_power_dbm out of [-30, 30]");
    }
}

void SignalModel::validate() const {
    if (!(path_loss_exponent > 0)) throw ValidationError("SignalModel: path_loss_exponent must be > 0");
    if (!(ref_distance_m > 0)) throw ValidationError("SignalModel: ref_distance_m must be > 0");
    if (shadowing_sigma_db < 0 || multipath_field_scale_db < 0 || noise_sigma_db < 0) {
        throw ValidationError("SignalModel: sigmas must be >= 0");
    }
    if (!(multipath_corr_length_m > 0)) {
        throw ValidationError("SignalModel: multipath_corr_length_m must be > 0");
    }
}

std::string to_string(TrajectoryPattern p) {
    switch (p) {
        case TrajectoryPattern::lawnmower_y_major: return "lawnmower_y_major";
        case TrajectoryPattern::lawnmower_x_major: return "lawnmower_x_major";
        case TrajectoryPattern::random_waypoint: return "random_waypoint";
    }
    return "unknown";
}

TrajectoryPattern trajectory_pattern_from_string(const std::string& s) {
    if (s == "lawnmower_y_major") return TrajectoryPattern::lawnmower_y_major;
    if (s == "lawnmower_x_major") return TrajectoryPattern::lawnmower_x_major;
    if (s == "random_waypoint") return TrajectoryPattern::random_waypoint;
    throw ValidationError("unknown trajectory pattern '" + s + "'");
}

void TrajectorySpec::validate() const {
    if (!(region.width() > 0) || !(region.height() > 0)) {
        throw ValidationError("TrajectorySpec: region must have positive extent");
    }
    if (speed_mps < 0) throw ValidationError("TrajectorySpec: speed_mps must be >= 0");
    if (!(duration_s > 0)) throw ValidationError("TrajectorySpec: duration_s must be > 0");
    if (!(sample_rate_hz > 0)) throw ValidationError("TrajectorySpec: sample_rate_hz must be > 0");
}

void ReceiverProfile::validate() const {
    if (dropout_prob < 0 || dropout_prob >= 1) {
        throw ValidationError("ReceiverProfile " + id + ": dropout_prob out of [0, 1)");
    }
}

FrozenField::FrozenField(std::uint64_t seed, double corr_length_m, double scale_db) {
    if (!(corr_length_m > 0)) throw ValidationError("FrozenField: corr_length_m must be > 0");
    Rng rng(derive_seed(seed, "frozen_field"));
    omega_x_.resize(kFourierFeatures);
    omega_y_.resize(kFourierFeatures);
    phase_.resize(kFourierFeatures);
    for (int i = 0; i < kFourierFeatures; ++i) {
        omega_x_[static_cast<std::size_t>(i)] = rng.normal(0.0, 1.0 / corr_length_m);
        omega_y_[static_cast<std::size_t>(i)] = rng.normal(0.0, 1.0 / corr_length_m);
        phase_[static_cast<std::size_t>(i)] = rng.uniform(0.0, kTwoPi);
    }
    amplitude_ = scale_db * std::sqrt(2.0 / kFourierFeatures);
}

double FrozenField::value(GroundPoint p) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < omega_x_.size(); ++i) {
        acc += std::cos(omega_x_[i] * p.x + omega_y_[i] * p.y + phase_[i]);
    }
    return amplitude_ * acc;
}

double rss_at(const AccessPoint& ap, const SignalModel& model, GroundPoint pos,
              const ReceiverProfile& rx, Rng& noise_rng, const FrozenField* extra_field) {
    const double dx = pos.x - ap.position.x;
    const double dy = pos.y - ap.position.y;
    const double r = std::max(std::hypot(dx, dy), model.ref_distance_m);
    double v = ap.tx_power_dbm -
               10.0 * model.path_loss_exponent * std::log10(r / model.ref_distance_m);
    if (model.multipath_field_scale_db > 0) {
        const FrozenField field(ap.multipath_seed, model.multipath_corr_length_m,
                                model.multipath_field_scale_db);
        v += field.value(pos);
    }
    if (extra_field) v += extra_field->value(pos);
    v += rx.gain_offset_db;
    if (const auto it = rx.per_ap_offset_db.find(ap.id); it != rx.per_ap_offset_db.end()) {
        v += it->second;
    }
    if (model.noise_sigma_db > 0) v += noise_rng.normal(0.0, model.noise_sigma_db);
    return v;
}

namespace {

// Ping-pong walk along a polyline at constant speed; positions sampled at
// the given rate.
std::vector<TimedPoint> walk_polyline(const std::vector<GroundPoint>& poly, double speed,
                                      double duration, double rate) {
    std::vector<double> seg_len(poly.size() > 0 ? poly.size() - 1 : 0);
    std::vector<double> cum{0.0};
    for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
        seg_len[i] = std::hypot(poly[i + 1].x - poly[i].x, poly[i + 1].y - poly[i].y);
        cum.push_back(cum.back() + seg_len[i]);
    }
    const double total = cum.back();
    const long n = std::llround(duration * rate);
    std::vector<TimedPoint> out(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / rate;
        double d = t * speed;
        if (total > 0) {
            d = std::fmod(d, 2.0 * total);
            if (d > total) d = 2.0 * total - d;
        } else {
            d = 0.0;
        }
        // locate segment
        std::size_t j = static_cast<std::size_t>(
            std::upper_bound(cum.begin(), cum.end(), d) - cum.begin());
        j = (j == 0) ? 0 : j - 1;
        if (j >= seg_len.size()) j = seg_len.size() ? seg_len.size() - 1 : 0;
        GroundPoint p = poly.empty() ? GroundPoint{} : poly[j];
        if (!seg_len.empty() && seg_len[j] > 0) {
            const double f = (d - cum[j]) / seg_len[j];
            p.x += f * (poly[j + 1].x - poly[j].x);
            p.y += f * (poly[j + 1].y - poly[j].y);
        }
        out[static_cast<std::size_t>(i)] = {t, p};
    }
    return out;
}

std::vector<GroundPoint> lawnmower_polyline(const Rect& region, bool y_major) {
    const double span = y_major ? region.width() : region.height();
    const int strips = std::max(1, static_cast<int>(std::lround(span / kStripSpacing))) + 1;
    const double spacing = strips > 1 ? span / (strips - 1) : 0.0;
    std::vector<GroundPoint> poly;
    poly.reserve(static_cast<std::size_t>(2 * strips));
    for (int i = 0; i < strips; ++i) {
        const double a = (y_major ? region.x0 : region.y0) + spacing * i;
        const bool up = (i % 2 == 0);
        if (y_major) {
            poly.push_back({a, up ? region.y0 : region.y1});
            poly.push_back({a, up ? region.y1 : region.y0});
        } else {
            poly.push_back({up ? region.x0 : region.x1, a});
            poly.push_back({up ? region.x1 : region.x0, a});
        }
    }
    return poly;
}

}  // namespace

std::vector<TimedPoint> generate_trajectory(const TrajectorySpec& spec, std::uint64_t seed) {
    spec.validate();
    switch (spec.pattern) {
        case TrajectoryPattern::lawnmower_y_major:
            return walk_polyline(lawnmower_polyline(spec.region, true), spec.speed_mps,
                                 spec.duration_s, spec.sample_rate_hz);
        case TrajectoryPattern::lawnmower_x_major:
            return walk_polyline(lawnmower_polyline(spec.region, false), spec.speed_mps,
                                 spec.duration_s, spec.sample_rate_hz);
        case TrajectoryPattern::random_waypoint: {
            Rng rng(derive_seed(seed, "waypoints"));
            const double need = spec.speed_mps * spec.duration_s;
            std::vector<GroundPoint> poly{{spec.region.x0 + spec.region.width() / 2,
                                           spec.region.y0 + spec.region.height() / 2}};
            double len = 0.0;
            while (len < need + 1.0) {
                GroundPoint next{rng.uniform(spec.region.x0, spec.region.x1),
                                 rng.uniform(spec.region.y0, spec.region.y1)};
                len += std::hypot(next.x - poly.back().x, next.y - poly.back().y);
                poly.push_back(next);
            }
            return walk_polyline(poly, spec.speed_mps, spec.duration_s, spec.sample_rate_hz);
        }
    }
    throw ValidationError("generate_trajectory: unknown pattern");
}

SynthRecording generate_recording(const std::vector<AccessPoint>& aps, const SignalModel& model,
                                  const TrajectorySpec& spec, const ReceiverProfile& rx,
                                  const UncertaintyBudget& budget, std::uint64_t seed,
                                  const std::string& name) {
    if (aps.empty()) throw ValidationError("generate_recording: need >= 1 AP");
    for (const auto& ap : aps) ap.validate();
    model.validate();
    rx.validate();

    const auto traj = generate_trajectory(spec, derive_seed(seed, "trajectory"));

    SynthRecording out;
    out.recording.name = name;
    out.recording.receiver_id = rx.id;
    out.truth.reserve(traj.size());
    for (const auto& tp : traj) out.truth.push_back(tp.pos);

    const auto labels = corrupt_labels(out.truth, budget, derive_seed(seed, "labels"));

    out.recording.rows.resize(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        out.recording.rows[i].t_s = traj[i].t_s;
        out.recording.rows[i].x_m = labels[i].x;
        out.recording.rows[i].y_m = labels[i].y;
        out.recording.rows[i].rss_dbm.resize(aps.size());
    }

    for (std::size_t a = 0; a < aps.size(); ++a) {
        out.recording.ap_ids.push_back(aps[a].id);
        // shadowing: frozen per (recording seed, AP) so recordings differ
        const FrozenField shadow(derive_seed(seed, "shadow", a), model.multipath_corr_length_m,
                                 model.shadowing_sigma_db);
        const FrozenField* extra = model.shadowing_sigma_db > 0 ? &shadow : nullptr;
        Rng noise(derive_seed(seed, "noise", a));
        Rng drop(derive_seed(seed, "dropout", a));
        for (std::size_t i = 0; i < traj.size(); ++i) {
            const double v = rss_at(aps[a], model, traj[i].pos, rx, noise, extra);
            if (rx.dropout_prob > 0 && drop.uniform() < rx.dropout_prob) {
                out.recording.rows[i].rss_dbm[a] = std::nullopt;
            } else {
                out.recording.rows[i].rss_dbm[a] = v;
            }
        }
    }
    out.recording.validate();
    return out;
}

namespace {

ScenePreset lab_scene_common() {
    ScenePreset s;
    s.model.path_loss_exponent = 2.0;
    s.model.ref_distance_m = 1.0;
    s.model.multipath_field_scale_db = 0.5;
    s.model.multipath_corr_length_m = 3.0;
    s.model.shadowing_sigma_db = 0.3;
    s.model.noise_sigma_db = 4.0;

    // calibration sweep: full y range, narrow x band (y-major coverage)
    TrajectorySpec traj;
    traj.region = Rect{1.2, 0.0, 2.8, 6.0};
    traj.pattern = TrajectoryPattern::lawnmower_y_major;
    traj.speed_mps = 0.5;
    traj.sample_rate_hz = 10.0;

    const long rows[4] = {883, 1865, 2317, 1092};
    const char* names[4] = {"exp5", "exp6", "exp7", "exp8"};
    const char* rxs[4] = {"rxA", "rxA2", "rxA3", "rxB"};
    for (int i = 0; i < 4; ++i) {
        RecordingPlan plan;
        plan.name = names[i];
        plan.receiver_id = rxs[i];
        plan.rows = rows[i];
        plan.trajectory = traj;
        plan.trajectory.duration_s = static_cast<double>(rows[i]) / traj.sample_rate_hz;
        s.recordings.push_back(plan);
    }
    return s;
}

std::vector<ReceiverProfile> lab_receivers(double gain_b) {
    std::vector<ReceiverProfile> rx(4);
    rx[0] = {"rxA", 0.0, {}, 0.01};
    rx[1] = {"rxA2", 0.8, {}, 0.01};
    rx[2] = {"rxA3", -0.8, {}, 0.01};
    rx[3] = {"rxB", gain_b, {}, 0.02};
    return rx;
}

}  // namespace

ScenePreset lab_scene_a() {
    ScenePreset s = lab_scene_common();
    s.name = "lab-a";
    s.aps = {{"AP1", {0.0, 0.0}, -30.0, 1001},
             {"AP2", {0.0, 3.0}, -30.0, 1002},
             {"AP3", {0.0, 6.0}, -30.0, 1003}};
    s.receivers = lab_receivers(2.4);
    return s;
}

ScenePreset lab_scene_b() {
    ScenePreset s = lab_scene_common();
    s.name = "lab-b";
    s.aps = {{"AP1", {2.0, 0.0}, -30.0, 2001},
             {"AP2", {2.0, 3.0}, -30.0, 2002},
             {"AP3", {2.0, 6.0}, -30.0, 2003}};
    s.receivers = lab_receivers(2.0);
    return s;
}

std::vector<SynthRecording> generate_scene(const ScenePreset& scene,
                                           const UncertaintyBudget& budget, std::uint64_t seed) {
    std::vector<SynthRecording> out;
    out.reserve(scene.recordings.size());
    for (std::size_t i = 0; i < scene.recordings.size(); ++i) {
        const auto& plan = scene.recordings[i];
        const ReceiverProfile* rx = nullptr;
        for (const auto& r : scene.receivers) {
            if (r.id == plan.receiver_id) rx = &r;
        }
        if (!rx) throw ValidationError("generate_scene: unknown receiver " + plan.receiver_id);
        out.push_back(generate_recording(scene.aps, scene.model, plan.trajectory, *rx, budget,
                                         derive_seed(seed, "recording", i), plan.name));
    }
    return out;
}

}  // namespace rsslab
