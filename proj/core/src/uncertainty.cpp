#include "rsslab/uncertainty.hpp"

#include <cmath>
#include <thread>

#include "rsslab/errors.hpp"
#include "rsslab/rng.hpp"

namespace rsslab {

namespace {

struct Mat3 {
    const std::array<double, 9>& m;
    GroundPoint apply(double a, double b) const {
        const double w = m[6] * a + m[7] * b + m[8];
        return {(m[0] * a + m[1] * b + m[2]) / w, (m[3] * a + m[4] * b + m[5]) / w};
    }
};

}  // namespace

void SpatialErrorConfig::validate() const {
    setup.validate();
    if (tag_sigma_m < 0) throw ValidationError("SpatialErrorConfig: tag_sigma_m must be >= 0");
    if (det_jitter_px < 0) throw ValidationError("SpatialErrorConfig: det_jitter_px must be >= 0");
    if (foot_sigma_m < 0) throw ValidationError("SpatialErrorConfig: foot_sigma_m must be >= 0");
    if (trials < 1) throw ValidationError("SpatialErrorConfig: trials must be >= 1");
    if (!(fov_ref_m > 0)) throw ValidationError("SpatialErrorConfig: fov_ref_m must be > 0");
    if (workers < 1) throw ValidationError("SpatialErrorConfig: workers must be >= 1");
}

void TemporalConfig::validate() const {
    if (!(f_cam_hz > 0)) throw ValidationError("TemporalConfig: f_cam_hz must be > 0");
    if (!(f_rss_hz > 0)) throw ValidationError("TemporalConfig: f_rss_hz must be > 0");
    if (dt_align_s < 0) throw ValidationError("TemporalConfig: dt_align_s must be >= 0");
    if (speed_mps < 0) throw ValidationError("TemporalConfig: speed_mps must be >= 0");
}

double sigma_px(const CameraSetup& setup) { return pixel_pitch(setup) / 2.0; }

double sigma_det(const SpatialErrorConfig& cfg) {
    cfg.validate();
    return cfg.det_jitter_px * pixel_pitch(cfg.setup);
}

double sigma_tag_mc(const SpatialErrorConfig& cfg) {
    cfg.validate();
    if (cfg.tag_sigma_m == 0.0) return 0.0;

    const auto markers = cfg.setup.markers();
    const Homography ideal = ideal_homography(cfg.setup);
    const Homography ideal_inv = ideal.inverse();

    std::vector<PixelPoint> nominal_px(markers.size());
    for (std::size_t i = 0; i < markers.size(); ++i) {
        nominal_px[i] = world_to_pixel(ideal, markers[i]);
    }
    const PixelPoint center{cfg.setup.resolution_px / 2.0, cfg.setup.resolution_px / 2.0};
    const GroundPoint center_truth = Mat3{ideal_inv.matrix()}.apply(center.u, center.v);

    // tag error expressed in image units at the reference installation
    const double pitch_ref = cfg.fov_ref_m / static_cast<double>(cfg.setup.resolution_px);
    const double noise_px_axis = cfg.tag_sigma_m / pitch_ref / std::sqrt(2.0);

    // per-trial squared displacements, then a sequential reduction, so the
    // result is identical for any worker count
    std::vector<double> d2(static_cast<std::size_t>(cfg.trials), 0.0);
    std::vector<std::uint8_t> discarded(static_cast<std::size_t>(cfg.trials), 0);

    auto run_range = [&](int lo, int hi) {
        std::vector<PixelPoint> obs(markers.size());
        for (int t = lo; t < hi; ++t) {
            Rng rng(derive_seed(cfg.seed, "sigma_tag", static_cast<std::uint64_t>(t)));
            for (std::size_t i = 0; i < markers.size(); ++i) {
                obs[i] = {nominal_px[i].u + rng.normal(0.0, noise_px_axis),
                          nominal_px[i].v + rng.normal(0.0, noise_px_axis)};
            }
            try {
                const Homography fit = fit_homography(markers, obs);
                const GroundPoint est = Mat3{fit.inverse().matrix()}.apply(center.u, center.v);
                const double dx = est.x - center_truth.x;
                const double dy = est.y - center_truth.y;
                d2[static_cast<std::size_t>(t)] = dx * dx + dy * dy;
            } catch (const DegenerateConfiguration&) {
                discarded[static_cast<std::size_t>(t)] = 1;
            }
        }
    };

    const int workers = std::min(cfg.workers, cfg.trials);
    if (workers <= 1) {
        run_range(0, cfg.trials);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        const int chunk = (cfg.trials + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const int lo = w * chunk;
            const int hi = std::min(cfg.trials, lo + chunk);
            if (lo < hi) pool.emplace_back(run_range, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    long long n_discarded = 0;
    for (auto d : discarded) n_discarded += d;
    if (n_discarded * 100 > cfg.trials) {
        throw DegenerateConfiguration("sigma_tag_mc: discard rate above 1%");
    }

    double acc = 0.0;
    long long n = 0;
    for (int t = 0; t < cfg.trials; ++t) {
        if (!discarded[static_cast<std::size_t>(t)]) {
            acc += d2[static_cast<std::size_t>(t)];
            ++n;
        }
    }
    // pooled per-axis std: components add in variance with sigma_px/sigma_det
    return std::sqrt(acc / (2.0 * static_cast<double>(n)));
}

UncertaintyBudget spatial_budget(const SpatialErrorConfig& cfg) {
    cfg.validate();
    UncertaintyBudget b;
    b.sigma_px_m = sigma_px(cfg.setup);
    b.sigma_tag_m = sigma_tag_mc(cfg);
    b.sigma_det_m = sigma_det(cfg);
    b.sigma_foot_m = cfg.foot_sigma_m;
    b.sigma_t_m = std::sqrt(b.sigma_px_m * b.sigma_px_m + b.sigma_tag_m * b.sigma_tag_m +
                            b.sigma_det_m * b.sigma_det_m + b.sigma_foot_m * b.sigma_foot_m);
    return b;
}

TemporalError temporal_error(const TemporalConfig& cfg) {
    cfg.validate();
    TemporalError e;
    e.dt_s = std::max({1.0 / cfg.f_cam_hz, 1.0 / cfg.f_rss_hz, cfg.dt_align_s});
    e.eps_temp_m = cfg.speed_mps * e.dt_s;
    return e;
}

double label_uncertainty(const UncertaintyBudget& spatial, double eps_temp_m) {
    if (spatial.sigma_t_m < 0 || eps_temp_m < 0) {
        throw ValidationError("label_uncertainty: inputs must be >= 0");
    }
    return std::sqrt(spatial.sigma_t_m * spatial.sigma_t_m + eps_temp_m * eps_temp_m);
}

UncertaintyBudget full_budget(const SpatialErrorConfig& spatial, const TemporalConfig& temporal) {
    UncertaintyBudget b = spatial_budget(spatial);
    b.eps_temp_m = temporal_error(temporal).eps_temp_m;
    b.sigma_label_m = label_uncertainty(b, b.eps_temp_m);
    return b;
}

std::vector<GroundPoint> corrupt_labels(std::span<const GroundPoint> truth,
                                        const UncertaintyBudget& budget, std::uint64_t seed) {
    if (!(std::isfinite(budget.sigma_label_m)) || budget.sigma_label_m < 0) {
        throw ValidationError("corrupt_labels: sigma_label must be finite and >= 0");
    }
    std::vector<GroundPoint> out(truth.begin(), truth.end());
    if (budget.sigma_label_m == 0.0) return out;
    const double axis_std = budget.sigma_label_m / std::sqrt(2.0);
    Rng rng(derive_seed(seed, "corrupt_labels"));
    for (auto& p : out) {
        p.x += rng.normal(0.0, axis_std);
        p.y += rng.normal(0.0, axis_std);
    }
    return out;
}

}  // namespace rsslab
