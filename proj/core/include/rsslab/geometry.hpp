#pragma once

#include <array>
#include <span>
#include <vector>

namespace rsslab {

struct PixelPoint {
    double u = 0.0;
    double v = 0.0;
};

struct GroundPoint {
    double x = 0.0;
    double y = 0.0;
};

/// Overhead camera watching a square fov_ground_m x fov_ground_m patch of
/// floor, imaged onto a resolution_px x resolution_px frame. Markers are the
/// calibration fiducials at known floor positions.
struct CameraSetup {
    double height_m = 3.0;
    double fov_ground_m = 5.0;
    int resolution_px = 1080;
    std::vector<GroundPoint> marker_world_positions;  // empty = FoV corners

    /// Markers as configured, or the four FoV-square corners by default.
    std::vector<GroundPoint> markers() const;

    void validate() const;  // throws ValidationError

    static CameraSetup base();  // 3 m height, 5 m FoV, 1080 px, corner markers
};

/// 3x3 projective map from world floor coordinates to pixel coordinates,
/// stored row-major, normalized so the bottom-right entry is 1 when nonzero.
class Homography {
public:
    static Homography identity();
    static Homography from_matrix(const std::array<double, 9>& row_major);

    const std::array<double, 9>& matrix() const { return m_; }
    Homography inverse() const;

private:
    Homography() = default;
    std::array<double, 9> m_{1, 0, 0, 0, 1, 0, 0, 0, 1};
};

/// Exact similarity mapping the FoV square onto the image for an
/// axis-aligned overhead camera.
Homography ideal_homography(const CameraSetup& setup);

/// Least-squares homography from >= 4 correspondences (normalized DLT,
/// SVD nullspace). Throws DegenerateConfiguration when the design matrix
/// is rank-deficient beyond tolerance.
Homography fit_homography(std::span<const GroundPoint> world_pts,
                          std::span<const PixelPoint> pixel_pts);

GroundPoint pixel_to_world(const Homography& h, PixelPoint p);
PixelPoint world_to_pixel(const Homography& h, GroundPoint g);

/// Ground-plane distance subtended by one pixel.
double pixel_pitch(const CameraSetup& setup);

}  // namespace rsslab
