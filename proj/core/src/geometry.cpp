#include "rsslab/geometry.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <limits>

#include "rsslab/errors.hpp"

namespace rsslab {

namespace {

constexpr double kWEpsilon = 1e-12;        // homogeneous w floor
constexpr double kDetFloor = 1e-15;        // invertibility floor on normalized matrix
constexpr double kRankRatioFloor = 1e-10;  // DLT degeneracy: sigma_8 / sigma_1

bool all_finite(const std::array<double, 9>& m) {
    for (double v : m) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

// Hartley isotropic normalization: translate centroid to origin, scale mean
// distance to sqrt(2).
Eigen::Matrix3d normalizing_transform(const Eigen::MatrixX2d& pts) {
    const Eigen::RowVector2d c = pts.colwise().mean();
    double mean_dist = 0.0;
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
        mean_dist += (pts.row(i) - c).norm();
    }
    mean_dist /= static_cast<double>(pts.rows());
    const double s = mean_dist > 0 ? std::sqrt(2.0) / mean_dist : 1.0;
    Eigen::Matrix3d t = Eigen::Matrix3d::Identity();
    t(0, 0) = s;
    t(1, 1) = s;
    t(0, 2) = -s * c(0);
    t(1, 2) = -s * c(1);
    return t;
}

}  // namespace

std::vector<GroundPoint> CameraSetup::markers() const {
    if (!marker_world_positions.empty()) return marker_world_positions;
    const double f = fov_ground_m;
    return {{0.0, 0.0}, {f, 0.0}, {f, f}, {0.0, f}};
}

void CameraSetup::validate() const {
    if (!(height_m > 0.0)) throw ValidationError("CameraSetup: height_m must be > 0");
    if (!(fov_ground_m > 0.0)) throw ValidationError("CameraSetup: fov_ground_m must be > 0");
    if (resolution_px < 16) throw ValidationError("CameraSetup: resolution_px must be >= 16");
    const auto mk = markers();
    if (mk.size() < 4) throw ValidationError("CameraSetup: need >= 4 markers");
    // no three collinear
    for (std::size_t i = 0; i < mk.size(); ++i) {
        for (std::size_t j = i + 1; j < mk.size(); ++j) {
            for (std::size_t k = j + 1; k < mk.size(); ++k) {
                const double area2 = std::abs((mk[j].x - mk[i].x) * (mk[k].y - mk[i].y) -
                                              (mk[j].y - mk[i].y) * (mk[k].x - mk[i].x));
                if (area2 < 1e-12) {
                    throw ValidationError("CameraSetup: three markers are collinear");
                }
            }
        }
    }
}

CameraSetup CameraSetup::base() { return CameraSetup{}; }

Homography Homography::identity() { return Homography{}; }

Homography Homography::from_matrix(const std::array<double, 9>& row_major) {
    if (!all_finite(row_major)) throw ValidationError("Homography: non-finite entries");
    Homography h;
    h.m_ = row_major;
    if (std::abs(h.m_[8]) > kWEpsilon) {
        for (double& v : h.m_) v /= row_major[8];
        h.m_[8] = 1.0;
    }
    Eigen::Map<const Eigen::Matrix<double, 3, 3, Eigen::RowMajor>> m(h.m_.data());
    if (std::abs(m.determinant()) < kDetFloor) {
        throw ValidationError("Homography: matrix is singular");
    }
    return h;
}

Homography Homography::inverse() const {
    Eigen::Map<const Eigen::Matrix<double, 3, 3, Eigen::RowMajor>> m(m_.data());
    Eigen::Matrix<double, 3, 3, Eigen::RowMajor> inv = m.inverse();
    std::array<double, 9> out;
    for (int i = 0; i < 9; ++i) out[static_cast<std::size_t>(i)] = inv.data()[i];
    return from_matrix(out);
}

Homography ideal_homography(const CameraSetup& setup) {
    setup.validate();
    const double s = static_cast<double>(setup.resolution_px) / setup.fov_ground_m;
    return Homography::from_matrix({s, 0, 0, 0, s, 0, 0, 0, 1});
}

Homography fit_homography(std::span<const GroundPoint> world_pts,
                          std::span<const PixelPoint> pixel_pts) {
    if (world_pts.size() != pixel_pts.size()) {
        throw DimensionMismatch("fit_homography: correspondence count mismatch");
    }
    const Eigen::Index n = static_cast<Eigen::Index>(world_pts.size());
    if (n < 4) throw ValidationError("fit_homography: need >= 4 correspondences");

    Eigen::MatrixX2d w(n, 2), p(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        w(i, 0) = world_pts[idx].x;
        w(i, 1) = world_pts[idx].y;
        p(i, 0) = pixel_pts[idx].u;
        p(i, 1) = pixel_pts[idx].v;
    }
    const Eigen::Matrix3d tw = normalizing_transform(w);
    const Eigen::Matrix3d tp = normalizing_transform(p);

    Eigen::MatrixXd a(2 * n, 9);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Vector3d wh = tw * Eigen::Vector3d(w(i, 0), w(i, 1), 1.0);
        const Eigen::Vector3d ph = tp * Eigen::Vector3d(p(i, 0), p(i, 1), 1.0);
        const double x = wh(0) / wh(2), y = wh(1) / wh(2);
        const double u = ph(0) / ph(2), v = ph(1) / ph(2);
        a.row(2 * i) << -x, -y, -1, 0, 0, 0, u * x, u * y, u;
        a.row(2 * i + 1) << 0, 0, 0, -x, -y, -1, v * x, v * y, v;
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    // rank must be 8: the solution is the 1-D nullspace; a second vanishing
    // singular value means the correspondences do not determine a homography
    if (sv(0) <= 0.0 || sv(7) / sv(0) < kRankRatioFloor) {
        throw DegenerateConfiguration("fit_homography: design matrix rank-deficient");
    }
    const Eigen::VectorXd h = svd.matrixV().col(8);
    Eigen::Matrix3d hn;
    hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
    const Eigen::Matrix3d hm = tp.inverse() * hn * tw;

    std::array<double, 9> out;
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) out[static_cast<std::size_t>(3 * r + c)] = hm(r, c);
    }
    return Homography::from_matrix(out);
}

GroundPoint pixel_to_world(const Homography& h, PixelPoint p) {
    return [&] {
        const auto& m = h.inverse().matrix();
        const double w = m[6] * p.u + m[7] * p.v + m[8];
        if (std::abs(w) < kWEpsilon) {
            throw NumericalInstability("pixel_to_world: homogeneous w below epsilon");
        }
        return GroundPoint{(m[0] * p.u + m[1] * p.v + m[2]) / w,
                           (m[3] * p.u + m[4] * p.v + m[5]) / w};
    }();
}

PixelPoint world_to_pixel(const Homography& h, GroundPoint g) {
    const auto& m = h.matrix();
    const double w = m[6] * g.x + m[7] * g.y + m[8];
    if (std::abs(w) < kWEpsilon) {
        throw NumericalInstability("world_to_pixel: homogeneous w below epsilon");
    }
    return PixelPoint{(m[0] * g.x + m[1] * g.y + m[2]) / w,
                      (m[3] * g.x + m[4] * g.y + m[5]) / w};
}

double pixel_pitch(const CameraSetup& setup) {
    setup.validate();
    return setup.fov_ground_m / static_cast<double>(setup.resolution_px);
}

}  // namespace rsslab
