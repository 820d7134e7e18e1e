#pragma once

#include <cstdint>
#include <vector>

#include "socnav/dynamics.hpp"

namespace socnav {

/// Point-mass pedestrian as seen by the robot's sensor.
struct PedestrianState {
    int id = 0;
    Vec2 position{0.0, 0.0};
    Vec2 velocity{0.0, 0.0};
};

/// Symmetric 2x2 position covariance. Stored as three entries so symmetry
/// holds by construction.
struct Covariance2 {
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;

    double det() const { return sxx * syy - sxy * sxy; }
    double trace() const { return sxx + syy; }
    bool positive_definite(double det_eps = 1e-12) const {
        return sxx > 0.0 && det() > det_eps;
    }
    Eigen::Matrix2d matrix() const {
        Eigen::Matrix2d m;
        m << sxx, sxy, sxy, syy;
        return m;
    }
    /// Solves S * out = rhs with the closed-form 2x2 inverse.
    Vec2 solve(const Vec2& rhs) const;

    static Covariance2 identity() { return {1.0, 0.0, 1.0}; }
    static Covariance2 isotropic(double s) { return {s, 0.0, s}; }
};

/// Per-pedestrian prediction over the controller horizon. means[k] and
/// covariances[k] describe horizon step k+1. ghost_age counts consecutive
/// controller steps the pedestrian has been out of view (0 = visible now).
struct PredictedTrack {
    int ped_id = 0;
    std::vector<Vec2> means;
    std::vector<Covariance2> covariances;
    int ghost_age = 0;
};

/// Field-of-view sensor: range plus full opening angle.
struct SensorConfig {
    double vis_range = 5.0;            ///< l^vis [m]
    double vis_angle = 2.0 * M_PI;     ///< phi^vis [rad], full opening
};

/// Linear-in-time standard-deviation growth of the prediction uncertainty,
/// anisotropic in the velocity-aligned frame.
struct CovarianceGrowthParams {
    double sigma0 = 0.1;      ///< stddev at the first horizon step [m]
    double alpha_long = 0.3;  ///< growth rate along the velocity [m/s]
    double alpha_lat = 0.1;   ///< growth rate across the velocity [m/s]
};

/// Pedestrians inside the sensor footprint: within range and within
/// +-vis_angle/2 of the robot heading. Output is sorted by id.
std::vector<PedestrianState> sense(const RobotState& robot,
                                   const std::vector<PedestrianState>& peds,
                                   const SensorConfig& cfg);

/// Constant-velocity mean prediction; element k-1 is position + velocity*k*dt.
std::vector<Vec2> predict_cv(const PedestrianState& ped, int horizon, double dt);

/// Uncertainty at horizon step k (k >= 1): diag((sigma0+alpha_long*k*dt)^2,
/// (sigma0+alpha_lat*k*dt)^2) in the velocity-aligned frame, rotated into the
/// world. Below 0.01 m/s the frame falls back to the world axes.
/// Throws std::invalid_argument on non-positive sigma0.
Covariance2 covariance_growth(const PedestrianState& ped, int k, double dt,
                              const CovarianceGrowthParams& params);

/// Fresh CV prediction with grown covariances and ghost_age 0.
PredictedTrack fresh_track(const PedestrianState& ped, int horizon, double dt,
                           const CovarianceGrowthParams& params);

/// One controller-step track update: visible pedestrians get fresh
/// predictions; tracked-but-unseen pedestrians keep their last prediction
/// shifted one step forward (drop first, repeat last) with ghost_age
/// incremented; tracks older than h_ghost are dropped. Sorted by ped_id.
std::vector<PredictedTrack> ghost_update(const std::vector<PredictedTrack>& tracks,
                                         const std::vector<PedestrianState>& visible,
                                         int horizon, int h_ghost, double dt,
                                         const CovarianceGrowthParams& params);

}  // namespace socnav
