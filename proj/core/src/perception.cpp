#include "socnav/perception.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace socnav {

namespace {
constexpr double kLowSpeed = 0.01;  // below this the growth frame is world-aligned
}

Vec2 Covariance2::solve(const Vec2& rhs) const {
    const double d = det();
    return Vec2(syy * rhs.x() - sxy * rhs.y(), sxx * rhs.y() - sxy * rhs.x()) / d;
}

std::vector<PedestrianState> sense(const RobotState& robot,
                                   const std::vector<PedestrianState>& peds,
                                   const SensorConfig& cfg) {
    std::vector<PedestrianState> visible;
    for (const PedestrianState& ped : peds) {
        const Vec2 offset = ped.position - robot.position();
        const double dist = offset.norm();
        if (dist > cfg.vis_range) continue;
        const double bearing = std::atan2(offset.y(), offset.x());
        if (std::abs(wrap_angle(bearing - robot.theta)) > cfg.vis_angle / 2.0) continue;
        visible.push_back(ped);
    }
    std::sort(visible.begin(), visible.end(),
              [](const PedestrianState& a, const PedestrianState& b) { return a.id < b.id; });
    return visible;
}

std::vector<Vec2> predict_cv(const PedestrianState& ped, int horizon, double dt) {
    if (horizon < 1) throw std::invalid_argument("predict_cv: horizon must be >= 1");
    std::vector<Vec2> means;
    means.reserve(static_cast<size_t>(horizon));
    for (int k = 1; k <= horizon; ++k) {
        means.push_back(ped.position + ped.velocity * (k * dt));
    }
    return means;
}

Covariance2 covariance_growth(const PedestrianState& ped, int k, double dt,
                              const CovarianceGrowthParams& params) {
    if (params.sigma0 <= 0.0) {
        throw std::invalid_argument("covariance_growth: sigma0 must be positive");
    }
    if (k < 1) throw std::invalid_argument("covariance_growth: k must be >= 1");

    const double t = k * dt;
    const double s_long = params.sigma0 + params.alpha_long * t;
    const double s_lat = params.sigma0 + params.alpha_lat * t;
    const double var_long = s_long * s_long;
    const double var_lat = s_lat * s_lat;

    const double speed = ped.velocity.norm();
    double c = 1.0, s = 0.0;
    if (speed >= kLowSpeed) {
        c = ped.velocity.x() / speed;
        s = ped.velocity.y() / speed;
    }
    // R(phi) diag(var_long, var_lat) R(phi)^T with the long axis along velocity.
    Covariance2 cov;
    cov.sxx = var_long * c * c + var_lat * s * s;
    cov.syy = var_long * s * s + var_lat * c * c;
    cov.sxy = (var_long - var_lat) * c * s;
    return cov;
}

PredictedTrack fresh_track(const PedestrianState& ped, int horizon, double dt,
                           const CovarianceGrowthParams& params) {
    PredictedTrack track;
    track.ped_id = ped.id;
    track.means = predict_cv(ped, horizon, dt);
    track.covariances.reserve(static_cast<size_t>(horizon));
    for (int k = 1; k <= horizon; ++k) {
        track.covariances.push_back(covariance_growth(ped, k, dt, params));
    }
    track.ghost_age = 0;
    return track;
}

std::vector<PredictedTrack> ghost_update(const std::vector<PredictedTrack>& tracks,
                                         const std::vector<PedestrianState>& visible,
                                         int horizon, int h_ghost, double dt,
                                         const CovarianceGrowthParams& params) {
    if (h_ghost < 0) throw std::invalid_argument("ghost_update: h_ghost must be >= 0");

    std::vector<PredictedTrack> updated;
    updated.reserve(tracks.size() + visible.size());
    for (const PedestrianState& ped : visible) {
        updated.push_back(fresh_track(ped, horizon, dt, params));
    }
    for (const PredictedTrack& track : tracks) {
        const bool seen = std::any_of(visible.begin(), visible.end(),
                                      [&](const PedestrianState& p) { return p.id == track.ped_id; });
        if (seen) continue;
        PredictedTrack ghost = track;
        ghost.ghost_age += 1;
        if (ghost.ghost_age > h_ghost) continue;
        if (!ghost.means.empty()) {
            ghost.means.erase(ghost.means.begin());
            ghost.means.push_back(ghost.means.empty() ? track.means.back() : ghost.means.back());
        }
        if (!ghost.covariances.empty()) {
            ghost.covariances.erase(ghost.covariances.begin());
            ghost.covariances.push_back(ghost.covariances.empty() ? track.covariances.back()
                                                                  : ghost.covariances.back());
        }
        updated.push_back(std::move(ghost));
    }
    std::sort(updated.begin(), updated.end(),
              [](const PredictedTrack& a, const PredictedTrack& b) { return a.ped_id < b.ped_id; });
    return updated;
}

}  // namespace socnav
