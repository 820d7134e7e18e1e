#pragma once

#include <Eigen/Core>
#include <span>

#include "socnav/perception.hpp"

namespace socnav {

/// Objective weights shared by all controller variants.
struct Weights {
    Eigen::Matrix2d q_u = Eigen::Matrix2d::Identity();  ///< control input weight
    Eigen::Matrix3d q_u_bar =
        Eigen::Vector3d(0.005, 0.005, 100000.0).asDiagonal();  ///< augmented control weight
    double q_r = 1000.0;  ///< normalized target distance weight
    double q_ed = 500.0;  ///< Euclidean distance cost weight
    double q_md = 1000.0; ///< Mahalanobis distance cost weight

    /// Throws std::invalid_argument if a matrix is asymmetric/indefinite or a
    /// scalar weight is negative.
    void validate() const;
};

/// Body radii and the collision-probability threshold behind the Mahalanobis
/// constraint. The sphere volume is derived, never stored.
struct SafetyGeometry {
    double r_rob = 0.35;   ///< robot circumference radius [m]
    double r_ped = 0.3;    ///< pedestrian circumference radius [m]
    double d_safe = 0.3;   ///< planning margin between circumferences [m]
    double p_col = 0.01;   ///< collision probability threshold

    /// r_rob + r_ped + d_safe, the planning keep-out radius.
    double margin() const { return r_rob + r_ped + d_safe; }
    /// r_rob + r_ped, bodies touching.
    double contact_distance() const { return r_rob + r_ped; }
    /// Volume of the sphere of radius margin(), used by the MDC threshold.
    double sphere_volume() const;
};

/// Axis lengths and orientation of a pedestrian keep-out ellipse.
/// psi is folded into [-pi/2, pi/2).
struct EllipseParams {
    double a = 1.0;    ///< major semi-axis [m]
    double b = 1.0;    ///< minor semi-axis [m]
    double psi = 0.0;  ///< major-axis orientation [rad]
};

// Numerical guards. eps_div clamps inverse-distance penalties, eps_den guards
// the normalized target cost denominator, eps_det is the PD tolerance on
// det(Sigma).
inline constexpr double kEpsDiv = 1e-3;
inline constexpr double kEpsDen = 1e-6;
inline constexpr double kEpsDet = 1e-12;

// Unless noted otherwise every gradient output pointer may be null, and
// gradients are with respect to the robot position r.

/// u^T Q_u u.
double control_cost(const ControlInput& u, const Weights& w, Vec2* grad_u = nullptr);

/// ubar^T Q_ubar ubar for the augmented control (v, omega, delta).
double augmented_control_cost(const Eigen::Vector3d& u_bar, const Weights& w,
                              Eigen::Vector3d* grad = nullptr);

/// Q_r * (|r - target| / |r0 - target|)^2 with the denominator floored at
/// kEpsDen.
double target_cost(const Vec2& r, const Vec2& r0, const Vec2& target, double q_r,
                   Vec2* grad_r = nullptr);

/// control_cost + target_cost.
double stage_cost(const ControlInput& u, const Vec2& r, const Vec2& r0,
                  const Vec2& target, const Weights& w);

/// Terminal cost; same form as target_cost evaluated at the horizon end.
double terminal_cost(const Vec2& r_h, const Vec2& r0, const Vec2& target, double q_r);

/// Straight-line distance.
double euclidean_distance(const Vec2& r, const Vec2& p);

/// Q_ED * sum_i 1/d_i^2 over the given pedestrian positions. Distances below
/// kEpsDiv are clamped; *saturated is set when that happens.
double ed_cost(const Vec2& r, std::span<const Vec2> peds, double q_ed,
               Vec2* grad_r = nullptr, bool* saturated = nullptr);

/// |r - p|^2 - margin^2; the Euclidean constraint holds iff >= 0.
double edc_residual(const Vec2& r, const Vec2& p, const SafetyGeometry& g,
                    Vec2* grad_r = nullptr);

/// |r - p|^2 - margin^2 - delta, the adaptive Euclidean constraint.
double edc_delta_residual(const Vec2& r, const Vec2& p, const SafetyGeometry& g,
                          double delta, Vec2* grad_r = nullptr,
                          double* grad_delta = nullptr);

/// sqrt((r-p)^T S^-1 (r-p)). Throws std::domain_error when det(S) < kEpsDet.
double mahalanobis_distance(const Vec2& r, const Vec2& p, const Covariance2& s,
                            Vec2* grad_r = nullptr);

/// Q_MD * sum_i 1/d_MD,i^2 with the same clamping rule as ed_cost.
double md_cost(const Vec2& r, std::span<const Vec2> means,
               std::span<const Covariance2> covs, double q_md,
               Vec2* grad_r = nullptr, bool* saturated = nullptr);

/// Squared-Mahalanobis threshold kappa = max(0, -2 ln(sqrt(det(2 pi S)) *
/// P_col / V_S)). The constraint used by the solver is d_MD^2 - kappa >= 0.
double mdc_threshold(const Covariance2& s, const SafetyGeometry& g);

/// d_MD^2 - kappa - delta, the (adaptive) Mahalanobis constraint residual.
/// Pass delta = 0 for the non-adaptive form.
double mdc_delta_residual(const Vec2& r, const Vec2& p, const Covariance2& s,
                          const SafetyGeometry& g, double delta,
                          Vec2* grad_r = nullptr, double* grad_delta = nullptr);

/// Keep-out ellipse of the gamma-stddev Gaussian iso-contour inflated by the
/// body margin: semi-axes gamma*sqrt(lambda)*(1-delta) + margin along the
/// covariance eigenvectors. Non-adaptive callers pass delta = 0.
/// Throws std::domain_error when S is not positive definite.
EllipseParams ellipse_from_covariance(const Covariance2& s, double gamma,
                                      const SafetyGeometry& g, double delta);

/// q^T diag(1/a^2, 1/b^2) q - 1 with q = Rot(psi) (r - p); the robot is
/// outside the ellipse iff > 0.
double elc_residual(const Vec2& r, const Vec2& p, const EllipseParams& e,
                    Vec2* grad_r = nullptr);

/// Adaptive ellipse residual with the delta-dependence of the semi-axes
/// folded in; grad_delta covers the chain through a(delta), b(delta).
double aelc_residual(const Vec2& r, const Vec2& p, const Covariance2& s,
                     double gamma, const SafetyGeometry& g, double delta,
                     Vec2* grad_r = nullptr, double* grad_delta = nullptr);

}  // namespace socnav
