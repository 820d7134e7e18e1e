#include "socnav/socialcost.hpp"

#include <cmath>
#include <stdexcept>

namespace socnav {

namespace {

void check_symmetric_psd(const Eigen::MatrixXd& m, const char* name) {
    if (!m.isApprox(m.transpose(), 1e-12)) {
        throw std::invalid_argument(std::string(name) + " must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    if (eig.eigenvalues().minCoeff() < -1e-12) {
        throw std::invalid_argument(std::string(name) + " must be positive semidefinite");
    }
}

}  // namespace

void Weights::validate() const {
    check_symmetric_psd(q_u, "q_u");
    check_symmetric_psd(q_u_bar, "q_u_bar");
    if (q_r < 0.0 || q_ed < 0.0 || q_md < 0.0) {
        throw std::invalid_argument("scalar weights must be non-negative");
    }
}

double SafetyGeometry::sphere_volume() const {
    const double m = margin();
    return 4.0 / 3.0 * M_PI * m * m * m;
}

double control_cost(const ControlInput& u, const Weights& w, Vec2* grad_u) {
    const Vec2 uv(u.v, u.omega);
    if (grad_u) *grad_u = 2.0 * w.q_u * uv;
    return uv.dot(w.q_u * uv);
}

double augmented_control_cost(const Eigen::Vector3d& u_bar, const Weights& w,
                              Eigen::Vector3d* grad) {
    if (grad) *grad = 2.0 * w.q_u_bar * u_bar;
    return u_bar.dot(w.q_u_bar * u_bar);
}

double target_cost(const Vec2& r, const Vec2& r0, const Vec2& target, double q_r,
                   Vec2* grad_r) {
    double denom = (r0 - target).norm();
    if (denom < kEpsDen) denom = kEpsDen;
    const Vec2 diff = r - target;
    const double inv_d2 = 1.0 / (denom * denom);
    if (grad_r) *grad_r = 2.0 * q_r * inv_d2 * diff;
    return q_r * diff.squaredNorm() * inv_d2;
}

double stage_cost(const ControlInput& u, const Vec2& r, const Vec2& r0,
                  const Vec2& target, const Weights& w) {
    return control_cost(u, w) + target_cost(r, r0, target, w.q_r);
}

double terminal_cost(const Vec2& r_h, const Vec2& r0, const Vec2& target, double q_r) {
    return target_cost(r_h, r0, target, q_r);
}

double euclidean_distance(const Vec2& r, const Vec2& p) { return (r - p).norm(); }

double ed_cost(const Vec2& r, std::span<const Vec2> peds, double q_ed, Vec2* grad_r,
               bool* saturated) {
    if (saturated) *saturated = false;
    if (grad_r) grad_r->setZero();
    double cost = 0.0;
    for (const Vec2& p : peds) {
        const Vec2 diff = r - p;
        const double d2 = diff.squaredNorm();
        if (d2 < kEpsDiv * kEpsDiv) {
            // clamped plateau: constant value, zero slope
            cost += q_ed / (kEpsDiv * kEpsDiv);
            if (saturated) *saturated = true;
            continue;
        }
        cost += q_ed / d2;
        if (grad_r) *grad_r += -2.0 * q_ed / (d2 * d2) * diff;
    }
    return cost;
}

double edc_residual(const Vec2& r, const Vec2& p, const SafetyGeometry& g, Vec2* grad_r) {
    const Vec2 diff = r - p;
    if (grad_r) *grad_r = 2.0 * diff;
    const double m = g.margin();
    return diff.squaredNorm() - m * m;
}

double edc_delta_residual(const Vec2& r, const Vec2& p, const SafetyGeometry& g,
                          double delta, Vec2* grad_r, double* grad_delta) {
    if (grad_delta) *grad_delta = -1.0;
    return edc_residual(r, p, g, grad_r) - delta;
}

double mahalanobis_distance(const Vec2& r, const Vec2& p, const Covariance2& s,
                            Vec2* grad_r) {
    if (!s.positive_definite(kEpsDet)) {
        throw std::domain_error("mahalanobis_distance: covariance not positive definite");
    }
    const Vec2 diff = r - p;
    const Vec2 sol = s.solve(diff);
    const double d = std::sqrt(std::max(0.0, diff.dot(sol)));
    if (grad_r) {
        if (d > 0.0) {
            *grad_r = sol / d;
        } else {
            grad_r->setZero();
        }
    }
    return d;
}

double md_cost(const Vec2& r, std::span<const Vec2> means,
               std::span<const Covariance2> covs, double q_md, Vec2* grad_r,
               bool* saturated) {
    if (means.size() != covs.size()) {
        throw std::invalid_argument("md_cost: means/covariances size mismatch");
    }
    if (saturated) *saturated = false;
    if (grad_r) grad_r->setZero();
    double cost = 0.0;
    for (size_t i = 0; i < means.size(); ++i) {
        if (!covs[i].positive_definite(kEpsDet)) {
            throw std::domain_error("md_cost: covariance of track " + std::to_string(i) +
                                    " not positive definite");
        }
        const Vec2 diff = r - means[i];
        const Vec2 sol = covs[i].solve(diff);
        const double d2 = diff.dot(sol);
        if (d2 < kEpsDiv * kEpsDiv) {
            cost += q_md / (kEpsDiv * kEpsDiv);
            if (saturated) *saturated = true;
            continue;
        }
        cost += q_md / d2;
        if (grad_r) *grad_r += -2.0 * q_md / (d2 * d2) * sol;
    }
    return cost;
}

double mdc_threshold(const Covariance2& s, const SafetyGeometry& g) {
    if (!s.positive_definite(kEpsDet)) {
        throw std::domain_error("mdc_threshold: covariance not positive definite");
    }
    const double det2pi = (2.0 * M_PI) * (2.0 * M_PI) * s.det();
    const double arg = std::sqrt(det2pi) * g.p_col / g.sphere_volume();
    return std::max(0.0, -2.0 * std::log(arg));
}

double mdc_delta_residual(const Vec2& r, const Vec2& p, const Covariance2& s,
                          const SafetyGeometry& g, double delta, Vec2* grad_r,
                          double* grad_delta) {
    if (!s.positive_definite(kEpsDet)) {
        throw std::domain_error("mdc_delta_residual: covariance not positive definite");
    }
    const Vec2 diff = r - p;
    const Vec2 sol = s.solve(diff);
    if (grad_r) *grad_r = 2.0 * sol;
    if (grad_delta) *grad_delta = -1.0;
    return diff.dot(sol) - mdc_threshold(s, g) - delta;
}

EllipseParams ellipse_from_covariance(const Covariance2& s, double gamma,
                                      const SafetyGeometry& g, double delta) {
    if (!s.positive_definite(kEpsDet)) {
        throw std::domain_error("ellipse_from_covariance: covariance not positive definite");
    }
    // Closed-form symmetric 2x2 eigendecomposition.
    const double half_tr = 0.5 * (s.sxx + s.syy);
    const double half_diff = 0.5 * (s.sxx - s.syy);
    const double disc = std::sqrt(half_diff * half_diff + s.sxy * s.sxy);
    const double lam1 = half_tr + disc;
    const double lam2 = s.det() / lam1;  // avoids cancellation for thin ellipses

    double psi = 0.0;
    if (disc > 0.0) {
        psi = 0.5 * std::atan2(2.0 * s.sxy, s.sxx - s.syy);
        if (psi >= M_PI / 2.0) psi -= M_PI;  // fold into [-pi/2, pi/2)
    }

    const double m = g.margin();
    EllipseParams e;
    e.a = gamma * std::sqrt(lam1) * (1.0 - delta) + m;
    e.b = gamma * std::sqrt(lam2) * (1.0 - delta) + m;
    e.psi = psi;
    return e;
}

double elc_residual(const Vec2& r, const Vec2& p, const EllipseParams& e, Vec2* grad_r) {
    const double c = std::cos(e.psi);
    const double s = std::sin(e.psi);
    const Vec2 diff = r - p;
    // q = Rot(psi) (r - p) maps into the ellipse frame.
    const double qx = c * diff.x() + s * diff.y();
    const double qy = -s * diff.x() + c * diff.y();
    const double ia2 = 1.0 / (e.a * e.a);
    const double ib2 = 1.0 / (e.b * e.b);
    if (grad_r) {
        const double gx = 2.0 * qx * ia2;
        const double gy = 2.0 * qy * ib2;
        *grad_r = Vec2(c * gx - s * gy, s * gx + c * gy);
    }
    return qx * qx * ia2 + qy * qy * ib2 - 1.0;
}

double aelc_residual(const Vec2& r, const Vec2& p, const Covariance2& s, double gamma,
                     const SafetyGeometry& g, double delta, Vec2* grad_r,
                     double* grad_delta) {
    const EllipseParams e = ellipse_from_covariance(s, gamma, g, delta);
    const double value = elc_residual(r, p, e, grad_r);
    if (grad_delta) {
        const double c = std::cos(e.psi);
        const double sn = std::sin(e.psi);
        const Vec2 diff = r - p;
        const double qx = c * diff.x() + sn * diff.y();
        const double qy = -sn * diff.x() + c * diff.y();
        // a(delta) = gamma sqrt(lam1) (1-delta) + m, so da/ddelta = -gamma sqrt(lam1)
        const double m = g.margin();
        const double ga = (e.a - m) / (1.0 - delta);  // gamma sqrt(lam1)
        const double gb = (e.b - m) / (1.0 - delta);
        *grad_delta = 2.0 * (qx * qx / (e.a * e.a * e.a) * ga + qy * qy / (e.b * e.b * e.b) * gb);
    }
    return value;
}

}  // namespace socnav
