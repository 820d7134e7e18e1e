#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

namespace socnav {

using Vec2 = Eigen::Vector2d;

/// Wraps an angle into [-pi, pi).
double wrap_angle(double theta);

/// Planar robot pose. theta is kept normalized to [-pi, pi).
struct RobotState {
    double x = 0.0;      ///< position along x axis [m]
    double y = 0.0;      ///< position along y axis [m]
    double theta = 0.0;  ///< heading [rad]

    Vec2 position() const { return Vec2(x, y); }
    bool finite() const;
};

/// Unicycle command: forward and angular velocity.
struct ControlInput {
    double v = 0.0;      ///< linear velocity [m/s]
    double omega = 0.0;  ///< angular velocity [rad/s]

    bool finite() const;
};

/// Box bounds on the control input.
struct ControlBounds {
    double v_min = 0.0;
    double v_max = 2.0;
    double omega_min = -2.0;
    double omega_max = 2.0;

    ControlInput clamp(const ControlInput& u) const;
};

/// One explicit-Euler step of the discrete unicycle model.
/// Throws std::invalid_argument on non-finite state or control.
RobotState step_unicycle(const RobotState& state, const ControlInput& u, double dt);

/// Propagates the unicycle through a control sequence; element k is the state
/// after applying controls[0..k]. Throws on an empty sequence.
std::vector<RobotState> rollout(const RobotState& state0,
                                std::span<const ControlInput> controls, double dt);

}  // namespace socnav
