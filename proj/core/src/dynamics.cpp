#include "socnav/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace socnav {

double wrap_angle(double theta) {
    double wrapped = theta - 2.0 * M_PI * std::floor((theta + M_PI) / (2.0 * M_PI));
    // floor rounding can land exactly on pi; fold it back.
    if (wrapped >= M_PI) wrapped -= 2.0 * M_PI;
    return wrapped;
}

bool RobotState::finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(theta);
}

bool ControlInput::finite() const {
    return std::isfinite(v) && std::isfinite(omega);
}

ControlInput ControlBounds::clamp(const ControlInput& u) const {
    return {std::clamp(u.v, v_min, v_max), std::clamp(u.omega, omega_min, omega_max)};
}

RobotState step_unicycle(const RobotState& state, const ControlInput& u, double dt) {
    if (!state.finite() || !u.finite() || !std::isfinite(dt)) {
        throw std::invalid_argument("step_unicycle: non-finite state or control");
    }
    if (dt <= 0.0) {
        throw std::invalid_argument("step_unicycle: dt must be positive");
    }
    RobotState next;
    next.x = state.x + u.v * std::cos(state.theta) * dt;
    next.y = state.y + u.v * std::sin(state.theta) * dt;
    next.theta = wrap_angle(state.theta + u.omega * dt);
    return next;
}

std::vector<RobotState> rollout(const RobotState& state0,
                                std::span<const ControlInput> controls, double dt) {
    if (controls.empty()) {
        throw std::invalid_argument("rollout: empty control sequence");
    }
    std::vector<RobotState> states;
    states.reserve(controls.size());
    RobotState s = state0;
    for (const ControlInput& u : controls) {
        s = step_unicycle(s, u, dt);
        states.push_back(s);
    }
    return states;
}

}  // namespace socnav
