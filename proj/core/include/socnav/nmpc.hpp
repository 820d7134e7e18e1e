#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "socnav/controllers.hpp"

namespace socnav {

/// Augmented-Lagrangian solver knobs. iter_max caps the total number of
/// accepted gradient steps across all outer iterations.
struct SolverParams {
    double tol_con = 1e-3;   ///< max constraint violation at convergence
    double tol_obj = 1e-6;   ///< outer-loop objective decrease threshold
    int iter_max = 200;
    int inner_iters = 25;    ///< gradient steps per outer iteration
    double mu_init = 10.0;
    double mu_growth = 10.0;
    double mu_max = 1e8;
    double armijo_c = 1e-4;
    bool record_history = false;  ///< keep accepted (violation, cost) pairs
};

/// Receding-horizon invocation parameters shared by every controller.
struct MpcParams {
    int horizon = 25;
    double dt = 0.1;
    Vec2 target{0.0, 0.0};
    ControlBounds bounds;
    SolverParams solver;
    double target_eps = 0.1;  ///< at-goal short-circuit radius [m]
};

/// Cost term attached to one rollout position.
struct PositionCostTerm {
    std::function<double(const Vec2& r, Vec2& grad_r)> eval;
};

/// Inequality residual attached to one rollout position; feasible iff >= 0.
/// grad_delta is only consulted on adaptive problems.
struct ConstraintClosure {
    int step = 1;  ///< 1-based horizon step; pairs with rollout position step-1
    std::function<double(const Vec2& r, double delta, Vec2& grad_r, double& grad_delta)>
        eval;
};

/// Single-shooting transcription: decision variables are the H controls plus
/// one shared delta on adaptive problems; positions inside the closures come
/// from the unicycle rollout.
struct HorizonProblem {
    int horizon = 0;
    double dt = 0.1;
    RobotState initial_state;
    Vec2 target{0.0, 0.0};
    ControlBounds bounds;
    bool adaptive = false;
    double delta_min = 0.0;
    double delta_max = 0.0;
    Weights weights;
    /// step_costs[k] holds the cost terms evaluated at rollout position k
    /// (horizon step k+1).
    std::vector<std::vector<PositionCostTerm>> step_costs;
    std::vector<ConstraintClosure> constraints;
};

enum class SolveStatus { converged, max_iter, infeasible };

const char* to_string(SolveStatus s);

struct SolveReport {
    SolveStatus status = SolveStatus::max_iter;
    int iterations = 0;
    double final_cost = 0.0;
    double max_constraint_violation = 0.0;
    ControlInput first_control;
    std::optional<double> delta;
    /// Best-found control sequence; source of the next warm start.
    std::vector<ControlInput> controls;
    /// Accepted-iterate (violation, cost) pairs when record_history is set.
    std::vector<std::pair<double, double>> history;
    std::string message;
};

/// Builds the horizon problem for one controller spec against the current
/// track set. Throws std::invalid_argument on spec/track mismatches (short
/// horizons, missing covariances for Mahalanobis/ellipsoid forms).
HorizonProblem transcribe(const ControllerSpec& spec, const RobotState& state,
                          const std::vector<PredictedTrack>& tracks,
                          const MpcParams& params);

/// Objective value (no constraint penalties) at a control sequence.
double evaluate_objective(const HorizonProblem& problem,
                          std::span<const ControlInput> controls, double delta = 0.0);

/// Largest constraint violation max(0, -c) at a control sequence.
double evaluate_max_violation(const HorizonProblem& problem,
                              std::span<const ControlInput> controls,
                              double delta = 0.0);

/// Projected-gradient augmented-Lagrangian solve. Always returns the
/// best-found iterate (least max-violation, then least cost). Deterministic
/// for identical inputs.
SolveReport solve(const HorizonProblem& problem, const SolverParams& params,
                  const std::vector<ControlInput>* warm_start = nullptr);

/// transcribe + solve with the sample-and-hold contract: returns the first
/// control of the optimized sequence. At the goal it short-circuits to (0,0)
/// without solving; on infeasible solves it falls back to (0,0).
std::pair<ControlInput, SolveReport> mpc_step(
    const ControllerSpec& spec, const RobotState& state,
    const std::vector<PredictedTrack>& tracks, const MpcParams& params,
    const std::vector<ControlInput>* warm_start = nullptr);

/// Shift-by-one warm start: drops the first control and repeats the last.
std::vector<ControlInput> shift_warm_start(std::vector<ControlInput> controls);

}  // namespace socnav
