#pragma once

#include <optional>
#include <string>
#include <vector>

#include "socnav/dynamics.hpp"

namespace socnav {

/// One controller-step snapshot for offline plotting.
struct TraceRow {
    int sim_step = 0;
    RobotState robot;
    ControlInput control;
    std::vector<Vec2> ped_positions;
};

/// Outcome of one (scene, controller) episode.
struct RunRecord {
    std::string scenario;
    int n_ped = 0;
    int scene_id = 0;
    std::string controller;
    std::optional<int> steps_to_target;  ///< simulation steps; absent on timeout
    int collisions = 0;
    bool timeout = false;
    int solver_failures = 0;
    double wall_time_s = 0.0;  ///< simulated episode duration [s]
    std::vector<TraceRow> trace;  ///< filled only when tracing is enabled
};

/// Quartile statistics for one metric.
struct StatsQuartiles {
    double q1 = 0.0;
    double median = 0.0;
    double mean = 0.0;
    double q3 = 0.0;
};

/// Aggregated metrics for one (scenario, n_ped, controller) group. Steps
/// statistics are absent when every episode in the group timed out.
struct MetricsSummary {
    std::string scenario;
    int n_ped = 0;
    std::string controller;
    std::optional<StatsQuartiles> steps_to_target;
    StatsQuartiles collisions;
    StatsQuartiles timeouts;
};

}  // namespace socnav
