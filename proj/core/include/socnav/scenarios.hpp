#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "socnav/dynamics.hpp"
#include "socnav/socialcost.hpp"

namespace socnav {

enum class ScenarioKind { circular, random, parallel };

const char* to_string(ScenarioKind k);
ScenarioKind scenario_from_string(const std::string& s);

/// Geometry of the scenario generators. The common sampling area is the
/// square [-area_half, area_half]^2.
struct ScenarioParams {
    double area_half = 4.0;
    double r_inner = 2.0;          ///< circular crossing inner ring radius [m]
    double r_outer = 3.5;          ///< circular crossing outer ring radius [m]
    double band_half_width = 0.5;  ///< parallel crossing robot spawn band [m]
    double edge_band = 0.8;        ///< parallel crossing pedestrian spawn depth [m]
    double separation_slack = 0.1; ///< spawn clearance beyond body contact [m]
    double goal_d_min = 2.0;       ///< robot local goal minimum distance [m]
    double goal_range_eps = 1.0;   ///< slack on the maximum goal distance [m]
    int horizon = 25;
    double v_max = 2.0;
    double dt = 0.1;
    int max_attempts = 10000;      ///< rejection sampling budget
    SafetyGeometry geometry;

    /// d_min and the horizon-reachability bound on the goal distance.
    double goal_d_max() const { return horizon * v_max * dt + goal_range_eps; }
};

/// Fully seeded initial world for one episode.
struct SceneInstance {
    ScenarioKind kind = ScenarioKind::circular;
    std::vector<Vec2> ped_starts;
    std::vector<Vec2> ped_goals;
    RobotState robot_start;
    Vec2 robot_goal{0.0, 0.0};
    std::uint64_t seed = 0;

    int n_ped() const { return static_cast<int>(ped_starts.size()); }
};

/// Thrown when rejection sampling exhausts its attempt budget.
struct GenerationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Pedestrians on the [r_inner, r_outer] annulus with antipodal goals; robot
/// start inside the inner disk.
SceneInstance gen_circular(int n_ped, std::uint64_t seed, const ScenarioParams& params);

/// Starts and goals uniform over the sampling square.
SceneInstance gen_random(int n_ped, std::uint64_t seed, const ScenarioParams& params);

/// Pedestrians alternate between the left and right edges and cross to the
/// mirrored point; robot starts in the central band.
SceneInstance gen_parallel(int n_ped, std::uint64_t seed, const ScenarioParams& params);

SceneInstance generate_scene(ScenarioKind kind, int n_ped, std::uint64_t seed,
                             const ScenarioParams& params);

/// Robot local goal: uniform over the [goal_d_min, goal_d_max] annulus around
/// the start, intersected with the sampling square.
Vec2 sample_robot_goal(const Vec2& robot_start, std::mt19937_64& rng,
                       const ScenarioParams& params);

/// One-line JSON record, replayable via scene_from_json.
std::string scene_to_json(const SceneInstance& scene);
SceneInstance scene_from_json(const std::string& text);

/// splitmix64 seed mixing used to derive per-scene seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c = 0);

}  // namespace socnav
