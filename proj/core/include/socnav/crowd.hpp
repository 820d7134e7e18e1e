#pragma once

#include <random>

#include "socnav/nmpc.hpp"
#include "socnav/records.hpp"
#include "socnav/scenarios.hpp"

namespace socnav {

/// Goal-attraction / inter-agent-repulsion social-force parameters.
/// heading_gain is declared for configuration completeness; the reduced model
/// tracks heading kinematically and applies no heading torque.
struct SfmParams {
    double desired_speed = 1.5;      ///< [m/s]
    double relaxation_time = 0.5;    ///< tau [s]
    double repulsion_strength = 2.0; ///< A
    double repulsion_range = 0.35;   ///< B [m]
    double heading_gain = 3.0;       ///< [1/s], unused by the force law
};

/// Pedestrian with its oscillation endpoints.
struct SimPedestrian {
    PedestrianState state;
    Vec2 goal{0.0, 0.0};
    Vec2 origin{0.0, 0.0};  ///< swap partner once the goal is reached
};

/// Mutable world snapshot advanced at the simulation time scale.
struct WorldState {
    RobotState robot;
    std::vector<SimPedestrian> pedestrians;
    int sim_step = 0;
    std::mt19937_64 rng;  ///< only consulted for coincident-pedestrian ties

    std::vector<PedestrianState> pedestrian_states() const;
};

/// Social-force acceleration on one pedestrian. The robot exerts no force.
/// Coincident pedestrians get a deterministic random repulsion direction.
Vec2 sfm_accel(const PedestrianState& ped, const std::vector<PedestrianState>& others,
               const Vec2& goal, const SfmParams& params, std::mt19937_64& rng);

/// One simulation step: semi-implicit pedestrian integration with the speed
/// capped at 1.3x desired_speed, goal swap within 0.3 m, robot advanced by
/// the held control.
void step_world(WorldState& world, const ControlInput& robot_control, double dt_sim,
                const SfmParams& params);

/// True iff some pedestrian center is closer than r_rob + r_ped; also returns
/// the offending ids.
bool detect_collision(const WorldState& world, const SafetyGeometry& g,
                      std::vector<int>* colliding_ids = nullptr);

/// Target-reach criterion |r - target| - r_rob < eps.
bool target_reached(const WorldState& world, const Vec2& target,
                    const SafetyGeometry& g, double eps);

/// Turns per-step colliding id sets into collision events: one event per
/// pedestrian per contiguous overlap interval.
class CollisionCounter {
  public:
    /// Feeds the ids colliding at the current sim step; returns new events.
    int update(const std::vector<int>& colliding_ids);
    int events() const { return events_; }

  private:
    std::vector<int> active_;
    int events_ = 0;
};

/// Everything an episode needs besides the scene and the controller.
struct SimParams {
    int horizon = 25;
    double dt = 0.1;          ///< controller interval [s]
    double dt_sim = 0.01;     ///< simulation interval [s]
    int t_sim = 2000;         ///< simulation step budget
    int h_ghost = 20;         ///< ghost track retention [controller steps]
    double target_eps = 0.1;  ///< target reach threshold [m]
    SensorConfig sensor;
    SafetyGeometry geometry;
    CovarianceGrowthParams growth;
    SfmParams sfm;
    ControlBounds bounds;
    SolverParams solver;
    bool record_trace = false;
};

/// Full receding-horizon episode: sense / ghost_update / mpc_step every
/// dt/dt_sim simulation steps, world stepping and collision/target checks
/// every step. Deterministic given (scene, spec, params).
RunRecord run_episode(const SceneInstance& scene, const ControllerSpec& spec,
                      const SimParams& params, int scene_id = 0);

}  // namespace socnav
