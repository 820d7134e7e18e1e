#include "socnav/crowd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace socnav {

namespace {
constexpr double kGoalSwapTol = 0.3;      // pedestrian goal oscillation radius [m]
constexpr double kSpeedCapFactor = 1.3;   // cap relative to the desired speed
constexpr double kCoincident = 1e-9;      // below this two agents share a point
constexpr double kPedBodyDiameter = 0.6;  // 2 * r_ped, repulsion contact offset [m]
}  // namespace

std::vector<PedestrianState> WorldState::pedestrian_states() const {
    std::vector<PedestrianState> out;
    out.reserve(pedestrians.size());
    for (const SimPedestrian& p : pedestrians) out.push_back(p.state);
    return out;
}

Vec2 sfm_accel(const PedestrianState& ped, const std::vector<PedestrianState>& others,
               const Vec2& goal, const SfmParams& params, std::mt19937_64& rng) {
    Vec2 accel = Vec2::Zero();

    const Vec2 to_goal = goal - ped.position;
    const double goal_dist = to_goal.norm();
    if (goal_dist > kCoincident) {
        const Vec2 desired_vel = params.desired_speed * to_goal / goal_dist;
        accel += (desired_vel - ped.velocity) / params.relaxation_time;
    } else {
        accel += -ped.velocity / params.relaxation_time;
    }

    for (const PedestrianState& other : others) {
        if (other.id == ped.id) continue;
        const Vec2 away = ped.position - other.position;
        const double d = away.norm();
        Vec2 dir;
        if (d < kCoincident) {
            std::uniform_real_distribution<double> angle(-M_PI, M_PI);
            const double a = angle(rng);
            dir = Vec2(std::cos(a), std::sin(a));
        } else {
            dir = away / d;
        }
        accel += params.repulsion_strength *
                 std::exp((kPedBodyDiameter - d) / params.repulsion_range) * dir;
    }
    return accel;
}

void step_world(WorldState& world, const ControlInput& robot_control, double dt_sim,
                const SfmParams& params) {
    if (dt_sim <= 0.0) throw std::invalid_argument("step_world: dt_sim must be positive");

    const std::vector<PedestrianState> snapshot = world.pedestrian_states();
    std::vector<Vec2> accels;
    accels.reserve(world.pedestrians.size());
    for (size_t i = 0; i < world.pedestrians.size(); ++i) {
        accels.push_back(
            sfm_accel(snapshot[i], snapshot, world.pedestrians[i].goal, params, world.rng));
    }

    const double speed_cap = params.desired_speed * kSpeedCapFactor;
    for (size_t i = 0; i < world.pedestrians.size(); ++i) {
        SimPedestrian& ped = world.pedestrians[i];
        ped.state.velocity += accels[i] * dt_sim;
        const double speed = ped.state.velocity.norm();
        if (speed > speed_cap) ped.state.velocity *= speed_cap / speed;
        ped.state.position += ped.state.velocity * dt_sim;
        if ((ped.state.position - ped.goal).norm() < kGoalSwapTol) {
            std::swap(ped.goal, ped.origin);
        }
    }

    world.robot = step_unicycle(world.robot, robot_control, dt_sim);
    world.sim_step += 1;
}

bool detect_collision(const WorldState& world, const SafetyGeometry& g,
                      std::vector<int>* colliding_ids) {
    if (colliding_ids) colliding_ids->clear();
    const Vec2 r = world.robot.position();
    bool any = false;
    for (const SimPedestrian& ped : world.pedestrians) {
        if ((r - ped.state.position).norm() < g.contact_distance()) {
            any = true;
            if (colliding_ids) colliding_ids->push_back(ped.state.id);
        }
    }
    return any;
}

bool target_reached(const WorldState& world, const Vec2& target, const SafetyGeometry& g,
                    double eps) {
    return (world.robot.position() - target).norm() - g.r_rob < eps;
}

int CollisionCounter::update(const std::vector<int>& colliding_ids) {
    int new_events = 0;
    for (int id : colliding_ids) {
        if (std::find(active_.begin(), active_.end(), id) == active_.end()) {
            ++new_events;
        }
    }
    active_ = colliding_ids;
    events_ += new_events;
    return new_events;
}

RunRecord run_episode(const SceneInstance& scene, const ControllerSpec& spec,
                      const SimParams& params, int scene_id) {
    const double ratio = params.dt / params.dt_sim;
    const int steps_per_control = static_cast<int>(std::lround(ratio));
    if (steps_per_control < 1 || std::abs(ratio - steps_per_control) > 1e-9) {
        throw std::invalid_argument("run_episode: dt must be an integer multiple of dt_sim");
    }

    WorldState world;
    world.robot = scene.robot_start;
    world.rng.seed(mix_seed(scene.seed, 0x9e3779b97f4a7c15ull));
    for (int i = 0; i < scene.n_ped(); ++i) {
        SimPedestrian ped;
        ped.state.id = i;
        ped.state.position = scene.ped_starts[static_cast<size_t>(i)];
        ped.state.velocity = Vec2::Zero();
        ped.goal = scene.ped_goals[static_cast<size_t>(i)];
        ped.origin = scene.ped_starts[static_cast<size_t>(i)];
        world.pedestrians.push_back(ped);
    }

    MpcParams mpc;
    mpc.horizon = params.horizon;
    mpc.dt = params.dt;
    mpc.target = scene.robot_goal;
    mpc.bounds = params.bounds;
    mpc.solver = params.solver;
    mpc.target_eps = params.target_eps;

    RunRecord record;
    record.scenario = to_string(scene.kind);
    record.n_ped = scene.n_ped();
    record.scene_id = scene_id;
    record.controller = spec.name;

    std::vector<PredictedTrack> tracks;
    std::vector<ControlInput> warm;
    bool have_warm = false;
    ControlInput held{0.0, 0.0};
    CollisionCounter collisions;
    std::vector<int> colliding;
    bool reached = false;

    while (world.sim_step < params.t_sim) {
        if (target_reached(world, scene.robot_goal, params.geometry, params.target_eps)) {
            reached = true;
            break;
        }
        if (world.sim_step % steps_per_control == 0) {
            const std::vector<PedestrianState> visible =
                sense(world.robot, world.pedestrian_states(), params.sensor);
            tracks = ghost_update(tracks, visible, params.horizon, params.h_ghost,
                                  params.dt, params.growth);
            try {
                const auto [control, report] =
                    mpc_step(spec, world.robot, tracks, mpc, have_warm ? &warm : nullptr);
                held = control;
                warm = shift_warm_start(report.controls);
                have_warm = !warm.empty();
                if (report.status == SolveStatus::infeasible) {
                    record.solver_failures += 1;
                }
            } catch (const std::exception&) {
                record.solver_failures += 1;
                held = {0.0, 0.0};
            }
            if (params.record_trace) {
                TraceRow row;
                row.sim_step = world.sim_step;
                row.robot = world.robot;
                row.control = held;
                for (const SimPedestrian& p : world.pedestrians) {
                    row.ped_positions.push_back(p.state.position);
                }
                record.trace.push_back(std::move(row));
            }
        }
        step_world(world, held, params.dt_sim, params.sfm);
        detect_collision(world, params.geometry, &colliding);
        collisions.update(colliding);
    }
    if (!reached &&
        target_reached(world, scene.robot_goal, params.geometry, params.target_eps)) {
        reached = true;  // reached exactly on the last budgeted step
    }

    record.collisions = collisions.events();
    record.timeout = !reached;
    if (reached) record.steps_to_target = world.sim_step;
    record.wall_time_s = world.sim_step * params.dt_sim;
    return record;
}

}  // namespace socnav
