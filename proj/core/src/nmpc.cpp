#include "socnav/nmpc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace socnav {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::converged: return "converged";
        case SolveStatus::max_iter: return "max_iter";
        case SolveStatus::infeasible: return "infeasible";
    }
    return "unknown";
}

namespace {

struct InvCov {
    double ixx = 1.0, ixy = 0.0, iyy = 1.0;
};

InvCov invert(const Covariance2& s) {
    const double d = s.det();
    return {s.syy / d, -s.sxy / d, s.sxx / d};
}

/// Rollout, objective, constraint penalties and the adjoint-sweep gradient
/// for one horizon problem. Scratch buffers live here so repeated
/// evaluations inside a solve do not allocate.
class ProblemEval {
  public:
    explicit ProblemEval(const HorizonProblem& p) : p_(p) {
        positions_.resize(static_cast<size_t>(p.horizon));
        thetas_.resize(static_cast<size_t>(p.horizon) + 1);
        pos_grads_.resize(static_cast<size_t>(p.horizon));
    }

    int dim() const { return 2 * p_.horizon + (p_.adaptive ? 1 : 0); }

    Eigen::VectorXd project(Eigen::VectorXd z) const {
        for (int k = 0; k < p_.horizon; ++k) {
            z[2 * k] = std::clamp(z[2 * k], p_.bounds.v_min, p_.bounds.v_max);
            z[2 * k + 1] =
                std::clamp(z[2 * k + 1], p_.bounds.omega_min, p_.bounds.omega_max);
        }
        if (p_.adaptive) {
            z[2 * p_.horizon] = std::clamp(z[2 * p_.horizon], p_.delta_min, p_.delta_max);
        }
        return z;
    }

    /// Augmented-Lagrangian value at z; gradient and per-constraint residuals
    /// are filled when the output pointers are given.
    void eval(const Eigen::VectorXd& z, const std::vector<double>& lambda, double mu,
              double& al, double& objective, double& violation,
              Eigen::VectorXd* grad, std::vector<double>* cvals) {
        const int H = p_.horizon;
        const double dt = p_.dt;
        const bool want_grad = grad != nullptr;
        const double delta = p_.adaptive ? z[2 * H] : 0.0;

        // Single-shooting rollout; thetas_[k] is the heading entering step k.
        double x = p_.initial_state.x;
        double y = p_.initial_state.y;
        thetas_[0] = p_.initial_state.theta;
        for (int k = 0; k < H; ++k) {
            const double v = z[2 * k];
            const double th = thetas_[static_cast<size_t>(k)];
            x += v * std::cos(th) * dt;
            y += v * std::sin(th) * dt;
            thetas_[static_cast<size_t>(k) + 1] = wrap_angle(th + z[2 * k + 1] * dt);
            positions_[static_cast<size_t>(k)] = Vec2(x, y);
        }

        objective = 0.0;
        violation = 0.0;
        double penalty = 0.0;
        double dobj_ddelta = 0.0;
        if (want_grad) {
            grad->setZero();
            for (Vec2& g : pos_grads_) g.setZero();
        }

        Vec2 term_grad;
        for (int j = 0; j < H; ++j) {
            for (const PositionCostTerm& term : p_.step_costs[static_cast<size_t>(j)]) {
                objective += term.eval(positions_[static_cast<size_t>(j)], term_grad);
                if (want_grad) pos_grads_[static_cast<size_t>(j)] += term_grad;
            }
        }

        Vec2 cgrad;
        double cgrad_delta = 0.0;
        for (size_t i = 0; i < p_.constraints.size(); ++i) {
            const ConstraintClosure& cc = p_.constraints[i];
            const double c = cc.eval(positions_[static_cast<size_t>(cc.step - 1)], delta,
                                     cgrad, cgrad_delta);
            if (cvals) (*cvals)[i] = c;
            violation = std::max(violation, -c);
            const double lam = lambda.empty() ? 0.0 : lambda[i];
            const double t = lam - mu * c;
            if (t > 0.0) {
                penalty += (t * t - lam * lam) / (2.0 * mu);
                if (want_grad) {
                    pos_grads_[static_cast<size_t>(cc.step - 1)] += -t * cgrad;
                    dobj_ddelta += -t * cgrad_delta;
                }
            } else {
                penalty += -lam * lam / (2.0 * mu);
            }
        }
        violation = std::max(violation, 0.0);

        // Control input cost, plain or augmented with the shared delta.
        if (!p_.adaptive) {
            for (int k = 0; k < H; ++k) {
                const Vec2 u(z[2 * k], z[2 * k + 1]);
                const Vec2 qu = p_.weights.q_u * u;
                objective += u.dot(qu);
                if (want_grad) {
                    (*grad)[2 * k] += 2.0 * qu.x();
                    (*grad)[2 * k + 1] += 2.0 * qu.y();
                }
            }
        } else {
            for (int k = 0; k < H; ++k) {
                const Eigen::Vector3d ub(z[2 * k], z[2 * k + 1], delta);
                const Eigen::Vector3d qub = p_.weights.q_u_bar * ub;
                objective += ub.dot(qub);
                if (want_grad) {
                    (*grad)[2 * k] += 2.0 * qub.x();
                    (*grad)[2 * k + 1] += 2.0 * qub.y();
                    dobj_ddelta += 2.0 * qub.z();
                }
            }
        }

        al = objective + penalty;

        if (!want_grad) return;

        // Adjoint sweep: lam is d(al)/d(state k+1) while visiting step k.
        double lx = pos_grads_[static_cast<size_t>(H) - 1].x();
        double ly = pos_grads_[static_cast<size_t>(H) - 1].y();
        double lth = 0.0;
        for (int k = H - 1; k >= 0; --k) {
            const double th = thetas_[static_cast<size_t>(k)];
            const double c = std::cos(th);
            const double s = std::sin(th);
            (*grad)[2 * k] += dt * (c * lx + s * ly);
            (*grad)[2 * k + 1] += dt * lth;
            if (k >= 1) {
                const double v = z[2 * k];
                lth += v * dt * (c * ly - s * lx);
                lx += pos_grads_[static_cast<size_t>(k) - 1].x();
                ly += pos_grads_[static_cast<size_t>(k) - 1].y();
            }
        }
        if (p_.adaptive) (*grad)[2 * H] += dobj_ddelta;
    }

  private:
    const HorizonProblem& p_;
    std::vector<Vec2> positions_;
    std::vector<double> thetas_;
    std::vector<Vec2> pos_grads_;
};

}  // namespace

HorizonProblem transcribe(const ControllerSpec& spec, const RobotState& state,
                          const std::vector<PredictedTrack>& tracks,
                          const MpcParams& params) {
    if (params.horizon < 1) {
        throw std::invalid_argument("transcribe: horizon must be >= 1");
    }
    if (!state.finite()) {
        throw std::invalid_argument("transcribe: non-finite robot state");
    }
    const int H = params.horizon;
    const bool needs_cov = constraint_uses_covariance(spec.constraint) ||
                           spec.cost == CostComponent::mahalanobis;
    for (const PredictedTrack& t : tracks) {
        if (static_cast<int>(t.means.size()) < H) {
            throw std::invalid_argument("transcribe: track " + std::to_string(t.ped_id) +
                                        " prediction shorter than the horizon");
        }
        if (needs_cov && static_cast<int>(t.covariances.size()) < H) {
            throw std::invalid_argument("transcribe: track " + std::to_string(t.ped_id) +
                                        " lacks covariances required by " + spec.name);
        }
    }

    HorizonProblem p;
    p.horizon = H;
    p.dt = params.dt;
    p.initial_state = state;
    p.target = params.target;
    p.bounds = params.bounds;
    p.weights = spec.weights;
    p.adaptive = spec.adaptive();
    if (p.adaptive) {
        if (spec.constraint == ConstraintType::aelc) {
            p.delta_min = 0.0;
            p.delta_max = 0.5;
        } else {
            // Relaxation floor: the effective Euclidean margin never drops
            // below body contact.
            const double m = spec.geometry.margin();
            const double contact = spec.geometry.contact_distance();
            p.delta_min = contact * contact - m * m;
            p.delta_max = 0.0;
        }
    }

    p.step_costs.resize(static_cast<size_t>(H));

    // Normalized target distance cost at every rollout position; the entry at
    // the horizon end is the terminal cost.
    const Vec2 r0 = state.position();
    const Vec2 target = params.target;
    const double q_r = spec.weights.q_r;
    for (int j = 0; j < H; ++j) {
        p.step_costs[static_cast<size_t>(j)].push_back(PositionCostTerm{
            [r0, target, q_r](const Vec2& r, Vec2& grad) {
                return target_cost(r, r0, target, q_r, &grad);
            }});
    }

    if (spec.cost == CostComponent::euclidean && !tracks.empty()) {
        const double q_ed = spec.weights.q_ed;
        for (int j = 0; j < H; ++j) {
            std::vector<Vec2> peds;
            peds.reserve(tracks.size());
            for (const PredictedTrack& t : tracks) peds.push_back(t.means[static_cast<size_t>(j)]);
            p.step_costs[static_cast<size_t>(j)].push_back(PositionCostTerm{
                [peds = std::move(peds), q_ed](const Vec2& r, Vec2& grad) {
                    return ed_cost(r, peds, q_ed, &grad);
                }});
        }
    } else if (spec.cost == CostComponent::mahalanobis && !tracks.empty()) {
        struct Entry {
            Vec2 p;
            InvCov inv;
        };
        const double q_md = spec.weights.q_md;
        for (int j = 0; j < H; ++j) {
            std::vector<Entry> entries;
            entries.reserve(tracks.size());
            for (const PredictedTrack& t : tracks) {
                const Covariance2& s = t.covariances[static_cast<size_t>(j)];
                if (!s.positive_definite(kEpsDet)) {
                    throw std::domain_error("transcribe: track " + std::to_string(t.ped_id) +
                                            " covariance not positive definite");
                }
                entries.push_back({t.means[static_cast<size_t>(j)], invert(s)});
            }
            p.step_costs[static_cast<size_t>(j)].push_back(PositionCostTerm{
                [entries = std::move(entries), q_md](const Vec2& r, Vec2& grad) {
                    grad.setZero();
                    double cost = 0.0;
                    for (const Entry& e : entries) {
                        const Vec2 diff = r - e.p;
                        const Vec2 sol(e.inv.ixx * diff.x() + e.inv.ixy * diff.y(),
                                       e.inv.ixy * diff.x() + e.inv.iyy * diff.y());
                        const double d2 = diff.dot(sol);
                        if (d2 < kEpsDiv * kEpsDiv) {
                            cost += q_md / (kEpsDiv * kEpsDiv);
                            continue;
                        }
                        cost += q_md / d2;
                        grad += -2.0 * q_md / (d2 * d2) * sol;
                    }
                    return cost;
                }});
        }
    }

    if (spec.constraint != ConstraintType::none) {
        const SafetyGeometry g = spec.geometry;
        p.constraints.reserve(tracks.size() * static_cast<size_t>(H));
        for (const PredictedTrack& t : tracks) {
            for (int j = 0; j < H; ++j) {
                const Vec2 pj = t.means[static_cast<size_t>(j)];
                ConstraintClosure cc;
                cc.step = j + 1;
                switch (spec.constraint) {
                    case ConstraintType::edc:
                        cc.eval = [pj, g](const Vec2& r, double, Vec2& gr, double& gd) {
                            gd = 0.0;
                            return edc_residual(r, pj, g, &gr);
                        };
                        break;
                    case ConstraintType::aedc:
                        cc.eval = [pj, g](const Vec2& r, double delta, Vec2& gr, double& gd) {
                            return edc_delta_residual(r, pj, g, delta, &gr, &gd);
                        };
                        break;
                    case ConstraintType::mdc:
                    case ConstraintType::amdc: {
                        const Covariance2& s = t.covariances[static_cast<size_t>(j)];
                        const double kappa = mdc_threshold(s, g);
                        const InvCov ic = invert(s);
                        const bool adaptive = spec.constraint == ConstraintType::amdc;
                        cc.eval = [pj, ic, kappa, adaptive](const Vec2& r, double delta,
                                                            Vec2& gr, double& gd) {
                            const Vec2 diff = r - pj;
                            const Vec2 sol(ic.ixx * diff.x() + ic.ixy * diff.y(),
                                           ic.ixy * diff.x() + ic.iyy * diff.y());
                            gr = 2.0 * sol;
                            gd = adaptive ? -1.0 : 0.0;
                            return diff.dot(sol) - kappa - (adaptive ? delta : 0.0);
                        };
                        break;
                    }
                    case ConstraintType::elc: {
                        const EllipseParams e = ellipse_from_covariance(
                            t.covariances[static_cast<size_t>(j)], spec.gamma, g, 0.0);
                        cc.eval = [pj, e](const Vec2& r, double, Vec2& gr, double& gd) {
                            gd = 0.0;
                            return elc_residual(r, pj, e, &gr);
                        };
                        break;
                    }
                    case ConstraintType::aelc: {
                        const Covariance2 s = t.covariances[static_cast<size_t>(j)];
                        const double gamma = spec.gamma;
                        cc.eval = [pj, s, gamma, g](const Vec2& r, double delta, Vec2& gr,
                                                    double& gd) {
                            return aelc_residual(r, pj, s, gamma, g, delta, &gr, &gd);
                        };
                        break;
                    }
                    case ConstraintType::none:
                        break;
                }
                p.constraints.push_back(std::move(cc));
            }
        }
    }
    return p;
}

double evaluate_objective(const HorizonProblem& problem,
                          std::span<const ControlInput> controls, double delta) {
    if (static_cast<int>(controls.size()) != problem.horizon) {
        throw std::invalid_argument("evaluate_objective: control count != horizon");
    }
    Eigen::VectorXd z(2 * problem.horizon + (problem.adaptive ? 1 : 0));
    for (int k = 0; k < problem.horizon; ++k) {
        z[2 * k] = controls[static_cast<size_t>(k)].v;
        z[2 * k + 1] = controls[static_cast<size_t>(k)].omega;
    }
    if (problem.adaptive) z[2 * problem.horizon] = delta;
    ProblemEval ev(problem);
    double al = 0.0, obj = 0.0, viol = 0.0;
    std::vector<double> lambda;
    ev.eval(z, lambda, 1.0, al, obj, viol, nullptr, nullptr);
    return obj;
}

double evaluate_max_violation(const HorizonProblem& problem,
                              std::span<const ControlInput> controls, double delta) {
    if (static_cast<int>(controls.size()) != problem.horizon) {
        throw std::invalid_argument("evaluate_max_violation: control count != horizon");
    }
    Eigen::VectorXd z(2 * problem.horizon + (problem.adaptive ? 1 : 0));
    for (int k = 0; k < problem.horizon; ++k) {
        z[2 * k] = controls[static_cast<size_t>(k)].v;
        z[2 * k + 1] = controls[static_cast<size_t>(k)].omega;
    }
    if (problem.adaptive) z[2 * problem.horizon] = delta;
    ProblemEval ev(problem);
    double al = 0.0, obj = 0.0, viol = 0.0;
    std::vector<double> lambda;
    ev.eval(z, lambda, 1.0, al, obj, viol, nullptr, nullptr);
    return viol;
}

SolveReport solve(const HorizonProblem& problem, const SolverParams& params,
                  const std::vector<ControlInput>* warm_start) {
    ProblemEval ev(problem);
    const int H = problem.horizon;
    const int n = ev.dim();

    Eigen::VectorXd z(n);
    if (warm_start && static_cast<int>(warm_start->size()) == H) {
        for (int k = 0; k < H; ++k) {
            z[2 * k] = (*warm_start)[static_cast<size_t>(k)].v;
            z[2 * k + 1] = (*warm_start)[static_cast<size_t>(k)].omega;
        }
    } else {
        // Cold start: forward drift breaks the standstill stationary point.
        for (int k = 0; k < H; ++k) {
            z[2 * k] = 0.5 * problem.bounds.v_max;
            z[2 * k + 1] = 0.0;
        }
    }
    if (problem.adaptive) z[2 * H] = 0.0;
    z = ev.project(std::move(z));

    std::vector<double> lambda(problem.constraints.size(), 0.0);
    std::vector<double> cvals(problem.constraints.size(), 0.0);
    double mu = params.mu_init;

    Eigen::VectorXd grad(n);
    double al = 0.0, obj = 0.0, viol = 0.0;
    ev.eval(z, lambda, mu, al, obj, viol, &grad, &cvals);

    SolveReport rep;
    auto export_controls = [&](const Eigen::VectorXd& zz) {
        rep.controls.resize(static_cast<size_t>(H));
        for (int k = 0; k < H; ++k) {
            rep.controls[static_cast<size_t>(k)] = {zz[2 * k], zz[2 * k + 1]};
        }
        rep.first_control = rep.controls.front();
        if (problem.adaptive) rep.delta = zz[2 * H];
    };

    if (!std::isfinite(al) || !std::isfinite(obj)) {
        rep.status = SolveStatus::infeasible;
        rep.message = "non-finite objective at the initial point";
        rep.final_cost = obj;
        rep.max_constraint_violation = viol;
        export_controls(z);
        return rep;
    }

    double best_viol = viol;
    double best_cost = obj;
    Eigen::VectorXd best_z = z;
    auto consider = [&](double v, double c, const Eigen::VectorXd& zz) {
        if (v < best_viol || (v == best_viol && c <= best_cost)) {
            best_viol = v;
            best_cost = c;
            best_z = zz;
        }
    };
    if (params.record_history) rep.history.emplace_back(viol, obj);

    int iters = 0;
    double alpha = 0.1 / std::max(1.0, grad.lpNorm<Eigen::Infinity>());
    double prev_outer_viol = viol;
    bool converged = false;

    while (iters < params.iter_max) {
        const double f_outer_start = obj;
        int inner = 0;
        while (inner < params.inner_iters && iters < params.iter_max) {
            bool accepted = false;
            double step_norm = 0.0;
            for (int bt = 0; bt < 40; ++bt) {
                Eigen::VectorXd z_new = ev.project(z - alpha * grad);
                const Eigen::VectorXd dz = z_new - z;
                step_norm = dz.lpNorm<Eigen::Infinity>();
                if (step_norm == 0.0) break;  // projected-stationary
                double al_new = 0.0, obj_new = 0.0, viol_new = 0.0;
                ev.eval(z_new, lambda, mu, al_new, obj_new, viol_new, nullptr, nullptr);
                if (std::isfinite(al_new) &&
                    al_new <= al + params.armijo_c * grad.dot(dz)) {
                    z = std::move(z_new);
                    ev.eval(z, lambda, mu, al, obj, viol, &grad, &cvals);
                    consider(viol, obj, z);
                    if (params.record_history) rep.history.emplace_back(viol, obj);
                    alpha = std::min(alpha * 1.5, 1e3);
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
                if (alpha < 1e-16) break;
            }
            if (!accepted) break;
            ++iters;
            ++inner;
            if (step_norm < 1e-10) break;
        }

        const double decrease = f_outer_start - obj;
        if (viol <= params.tol_con && decrease < params.tol_obj) {
            converged = true;
            break;
        }

        for (size_t i = 0; i < lambda.size(); ++i) {
            lambda[i] = std::max(0.0, lambda[i] - mu * cvals[i]);
        }
        if (viol > 0.5 * prev_outer_viol && viol > params.tol_con) {
            mu = std::min(mu * params.mu_growth, params.mu_max);
        }
        prev_outer_viol = viol;
        ev.eval(z, lambda, mu, al, obj, viol, &grad, &cvals);
        ++iters;  // outer pass consumes budget even when the inner loop stalls
    }

    rep.status = converged ? SolveStatus::converged : SolveStatus::max_iter;
    rep.iterations = iters;
    rep.final_cost = best_cost;
    rep.max_constraint_violation = best_viol;
    export_controls(best_z);
    return rep;
}

std::pair<ControlInput, SolveReport> mpc_step(
    const ControllerSpec& spec, const RobotState& state,
    const std::vector<PredictedTrack>& tracks, const MpcParams& params,
    const std::vector<ControlInput>* warm_start) {
    if ((state.position() - params.target).norm() < params.target_eps) {
        SolveReport rep;
        rep.status = SolveStatus::converged;
        rep.iterations = 0;
        rep.final_cost = 0.0;
        rep.max_constraint_violation = 0.0;
        rep.first_control = {0.0, 0.0};
        rep.controls.assign(static_cast<size_t>(params.horizon), ControlInput{0.0, 0.0});
        if (spec.adaptive()) rep.delta = 0.0;
        rep.message = "at goal";
        return {rep.first_control, rep};
    }
    const HorizonProblem problem = transcribe(spec, state, tracks, params);
    SolveReport rep = solve(problem, params.solver, warm_start);
    const ControlInput u =
        rep.status == SolveStatus::infeasible ? ControlInput{0.0, 0.0} : rep.first_control;
    return {u, rep};
}

std::vector<ControlInput> shift_warm_start(std::vector<ControlInput> controls) {
    if (controls.empty()) return controls;
    controls.erase(controls.begin());
    controls.push_back(controls.empty() ? ControlInput{0.0, 0.0} : controls.back());
    return controls;
}

}  // namespace socnav
