#include "peco/dep.hpp"

#include <algorithm>
#include <cmath>

#include "peco/errors.hpp"

namespace peco {

namespace {

double constraint_value(const DepInstance& inst, std::size_t materialized_index,
                        const std::vector<double>& x, const EvalOptions& opts = {}) {
    const auto& mc = inst.constraints[materialized_index];
    return evaluate(inst.spec.constraints[mc.constraint_index], x,
                    inst.embedded.scenarios[mc.scenario_index], opts);
}

std::vector<double> clip_to_bounds(const ProblemSpec& spec, std::vector<double> x) {
    for (std::size_t k = 0; k < x.size(); ++k)
        x[k] = std::min(spec.upper[k], std::max(spec.lower[k], x[k]));
    return x;
}

std::vector<std::size_t> active_points(const DepInstance& inst, const std::vector<double>& x,
                                       double eps_act) {
    std::vector<bool> active(inst.embedded.size(), false);
    for (std::size_t i = 0; i < inst.constraints.size(); ++i)
        if (std::abs(constraint_value(inst, i, x)) <= eps_act)
            active[inst.constraints[i].scenario_index] = true;
    std::vector<std::size_t> out;
    for (std::size_t s = 0; s < active.size(); ++s)
        if (active[s]) out.push_back(s);
    return out;
}

Solution solve_penalty(const DepInstance& inst, const SolverConfig& cfg) {
    const ProblemSpec& spec = inst.spec;
    for (const auto& c : spec.constraints)
        if (contains_abs(c) && cfg.abs_smoothing <= 0.0)
            throw Error(ErrorCode::ConfigError,
                        "constraints contain abs(); set abs_smoothing to solve with the "
                        "first-order backend");
    const EvalOptions opts{cfg.abs_smoothing};
    const std::vector<double> no_xi(spec.u, 0.0);

    std::vector<double> x = cfg.start.empty() ? spec.start : cfg.start;
    if (x.size() != spec.n) throw Error(ErrorCode::ConfigError, "start dimension mismatch");
    x = clip_to_bounds(spec, x);

    // F_mu(x) = f(x) + mu * sum max(0, g_k(x))^2, minimized by projected
    // gradient with backtracking; mu grows until the iterate is feasible.
    auto penalized = [&](const std::vector<double>& p, double mu) {
        double value = evaluate(spec.objective, p, no_xi, opts);
        for (std::size_t i = 0; i < inst.constraints.size(); ++i) {
            double g = constraint_value(inst, i, p, opts);
            if (g > 0.0) value += mu * g * g;
        }
        return value;
    };
    auto penalized_gradient = [&](const std::vector<double>& p, double mu) {
        std::vector<double> grad = gradient(spec.objective, p, no_xi, opts);
        for (std::size_t i = 0; i < inst.constraints.size(); ++i) {
            double g = constraint_value(inst, i, p, opts);
            if (g <= 0.0) continue;
            const auto& mc = inst.constraints[i];
            std::vector<double> gg = gradient(spec.constraints[mc.constraint_index], p,
                                              inst.embedded.scenarios[mc.scenario_index], opts);
            for (std::size_t k = 0; k < spec.n; ++k) grad[k] += mu * 2.0 * g * gg[k];
        }
        return grad;
    };

    std::size_t total_iterations = 0;
    double mu = cfg.mu_initial;
    double viol = max_violation(inst, x);
    for (std::size_t round = 0; round < cfg.max_rounds; ++round) {
        for (std::size_t it = 0; it < cfg.max_inner_iterations; ++it) {
            std::vector<double> grad = penalized_gradient(x, mu);

            // projected-gradient stationarity: ||x - clip(x - grad)||
            double stat = 0.0;
            for (std::size_t k = 0; k < spec.n; ++k) {
                double moved = std::min(spec.upper[k], std::max(spec.lower[k], x[k] - grad[k]));
                stat = std::max(stat, std::abs(x[k] - moved));
            }
            double scale = std::max(1.0, std::abs(evaluate(spec.objective, x, no_xi, opts)));
            if (stat <= cfg.gradient_tolerance * scale) break;

            double f0 = penalized(x, mu);
            double step = cfg.step_initial;
            bool accepted = false;
            for (std::size_t h = 0; h < cfg.max_halvings; ++h) {
                std::vector<double> trial(spec.n);
                double directional = 0.0;
                for (std::size_t k = 0; k < spec.n; ++k) {
                    trial[k] =
                        std::min(spec.upper[k], std::max(spec.lower[k], x[k] - step * grad[k]));
                    directional += grad[k] * (x[k] - trial[k]);
                }
                double ftrial = penalized(trial, mu);
                if (f0 - ftrial >= cfg.armijo * directional && ftrial < f0) {
                    x = std::move(trial);
                    accepted = true;
                    break;
                }
                step *= cfg.step_shrink;
            }
            ++total_iterations;
            if (!accepted) break;  // no representable decrease left at this mu
        }
        viol = max_violation(inst, x);
        if (viol <= cfg.eps_feas) break;
        mu *= cfg.mu_factor;
    }

    Solution s;
    s.x_star = x;
    s.objective_value = evaluate(spec.objective, x, no_xi, opts);
    s.solver_id = kSolverBuiltinPenalty;
    s.start = cfg.start.empty() ? spec.start : cfg.start;
    s.iterations = total_iterations;
    if (viol <= cfg.eps_feas)
        s.status = SolveStatus::Optimal;
    else if (viol > std::sqrt(cfg.eps_feas))
        s.status = SolveStatus::Infeasible;
    else
        s.status = SolveStatus::MaxIterations;
    s.active_data_points = active_points(inst, x, cfg.eps_act);
    return s;
}

Solution solve_grid(const DepInstance& inst, const SolverConfig& cfg) {
    const ProblemSpec& spec = inst.spec;
    if (spec.n > 2)
        throw Error(ErrorCode::GridOracleDimension,
                    "exhaustive grid oracle supports n <= 2, got n = " + std::to_string(spec.n));
    const std::vector<double> no_xi(spec.u, 0.0);
    const std::size_t nodes = cfg.grid_nodes;
    if (nodes < 2) throw Error(ErrorCode::ConfigError, "grid needs at least 2 nodes per axis");

    // node(k) = lo + (k * span) / (nodes - 1); multiply before divide keeps
    // integer-valued nodes exact for integer spans.
    auto axis_node = [&](std::size_t axis, std::size_t k) {
        return spec.lower[axis] + (static_cast<double>(k) * (spec.upper[axis] - spec.lower[axis])) /
                                      static_cast<double>(nodes - 1);
    };

    bool found = false;
    std::vector<double> best_x(spec.n, 0.0);
    double best_f = 0.0;
    std::size_t evaluated = 0;

    auto consider = [&](const std::vector<double>& x) {
        ++evaluated;
        for (std::size_t i = 0; i < inst.constraints.size(); ++i)
            if (constraint_value(inst, i, x) > 0.0) return;
        double f = evaluate(spec.objective, x, no_xi);
        if (!found || f < best_f) {  // strict: first feasible node wins ties
            found = true;
            best_f = f;
            best_x = x;
        }
    };

    if (spec.n == 1) {
        std::vector<double> x(1);
        for (std::size_t k = 0; k < nodes; ++k) {
            x[0] = axis_node(0, k);
            consider(x);
        }
    } else {
        std::vector<double> x(2);
        for (std::size_t k1 = 0; k1 < nodes; ++k1) {
            x[0] = axis_node(0, k1);
            for (std::size_t k2 = 0; k2 < nodes; ++k2) {
                x[1] = axis_node(1, k2);
                consider(x);
            }
        }
    }

    if (found) {
        // one refinement pass: 21 nodes per axis spaced at a tenth of the
        // coarse step, centered on the incumbent, clipped to bounds
        std::vector<double> center = best_x;
        auto fine_node = [&](std::size_t axis, std::size_t k) {
            double h = (spec.upper[axis] - spec.lower[axis]) / static_cast<double>(nodes - 1);
            double v = center[axis] + (static_cast<double>(k) - 10.0) * h / 10.0;
            return std::min(spec.upper[axis], std::max(spec.lower[axis], v));
        };
        if (spec.n == 1) {
            std::vector<double> x(1);
            for (std::size_t k = 0; k < 21; ++k) {
                x[0] = fine_node(0, k);
                consider(x);
            }
        } else {
            std::vector<double> x(2);
            for (std::size_t k1 = 0; k1 < 21; ++k1) {
                x[0] = fine_node(0, k1);
                for (std::size_t k2 = 0; k2 < 21; ++k2) {
                    x[1] = fine_node(1, k2);
                    consider(x);
                }
            }
        }
    }

    Solution s;
    s.solver_id = kSolverGridOracle;
    s.start = cfg.start.empty() ? spec.start : cfg.start;
    s.iterations = evaluated;
    if (!found) {
        s.status = SolveStatus::Infeasible;
        s.x_star = std::vector<double>(spec.n, 0.0);
        s.objective_value = 0.0;
        return s;
    }
    s.status = SolveStatus::Optimal;
    s.x_star = best_x;
    s.objective_value = best_f;
    s.active_data_points = active_points(inst, best_x, cfg.eps_act);
    return s;
}

}  // namespace

DepInstance make_instance(const ProblemSpec& spec, const ScenarioSet& embedded) {
    if (embedded.size() > 0 && embedded.dimension != spec.u)
        throw Error(ErrorCode::DimensionError, "embedded dimension does not match the problem");
    DepInstance inst;
    inst.spec = spec;
    inst.embedded = embedded;
    for (std::size_t c = 0; c < spec.constraint_count(); ++c)
        for (std::size_t s = 0; s < embedded.size(); ++s)
            inst.constraints.push_back({c, s});
    return inst;
}

DepInstance build_dep(const ProblemSpec& spec, const DataSet& emb) {
    if (emb.points.empty()) throw Error(ErrorCode::EmptyData, "embedded data set is empty");
    if (emb.dimension != spec.u)
        throw Error(ErrorCode::DimensionError, "embedded dimension does not match the problem");
    return make_instance(spec, underlying_set(emb));
}

bool is_feasible(const DepInstance& inst, const std::vector<double>& x, double tol) {
    for (std::size_t i = 0; i < inst.constraints.size(); ++i)
        if (constraint_value(inst, i, x) > tol) return false;
    return true;
}

double max_violation(const DepInstance& inst, const std::vector<double>& x) {
    double worst = 0.0;
    for (std::size_t i = 0; i < inst.constraints.size(); ++i)
        worst = std::max(worst, constraint_value(inst, i, x));
    return worst;
}

Solution solve(const DepInstance& inst, const SolverConfig& cfg) {
    if (cfg.solver_id == kSolverBuiltinPenalty) return solve_penalty(inst, cfg);
    if (cfg.solver_id == kSolverGridOracle) return solve_grid(inst, cfg);
    throw Error(ErrorCode::ConfigError,
                "no backend registered for solver id '" + cfg.solver_id + "'");
}

bool solutions_equal(const Solution& a, const Solution& b, double eps_sol) {
    if (a.x_star.size() != b.x_star.size())
        throw Error(ErrorCode::DimensionError, "comparing solutions of different dimension");
    if (a.status != b.status) return false;
    for (std::size_t k = 0; k < a.x_star.size(); ++k)
        if (std::abs(a.x_star[k] - b.x_star[k]) > eps_sol) return false;
    return true;
}

const char* solve_status_name(SolveStatus status) {
    switch (status) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::MaxIterations: return "max-iterations";
    }
    return "unknown";
}

nlohmann::ordered_json solution_to_json(const Solution& s, const SolverConfig& cfg) {
    nlohmann::ordered_json j;
    j["solver_id"] = s.solver_id;
    j["status"] = solve_status_name(s.status);
    j["x_star"] = s.x_star;
    j["objective"] = s.objective_value;
    j["active_data_points"] = s.active_data_points;
    j["start"] = s.start;
    j["iterations"] = s.iterations;
    j["tolerances"] = {{"eps_feas", cfg.eps_feas}, {"eps_sol", cfg.eps_sol}, {"eps_act", cfg.eps_act}};
    return j;
}

}  // namespace peco
