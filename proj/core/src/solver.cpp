#include "soundvi/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "engine.hpp"
#include "soundvi/errors.hpp"
#include "soundvi/graph.hpp"
#include "soundvi/variants.hpp"
#include "solver_internal.hpp"

namespace soundvi {

using detail::kInf;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t local_index(std::vector<StateIndex> const& states, StateIndex s) {
    return static_cast<std::size_t>(std::find(states.begin(), states.end(), s) - states.begin());
}

void notify_svi(PreparedProblem const& problem, SolverConfig const& config, detail::ReducedSystem const& system,
                detail::SviEngine const& engine, std::vector<double> const& boundary, std::size_t init) {
    IterationSnapshot snap;
    snap.k = engine.iterations();
    snap.lower = engine.lower();
    snap.upper = engine.upper();
    snap.decision = engine.decision();
    snap.y_initial = engine.y()[init];
    snap.x = boundary;
    snap.y.assign(problem.model.num_states(), 0.0);
    snap.scheduler.choice_of.assign(problem.model.num_states(), 0);
    for (std::size_t i = 0; i < system.size(); ++i) {
        auto const s = system.states[i];
        snap.x[s] = engine.x()[i];
        snap.y[s] = engine.y()[i];
        snap.scheduler.choice_of[s] = system.local_choice[system.group_start[i] + engine.chosen()[i]];
    }
    config.observer(snap);
}

void notify_bounds(SolverConfig const& config, std::uint64_t k, double lower, double upper) {
    IterationSnapshot snap;
    snap.k = k;
    snap.lower = lower;
    snap.upper = upper;
    snap.decision = kNaN;
    snap.y_initial = kNaN;
    config.observer(snap);
}

}  // namespace

namespace detail {

std::optional<SolveResult> shortcut(PreparedProblem const& problem, Method method) {
    auto const init = problem.initial_state();
    if (!problem.partition.maybe[init]) {
        SolveResult result;
        result.method = method;
        result.sound = method != Method::VI;
        double const v = problem.partition.goal[init] && problem.objective == Objective::Probability ? 1.0 : 0.0;
        result.value = result.lower = result.upper = v;
        return result;
    }
    return std::nullopt;
}

std::vector<StateIndex> sweep_order(PreparedProblem const& problem, SolverConfig const& config,
                                    StateSet const& members) {
    std::vector<StateIndex> order;
    if (!config.gauss_seidel) {
        order = members.indices();
        return order;
    }
    std::vector<StateIndex> full;
    if (config.ordering) {
        StateSet seen(problem.model.num_states());
        for (auto s : *config.ordering) {
            auto const q = problem.state_map[s];
            if (!seen[q]) {
                seen.set(q);
                full.push_back(q);
            }
        }
    } else {
        full = default_ordering(problem.model).order();
    }
    for (auto s : full) {
        if (members[s]) {
            order.push_back(s);
        }
    }
    return order;
}

std::pair<std::vector<double>, std::vector<double>> initial_bounds(PreparedProblem const& problem,
                                                                   SolverConfig const& config) {
    auto const n = problem.model.num_states();
    std::vector<double> lo(n, -kInf);
    std::vector<double> hi(n, kInf);
    if (problem.objective == Objective::Probability) {
        std::fill(lo.begin(), lo.end(), 0.0);
        std::fill(hi.begin(), hi.end(), 1.0);
    }
    for (std::size_t s = 0; s < problem.state_map.size(); ++s) {
        auto const q = problem.state_map[s];
        if (config.lower_bounds) {
            lo[q] = std::max(lo[q], (*config.lower_bounds)[s]);
        }
        if (config.upper_bounds) {
            hi[q] = std::min(hi[q], (*config.upper_bounds)[s]);
        }
    }
    for (std::size_t q = 0; q < n; ++q) {
        if (config.lower) {
            lo[q] = std::max(lo[q], *config.lower);
        }
        if (config.upper) {
            hi[q] = std::min(hi[q], *config.upper);
        }
    }
    return {std::move(lo), std::move(hi)};
}

}  // namespace detail

std::string_view to_string(Method method) {
    switch (method) {
        case Method::VI:
            return "vi";
        case Method::II:
            return "ii";
        case Method::SVI:
            return "svi";
    }
    return "?";
}

Method parse_method(std::string_view text) {
    if (text == "vi") {
        return Method::VI;
    }
    if (text == "ii") {
        return Method::II;
    }
    if (text == "svi") {
        return Method::SVI;
    }
    throw Error(ErrorCode::InvalidConfig, "unknown method '" + std::string(text) + "'");
}

void validate_config(SolverConfig const& config, std::size_t num_states) {
    if (!(config.epsilon > 0.0)) {
        throw Error(ErrorCode::InvalidConfig, "epsilon must be positive");
    }
    if (config.lower && config.upper && *config.lower > *config.upper) {
        throw Error(ErrorCode::InvalidConfig, "lower bound exceeds upper bound");
    }
    for (auto const* bounds : {&config.lower_bounds, &config.upper_bounds}) {
        if (*bounds && (*bounds)->size() != num_states) {
            throw Error(ErrorCode::InvalidConfig, "per-state bounds must cover all " + std::to_string(num_states) +
                                                      " states");
        }
    }
    if (config.lower_bounds && config.upper_bounds) {
        for (std::size_t s = 0; s < num_states; ++s) {
            if ((*config.lower_bounds)[s] > (*config.upper_bounds)[s]) {
                throw Error(ErrorCode::InvalidConfig, "lower bound exceeds upper bound at state " + std::to_string(s));
            }
        }
    }
    if (config.ordering) {
        StateOrdering check(*config.ordering);
        if (check.size() != num_states) {
            throw Error(ErrorCode::InvalidConfig, "ordering must cover all " + std::to_string(num_states) + " states");
        }
    }
}

PreparedProblem prepare(SparseModel const& model, StateSet const& goal, Objective objective, Direction direction) {
    auto const n = model.num_states();
    if (goal.size() != n) {
        throw Error(ErrorCode::InvalidConfig, "goal set covers " + std::to_string(goal.size()) + " states, model has " +
                                                  std::to_string(n));
    }
    PreparedProblem problem;
    problem.objective = objective;
    problem.direction = direction;
    problem.model = make_absorbing(model, goal);
    problem.state_map.resize(n);
    for (StateIndex s = 0; s < n; ++s) {
        problem.state_map[s] = s;
    }

    if (objective == Objective::Reward) {
        problem.partition = Partition::from(goal, StateSet(n));
        if (!check_contracting(problem.model, goal)) {
            throw Error(ErrorCode::RewardOnMec,
                        "some scheduler avoids the goal forever, so expected rewards are unbounded or undefined");
        }
        return problem;
    }

    if (direction == Direction::Minimize) {
        problem.partition = Partition::from(goal, prob0_min(problem.model, goal));
        if (!check_contracting(problem.model, problem.partition.goal | problem.partition.s0)) {
            throw Error(ErrorCode::NotContracting, "model is not contracting for minimal probabilities");
        }
        return problem;
    }

    problem.partition = Partition::from(goal, prob0_max(problem.model, goal));
    if (!check_contracting(problem.model, problem.partition.goal | problem.partition.s0)) {
        auto quotient = collapse_end_components(problem.model, problem.partition);
        problem.model = std::move(quotient.model);
        problem.partition = std::move(quotient.partition);
        problem.state_map = std::move(quotient.state_map);
        problem.collapsed_components = quotient.collapsed_components;
    }
    return problem;
}

std::vector<double> boundary_values(PreparedProblem const& problem) {
    std::vector<double> values(problem.model.num_states(), 0.0);
    if (problem.objective == Objective::Probability) {
        for (auto s : problem.partition.goal.indices()) {
            values[s] = 1.0;
        }
    }
    return values;
}

SolveResult svi_solve(PreparedProblem const& problem, SolverConfig const& config) {
    if (auto result = detail::shortcut(problem, Method::SVI)) {
        return *result;
    }
    auto const boundary = boundary_values(problem);
    auto const order = detail::sweep_order(problem, config, problem.partition.maybe);
    auto const system =
        detail::reduce(problem.model, order, problem.objective == Objective::Reward, boundary);
    detail::SviEngine engine(system, problem.direction, config.gauss_seidel, config.lower.value_or(-kInf),
                             config.upper.value_or(kInf));
    auto const init = local_index(system.states, problem.initial_state());

    SolveResult result;
    result.method = Method::SVI;
    while (!engine.converged_at(init, config.epsilon)) {
        if (engine.iterations() >= config.max_iterations) {
            result.status = SolveStatus::IterationLimit;
            break;
        }
        engine.step();
        if (config.observer) {
            notify_svi(problem, config, system, engine, boundary, init);
        }
    }
    result.value = engine.value_at(init);
    result.lower = engine.lower_at(init);
    result.upper = engine.upper_at(init);
    result.iterations = engine.iterations();
    return result;
}

SolveResult vi_solve(PreparedProblem const& problem, SolverConfig const& config) {
    if (auto result = detail::shortcut(problem, Method::VI)) {
        return *result;
    }
    auto const boundary = boundary_values(problem);
    auto const order = detail::sweep_order(problem, config, problem.partition.maybe);
    auto const system =
        detail::reduce(problem.model, order, problem.objective == Objective::Reward, boundary);
    auto const init = local_index(system.states, problem.initial_state());

    SolveResult result;
    result.method = Method::VI;
    result.sound = false;
    std::vector<double> x(system.size(), 0.0);
    std::vector<double> scratch;
    while (true) {
        if (result.iterations >= config.max_iterations) {
            result.status = SolveStatus::IterationLimit;
            break;
        }
        double const change = detail::bellman_sweep(system, problem.direction, config.gauss_seidel, x, scratch);
        ++result.iterations;
        if (config.observer) {
            notify_bounds(config, result.iterations, x[init], x[init]);
        }
        if (change < config.epsilon) {
            break;
        }
    }
    result.value = result.lower = result.upper = x[init];
    return result;
}

SolveResult ii_solve(PreparedProblem const& problem, SolverConfig const& config) {
    if (auto result = detail::shortcut(problem, Method::II)) {
        return *result;
    }
    auto const [lo_full, hi_full] = detail::initial_bounds(problem, config);
    auto const boundary = boundary_values(problem);
    auto const order = detail::sweep_order(problem, config, problem.partition.maybe);
    auto const system =
        detail::reduce(problem.model, order, problem.objective == Objective::Reward, boundary);
    auto const init = local_index(system.states, problem.initial_state());

    std::vector<double> lo(system.size());
    std::vector<double> hi(system.size());
    for (std::size_t i = 0; i < system.size(); ++i) {
        lo[i] = lo_full[system.states[i]];
        hi[i] = hi_full[system.states[i]];
        if (!std::isfinite(lo[i]) || !std::isfinite(hi[i])) {
            throw Error(ErrorCode::MissingRewardBounds,
                        "interval iteration on rewards needs finite lower and upper bounds");
        }
    }

    SolveResult result;
    result.method = Method::II;
    std::vector<double> scratch;
    auto width = [&]() {
        double w = 0.0;
        for (std::size_t i = 0; i < system.size(); ++i) {
            w = std::max(w, hi[i] - lo[i]);
        }
        return w;
    };
    while (!(width() < 2.0 * config.epsilon)) {
        if (result.iterations >= config.max_iterations) {
            result.status = SolveStatus::IterationLimit;
            break;
        }
        detail::bellman_sweep(system, problem.direction, config.gauss_seidel, lo, scratch);
        detail::bellman_sweep(system, problem.direction, config.gauss_seidel, hi, scratch);
        ++result.iterations;
        if (config.observer) {
            notify_bounds(config, result.iterations, lo[init], hi[init]);
        }
    }
    result.lower = lo[init];
    result.upper = hi[init];
    result.value = (result.lower + result.upper) / 2.0;
    return result;
}

SolveResult solve(SparseModel const& model, StateSet const& goal, SolverConfig const& config) {
    validate_config(config, model.num_states());
    auto const start = std::chrono::steady_clock::now();
    auto const problem = prepare(model, goal, config.objective, config.direction);
    SolveResult result;
    if (config.topological) {
        result = topological_solve(problem, config);
    } else {
        switch (config.method) {
            case Method::VI:
                result = vi_solve(problem, config);
                break;
            case Method::II:
                result = ii_solve(problem, config);
                break;
            case Method::SVI:
                result = svi_solve(problem, config);
                break;
        }
    }
    auto const stop = std::chrono::steady_clock::now();
    result.time_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    return result;
}

}  // namespace soundvi
