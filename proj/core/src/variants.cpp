#include "soundvi/variants.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "engine.hpp"
#include "soundvi/bellman.hpp"
#include "soundvi/errors.hpp"
#include "soundvi/graph.hpp"
#include "solver_internal.hpp"

namespace soundvi {

using detail::kInf;

StateOrdering::StateOrdering(std::vector<StateIndex> order) : order_(std::move(order)) {
    constexpr auto unset = std::numeric_limits<std::size_t>::max();
    position_.assign(order_.size(), unset);
    for (std::size_t i = 0; i < order_.size(); ++i) {
        auto const s = order_[i];
        if (s >= order_.size() || position_[s] != unset) {
            throw Error(ErrorCode::InvalidConfig, "ordering is not a permutation (state " + std::to_string(s) + ")");
        }
        position_[s] = i;
    }
}

StateOrdering default_ordering(SparseModel const& model) {
    auto const sccs = scc_order(model);
    std::vector<StateIndex> order;
    order.reserve(model.num_states());
    for (auto const& component : sccs.components) {
        order.insert(order.end(), component.begin(), component.end());
    }
    return StateOrdering(std::move(order));
}

SweepResult gs_sweep(SparseModel const& model, Partition const& partition, std::span<double const> x,
                     std::span<double const> y, StateOrdering const& ordering, Direction direction, double bound,
                     bool rewards) {
    bool const maximize = direction == Direction::Maximize;
    SweepResult result{{x.begin(), x.end()}, {y.begin(), y.end()}, {}, maximize ? -kInf : kInf};
    result.scheduler.choice_of.assign(model.num_states(), 0);
    for (auto s : ordering.order()) {
        if (!partition.maybe[s]) {
            continue;
        }
        auto const scores = choice_scores(model, result.x, result.y, s, rewards);
        auto const pick = select_choice(scores, bound, direction);
        if (scores.size() > 1) {
            double const dv = decision_value(scores, pick, direction);
            result.decision = maximize ? std::max(result.decision, dv) : std::min(result.decision, dv);
        }
        result.x[s] = scores[pick].x;
        result.y[s] = scores[pick].y;
        result.scheduler.choice_of[s] = pick;
    }
    return result;
}

namespace {

double optimum(std::span<double const> values, Direction direction) {
    return direction == Direction::Maximize ? *std::max_element(values.begin(), values.end())
                                            : *std::min_element(values.begin(), values.end());
}

/// Certified bounds for the members of one SCC. `relevant` lists the local
/// indices whose width must drop below 2 epsilon.
struct ComponentRun {
    std::vector<double> lower;
    std::vector<double> upper;
    std::uint64_t iterations = 0;
    bool limit_hit = false;
};

ComponentRun run_svi(detail::ReducedSystem const& sys_lo, detail::ReducedSystem const& sys_hi, bool shared,
                     std::vector<std::size_t> const& relevant, Direction direction, SolverConfig const& config,
                     std::uint64_t budget) {
    detail::SviEngine lo_run(sys_lo, direction, config.gauss_seidel);
    std::optional<detail::SviEngine> hi_run;
    if (!shared) {
        hi_run.emplace(sys_hi, direction, config.gauss_seidel);
    }
    auto const& upper_run = shared ? lo_run : *hi_run;
    auto converged = [&]() {
        return std::all_of(relevant.begin(), relevant.end(), [&](std::size_t i) {
            if (shared) {
                return lo_run.converged_at(i, config.epsilon);
            }
            return upper_run.upper_at(i) - lo_run.lower_at(i) < 2.0 * config.epsilon;
        });
    };
    ComponentRun run;
    while (!converged()) {
        if (lo_run.iterations() >= budget) {
            run.limit_hit = true;
            break;
        }
        lo_run.step();
        if (hi_run) {
            hi_run->step();
        }
    }
    run.iterations = lo_run.iterations();
    for (std::size_t i = 0; i < sys_lo.size(); ++i) {
        run.lower.push_back(lo_run.lower_at(i));
        run.upper.push_back(upper_run.upper_at(i));
    }
    return run;
}

ComponentRun run_ii(detail::ReducedSystem const& sys_lo, detail::ReducedSystem const& sys_hi,
                    std::vector<double> lower, std::vector<double> upper, std::vector<std::size_t> const& relevant,
                    Direction direction, SolverConfig const& config, std::uint64_t budget) {
    ComponentRun run;
    std::vector<double> scratch;
    auto converged = [&]() {
        return std::all_of(relevant.begin(), relevant.end(),
                           [&](std::size_t i) { return upper[i] - lower[i] < 2.0 * config.epsilon; });
    };
    while (!converged()) {
        if (run.iterations >= budget) {
            run.limit_hit = true;
            break;
        }
        detail::bellman_sweep(sys_lo, direction, config.gauss_seidel, lower, scratch);
        detail::bellman_sweep(sys_hi, direction, config.gauss_seidel, upper, scratch);
        ++run.iterations;
    }
    run.lower = std::move(lower);
    run.upper = std::move(upper);
    return run;
}

ComponentRun run_vi(detail::ReducedSystem const& system, Direction direction, SolverConfig const& config,
                    std::uint64_t budget) {
    ComponentRun run;
    std::vector<double> x(system.size(), 0.0);
    std::vector<double> scratch;
    while (true) {
        if (run.iterations >= budget) {
            run.limit_hit = true;
            break;
        }
        double const change = detail::bellman_sweep(system, direction, config.gauss_seidel, x, scratch);
        ++run.iterations;
        if (change < config.epsilon) {
            break;
        }
    }
    run.lower = x;
    run.upper = std::move(x);
    return run;
}

}  // namespace

SolveResult topological_solve(PreparedProblem const& problem, SolverConfig const& config) {
    if (auto result = detail::shortcut(problem, config.method)) {
        return *result;
    }
    auto const& model = problem.model;
    auto const init = problem.initial_state();
    bool const rewards = problem.objective == Objective::Reward;
    auto const direction = problem.direction;
    auto const [start_lo, start_hi] = detail::initial_bounds(problem, config);

    auto const reach = reachable_states(model, init);
    auto const sccs = scc_order(model);
    auto lower = boundary_values(problem);
    auto upper = lower;

    SolveResult result;
    result.method = config.method;
    result.sound = config.method != Method::VI;

    for (auto const& component : sccs.components) {
        if (!reach[component.front()]) {
            continue;
        }
        StateSet member_set(model.num_states());
        for (auto s : component) {
            if (problem.partition.maybe[s]) {
                member_set.set(s);
            }
        }
        if (member_set.empty()) {
            continue;
        }
        auto const members = detail::sweep_order(problem, config, member_set);
        auto const sys_lo = detail::reduce(model, members, rewards, lower);
        auto const sys_hi = detail::with_exit_values(sys_lo, model, rewards, upper);
        bool const shared = sys_lo.constant == sys_hi.constant;

        std::vector<std::size_t> relevant;
        bool const final_component = member_set[init];
        for (std::size_t i = 0; i < members.size(); ++i) {
            if (!final_component || members[i] == init) {
                relevant.push_back(i);
            }
        }

        ComponentRun run;
        if (members.size() == 1 && sys_lo.entries.empty()) {
            run.lower.push_back(optimum(sys_lo.constant, direction));
            run.upper.push_back(optimum(sys_hi.constant, direction));
            run.iterations = 1;
        } else {
            auto const budget =
                config.max_iterations > result.iterations ? config.max_iterations - result.iterations : 0;
            switch (config.method) {
                case Method::SVI:
                    run = run_svi(sys_lo, sys_hi, shared, relevant, direction, config, budget);
                    break;
                case Method::II: {
                    std::vector<double> lo0;
                    std::vector<double> hi0;
                    for (auto s : members) {
                        if (!std::isfinite(start_lo[s]) || !std::isfinite(start_hi[s])) {
                            throw Error(ErrorCode::MissingRewardBounds,
                                        "interval iteration on rewards needs finite lower and upper bounds");
                        }
                        lo0.push_back(start_lo[s]);
                        hi0.push_back(start_hi[s]);
                    }
                    run = run_ii(sys_lo, sys_hi, std::move(lo0), std::move(hi0), relevant, direction, config, budget);
                    break;
                }
                case Method::VI:
                    run = run_vi(sys_lo, direction, config, budget);
                    break;
            }
        }
        result.iterations += run.iterations;
        for (std::size_t i = 0; i < members.size(); ++i) {
            auto const s = members[i];
            if (config.method == Method::VI) {
                lower[s] = upper[s] = run.lower[i];
            } else {
                lower[s] = std::max(run.lower[i], start_lo[s]);
                upper[s] = std::min(run.upper[i], start_hi[s]);
            }
        }
        if (run.limit_hit) {
            result.status = SolveStatus::IterationLimit;
            if (!final_component) {
                result.lower = start_lo[init];
                result.upper = start_hi[init];
                result.value = (result.lower + result.upper) / 2.0;
                return result;
            }
        }
    }
    result.lower = lower[init];
    result.upper = upper[init];
    result.value = (result.lower + result.upper) / 2.0;
    return result;
}

}  // namespace soundvi
