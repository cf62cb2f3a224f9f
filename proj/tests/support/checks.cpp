#include "checks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "soundvi/bellman.hpp"
#include "soundvi/ingest.hpp"
#include "soundvi/oracle.hpp"
#include "soundvi/variants.hpp"

namespace soundvi::testing {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSlack = 1e-9;

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

SolverConfig base_config(RandomInstance const& inst, double epsilon) {
    SolverConfig config;
    config.direction = inst.direction;
    config.objective = inst.objective;
    config.epsilon = epsilon;
    return config;
}

std::vector<IterationSnapshot> record(PreparedProblem const& problem, SolverConfig config) {
    std::vector<IterationSnapshot> snaps;
    config.observer = [&](IterationSnapshot const& s) { snaps.push_back(s); };
    svi_solve(problem, config);
    return snaps;
}

bool maybe_state(PreparedProblem const& problem, StateIndex original) {
    return problem.partition.maybe[problem.state_map[original]];
}

}  // namespace

void CheckOutcome::merge(CheckOutcome const& other) {
    failures.insert(failures.end(), other.failures.begin(), other.failures.end());
    samples += other.samples;
}

std::vector<double> oracle_values(RandomInstance const& inst) {
    return oracle_solve(inst.model, inst.goal, inst.objective, inst.direction);
}

std::pair<double, double> shared_bounds(RandomInstance const& inst, std::vector<double> const& oracle) {
    if (inst.objective == Objective::Probability) {
        return {0.0, 1.0};
    }
    auto const [lo, hi] = std::minmax_element(oracle.begin(), oracle.end());
    return {*lo - 1.0, *hi + 1.0};
}

std::string describe(RandomInstance const& inst) {
    std::ostringstream out;
    out << (inst.model.is_mc() ? "MC" : "MDP") << ' ' << to_string(inst.objective) << ' '
        << to_string(inst.direction) << " init=" << inst.model.initial_state() << " goal={";
    for (auto s : inst.goal.indices()) {
        out << ' ' << s;
    }
    out << " }\n" << write_tra(inst.model, ModelKind::MDP);
    if (inst.objective == Objective::Reward) {
        out << "rewards:\n" << write_transition_rewards(inst.model);
    }
    return out.str();
}

CheckOutcome check_oracle_agreement(RandomInstance const& inst, double epsilon) {
    CheckOutcome outcome;
    auto const oracle = oracle_values(inst);
    auto const target = oracle[inst.model.initial_state()];
    auto const [lo0, hi0] = shared_bounds(inst, oracle);

    struct Run {
        char const* name;
        Method method;
        bool gs;
        bool topo;
    };
    for (auto const& run : {Run{"svi", Method::SVI, false, false}, Run{"gs-svi", Method::SVI, true, false},
                            Run{"topo-svi", Method::SVI, false, true}, Run{"gs-topo-svi", Method::SVI, true, true},
                            Run{"ii", Method::II, false, false}}) {
        auto config = base_config(inst, epsilon);
        config.method = run.method;
        config.gauss_seidel = run.gs;
        config.topological = run.topo;
        if (run.method == Method::II) {
            config.lower = lo0;
            config.upper = hi0;
        }
        auto const r = solve(inst.model, inst.goal, config);
        ++outcome.samples;
        if (!(std::abs(r.value - target) < epsilon) || !(r.upper - r.lower < 2 * epsilon) ||
            r.status != SolveStatus::Converged) {
            outcome.failures.push_back(std::string(run.name) + ": result " + fmt(r.value) + " bounds [" +
                                       fmt(r.lower) + ", " + fmt(r.upper) + "] oracle " + fmt(target));
        }
        if (run.method == Method::SVI && !(r.lower <= target + kSlack && target <= r.upper + kSlack)) {
            outcome.failures.push_back(std::string(run.name) + ": final interval misses oracle " + fmt(target));
        }
    }

    auto const problem = prepare(inst.model, inst.goal, inst.objective, inst.direction);
    for (bool gs : {false, true}) {
        auto config = base_config(inst, epsilon);
        config.gauss_seidel = gs;
        for (auto const& snap : record(problem, config)) {
            for (StateIndex s = 0; s < inst.model.num_states(); ++s) {
                if (!maybe_state(problem, s)) {
                    continue;
                }
                double const slack = kSlack * (1.0 + std::abs(oracle[s]));
                if (std::isfinite(snap.lower) && snap.lower > oracle[s] + slack) {
                    outcome.failures.push_back((gs ? std::string("gs ") : std::string()) + "k=" +
                                               std::to_string(snap.k) + " lower " + fmt(snap.lower) +
                                               " above oracle " + fmt(oracle[s]) + " at state " + std::to_string(s));
                }
                if (std::isfinite(snap.upper) && snap.upper < oracle[s] - slack) {
                    outcome.failures.push_back((gs ? std::string("gs ") : std::string()) + "k=" +
                                               std::to_string(snap.k) + " upper " + fmt(snap.upper) +
                                               " below oracle " + fmt(oracle[s]) + " at state " + std::to_string(s));
                }
            }
        }
    }
    return outcome;
}

CheckOutcome check_monotone_trace(RandomInstance const& inst, double epsilon) {
    CheckOutcome outcome;
    auto const problem = prepare(inst.model, inst.goal, inst.objective, inst.direction);
    auto const snaps = record(problem, base_config(inst, epsilon));
    auto const& maybe = problem.partition.maybe;
    std::vector<double> prev_x = boundary_values(problem);
    std::vector<double> prev_y(problem.model.num_states(), 0.0);
    for (auto s : maybe.indices()) {
        prev_y[s] = 1.0;
    }
    double prev_lower = -kInf;
    double prev_upper = kInf;
    for (auto const& snap : snaps) {
        ++outcome.samples;
        auto const k = std::to_string(snap.k);
        if (snap.lower < prev_lower || snap.upper > prev_upper) {
            outcome.failures.push_back("k=" + k + " bounds not monotone");
        }
        if (std::isfinite(snap.lower) && std::isfinite(snap.upper) && snap.lower > snap.upper + kSlack) {
            outcome.failures.push_back("k=" + k + " lower above upper");
        }
        bool const chain = problem.model.is_mc();
        for (auto s : maybe.indices()) {
            if (snap.y[s] < 0.0 || snap.y[s] > 1.0 || (chain && snap.y[s] > prev_y[s] + 1e-15)) {
                outcome.failures.push_back("k=" + k + " y not monotone at " + std::to_string(s));
            }
            if (problem.objective == Objective::Probability) {
                if (chain && snap.x[s] < prev_x[s] - 1e-15) {
                    outcome.failures.push_back("k=" + k + " x decreased at " + std::to_string(s) + ": " +
                                               fmt(prev_x[s]) + " -> " + fmt(snap.x[s]));
                }
                if (snap.x[s] + snap.y[s] > 1.0 + 1e-12) {
                    outcome.failures.push_back("k=" + k + " x + y > 1 at " + std::to_string(s));
                }
            }
        }
        for (auto s : problem.partition.goal.indices()) {
            if (snap.y[s] != 0.0 || snap.x[s] != (problem.objective == Objective::Probability ? 1.0 : 0.0)) {
                outcome.failures.push_back("k=" + k + " goal boundary violated");
            }
        }
        for (auto s : problem.partition.s0.indices()) {
            if (snap.y[s] != 0.0 || snap.x[s] != 0.0) {
                outcome.failures.push_back("k=" + k + " S0 boundary violated");
            }
        }
        prev_x = snap.x;
        prev_y = snap.y;
        prev_lower = snap.lower;
        prev_upper = snap.upper;
    }
    return outcome;
}

CheckOutcome check_step_semantics(RandomInstance const& inst, double tolerance) {
    CheckOutcome outcome;
    if (inst.model.num_states() > 8) {
        return outcome;
    }
    auto const problem = prepare(inst.model, inst.goal, inst.objective, inst.direction);
    auto config = base_config(inst, 1e-300);
    config.max_iterations = 6;
    auto const snaps = record(problem, config);
    auto const& model = problem.model;
    auto const& part = problem.partition;
    bool const rewards = problem.objective == Objective::Reward;

    for (auto const& snap : snaps) {
        auto const k = snap.k;
        // Paths start with the scheduler of iteration k and use that of
        // iteration j when j steps remain.
        auto scheduler_for = [&](std::uint64_t remaining) -> Scheduler const& { return snaps[remaining - 1].scheduler; };
        for (auto start : part.maybe.indices()) {
            double reach = 0.0;
            double stay = 0.0;
            std::function<void(StateIndex, std::uint64_t, double, double)> walk =
                [&](StateIndex s, std::uint64_t remaining, double prob, double gained) {
                    if (part.goal[s]) {
                        reach += rewards ? prob * gained : prob;
                        return;
                    }
                    if (part.s0[s]) {
                        return;
                    }
                    if (remaining == 0) {
                        stay += prob;
                        if (rewards) {
                            reach += prob * gained;
                        }
                        return;
                    }
                    auto const c = model.first_choice(s) + scheduler_for(remaining).choice_of[s];
                    for (auto const& t : model.transitions(c)) {
                        walk(t.target, remaining - 1, prob * t.probability, gained + model.reward(c));
                    }
                };
            walk(start, k, 1.0, 0.0);
            ++outcome.samples;
            if (std::abs(reach - snap.x[start]) > tolerance * (1.0 + std::abs(reach)) ||
                std::abs(stay - snap.y[start]) > tolerance) {
                outcome.failures.push_back("k=" + std::to_string(k) + " state " + std::to_string(start) + ": x " +
                                           fmt(snap.x[start]) + " vs paths " + fmt(reach) + ", y " +
                                           fmt(snap.y[start]) + " vs paths " + fmt(stay));
            }
        }
    }
    return outcome;
}

CheckOutcome check_decision_stability(RandomInstance const& inst, std::mt19937_64& rng) {
    CheckOutcome outcome;
    if (inst.model.is_mc()) {
        return outcome;
    }
    auto const problem = prepare(inst.model, inst.goal, inst.objective, inst.direction);
    auto const snaps = record(problem, base_config(inst, 1e-8));
    bool const maximize = problem.direction == Direction::Maximize;
    bool const rewards = problem.objective == Objective::Reward;
    auto const& model = problem.model;

    std::vector<double> prev_x = boundary_values(problem);
    std::vector<double> prev_y(model.num_states(), 0.0);
    for (auto s : problem.partition.maybe.indices()) {
        prev_y[s] = 1.0;
    }
    double prev_bound = maximize ? kInf : -kInf;
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    for (auto const& snap : snaps) {
        // Interval of bounds for which the chosen actions must stay optimal.
        double lo = maximize ? snap.decision : prev_bound;
        double hi = maximize ? prev_bound : snap.decision;
        if (!std::isfinite(lo) && !std::isfinite(hi)) {
            lo = -100.0;
            hi = 100.0;
        } else if (!std::isfinite(lo)) {
            lo = hi - 10.0 * (1.0 + std::abs(hi));
        } else if (!std::isfinite(hi)) {
            hi = lo + 10.0 * (1.0 + std::abs(lo));
        }
        if (lo <= hi) {
            for (auto s : problem.partition.maybe.indices()) {
                if (model.num_choices(s) < 2) {
                    continue;
                }
                auto const scores = choice_scores(model, prev_x, prev_y, s, rewards);
                auto const alpha = snap.scheduler.choice_of[s];
                ++outcome.samples;
                for (int i = 0; i < 5; ++i) {
                    double const bound = lo + (hi - lo) * unit(rng);
                    double const mine = scores[alpha].x + scores[alpha].y * bound;
                    double const tol = 1e-12 * (1.0 + std::abs(bound)) * (1.0 + std::abs(mine));
                    for (std::size_t b = 0; b < scores.size(); ++b) {
                        double const other = scores[b].x + scores[b].y * bound;
                        bool const worse = maximize ? mine < other - tol : mine > other + tol;
                        if (worse) {
                            outcome.failures.push_back("k=" + std::to_string(snap.k) + " state " +
                                                       std::to_string(s) + " bound " + fmt(bound) + ": choice " +
                                                       std::to_string(b) + " beats chosen " +
                                                       std::to_string(alpha));
                        }
                    }
                }
            }
        }
        prev_x = snap.x;
        prev_y = snap.y;
        prev_bound = maximize ? snap.upper : snap.lower;
    }
    return outcome;
}

CheckOutcome check_dominance(RandomInstance const& inst, double epsilon) {
    CheckOutcome outcome;
    auto const oracle = oracle_values(inst);
    auto const [lo, hi] = shared_bounds(inst, oracle);
    auto config = base_config(inst, epsilon);
    config.lower = lo;
    config.upper = hi;
    config.method = Method::SVI;
    auto const svi = solve(inst.model, inst.goal, config);
    config.method = Method::II;
    auto const ii = solve(inst.model, inst.goal, config);
    outcome.samples = svi.iterations;
    if (svi.iterations > ii.iterations) {
        outcome.failures.push_back("svi " + std::to_string(svi.iterations) + " > ii " +
                                   std::to_string(ii.iterations));
    }
    return outcome;
}

CheckOutcome check_dominance(SparseModel const& model, StateSet const& goal, double epsilon) {
    RandomInstance inst;
    inst.model = model;
    inst.goal = goal;
    return check_dominance(inst, epsilon);
}

}  // namespace soundvi::testing
